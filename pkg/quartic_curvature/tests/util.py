import random
from typing import List, Optional, Sequence

import networkx as nx

from quartic_curvature.graph_core.graph import Graph, from_edge_list
from quartic_curvature.tests import sample_ball, sample_edges, sample_n
from quartic_curvature.two_ball import IncompleteTwoBall, s1_pairs


def sample_graph() -> Graph:
    return from_edge_list(sample_n, sample_edges)


def sample_two_ball() -> IncompleteTwoBall:
    return IncompleteTwoBall(sample_ball["s1"], sample_ball["s1s2"])


def random_graph(n: int, p: float, seed: int) -> Graph:
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def shuffled(graph: Graph, seed: int) -> Graph:
    """Relabel graph by a random permutation"""
    perm = list(graph.vertices())
    random.Random(seed).shuffle(perm)
    return graph.relabel(perm)


def relabel_ball(ball: IncompleteTwoBall, perm: Sequence[int]) -> IncompleteTwoBall:
    """Rename S1 vertex i (1-based) to perm[i - 1] and reorder the S2 list"""
    image = {i + 1: p for i, p in enumerate(perm)}
    bits = {tuple(sorted((image[i], image[j]))): bit for bit, (i, j) in zip(ball.s1, s1_pairs(ball.degree))}
    s1 = [bits[pair] for pair in s1_pairs(ball.degree)]
    s1s2 = [sorted(image[i] for i in p) for p in reversed(ball.s1s2)]
    return IncompleteTwoBall(s1, s1s2, degree=ball.degree)


def toggle_s2_edges(graph: Graph, x: int, seed: int, k: Optional[int] = None) -> Graph:
    """Toggle some edges between vertices at distance 2 from x"""
    rng = random.Random(seed)
    dist = nx.single_source_shortest_path_length(graph.to_networkx(), x)
    s2 = sorted(v for v, d in dist.items() if d == 2)
    pairs = [(u, v) for i, u in enumerate(s2) for v in s2[i + 1 :]]
    chosen = set(rng.sample(pairs, min(len(pairs), k if k is not None else rng.randint(1, 4)))) if pairs else set()
    edges = set(graph.edges()) ^ chosen
    return from_edge_list(graph.n, sorted(edges))


def random_function(n: int, seed: int) -> List[float]:
    rng = random.Random(seed)
    return [rng.uniform(-2, 2) for _ in range(n)]
