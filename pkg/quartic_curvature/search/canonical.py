"""
Canonical labeling of (vertex-colored) graphs with nauty.

Colors become an ordered partition for nauty, cells sorted by color, so
only color-preserving isomorphisms are taken into account. The canonical
form is the edge list relabeled by nauty's canonical labeling together with
the color rank of every canonical position.
"""
import logging
from functools import lru_cache
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import pynauty

from quartic_curvature.exceptions import InvalidParametersError
from quartic_curvature.graph_core.constructors import NAMED_GRAPHS
from quartic_curvature.graph_core.graph import Edge, Graph, from_edge_list

__all__ = [
    "CanonicalForm",
    "canonical_form_of",
    "canonical_label",
    "canonical_relabeling",
    "canonical_graph",
    "are_isomorphic",
    "identify_named",
]

logger = logging.getLogger(__name__)

# (vertex count, color rank of each canonical position, sorted canonical edges)
CanonicalForm = Tuple[int, Tuple[int, ...], Tuple[Edge, ...]]


def _color_ranks(graph: Graph, colors: Optional[Sequence[Hashable]]) -> List[int]:
    if colors is None:
        return [0] * graph.n
    if len(colors) != graph.n:
        raise InvalidParametersError(f"Got {len(colors)} colors for {graph.n} vertices")
    rank = {key: i for i, key in enumerate(sorted(set(colors)))}
    return [rank[key] for key in colors]


def _to_nauty(graph: Graph, ranks: List[int]) -> pynauty.Graph:
    adjacency = {v: graph.neighbors(v) for v in graph.vertices() if graph.degree(v)}
    cells = [set() for _ in range(max(ranks) + 1)]
    for v, r in enumerate(ranks):
        cells[r].add(v)
    return pynauty.Graph(graph.n, directed=False, adjacency_dict=adjacency, vertex_coloring=cells)


def _positions(graph: Graph, ranks: List[int]) -> List[int]:
    """Canonical position of every vertex"""
    lab = pynauty.canon_label(_to_nauty(graph, ranks))
    position = [0] * graph.n
    for i, v in enumerate(lab):
        position[v] = i
    return position


def canonical_form_of(graph: Graph, colors: Optional[Sequence[Hashable]] = None) -> CanonicalForm:
    """Return the canonical form of a graph, optionally with a vertex coloring

    Parameters
    ----------
    graph :
        The graph
    colors :
        Optional sortable vertex colors; isomorphisms must preserve them

    Returns
    -------
    :
        A value equal for two (colored) graphs iff they are isomorphic
    """
    if graph.n == 0:
        return 0, (), ()
    ranks = _color_ranks(graph, colors)
    position = _positions(graph, ranks)
    edges = tuple(sorted((min(position[u], position[v]), max(position[u], position[v])) for u, v in graph.edges()))
    by_position = sorted(graph.vertices(), key=position.__getitem__)
    return graph.n, tuple(ranks[v] for v in by_position), edges


def canonical_relabeling(graph: Graph, colors: Optional[Sequence[Hashable]] = None) -> List[int]:
    """Return the permutation sending each vertex to its canonical position"""
    if graph.n == 0:
        return []
    return _positions(graph, _color_ranks(graph, colors))


def canonical_label(graph: Graph) -> List[Edge]:
    """Return the canonical edge list of a graph

    Two graphs with the same vertex count get equal canonical edge lists iff
    they are isomorphic.
    """
    return list(canonical_form_of(graph)[2])


def canonical_graph(graph: Graph) -> Graph:
    return from_edge_list(graph.n, canonical_label(graph))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.number_of_edges() != h.number_of_edges():
        return False
    if g.n == 0:
        return True
    return pynauty.certificate(_to_nauty(g, [0] * g.n)) == pynauty.certificate(_to_nauty(h, [0] * h.n))


@lru_cache(maxsize=None)
def _named_forms() -> Dict[CanonicalForm, str]:
    return {canonical_form_of(info.build()): name for name, info in NAMED_GRAPHS.items()}


def identify_named(graph: Graph) -> Optional[str]:
    """Return the name of the named graph isomorphic to graph, if any"""
    return _named_forms().get(canonical_form_of(graph))
