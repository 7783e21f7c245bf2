"""
Constructors for the standard graph families and for the eight connected
quartic graphs that are curvature sharp at every vertex.
"""
import logging
from itertools import combinations
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from quartic_curvature.exceptions import InvalidParametersError
from quartic_curvature.graph_core.graph import Graph, from_edge_list

__all__ = [
    "complete_graph",
    "complete_bipartite",
    "crown_graph",
    "octahedron",
    "cycle_graph",
    "hypercube",
    "cartesian_product",
    "cayley_dihedral",
    "dihedral_multiply",
    "random_regular_graph",
    "named_graph",
    "NamedGraphInfo",
    "NAMED_GRAPHS",
    "D12_GENERATORS",
    "D14_GENERATORS",
    "DihedralElement",
    "named_graph_names",
]

logger = logging.getLogger(__name__)

# (is_reflection, power): r^power when is_reflection is 0, s r^power when 1
DihedralElement = Tuple[int, int]

D12_GENERATORS: Tuple[DihedralElement, ...] = ((0, 3), (1, 0), (1, 2), (1, 4))
D14_GENERATORS: Tuple[DihedralElement, ...] = ((1, 0), (1, 1), (1, 4), (1, 6))


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with the classes 0..a-1 and a..a+b-1"""
    return from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def crown_graph(n: int) -> Graph:
    """K_{m,m} minus a perfect matching on n = 2m vertices

    The classes are a_i = i and b_j = m + j with a_i ~ b_j iff i != j.
    """
    if n % 2 or n < 2:
        raise InvalidParametersError(f"A crown graph needs a positive even vertex count, got {n}")
    m = n // 2
    return from_edge_list(n, [(i, m + j) for i in range(m) for j in range(m) if i != j])


def octahedron() -> Graph:
    """K_{2,2,2}; the antipodal (non-adjacent) pairs are (0, 1), (2, 3) and (4, 5)"""
    return from_edge_list(6, [(u, v) for u, v in combinations(range(6), 2) if u // 2 != v // 2])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidParametersError(f"A cycle needs at least 3 vertices, got {n}")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def hypercube(dim: int) -> Graph:
    """The dim-cube on bit vectors 0..2^dim-1, adjacent at Hamming distance 1"""
    if dim < 0:
        raise InvalidParametersError(f"Hypercube dimension must be non-negative, got {dim}")
    n = 1 << dim
    return from_edge_list(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if not v >> b & 1])


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """The Cartesian product G x H; vertex (a, b) gets the id a * |H| + b"""
    return Graph.from_networkx(nx.cartesian_product(g.to_networkx(), h.to_networkx()))


def dihedral_multiply(n: int, x: DihedralElement, y: DihedralElement) -> DihedralElement:
    """Multiply two elements of the dihedral group of order 2n, using s r = r^-1 s"""
    (a, i), (b, j) = x, y
    if b == 0:
        return a, (i + j) % n
    # r^i s r^j = s r^(j-i) and s r^i s r^j = r^(j-i)
    return 1 - a, (j - i) % n


def cayley_dihedral(order_2n: int, generators: Sequence[DihedralElement]) -> Graph:
    """Build the Cayley graph of the dihedral group D_{2n} for a symmetric generator set

    Parameters
    ----------
    order_2n :
        The group order 2n, at least 6
    generators :
        Group elements as (is_reflection, power) pairs with 0 <= power < n.
        Reflections are involutions; every rotation r^i must come together
        with its inverse r^-i.

    Returns
    -------
    :
        The graph on the 2n elements, r^i numbered i and s r^i numbered
        n + i, with x ~ x g for every generator g

    Raises
    ------
    InvalidParametersError
        If the order is odd or below 6, a generator is malformed or the
        identity, or the set is not closed under inverses
    """
    if order_2n < 6 or order_2n % 2:
        raise InvalidParametersError(f"Dihedral group order must be even and at least 6, got {order_2n}")
    n = order_2n // 2
    gens = set()
    for gen in generators:
        refl, power = gen
        if refl not in (0, 1) or not 0 <= power < n:
            raise InvalidParametersError(f"Generator {gen!r} is not an element of D{order_2n}")
        if (refl, power) == (0, 0):
            raise InvalidParametersError("The identity cannot be a generator")
        gens.add((refl, power))
    for refl, power in gens:
        if refl == 0 and (0, -power % n) not in gens:
            raise InvalidParametersError(f"Generator set is not symmetric: r^{power} lacks its inverse")

    def index(elem: DihedralElement) -> int:
        return elem[0] * n + elem[1]

    edges = []
    for x in [(refl, power) for refl in (0, 1) for power in range(n)]:
        for g in sorted(gens):
            edges.append((index(x), index(dihedral_multiply(n, x, g))))
    graph = from_edge_list(order_2n, edges)
    logger.debug(f"Built Cayley graph of D{order_2n} with {len(gens)} generators: {graph}")
    return graph


def random_regular_graph(degree: int, n: int, seed: Optional[int] = None) -> Graph:
    """A uniformly random degree-regular graph on n vertices"""
    return Graph.from_networkx(nx.random_regular_graph(degree, n, seed=seed))


class NamedGraphInfo(NamedTuple):
    """A globally curvature sharp quartic graph and its published invariants"""

    name: str
    description: str
    n: int
    k_infinity: float
    diam: int
    ball_type: str
    build: Callable[[], Graph]


NAMED_GRAPHS: Dict[str, NamedGraphInfo] = {
    info.name: info
    for info in [
        NamedGraphInfo("K5", "complete graph K5", 5, 3.5, 1, "1.1", lambda: complete_graph(5)),
        NamedGraphInfo("O", "octahedron K_{2,2,2}", 6, 3.0, 2, "2.1", octahedron),
        NamedGraphInfo(
            "K3xK3",
            "Cartesian product K3 x K3",
            9,
            2.5,
            2,
            "3.3",
            lambda: cartesian_product(complete_graph(3), complete_graph(3)),
        ),
        NamedGraphInfo("K44", "complete bipartite K_{4,4}", 8, 2.0, 2, "4.10", lambda: complete_bipartite(4, 4)),
        NamedGraphInfo("C10", "crown graph C(10)", 10, 2.0, 3, "4.9", lambda: crown_graph(10)),
        NamedGraphInfo(
            "D12",
            "Cayley graph of D12 with S = {r^3, s, sr^2, sr^4}",
            12,
            2.0,
            3,
            "4.6",
            lambda: cayley_dihedral(12, D12_GENERATORS),
        ),
        NamedGraphInfo(
            "D14",
            "Cayley graph of D14 with S = {s, sr, sr^4, sr^6}",
            14,
            2.0,
            3,
            "4.5",
            lambda: cayley_dihedral(14, D14_GENERATORS),
        ),
        NamedGraphInfo("Q4", "4-dimensional hypercube", 16, 2.0, 4, "4.5", lambda: hypercube(4)),
    ]
}


def named_graph(name: str) -> Graph:
    """Return one of the eight globally curvature sharp quartic graphs

    Parameters
    ----------
    name :
        One of K5, O, K3xK3, K44, C10, D12, D14 and Q4

    Returns
    -------
    :
        The graph

    Raises
    ------
    InvalidParametersError
        If the name is not recognized
    """
    try:
        info = NAMED_GRAPHS[name]
    except KeyError:
        raise InvalidParametersError(f"Unknown graph {name!r}, expected one of {', '.join(NAMED_GRAPHS)}")
    return info.build()


def named_graph_names() -> List[str]:
    return list(NAMED_GRAPHS)
