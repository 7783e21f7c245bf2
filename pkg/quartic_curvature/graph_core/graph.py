"""
Graph representation and the metric/combinatorial primitives used throughout
the package: distances, spheres and balls, degrees relative to a root vertex
and triangle counts.

Vertices are the integers 0..n-1 and the neighborhood of every vertex is
stored as an integer bitset, so that neighborhood intersections (triangle
counts, common neighbors during the extension search) are single ``&``
operations.
"""
import logging
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from quartic_curvature.exceptions import DisconnectedGraphError, InvalidParametersError

__all__ = [
    "Graph",
    "RootedDegrees",
    "Edge",
    "from_edge_list",
    "iter_bits",
    "bfs_layers",
    "bfs_distances",
    "distance",
    "sphere",
    "ball",
    "eccentricity",
    "diameter",
    "rooted_degrees",
    "triangles_at_vertex",
    "triangles_at_edge",
    "is_s1_out_regular",
    "check_vertex",
]

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def iter_bits(mask: int) -> Iterator[int]:
    """Iterate the indices of the set bits of mask in ascending order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RootedDegrees(NamedTuple):
    """In-, spherical and out-degree of a vertex relative to a root"""

    in_deg: int
    sph_deg: int
    out_deg: int

    @property
    def degree(self) -> int:
        return self.in_deg + self.sph_deg + self.out_deg


class Graph:
    """An undirected simple graph on the vertices 0..n-1

    Instances are immutable; every operation producing a modified graph
    returns a new instance.

    Parameters
    ----------
    n :
        The number of vertices
    adjacency :
        One bitset per vertex, bit j of adjacency[i] set iff i ~ j. The
        relation must be symmetric and irreflexive; use
        :func:`from_edge_list` to build a graph from unchecked input.
    """

    __slots__ = ("_n", "_adj")

    def __init__(self, n: int, adjacency: Sequence[int]):
        if len(adjacency) != n:
            raise InvalidParametersError(f"Expected {n} adjacency rows, got {len(adjacency)}")
        self._n: int = n
        self._adj: Tuple[int, ...] = tuple(adjacency)

    @property
    def n(self) -> int:
        """The number of vertices"""
        return self._n

    @property
    def adjacency(self) -> Tuple[int, ...]:
        """The adjacency bitsets, one per vertex"""
        return self._adj

    def vertices(self) -> range:
        return range(self._n)

    def neighbor_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> List[int]:
        """Return the neighbors of v in ascending order"""
        return list(iter_bits(self._adj[v]))

    def degree(self, v: int) -> int:
        return bin(self._adj[v]).count("1")

    def degrees(self) -> List[int]:
        return [bin(row).count("1") for row in self._adj]

    def regular_degree(self) -> Optional[int]:
        """Return D if the graph is D-regular, otherwise None"""
        degrees = set(self.degrees())
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def is_regular(self, degree: Optional[int] = None) -> bool:
        """Return True if the graph is regular (of the given degree, if any)"""
        reg = self.regular_degree()
        if reg is None:
            return self._n == 0
        return degree is None or reg == degree

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def edges(self) -> List[Edge]:
        """Return all edges as (u, v) with u < v, sorted lexicographically"""
        return [(u, v) for u in range(self._n) for v in iter_bits(self._adj[u] >> (u + 1) << (u + 1))]

    def number_of_edges(self) -> int:
        return sum(self.degrees()) // 2

    def is_connected(self) -> bool:
        if self._n == 0:
            return True
        reached = 0
        for layer in bfs_layers(self, 0):
            reached |= layer
        return reached == (1 << self._n) - 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex v renamed to perm[v]"""
        if sorted(perm) != list(range(self._n)):
            raise InvalidParametersError("Relabeling must be a permutation of the vertices")
        return from_edge_list(self._n, [(perm[u], perm[v]) for u, v in self.edges()])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self.edges())
        return g

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Build a Graph from a networkx graph, numbering nodes in sorted order"""
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return from_edge_list(len(nodes), [(index[u], index[v]) for u, v in graph.edges])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.number_of_edges()})"


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from an edge list, symmetrizing and collapsing duplicates

    Parameters
    ----------
    n :
        The number of vertices
    edges :
        Vertex pairs (u, v) with 0 <= u, v < n and u != v

    Returns
    -------
    :
        The graph with exactly the given edges

    Raises
    ------
    InvalidParametersError
        If n is negative, an endpoint is out of range or an edge is a
        self-loop
    """
    if not isinstance(n, int) or n < 0:
        raise InvalidParametersError(f"Vertex count must be a non-negative integer, got {n!r}")
    adj = [0] * n
    for edge in edges:
        if len(edge) != 2:
            raise InvalidParametersError(f"Edge {edge!r} is not a vertex pair")
        u, v = int(edge[0]), int(edge[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParametersError(f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise InvalidParametersError(f"Self-loop at vertex {u} is not allowed")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj)


def check_vertex(graph: Graph, v: int):
    if not isinstance(v, int) or not 0 <= v < graph.n:
        raise InvalidParametersError(f"Vertex {v!r} is not in 0..{graph.n - 1}")


def bfs_layers(graph: Graph, x: int) -> List[int]:
    """Return the spheres S_0(x), S_1(x), ... as bitsets, up to the last non-empty one"""
    visited = 1 << x
    frontier = visited
    layers = []
    while frontier:
        layers.append(frontier)
        reach = 0
        for v in iter_bits(frontier):
            reach |= graph.neighbor_mask(v)
        frontier = reach & ~visited
        visited |= frontier
    return layers


def bfs_distances(graph: Graph, x: int) -> List[Optional[int]]:
    """Return the distance from x to every vertex (None when unreachable)"""
    check_vertex(graph, x)
    dist: List[Optional[int]] = [None] * graph.n
    for k, layer in enumerate(bfs_layers(graph, x)):
        for v in iter_bits(layer):
            dist[v] = k
    return dist


def distance(graph: Graph, x: int, y: int) -> int:
    """Return the combinatorial distance between x and y

    Raises
    ------
    DisconnectedGraphError
        If y cannot be reached from x
    """
    check_vertex(graph, y)
    d = bfs_distances(graph, x)[y]
    if d is None:
        raise DisconnectedGraphError(f"Vertices {x} and {y} lie in different components")
    return d


def sphere(graph: Graph, x: int, k: int) -> Set[int]:
    """Return S_k(x), the vertices at distance exactly k from x"""
    check_vertex(graph, x)
    layers = bfs_layers(graph, x)
    if k < 0 or k >= len(layers):
        return set()
    return set(iter_bits(layers[k]))


def ball(graph: Graph, x: int, k: int) -> Set[int]:
    """Return B_k(x), the vertices at distance at most k from x"""
    check_vertex(graph, x)
    mask = 0
    for layer in bfs_layers(graph, x)[: max(k + 1, 0)]:
        mask |= layer
    return set(iter_bits(mask))


def eccentricity(graph: Graph, x: int) -> int:
    """Return the largest distance from x, raising if some vertex is unreachable"""
    check_vertex(graph, x)
    layers = bfs_layers(graph, x)
    if sum(bin(layer).count("1") for layer in layers) != graph.n:
        raise DisconnectedGraphError(f"Graph is disconnected; eccentricity of {x} is infinite")
    return len(layers) - 1


def diameter(graph: Graph) -> int:
    """Return the maximal distance between two vertices

    Raises
    ------
    DisconnectedGraphError
        If the graph is disconnected (infinite diameter)
    """
    if graph.n == 0:
        return 0
    return max(eccentricity(graph, x) for x in graph.vertices())


def rooted_degrees(graph: Graph, root: int, y: int) -> RootedDegrees:
    """Count the neighbors of y one step closer to, level with and farther from root

    Parameters
    ----------
    graph :
        The graph
    root :
        The reference vertex x
    y :
        The vertex whose degrees are split

    Returns
    -------
    :
        The in-degree, spherical degree and out-degree of y w.r.t. root
    """
    check_vertex(graph, y)
    dist = bfs_distances(graph, root)
    if dist[y] is None:
        # Every neighbor of an unreachable vertex is unreachable as well
        return RootedDegrees(0, graph.degree(y), 0)
    counts = [0, 0, 0]
    for z in graph.neighbors(y):
        counts[dist[z] - dist[y] + 1] += 1
    return RootedDegrees(in_deg=counts[0], sph_deg=counts[1], out_deg=counts[2])


def triangles_at_vertex(graph: Graph, x: int) -> int:
    """Return the number of triangles containing x (edges among its neighbors)"""
    check_vertex(graph, x)
    nbrs = graph.neighbor_mask(x)
    return sum(bin(graph.neighbor_mask(y) & nbrs).count("1") for y in iter_bits(nbrs)) // 2


def triangles_at_edge(graph: Graph, edge: Sequence[int]) -> int:
    """Return the number of triangles containing the edge, i.e. |N(u) & N(v)|

    Raises
    ------
    InvalidParametersError
        If the pair is not an edge of the graph
    """
    u, v = edge
    check_vertex(graph, u)
    check_vertex(graph, v)
    if not graph.has_edge(u, v):
        raise InvalidParametersError(f"({u}, {v}) is not an edge")
    return bin(graph.neighbor_mask(u) & graph.neighbor_mask(v)).count("1")


def is_s1_out_regular(graph: Graph, x: int) -> bool:
    """Return True if all neighbors of x have the same out-degree w.r.t. x"""
    check_vertex(graph, x)
    out_degrees = {rooted_degrees(graph, x, y).out_deg for y in graph.neighbors(x)}
    return len(out_degrees) <= 1
