"""
Exhaustive completion of a curvature sharp seed ball into every connected
quartic graph that is curvature sharp at every vertex.

The seed ball is laid out around vertex 0. The search then repeatedly takes
the lowest open vertex (degree < 4) and branches over every way of giving it
its missing neighbors: open vertices already present, in ascending order,
before fresh vertices. A branch is cut as soon as it violates a necessary
condition of the final graph:

- ``edge_triangles``: every edge lies on exactly c1 triangles, c1 being the
  triangle count per edge of the seed type
- ``ball_type``: a vertex whose incomplete 2-ball is final has one of the
  sharp ball types with the same c1
- ``partial_ball``: a saturated vertex whose ball is still growing can
  still be completed to such a type
- ``bonnet_myers``: no distance that can no longer shrink exceeds 2D/K
- ``rigidity``: a distance attaining 2D/K forces the 4-dimensional cube
- ``s3_budget``: the edge count between the second and third sphere around
  a vertex of type 4.5
- ``isomorphic_duplicate``: partial graphs isomorphic (fixing vertex 0) to
  one already explored

``degree`` counts candidate neighbors excluded because they are saturated and
``truncated`` counts moves that would exceed the vertex cap.
"""
import logging
from collections import Counter
from functools import lru_cache
from itertools import combinations, permutations
from multiprocessing import Pool, cpu_count
from typing import Dict, Iterator, List, Optional, Set, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from pydantic import ValidationError
from tqdm import tqdm

from quartic_curvature.catalog import check_globally_sharp
from quartic_curvature.data_models import (
    BALL_TYPE_IDS,
    DEFAULT_MAX_VERTICES,
    MIN_MAX_VERTICES,
    PRUNE_RULES,
    QUARTIC_DEGREE,
    CompletedGraph,
    SearchOptions,
    SearchOutcome,
)
from quartic_curvature.exceptions import (
    InvalidParametersError,
    SearchTruncatedError,
    VerificationError,
)
from quartic_curvature.graph_core.constructors import hypercube
from quartic_curvature.graph_core.graph import Graph, diameter, from_edge_list, iter_bits
from quartic_curvature.search.canonical import CanonicalForm, canonical_form_of, canonical_graph, identify_named
from quartic_curvature.two_ball import SHARP_BALL_TABLE, ball_type_class, extract, lookup_ball_type, sharp_ball
from quartic_curvature.util.fingerprint import graph_fingerprint

__all__ = [
    "PartialGraph",
    "admissible_balls",
    "search_from_seed",
    "search_all",
    "s3_budget_check",
    "verify_outcome",
]

logger = logging.getLogger(__name__)

# Pairs of S1 positions (0-based) in the order of the s1 vector
PAIRS: Tuple[Tuple[int, int], ...] = tuple(combinations(range(QUARTIC_DEGREE), 2))
PAIR_INDEX: Dict[Tuple[int, int], int] = {pair: k for k, pair in enumerate(PAIRS)}

FULL = (1 << QUARTIC_DEGREE) - 1

# A ball with S1 positions fixed: (s1 adjacency mask, sorted S1-pattern masks)
PositionedBall = Tuple[int, Tuple[int, ...]]


class PartialGraph:
    """A quartic graph under construction

    Vertex 0 is the center of the seed ball. A vertex is *open* while its
    degree is below 4, *saturated* once it reaches 4 and *verified* once it
    and all its neighbors are saturated, at which point its incomplete
    2-ball can no longer change.

    Parameters
    ----------
    adjacency :
        One neighbor bitset per vertex
    ball_types :
        The ball types found so far at verified vertices
    """

    __slots__ = ("adj", "ball_types")

    def __init__(self, adjacency: List[int], ball_types: Optional[Dict[int, str]] = None):
        self.adj: List[int] = list(adjacency)
        self.ball_types: Dict[int, str] = dict(ball_types or {})

    @classmethod
    def from_seed(cls, ball_type: str) -> "PartialGraph":
        """Lay out the published ball of the given type around vertex 0"""
        graph = sharp_ball(ball_type).to_graph()
        return cls(list(graph.adjacency), {0: ball_type})

    @property
    def n(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def saturated_mask(self) -> int:
        return sum(1 << v for v in range(self.n) if self.degree(v) == QUARTIC_DEGREE)

    def open_mask(self) -> int:
        return ((1 << self.n) - 1) & ~self.saturated_mask()

    def is_verified(self, v: int, saturated: Optional[int] = None) -> bool:
        saturated = self.saturated_mask() if saturated is None else saturated
        closed = self.adj[v] | 1 << v
        return closed & saturated == closed

    def status(self, v: int) -> str:
        """One of 'open', 'saturated' and 'verified'"""
        if self.degree(v) < QUARTIC_DEGREE:
            return "open"
        return "verified" if self.is_verified(v) else "saturated"

    def frontier(self) -> List[int]:
        """The vertices that are not verified yet, in ascending order"""
        saturated = self.saturated_mask()
        return [v for v in range(self.n) if not self.is_verified(v, saturated)]

    def first_open(self) -> Optional[int]:
        for v in range(self.n):
            if self.degree(v) < QUARTIC_DEGREE:
                return v
        return None

    def copy(self) -> "PartialGraph":
        return PartialGraph(self.adj, self.ball_types)

    def add_edge(self, u: int, v: int):
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def add_vertex(self, neighbor: int) -> int:
        """Append a fresh vertex adjacent to neighbor and return it"""
        new = self.n
        self.adj.append(1 << neighbor)
        self.adj[neighbor] |= 1 << new
        return new

    def to_graph(self) -> Graph:
        return Graph(self.n, self.adj)

    def __repr__(self) -> str:
        return f"PartialGraph(n={self.n}, open={bin(self.open_mask()).count('1')})"


@lru_cache(maxsize=None)
def admissible_balls(triangles_edge: int) -> Tuple[PositionedBall, ...]:
    """All placements of the sharp ball types with the given triangle count per edge

    Every type is placed under each of the 24 orders of its S1 vertices;
    duplicates are merged.
    """
    placements: Set[PositionedBall] = set()
    for ball_type in BALL_TYPE_IDS:
        if ball_type_class(ball_type) != triangles_edge:
            continue
        s1, patterns = SHARP_BALL_TABLE[ball_type]
        for perm in permutations(range(QUARTIC_DEGREE)):
            s1_mask = 0
            for bit, (i, j) in zip(s1, PAIRS):
                if bit:
                    s1_mask |= 1 << PAIR_INDEX[tuple(sorted((perm[i], perm[j])))]
            slots = tuple(sorted(sum(1 << perm[i - 1] for i in p) for p in patterns))
            placements.add((s1_mask, slots))
    return tuple(sorted(placements))


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _match_slots(current: List[Tuple[int, bool]], slots: Tuple[int, ...], open_s1: int, i: int, used: int) -> bool:
    """Injectively assign the current S2 patterns to final slots"""
    if i == len(current):
        return all(slots[k] & ~open_s1 == 0 for k in range(len(slots)) if not used >> k & 1)
    mask, w_open = current[i]
    tried = set()
    for k, slot in enumerate(slots):
        if used >> k & 1 or slot in tried:
            continue
        tried.add(slot)
        if mask & ~slot:
            continue
        extra = slot & ~mask
        if extra and (not w_open or extra & ~open_s1):
            continue
        if _match_slots(current, slots, open_s1, i + 1, used | 1 << k):
            return True
    return False


def _partial_ball_ok(pg: PartialGraph, u: int, open_mask: int, placements: Tuple[PositionedBall, ...]) -> bool:
    """Return True if the ball of the saturated vertex u can still grow into an admissible one"""
    s1 = list(iter_bits(pg.adj[u]))
    open_s1 = sum(1 << i for i, y in enumerate(s1) if open_mask >> y & 1)
    current_s1 = 0
    open_pairs = 0
    for k, (i, j) in enumerate(PAIRS):
        if pg.adj[s1[i]] >> s1[j] & 1:
            current_s1 |= 1 << k
        if open_s1 >> i & 1 and open_s1 >> j & 1:
            open_pairs |= 1 << k
    inner = pg.adj[u] | 1 << u
    patterns: Dict[int, int] = {}
    for i, y in enumerate(s1):
        for w in iter_bits(pg.adj[y] & ~inner):
            patterns[w] = patterns.get(w, 0) | 1 << i
    # Larger patterns first, they constrain the assignment most
    current = sorted(
        ((mask, bool(open_mask >> w & 1)) for w, mask in patterns.items()), key=lambda p: -_popcount(p[0])
    )
    for s1_mask, slots in placements:
        if current_s1 & ~s1_mask or (s1_mask & ~current_s1) & ~open_pairs:
            continue
        if len(current) > len(slots):
            continue
        if _match_slots(current, slots, open_s1, 0, 0):
            return True
    return False


def s3_budget_check(pg: PartialGraph, root: int) -> bool:
    """Count the edges between the second and the third sphere around root

    Applies when the triangle count per edge is 0 and root and all its
    neighbors are verified with ball type 4.5. Then every vertex of S3(root)
    has at least 3 neighbors in S2(root), each vertex of S2(root) has at most
    4 - d-(z) - d0(z) neighbors in S3(root), and

        sum_{z in S2} d+(z) = sum_{w in S3} d-(w) >= 3 |S3|

    so |S3(root)| <= 4.

    Parameters
    ----------
    pg :
        The partial graph
    root :
        The vertex around which the spheres are taken

    Returns
    -------
    :
        False if the partial graph violates the count, True otherwise
        (including when the check does not apply)
    """
    s1 = pg.adj[root]
    if pg.ball_types.get(root) != "4.5" or any(pg.ball_types.get(y) != "4.5" for y in iter_bits(s1)):
        return True
    b1 = s1 | 1 << root
    s2 = 0
    for y in iter_bits(s1):
        s2 |= pg.adj[y]
    s2 &= ~b1
    s3 = 0
    for z in iter_bits(s2):
        s3 |= pg.adj[z]
    s3 &= ~(b1 | s2)
    if any(_popcount(pg.adj[w] & s2) < 3 for w in iter_bits(s3)):
        return False
    budget = sum(QUARTIC_DEGREE - _popcount(pg.adj[z] & s1) - _popcount(pg.adj[z] & s2) for z in iter_bits(s2))
    return 3 * _popcount(s3) <= budget


@lru_cache(maxsize=None)
def _hypercube_nx() -> nx.Graph:
    return hypercube(QUARTIC_DEGREE).to_networkx()


def _region(pg: PartialGraph, touched: int, radius: int) -> int:
    region = touched
    for _ in range(radius):
        grown = region
        for v in iter_bits(region):
            grown |= pg.adj[v]
        region = grown
    return region


class _ExtensionSearch:
    """Depth-first completion of one seed, with prune counters"""

    def __init__(self, seed: str, options: SearchOptions):
        self.seed = seed
        self.options = options
        self.c1 = ball_type_class(seed)
        self.allowed = {t for t in BALL_TYPE_IDS if ball_type_class(t) == self.c1}
        self.placements = admissible_balls(self.c1)
        # Every vertex has curvature 2 + c1/2, so diam <= 2D/K = 16 / (4 + c1)
        self.max_distance = 4 * QUARTIC_DEGREE // (QUARTIC_DEGREE + self.c1)
        self.rigid = 4 * QUARTIC_DEGREE % (QUARTIC_DEGREE + self.c1) == 0
        self.memo: Set[CanonicalForm] = set()
        self.pruned: Counter = Counter()
        self.nodes = 0
        self.completed: Dict[CanonicalForm, Graph] = {}

    def _edge_triangles_ok(self, pg: PartialGraph, saturated: int, open_mask: int) -> bool:
        for u in range(pg.n):
            for y in iter_bits(pg.adj[u] >> (u + 1) << (u + 1)):
                count = _popcount(pg.adj[u] & pg.adj[y])
                if count > self.c1:
                    return False
                u_sat, y_sat = saturated >> u & 1, saturated >> y & 1
                if u_sat and y_sat:
                    if count != self.c1:
                        return False
                elif u_sat or y_sat:
                    s, o = (u, y) if u_sat else (y, u)
                    reachable = _popcount(pg.adj[s] & ~pg.adj[o] & ~(1 << o) & open_mask)
                    if count + min(reachable, QUARTIC_DEGREE - pg.degree(o)) < self.c1:
                        return False
        return True

    def _distances_ok(self, pg: PartialGraph, saturated: int) -> Tuple[bool, bool]:
        """Check the final distances; return (within the bound, bound attained)"""
        attained = False
        for u in iter_bits(saturated):
            visited = frontier = 1 << u
            distance = 0
            # A layer is final once all earlier layers are saturated
            while frontier and frontier & ~saturated == 0:
                reach = 0
                for v in iter_bits(frontier):
                    reach |= pg.adj[v]
                frontier = reach & ~visited
                if not frontier:
                    break
                distance += 1
                if distance > self.max_distance:
                    return False, attained
                if distance == self.max_distance:
                    attained = True
                visited |= frontier
        return True, attained

    def _passes(self, pg: PartialGraph, touched: int) -> bool:
        saturated = pg.saturated_mask()
        open_mask = ((1 << pg.n) - 1) & ~saturated
        if not self._edge_triangles_ok(pg, saturated, open_mask):
            self.pruned["edge_triangles"] += 1
            return False
        graph = pg.to_graph()
        for u in iter_bits(_region(pg, touched, 2) & saturated):
            if pg.is_verified(u, saturated):
                if u in pg.ball_types:
                    continue
                ball_type = lookup_ball_type(extract(graph, u))
                if ball_type not in self.allowed:
                    self.pruned["ball_type"] += 1
                    return False
                pg.ball_types[u] = ball_type
            elif not _partial_ball_ok(pg, u, open_mask, self.placements):
                self.pruned["partial_ball"] += 1
                return False
        within, attained = self._distances_ok(pg, saturated)
        if not within:
            self.pruned["bonnet_myers"] += 1
            return False
        if attained and self.rigid and self.options.rigidity_prune:
            cube = _hypercube_nx()
            if pg.n > cube.number_of_nodes() or not GraphMatcher(cube, graph.to_networkx()).subgraph_is_monomorphic():
                self.pruned["rigidity"] += 1
                return False
        if self.c1 == 0 and not all(s3_budget_check(pg, v) for v in pg.ball_types):
            self.pruned["s3_budget"] += 1
            return False
        return True

    def _moves(self, pg: PartialGraph, v: int) -> Iterator[Tuple[PartialGraph, int]]:
        need = QUARTIC_DEGREE - pg.degree(v)
        saturated = pg.saturated_mask()
        outside = ((1 << pg.n) - 1) & ~pg.adj[v] & ~(1 << v)
        self.pruned["degree"] += _popcount(outside & saturated)
        candidates = list(iter_bits(outside & ~saturated))
        for n_existing in range(min(need, len(candidates)), -1, -1):
            fresh = need - n_existing
            if pg.n + fresh > self.options.max_vertices:
                self.pruned["truncated"] += 1
                continue
            for targets in combinations(candidates, n_existing):
                child = pg.copy()
                touched = 1 << v
                for t in targets:
                    child.add_edge(v, t)
                    touched |= 1 << t
                for _ in range(fresh):
                    touched |= 1 << child.add_vertex(v)
                yield child, touched

    def expand(self, pg: PartialGraph, touched: int) -> List[Tuple[PartialGraph, int]]:
        """Check one node and return its children"""
        self.nodes += 1
        if not self._passes(pg, touched):
            return []
        if self.options.memoize:
            key = canonical_form_of(pg.to_graph(), colors=[v == 0 for v in range(pg.n)])
            if key in self.memo:
                self.pruned["isomorphic_duplicate"] += 1
                return []
            self.memo.add(key)
        v = pg.first_open()
        if v is None:
            self._complete(pg)
            return []
        return list(self._moves(pg, v))

    def visit(self, pg: PartialGraph, touched: int):
        for child, child_touched in self.expand(pg, touched):
            self.visit(child, child_touched)

    def _complete(self, pg: PartialGraph):
        graph = pg.to_graph()
        check_globally_sharp(graph, subject=f"completion of seed {self.seed}")
        key = canonical_form_of(graph)
        if key not in self.completed:
            logger.info(f"Seed {self.seed}: completed a graph on {graph.n} vertices")
            self.completed[key] = graph


def _run_subtree(args: Tuple[str, SearchOptions, PartialGraph, int]) -> Tuple[List[Graph], int, Dict[str, int]]:
    seed, options, pg, touched = args
    search = _ExtensionSearch(seed, options)
    search.visit(pg, touched)
    return list(search.completed.values()), search.nodes, dict(search.pruned)


def _completed_graph(graph: Graph) -> CompletedGraph:
    canonical = canonical_graph(graph)
    edges = canonical.edges()
    return CompletedGraph(
        n=canonical.n,
        edges=edges,
        fingerprint=graph_fingerprint(canonical.n, edges),
        diameter=diameter(canonical),
        name=identify_named(canonical),
    )


def _merge_graphs(graphs: List[Graph]) -> List[CompletedGraph]:
    unique: Dict[CanonicalForm, Graph] = {}
    for graph in graphs:
        unique.setdefault(canonical_form_of(graph), graph)
    completed = [_completed_graph(g) for g in unique.values()]
    return sorted(completed, key=lambda g: (g.n, g.edges))


def _search_options(seed: str, max_vertices: int, options: Optional[SearchOptions]) -> SearchOptions:
    if seed not in BALL_TYPE_IDS:
        raise InvalidParametersError(f"Unknown seed {seed!r}, expected one of {', '.join(BALL_TYPE_IDS)}")
    if options is not None:
        return options
    if max_vertices < MIN_MAX_VERTICES:
        raise InvalidParametersError(
            f"max_vertices must be at least {MIN_MAX_VERTICES} to leave room for the 4-cube, got {max_vertices}"
        )
    try:
        return SearchOptions(seed=seed, max_vertices=max_vertices)
    except ValidationError as err:
        raise InvalidParametersError(str(err)) from err


def search_from_seed(
    seed: str,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    options: Optional[SearchOptions] = None,
    progress: bool = False,
) -> SearchOutcome:
    """Find every globally curvature sharp quartic graph containing a seed ball

    Parameters
    ----------
    seed :
        One of the 22 sharp ball types, laid out around vertex 0
    max_vertices :
        Cap on the number of vertices of a partial graph. Ignored when
        options are given. Default: 40.
    options :
        Search options; overrides max_vertices
    progress :
        Show a progress bar over the subtrees handed to worker processes

    Returns
    -------
    :
        The completed graphs, deduplicated up to isomorphism, with the node
        and prune counters of the run

    Raises
    ------
    InvalidParametersError
        If the seed is unknown or max_vertices < 17
    SearchTruncatedError
        If some branch hit the vertex cap and options.fail_on_truncation is
        set. The outcome is attached to the error.
    """
    options = _search_options(seed, max_vertices, options)
    logger.info(
        f"Searching from seed {seed} (max_vertices={options.max_vertices}, "
        f"rigidity_prune={options.rigidity_prune}, jobs={options.jobs})"
    )
    search = _ExtensionSearch(seed, options)
    root = PartialGraph.from_seed(seed)
    touched = (1 << root.n) - 1
    graphs: List[Graph] = []
    nodes = 0
    pruned: Counter = Counter()
    if options.jobs <= 1:
        search.visit(root, touched)
    else:
        # Expand breadth-first until there is enough work for the pool
        frontier = [(root, touched)]
        while frontier and len(frontier) < 4 * options.jobs:
            frontier = [child for node in frontier for child in search.expand(*node)]
        logger.debug(f"Seed {seed}: handing {len(frontier)} subtrees to {options.jobs} processes")
        args = [(seed, options, pg, t) for pg, t in frontier]
        if args:
            jobs = min(options.jobs, cpu_count())
            chunksize, extra = divmod(len(args), jobs * 4)
            if extra:
                chunksize += 1
            with Pool(processes=jobs) as pool:
                for sub_graphs, sub_nodes, sub_pruned in tqdm(
                    pool.imap(_run_subtree, args, chunksize=chunksize),
                    total=len(args),
                    desc=f"Seed {seed}",
                    disable=not progress,
                ):
                    graphs.extend(sub_graphs)
                    nodes += sub_nodes
                    pruned.update(sub_pruned)
    graphs.extend(search.completed.values())
    nodes += search.nodes
    pruned.update(search.pruned)
    outcome = SearchOutcome(
        seed=seed,
        max_vertices=options.max_vertices,
        rigidity_prune=options.rigidity_prune,
        completed_graphs=_merge_graphs(graphs),
        nodes_explored=nodes,
        pruned_by=dict(pruned),
    )
    logger.info(
        f"Seed {seed}: {len(outcome.completed_graphs)} graph(s) {outcome.graph_names()} "
        f"after {outcome.nodes_explored} nodes"
    )
    if outcome.truncated:
        truncated = outcome.pruned_by["truncated"]
        message = f"Seed {seed}: {truncated} move(s) hit the cap of {options.max_vertices} vertices"
        if options.fail_on_truncation:
            raise SearchTruncatedError(message, outcome)
        logger.warning(message)
    return outcome


def search_all(
    options: Optional[SearchOptions] = None, progress: bool = False
) -> Tuple[SearchOutcome, Dict[str, SearchOutcome]]:
    """Run the extension search from every one of the 22 seeds

    Parameters
    ----------
    options :
        Search options applied to every seed; the seed field is ignored
    progress :
        Show a progress bar over the seeds

    Returns
    -------
    :
        The union over all seeds (seed "all") and the outcome per seed
    """
    options = options or SearchOptions()
    outcomes: Dict[str, SearchOutcome] = {}
    for seed in tqdm(BALL_TYPE_IDS, desc="Seeds", disable=not progress):
        outcomes[seed] = search_from_seed(seed, options=options.copy(update={"seed": seed}))
    union: Dict[Tuple[int, Tuple[Tuple[int, int], ...]], CompletedGraph] = {}
    pruned: Counter = Counter()
    for outcome in outcomes.values():
        for graph in outcome.completed_graphs:
            # Edge lists are canonical, so equal lists mean isomorphic graphs
            union.setdefault((graph.n, tuple(graph.edges)), graph)
        pruned.update(outcome.pruned_by)
    total = SearchOutcome(
        seed="all",
        max_vertices=options.max_vertices,
        rigidity_prune=options.rigidity_prune,
        completed_graphs=sorted(union.values(), key=lambda g: (g.n, g.edges)),
        nodes_explored=sum(o.nodes_explored for o in outcomes.values()),
        pruned_by={rule: pruned[rule] for rule in PRUNE_RULES},
    )
    return total, outcomes


def verify_outcome(outcome: SearchOutcome) -> bool:
    """Re-check every completed graph of an outcome independently of the search

    Raises
    ------
    VerificationError
        If a graph is not connected, quartic and sharp at every vertex, or
        its recorded fingerprint or diameter is off
    """
    for completed in outcome.completed_graphs:
        graph = from_edge_list(completed.n, completed.edges)
        check_globally_sharp(graph, subject=f"graph {completed.fingerprint}")
        fingerprint = graph_fingerprint(completed.n, completed.edges)
        if fingerprint != completed.fingerprint:
            raise VerificationError("fingerprint", completed.fingerprint, fingerprint)
        diam = diameter(graph)
        if diam != completed.diameter:
            raise VerificationError("diameter", completed.diameter, diam, f"graph {completed.fingerprint}")
    return True
