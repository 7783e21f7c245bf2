"""
Incomplete 2-balls: the local structure around a vertex x that determines
its curvature.

A ball of a degree-D center is stored as

- ``s1``: the D(D-1)/2 adjacency bits among the neighbors v1..vD of x in the
  order a12, a13, ..., a1D, a23, ..., a(D-1)D, and
- ``s1s2``: one pattern per vertex of S2(x), the ascending tuple of indices i
  with vi adjacent to it.

Edges inside S2(x) never enter the curvature at x and are not stored.
"""
import logging
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from quartic_curvature.data_models import BALL_TYPE_IDS, QUARTIC_DEGREE, BallModel, CurvatureOptions
from quartic_curvature.exceptions import DomainError, InconsistencyError, InvalidParametersError
from quartic_curvature.graph_core.graph import Graph, bfs_distances, from_edge_list, iter_bits

__all__ = [
    "IncompleteTwoBall",
    "Pattern",
    "S1Vector",
    "s1_pairs",
    "extract",
    "canonical_form",
    "enumerate_quartic",
    "enumerate_s1_structure",
    "classify_sharp",
    "lookup_ball_type",
    "ball_type_class",
    "sharp_ball",
    "STANDARD_S1_STRUCTURES",
    "SHARP_BALL_TABLE",
]

logger = logging.getLogger(__name__)

Pattern = Tuple[int, ...]
S1Vector = Tuple[int, ...]

# The representatives of the 11 isomorphism classes of graphs on v1..v4
STANDARD_S1_STRUCTURES: Tuple[S1Vector, ...] = (
    (0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 1),
    (1, 1, 0, 0, 0, 0),
    (1, 1, 1, 0, 0, 0),
    (1, 1, 0, 1, 0, 0),
    (1, 1, 0, 0, 1, 0),
    (1, 1, 0, 0, 1, 1),
    (1, 1, 1, 1, 0, 0),
    (1, 1, 1, 1, 1, 0),
    (1, 1, 1, 1, 1, 1),
)

_C4 = (1, 1, 0, 0, 1, 1)
_MATCHING = (1, 0, 0, 0, 0, 1)
_EMPTY = (0, 0, 0, 0, 0, 0)

# The quartic balls with a curvature sharp center, as published
SHARP_BALL_TABLE: Dict[str, Tuple[S1Vector, Tuple[Pattern, ...]]] = {
    "1.1": ((1, 1, 1, 1, 1, 1), ()),
    "2.1": (_C4, ((1, 2, 3, 4),)),
    "2.2": (_C4, ((1, 2, 3), (4,))),
    "2.3": (_C4, ((1, 2), (3,), (4,))),
    "2.4": (_C4, ((1, 4), (2,), (3,))),
    "2.5": (_C4, ((1,), (2,), (3,), (4,))),
    "2.6": (_C4, ((1, 2), (3, 4))),
    "2.7": (_C4, ((1, 4), (2, 3))),
    "3.1": (_MATCHING, ((1, 2, 3, 4), (1, 3), (2, 4))),
    "3.2": (_MATCHING, ((1, 3), (1, 3), (2, 4), (2, 4))),
    "3.3": (_MATCHING, ((1, 3), (1, 4), (2, 3), (2, 4))),
    "3.4": (_MATCHING, ((1, 2, 3, 4), (1, 2, 3, 4))),
    "4.1": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3, 4), (1,), (2,), (3,), (4,))),
    "4.2": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3, 4), (1, 2), (3,), (4,))),
    "4.3": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3, 4), (1, 2, 3), (4,))),
    "4.4": (_EMPTY, ((1, 2, 3, 4), (1, 2), (1, 3), (2, 4), (3, 4))),
    "4.5": (_EMPTY, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))),
    "4.6": (_EMPTY, ((1, 2, 3), (1, 2, 3), (1, 4), (2, 4), (3, 4))),
    "4.7": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3, 4), (1, 2), (3, 4))),
    "4.8": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3), (1, 2, 4), (3, 4))),
    "4.9": (_EMPTY, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))),
    "4.10": (_EMPTY, ((1, 2, 3, 4), (1, 2, 3, 4), (1, 2, 3, 4))),
}


@lru_cache(maxsize=None)
def s1_pairs(degree: int) -> Tuple[Tuple[int, int], ...]:
    """The 1-based S1 index pairs (i, j), i < j, in the order of the s1 vector"""
    return tuple(combinations(range(1, degree + 1), 2))


def _degree_for(s1_len: int) -> int:
    degree = 1
    while degree * (degree - 1) // 2 < s1_len:
        degree += 1
    if degree * (degree - 1) // 2 != s1_len:
        raise InvalidParametersError(f"An S1 vector must have D(D-1)/2 entries, got {s1_len}")
    return degree


class IncompleteTwoBall:
    """An incomplete 2-ball around a center of degree D

    Parameters
    ----------
    s1 :
        The D(D-1)/2 adjacency bits among the neighbors of the center
    s1s2 :
        One collection of 1-based S1 indices per S2 vertex
    degree :
        The degree D of the center. Inferred from the length of s1 when
        omitted.
    """

    __slots__ = ("degree", "s1", "s1s2")

    def __init__(self, s1: Sequence[int], s1s2: Iterable[Iterable[int]] = (), degree: Optional[int] = None):
        inferred = _degree_for(len(s1))
        if degree is None:
            degree = inferred
        elif degree * (degree - 1) // 2 != len(s1):
            raise InvalidParametersError(f"Degree {degree} needs {degree * (degree - 1) // 2} S1 bits, got {len(s1)}")
        if any(bit not in (0, 1) for bit in s1):
            raise InvalidParametersError(f"S1 vector {list(s1)} must consist of 0/1 entries")
        patterns = []
        for raw in s1s2:
            pattern = tuple(sorted(int(i) for i in raw))
            if not pattern:
                raise InvalidParametersError("Every S2 vertex needs at least one S1 neighbor")
            if len(set(pattern)) != len(pattern) or pattern[0] < 1 or pattern[-1] > degree:
                raise InvalidParametersError(f"Pattern {list(raw)} is not a subset of 1..{degree}")
            patterns.append(pattern)
        self.degree: int = degree
        self.s1: S1Vector = tuple(int(bit) for bit in s1)
        self.s1s2: Tuple[Pattern, ...] = tuple(patterns)

    @classmethod
    def from_model(cls, model: BallModel) -> "IncompleteTwoBall":
        return cls(model.s1, model.s1s2, degree=model.degree)

    def to_model(self) -> BallModel:
        return BallModel(s1=list(self.s1), s1s2=[list(p) for p in self.s1s2])

    @property
    def n_s2(self) -> int:
        return len(self.s1s2)

    @property
    def n_vertices(self) -> int:
        """Number of vertices of the ball, center included"""
        return 1 + self.degree + self.n_s2

    def s1_adjacent(self, i: int, j: int) -> bool:
        """Return True if vi ~ vj (1-based)"""
        if i == j:
            return False
        i, j = min(i, j), max(i, j)
        # Index of (i, j) in the row-major upper triangle
        k = (i - 1) * (2 * self.degree - i) // 2 + (j - i - 1)
        return bool(self.s1[k])

    def spherical_degrees(self) -> List[int]:
        """Spherical degree of each S1 vertex w.r.t. the center"""
        sph = [0] * self.degree
        for bit, (i, j) in zip(self.s1, s1_pairs(self.degree)):
            if bit:
                sph[i - 1] += 1
                sph[j - 1] += 1
        return sph

    def s1_out_degrees(self) -> List[int]:
        """Out-degree of each S1 vertex w.r.t. the center"""
        out = [0] * self.degree
        for pattern in self.s1s2:
            for i in pattern:
                out[i - 1] += 1
        return out

    def in_degrees_s2(self) -> List[int]:
        """In-degree of each S2 vertex w.r.t. the center"""
        return [len(p) for p in self.s1s2]

    def triangles_at_center(self) -> int:
        return sum(self.s1)

    def is_s1_out_regular(self) -> bool:
        return len(set(self.s1_out_degrees())) <= 1

    def is_quartic(self) -> bool:
        """Return True if the center and every S1 vertex have degree exactly 4"""
        if self.degree != QUARTIC_DEGREE:
            return False
        return all(1 + s + o == QUARTIC_DEGREE for s, o in zip(self.spherical_degrees(), self.s1_out_degrees()))

    def require_quartic(self):
        """Raise DomainError unless the ball is quartic"""
        if not self.is_quartic():
            raise DomainError(f"{self!r} is not a quartic ball")

    def to_graph(self) -> Graph:
        """Build the ball as a graph: center 0, S1 as 1..D, S2 as D+1.. in pattern order"""
        edges = [(0, i) for i in range(1, self.degree + 1)]
        edges += [pair for bit, pair in zip(self.s1, s1_pairs(self.degree)) if bit]
        edges += [(i, self.degree + 1 + z) for z, pattern in enumerate(self.s1s2) for i in pattern]
        return from_edge_list(self.n_vertices, edges)

    def key(self) -> Tuple[S1Vector, Tuple[Pattern, ...]]:
        return self.s1, self.s1s2

    def canonical(self) -> "IncompleteTwoBall":
        return canonical_form(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, IncompleteTwoBall) and self.degree == other.degree and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.degree, self.key()))

    def __repr__(self) -> str:
        s1s2 = ", ".join("[" + "".join(str(i) for i in p) + "]" for p in self.s1s2)
        return f"IncompleteTwoBall({list(self.s1)}, [{s1s2}])"


def extract(graph: Graph, x: int, require_quartic: bool = True) -> IncompleteTwoBall:
    """Extract the incomplete 2-ball of graph at x

    Parameters
    ----------
    graph :
        The host graph
    x :
        The center
    require_quartic :
        If True (default), require x and all its neighbors to have degree 4

    Returns
    -------
    :
        The ball, with S1 numbered in ascending vertex order and one pattern
        per S2 vertex in ascending vertex order

    Raises
    ------
    DomainError
        If require_quartic is set and the ball is not quartic
    """
    dist = bfs_distances(graph, x)
    s1 = graph.neighbors(x)
    if require_quartic:
        bad = [v for v in [x] + s1 if graph.degree(v) != QUARTIC_DEGREE]
        if bad:
            raise DomainError(f"Ball at {x} is not quartic: vertices {bad} do not have degree 4")
    position = {v: i for i, v in enumerate(s1, start=1)}
    s1_vec = [int(graph.has_edge(u, v)) for u, v in combinations(s1, 2)]
    s2 = [z for z in graph.vertices() if dist[z] == 2]
    s1s2 = [[position[y] for y in graph.neighbors(z) if y in position] for z in s2]
    return IncompleteTwoBall(s1_vec, s1s2, degree=len(s1))


@lru_cache(maxsize=None)
def _permutation_tables(degree: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """For each permutation p of 1..D: the source index of each new s1 bit and the image of each old index"""
    pairs = s1_pairs(degree)
    pair_index = {pair: k for k, pair in enumerate(pairs)}
    tables = []
    for perm in permutations(range(1, degree + 1)):
        image = (0,) + perm
        inverse = [0] * (degree + 1)
        for old, new in enumerate(image):
            inverse[new] = old
        source = tuple(
            pair_index[(min(inverse[i], inverse[j]), max(inverse[i], inverse[j]))] for i, j in pairs
        )
        tables.append((source, image))
    return tables


def canonical_form(ball: IncompleteTwoBall) -> IncompleteTwoBall:
    """Return the canonical representative of the isomorphism class of ball

    Over all relabelings of v1..vD, the representative maximizes the s1
    vector lexicographically and, among the relabelings achieving that,
    minimizes the sorted list of patterns. Two balls are isomorphic by an
    isomorphism fixing the center iff their canonical forms are equal.
    For quartic balls the canonical s1 vector is one of
    :data:`STANDARD_S1_STRUCTURES`.
    """
    best_s1: Optional[S1Vector] = None
    best_patterns: Optional[Tuple[Pattern, ...]] = None
    for source, image in _permutation_tables(ball.degree):
        s1 = tuple(ball.s1[k] for k in source)
        if best_s1 is not None and s1 < best_s1:
            continue
        patterns = tuple(sorted(tuple(sorted(image[i] for i in p)) for p in ball.s1s2))
        if best_s1 is None or s1 > best_s1 or patterns < best_patterns:
            best_s1, best_patterns = s1, patterns
    return IncompleteTwoBall(best_s1, best_patterns, degree=ball.degree)


def _masks_to_patterns(masks: Iterable[int]) -> List[Pattern]:
    return [tuple(i + 1 for i in iter_bits(mask)) for mask in masks]


def _pattern_multisets(need: List[int], max_mask: int, chosen: List[int]) -> Iterator[List[int]]:
    """Yield multisets of nonempty masks, nonincreasing, covering index i exactly need[i] times"""
    if not any(need):
        yield list(chosen)
        return
    allowed = sum(1 << i for i, k in enumerate(need) if k > 0)
    for mask in range(min(max_mask, allowed), 0, -1):
        if mask & ~allowed:
            continue
        for i in iter_bits(mask):
            need[i] -= 1
        chosen.append(mask)
        yield from _pattern_multisets(need, mask, chosen)
        chosen.pop()
        for i in iter_bits(mask):
            need[i] += 1


def enumerate_s1_structure(s1: S1Vector) -> List[IncompleteTwoBall]:
    """Enumerate the canonical quartic balls with the given S1 structure

    Parameters
    ----------
    s1 :
        A standard S1 structure

    Returns
    -------
    :
        The distinct canonical balls, sorted
    """
    degree = QUARTIC_DEGREE
    spherical = IncompleteTwoBall(s1, (), degree=degree).spherical_degrees()
    need = [degree - 1 - s for s in spherical]
    seen = set()
    for masks in _pattern_multisets(need, (1 << degree) - 1, []):
        seen.add(canonical_form(IncompleteTwoBall(s1, _masks_to_patterns(masks), degree=degree)))
    balls = sorted(seen, key=_sort_key)
    logger.info(f"S1 structure {list(s1)}: {len(balls)} balls")
    return balls


def _sort_key(ball: IncompleteTwoBall):
    # Descending s1 (as in the structure table), then ascending patterns
    return tuple(1 - bit for bit in ball.s1), ball.s1s2


def enumerate_quartic(progress: bool = False) -> List[IncompleteTwoBall]:
    """Enumerate all quartic incomplete 2-balls up to isomorphism

    Parameters
    ----------
    progress :
        Show a progress bar over the S1 structures

    Returns
    -------
    :
        The canonical balls, ordered by S1 structure as in
        :data:`STANDARD_S1_STRUCTURES` and by patterns within a structure
    """
    balls = []
    for s1 in tqdm(STANDARD_S1_STRUCTURES, desc="Enumerating 2-balls", disable=not progress):
        balls.extend(enumerate_s1_structure(s1))
    return balls


def sharp_ball(ball_type: str) -> IncompleteTwoBall:
    """Return the ball of the given type as published"""
    try:
        s1, patterns = SHARP_BALL_TABLE[ball_type]
    except KeyError:
        raise InvalidParametersError(f"Unknown ball type {ball_type!r}")
    return IncompleteTwoBall(s1, patterns, degree=QUARTIC_DEGREE)


def ball_type_class(ball_type: str) -> int:
    """The number of triangles on every edge at a center of the given type"""
    if ball_type not in BALL_TYPE_IDS:
        raise InvalidParametersError(f"Unknown ball type {ball_type!r}")
    return QUARTIC_DEGREE - int(ball_type.split(".")[0])


@lru_cache(maxsize=None)
def _sharp_canonical_index() -> Dict[IncompleteTwoBall, str]:
    index = {canonical_form(sharp_ball(t)): t for t in BALL_TYPE_IDS}
    if len(index) != len(BALL_TYPE_IDS):
        raise InconsistencyError("Two published sharp ball types share a canonical form")
    return index


def lookup_ball_type(ball: IncompleteTwoBall) -> Optional[str]:
    """Return the sharp ball type isomorphic to ball, if any (table lookup only)"""
    if ball.degree != QUARTIC_DEGREE:
        return None
    return _sharp_canonical_index().get(canonical_form(ball))


def classify_sharp(ball: IncompleteTwoBall, options: Optional[CurvatureOptions] = None) -> Optional[str]:
    """Return the ball type of ball when its center is curvature sharp

    Parameters
    ----------
    ball :
        A quartic ball
    options :
        Curvature options used to decide sharpness

    Returns
    -------
    :
        One of the 22 ball type identifiers, or None if the center is not
        curvature sharp

    Raises
    ------
    InconsistencyError
        If the center is curvature sharp but the ball is missing from the
        published table, or listed there without being sharp
    """
    from quartic_curvature.curvature import is_curvature_sharp

    ball_type = lookup_ball_type(ball)
    sharp = is_curvature_sharp(ball, options=options)
    if sharp and ball_type is None:
        raise InconsistencyError(f"{ball!r} is curvature sharp but not among the published types")
    if not sharp and ball_type is not None:
        raise InconsistencyError(f"{ball!r} is listed as type {ball_type} but is not curvature sharp")
    return ball_type
