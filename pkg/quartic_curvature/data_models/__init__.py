"""
This file contains data models for balls, curvature reports, classification
records, search outcomes and the option models that configure the curvature
computation, the ball enumeration and the extension search.
"""
import logging
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Extra, confloat, conint, validator

__all__ = [
    "BallModel",
    "CurvatureReport",
    "ClassificationRecord",
    "CompletedGraph",
    "SearchOutcome",
    "Table1Row",
    "Table2Row",
    "CurvatureOptions",
    "SearchOptions",
    "EnumerateOptions",
    "BALL_TYPE_IDS",
    "PRUNE_RULES",
    "DEFAULT_TOL",
    "SHARP_TOL",
    "PSD_REL_TOL",
    "JACOBI_OFF_TOL",
    "DEFAULT_DENOM_BOUND",
    "DEFAULT_MAX_VERTICES",
    "MIN_MAX_VERTICES",
    "QUARTIC_DEGREE",
    "FLOAT_DIGITS",
    "EigenMethod",
    "BallFilter",
]

logger = logging.getLogger(__name__)


# Set defaults
DEFAULT_TOL = 1e-9
SHARP_TOL = 1e-7
PSD_REL_TOL = 1e-11
JACOBI_OFF_TOL = 1e-13
DEFAULT_DENOM_BOUND = 2**40
DEFAULT_MAX_VERTICES = 40
MIN_MAX_VERTICES = 17  # Q4 has 16 vertices, one more is needed to see the branch past it
QUARTIC_DEGREE = 4
FLOAT_DIGITS = 12

# The 22 ball types with a curvature sharp center, grouped by #triangles per edge
BALL_TYPE_IDS: Tuple[str, ...] = (
    "1.1",
    "2.1",
    "2.2",
    "2.3",
    "2.4",
    "2.5",
    "2.6",
    "2.7",
    "3.1",
    "3.2",
    "3.3",
    "3.4",
    "4.1",
    "4.2",
    "4.3",
    "4.4",
    "4.5",
    "4.6",
    "4.7",
    "4.8",
    "4.9",
    "4.10",
)

PRUNE_RULES: Tuple[str, ...] = (
    "degree",
    "edge_triangles",
    "ball_type",
    "partial_ball",
    "bonnet_myers",
    "rigidity",
    "s3_budget",
    "isomorphic_duplicate",
    "truncated",
)

EigenMethod = Literal["lapack", "jacobi"]
BallFilter = Literal["all", "nonneg", "sharp"]


def _check_ball_type(value: Optional[str]) -> Optional[str]:
    if value is not None and value not in BALL_TYPE_IDS:
        raise ValueError(f"Unknown ball type {value!r}, expected one of {', '.join(BALL_TYPE_IDS)}")
    return value


# Interchange models
class BallModel(BaseModel):
    """JSON interchange form of an incomplete 2-ball

    ``s1`` lists the edges among the neighbors v1..vD of the center in the
    order a12, a13, ..., a(D-1)D; ``s1s2`` has one ascending list of S1
    neighbors (1-based) per vertex of S2.
    """

    s1: List[conint(ge=0, le=1)]
    s1s2: List[List[conint(ge=1)]] = []

    class Config:
        extra = Extra.forbid

    @validator("s1")
    def s1_is_triangular(cls, v: List[int]):
        """Validate that s1 has D(D-1)/2 entries for some degree D"""
        degree = cls.degree_of(v)
        if degree * (degree - 1) // 2 != len(v):
            raise ValueError(f"s1 must have D(D-1)/2 entries, got {len(v)}")
        return v

    @validator("s1s2")
    def patterns_are_ascending_subsets(cls, v: List[List[int]], values):
        """Validate that every S2 pattern is a nonempty ascending subset of 1..D"""
        if "s1" not in values:
            return v
        degree = cls.degree_of(values["s1"])
        for pattern in v:
            if not pattern:
                raise ValueError("Every S2 vertex needs at least one S1 neighbor")
            if any(a >= b for a, b in zip(pattern, pattern[1:])):
                raise ValueError(f"S2 pattern {pattern} is not strictly ascending")
            if pattern[-1] > degree:
                raise ValueError(f"S2 pattern {pattern} refers to a vertex beyond v{degree}")
        return v

    @staticmethod
    def degree_of(s1: List[int]) -> int:
        """Return the smallest D >= 1 with D(D-1)/2 >= len(s1)"""
        degree = 1
        while degree * (degree - 1) // 2 < len(s1):
            degree += 1
        return degree

    @property
    def degree(self) -> int:
        return self.degree_of(self.s1)


class CurvatureReport(BaseModel):
    """Curvature at the center of a ball together with its sharpness verdict"""

    k_infinity: float
    upper_bound: float
    sharp: bool
    triangles_vertex: conint(ge=0)
    degree: conint(ge=0)
    vertex: Optional[conint(ge=0)] = None
    s1_out_regular: Optional[bool] = None
    ball_type: Optional[str] = None

    class Config:
        allow_mutation = False

    _ball_type_known = validator("ball_type", allow_reuse=True)(_check_ball_type)


class ClassificationRecord(BaseModel):
    """The verified invariants of one globally curvature sharp graph"""

    graph_name: str
    vertex_count: conint(ge=1)
    curvature: float
    diam: conint(ge=0)
    sharp_everywhere: bool
    ball_types: List[str]
    bonnet_myers_slack: Optional[float] = None
    bonnet_myers_equality: Optional[bool] = None

    class Config:
        allow_mutation = False

    @validator("ball_types", each_item=True)
    def ball_types_known(cls, v: str):
        return _check_ball_type(v)

    @validator("ball_types")
    def ball_types_sorted(cls, v: List[str]):
        return sorted(set(v), key=BALL_TYPE_IDS.index)


class Table1Row(BaseModel):
    """One row of the enumeration table: counts per standard S1 structure"""

    index: conint(ge=1)
    s1: Tuple[int, ...]
    s1_out_regular: bool
    total: conint(ge=0)
    nonneg: conint(ge=0)


class Table2Row(BaseModel):
    """One curvature sharp ball type with its computed curvature"""

    ball_type: str
    s1: Tuple[int, ...]
    s1s2: List[Tuple[int, ...]]
    triangles_edge: conint(ge=0)
    k_infinity: float

    _ball_type_known = validator("ball_type", allow_reuse=True)(_check_ball_type)


class CompletedGraph(BaseModel):
    """A graph produced by the extension search, in canonical labeling"""

    n: conint(ge=1)
    edges: List[Tuple[int, int]]
    fingerprint: int
    diameter: conint(ge=0)
    name: Optional[str] = None

    class Config:
        allow_mutation = False


class SearchOutcome(BaseModel):
    """Summary of one extension search (or the union over several seeds)"""

    seed: str
    max_vertices: conint(ge=MIN_MAX_VERTICES)
    rigidity_prune: bool
    completed_graphs: List[CompletedGraph] = []
    nodes_explored: conint(ge=0) = 0
    pruned_by: Dict[str, int] = {}

    @validator("pruned_by")
    def all_rules_counted(cls, v: Dict[str, int]):
        """Fill in zero counters so every prune rule is always reported"""
        unknown = set(v) - set(PRUNE_RULES)
        if unknown:
            raise ValueError(f"Unknown prune rules: {', '.join(sorted(unknown))}")
        return {rule: v.get(rule, 0) for rule in PRUNE_RULES}

    @property
    def truncated(self) -> bool:
        return self.pruned_by.get("truncated", 0) > 0

    def graph_names(self) -> List[Optional[str]]:
        return [g.name for g in self.completed_graphs]


# Option models
class CurvatureOptions(BaseModel):
    """Options for the curvature computation"""

    tol: confloat(gt=0) = DEFAULT_TOL
    sharp_tol: confloat(gt=0) = SHARP_TOL
    eigen_method: EigenMethod = "lapack"

    class Config:
        allow_mutation = False
        extra = Extra.forbid


class SearchOptions(BaseModel):
    """Options for the extension search"""

    seed: Optional[str] = None
    max_vertices: conint(ge=MIN_MAX_VERTICES) = DEFAULT_MAX_VERTICES
    rigidity_prune: bool = True
    jobs: conint(ge=1) = 1
    fail_on_truncation: bool = True
    memoize: bool = True

    class Config:
        allow_mutation = False
        extra = Extra.forbid

    _seed_known = validator("seed", allow_reuse=True)(_check_ball_type)


class EnumerateOptions(BaseModel):
    """Options for the ball enumeration"""

    filter: BallFilter = "all"
    jobs: conint(ge=1) = 1

    class Config:
        allow_mutation = False
        extra = Extra.forbid
