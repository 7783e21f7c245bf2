"""
Reproduction of the published tables and end-to-end verification of the
eight globally curvature sharp quartic graphs.

- :func:`table1`: number of balls (and of balls with non-negative curvature)
  per standard S1 structure
- :func:`table2`: the 22 ball types with a curvature sharp center
- :func:`table3`: which graphs each ball type leads to
- :func:`verify_named` / :func:`verify_all`: connectivity, regularity,
  sharpness at every vertex, constant curvature, vertex count, diameter and
  ball types of the named graphs
"""
import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from quartic_curvature.curvature import batch_curvature, curvature_all, k_infinity
from quartic_curvature.data_models import (
    BALL_TYPE_IDS,
    QUARTIC_DEGREE,
    SHARP_TOL,
    ClassificationRecord,
    CurvatureOptions,
    CurvatureReport,
    SearchOptions,
    Table1Row,
    Table2Row,
)
from quartic_curvature.exceptions import (
    DisconnectedGraphError,
    InapplicableError,
    InconsistencyError,
    VerificationError,
)
from quartic_curvature.graph_core.constructors import NAMED_GRAPHS, named_graph
from quartic_curvature.graph_core.graph import Graph, diameter
from quartic_curvature.two_ball import (
    STANDARD_S1_STRUCTURES,
    IncompleteTwoBall,
    ball_type_class,
    enumerate_s1_structure,
    sharp_ball,
)

__all__ = [
    "BonnetMyersCheck",
    "NO_RESULTING_GRAPH",
    "check_globally_sharp",
    "check_bonnet_myers",
    "verify_named",
    "verify_all",
    "table1",
    "table2",
    "table3",
    "records_to_frame",
    "RECORD_COLUMNS",
]

logger = logging.getLogger(__name__)

NO_RESULTING_GRAPH = "no resulting graph"

RECORD_COLUMNS = [
    "name",
    "|V|",
    "K_infinity",
    "diameter",
    "sharp_everywhere",
    "ball_type",
    "bonnet_myers_slack",
]


class BonnetMyersCheck(NamedTuple):
    """Outcome of comparing a diameter with the Bonnet-Myers bound 2D/K"""

    holds: bool
    slack: float
    equality: bool
    bound: float
    diameter: int
    curvature: float


def check_globally_sharp(
    graph: Graph, subject: Optional[str] = None, options: Optional[CurvatureOptions] = None
) -> List[CurvatureReport]:
    """Check that a graph is connected, quartic and curvature sharp at every vertex

    Parameters
    ----------
    graph :
        The graph to check
    subject :
        Name used in error messages
    options :
        Curvature options

    Returns
    -------
    :
        The curvature report of every vertex

    Raises
    ------
    VerificationError
        If any of the checks fails. The error names the failing field.
    """
    options = options or CurvatureOptions()
    subject = subject or repr(graph)
    if not graph.is_connected():
        raise VerificationError("connected", True, False, subject)
    if not graph.is_regular(QUARTIC_DEGREE):
        raise VerificationError("regular_degree", QUARTIC_DEGREE, graph.regular_degree(), subject)
    reports = curvature_all(graph, options)
    for report in reports:
        if not report.sharp:
            raise VerificationError(f"sharp at vertex {report.vertex}", True, False, subject)
        if report.ball_type is None:
            raise VerificationError(f"ball_type at vertex {report.vertex}", "one of the 22 types", None, subject)
    values = [r.k_infinity for r in reports]
    if max(values) - min(values) > options.sharp_tol:
        raise VerificationError("constant curvature", min(values), max(values), subject)
    return reports


def check_bonnet_myers(graph: Graph, options: Optional[CurvatureOptions] = None) -> BonnetMyersCheck:
    """Compare the diameter of a regular graph with the Bonnet-Myers bound

    For a D-regular graph with curvature at least K > 0 at every vertex the
    diameter is at most 2D/K, with equality only for the D-dimensional
    hypercube.

    Parameters
    ----------
    graph :
        A connected regular graph
    options :
        Curvature options

    Returns
    -------
    :
        Whether the bound holds, the slack 2D/K - diam, whether equality
        holds (within the sharpness tolerance) and the quantities involved

    Raises
    ------
    DisconnectedGraphError
        If the graph is disconnected
    InapplicableError
        If the graph is not regular or its minimal curvature is not positive
    """
    options = options or CurvatureOptions()
    if not graph.is_connected():
        raise DisconnectedGraphError(f"{graph} is disconnected; its diameter is infinite")
    degree = graph.regular_degree()
    if degree is None:
        raise InapplicableError(f"{graph} is not regular")
    curvature = min(r.k_infinity for r in curvature_all(graph, options))
    if curvature <= 0:
        raise InapplicableError(f"Minimal curvature {curvature} is not positive")
    diam = diameter(graph)
    bound = 2 * degree / curvature
    slack = bound - diam
    return BonnetMyersCheck(
        holds=slack >= -options.sharp_tol,
        slack=slack,
        equality=abs(slack) <= options.sharp_tol,
        bound=bound,
        diameter=diam,
        curvature=curvature,
    )


def verify_named(name: str, options: Optional[CurvatureOptions] = None) -> ClassificationRecord:
    """Verify one of the eight named graphs against its published invariants

    Parameters
    ----------
    name :
        One of K5, O, K3xK3, K44, C10, D12, D14 and Q4
    options :
        Curvature options

    Returns
    -------
    :
        The verified classification record

    Raises
    ------
    InvalidParametersError
        If the name is not recognized
    VerificationError
        On any mismatch, naming the violated field
    """
    options = options or CurvatureOptions()
    graph = named_graph(name)
    info = NAMED_GRAPHS[name]
    logger.info(f"Verifying {name} ({info.description})")
    reports = check_globally_sharp(graph, name, options)
    if graph.n != info.n:
        raise VerificationError("vertex_count", info.n, graph.n, name)
    curvature = reports[0].k_infinity
    if abs(curvature - info.k_infinity) > options.sharp_tol:
        raise VerificationError("curvature", info.k_infinity, curvature, name)
    diam = diameter(graph)
    if diam != info.diam:
        raise VerificationError("diam", info.diam, diam, name)
    ball_types = {r.ball_type for r in reports}
    if ball_types != {info.ball_type}:
        raise VerificationError("ball_types", [info.ball_type], sorted(ball_types), name)
    bonnet_myers = check_bonnet_myers(graph, options)
    if not bonnet_myers.holds:
        raise VerificationError("bonnet_myers", f"diam <= {bonnet_myers.bound}", diam, name)
    return ClassificationRecord(
        graph_name=name,
        vertex_count=graph.n,
        curvature=curvature,
        diam=diam,
        sharp_everywhere=True,
        ball_types=sorted(ball_types),
        bonnet_myers_slack=bonnet_myers.slack,
        bonnet_myers_equality=bonnet_myers.equality,
    )


def verify_all(options: Optional[CurvatureOptions] = None, progress: bool = False) -> List[ClassificationRecord]:
    """Verify all eight named graphs, in the published order"""
    return [verify_named(name, options) for name in tqdm(NAMED_GRAPHS, desc="Verifying graphs", disable=not progress)]


def table1(
    options: Optional[CurvatureOptions] = None, jobs: int = 1, progress: bool = False
) -> List[Table1Row]:
    """Count the quartic balls per standard S1 structure

    Parameters
    ----------
    options :
        Curvature options; a ball counts as non-negatively curved when its
        curvature is at least -options.sharp_tol
    jobs :
        Number of worker processes for the curvature computation
    progress :
        Show progress bars

    Returns
    -------
    :
        One row per standard S1 structure, in the published order
    """
    options = options or CurvatureOptions()
    rows = []
    for index, s1 in enumerate(tqdm(STANDARD_S1_STRUCTURES, desc="S1 structures", disable=not progress), start=1):
        balls = enumerate_s1_structure(s1)
        reports = batch_curvature(balls, options, jobs=jobs)
        rows.append(
            Table1Row(
                index=index,
                s1=s1,
                s1_out_regular=len(set(IncompleteTwoBall(s1, ()).spherical_degrees())) == 1,
                total=len(balls),
                nonneg=sum(r.k_infinity >= -options.sharp_tol for r in reports),
            )
        )
    return rows


def table2(options: Optional[CurvatureOptions] = None) -> List[Table2Row]:
    """Compute the curvature of the 22 published sharp ball types

    Raises
    ------
    InconsistencyError
        If a published ball is not curvature sharp
    """
    rows = []
    for ball_type in BALL_TYPE_IDS:
        ball = sharp_ball(ball_type)
        report = k_infinity(ball, options=options)
        if not report.sharp:
            raise InconsistencyError(f"Published ball type {ball_type} has curvature {report.k_infinity}")
        rows.append(
            Table2Row(
                ball_type=ball_type,
                s1=ball.s1,
                s1s2=list(ball.s1s2),
                triangles_edge=ball_type_class(ball_type),
                k_infinity=report.k_infinity,
            )
        )
    return rows


def table3(search: bool = False, search_options: Optional[SearchOptions] = None) -> Dict[str, List[str]]:
    """Map every ball type to the graphs it leads to

    Parameters
    ----------
    search :
        If True, derive the map from the extension search over all 22 seeds.
        Otherwise read it off the named graphs.
    search_options :
        Options for the extension search

    Returns
    -------
    :
        Ball type -> names of the resulting graphs, or
        [:data:`NO_RESULTING_GRAPH`] for types that lead to no graph
    """
    found: Dict[str, List[str]] = {t: [] for t in BALL_TYPE_IDS}
    if search:
        from quartic_curvature.search.extension import search_all

        _, outcomes = search_all(search_options)
        for ball_type, outcome in outcomes.items():
            found[ball_type] = [g.name or f"unnamed graph {g.fingerprint}" for g in outcome.completed_graphs]
    else:
        for name, info in NAMED_GRAPHS.items():
            found[info.ball_type].append(name)
    return {t: names or [NO_RESULTING_GRAPH] for t, names in found.items()}


def _record_row(record: ClassificationRecord) -> Tuple:
    return (
        record.graph_name,
        record.vertex_count,
        record.curvature,
        record.diam,
        record.sharp_everywhere,
        ",".join(record.ball_types),
        record.bonnet_myers_slack,
    )


def records_to_frame(records: List[ClassificationRecord]) -> pd.DataFrame:
    """Arrange classification records as a data frame with :data:`RECORD_COLUMNS`"""
    return pd.DataFrame([_record_row(r) for r in records], columns=RECORD_COLUMNS)
