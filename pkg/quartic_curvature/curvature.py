"""
Bakry-Emery curvature at the center of an incomplete 2-ball.

With the non-normalized Laplacian Lf(x) = sum_{y~x} (f(y) - f(x)) the forms

    2 Gamma(f, g)   = L(fg) - f Lg - g Lf
    2 Gamma2(f, g)  = L Gamma(f, g) - Gamma(f, Lg) - Gamma(g, Lf)

are quadratic in the values of f on the 2-ball around x. The curvature
K_inf(x) is the largest K with Gamma2(f, f)(x) >= K Gamma(f, f)(x) for all f,
i.e. the largest K making Gamma2 - K Gamma positive semidefinite. Both forms
vanish on constants, so f(x) is fixed to 0 and the forms live on the
coordinates S1(x) + S2(x).

Four times either form has integer entries; :class:`QuadraticForm` stores the
scaled integer matrix and exposes float and exact rational views of it.
"""
import logging
from fractions import Fraction
from multiprocessing import Pool, cpu_count
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from quartic_curvature.data_models import (
    DEFAULT_DENOM_BOUND,
    CurvatureOptions,
    CurvatureReport,
)
from quartic_curvature.exceptions import (
    DomainError,
    InconsistencyError,
    InvalidParametersError,
)
from quartic_curvature.graph_core.graph import Graph, bfs_distances, check_vertex
from quartic_curvature.linalg import is_psd, is_psd_exact, min_eigenvalue
from quartic_curvature.two_ball import IncompleteTwoBall, extract, lookup_ball_type

__all__ = [
    "QuadraticForm",
    "laplacian_apply",
    "gamma",
    "gamma2",
    "local_forms",
    "gamma_form",
    "gamma2_form",
    "curvature_matrix",
    "curvature_feasible",
    "upper_curvature_bound",
    "is_regular_compatible",
    "k_infinity",
    "k_infinity_exact",
    "k_infinity_closed_form",
    "reduced_curvature_matrix",
    "is_curvature_sharp",
    "curvature_at",
    "curvature_all",
    "batch_curvature",
]

logger = logging.getLogger(__name__)

FORM_SCALE = 4
MAX_BRACKET_DOUBLINGS = 64

Function = Union[Sequence[float], np.ndarray, Dict[int, float]]


class QuadraticForm:
    """A symmetric form on the non-center vertices of a 2-ball, stored scaled by 4

    Parameters
    ----------
    scaled :
        FORM_SCALE times the matrix of the form, an integer array
    labels :
        The vertex (of the ball graph or host graph) behind each coordinate
    """

    __slots__ = ("scaled", "labels")

    def __init__(self, scaled: np.ndarray, labels: Sequence[int]):
        if scaled.shape != (len(labels), len(labels)):
            raise InvalidParametersError(f"Form of shape {scaled.shape} does not match {len(labels)} labels")
        if not np.array_equal(scaled, scaled.T):
            raise InconsistencyError("Quadratic form is not symmetric")
        self.scaled: np.ndarray = scaled
        self.labels: Tuple[int, ...] = tuple(labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def matrix(self) -> np.ndarray:
        """The form as a float matrix"""
        return self.scaled / FORM_SCALE

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.scaled[i, j]), FORM_SCALE)

    def fractions(self) -> List[List[Fraction]]:
        """The form as an exact rational matrix"""
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def evaluate(self, f: Sequence[float]) -> float:
        """Evaluate the form at the coordinate vector f"""
        vec = np.asarray(f, dtype=float)
        return float(vec @ self.matrix @ vec)

    def __repr__(self) -> str:
        return f"QuadraticForm(dim={self.dim})"


def laplacian_apply(graph: Union[Graph, IncompleteTwoBall], f: Function, x: int = 0) -> float:
    """Apply the non-normalized Laplacian to f at x

    Parameters
    ----------
    graph :
        A graph, or a ball (whose graph has the center as vertex 0)
    f :
        Function values, indexable by vertex
    x :
        The vertex

    Returns
    -------
    :
        sum over neighbors y of x of f(y) - f(x)
    """
    if isinstance(graph, IncompleteTwoBall):
        graph = graph.to_graph()
    fx = f[x]
    return sum(f[y] - fx for y in graph.neighbors(x))


def gamma(graph: Graph, f: Function, g: Function, x: int) -> float:
    """Evaluate Gamma(f, g)(x) = 1/2 sum_{y~x} (f(y) - f(x)) (g(y) - g(x))"""
    fx, gx = f[x], g[x]
    return 0.5 * sum((f[y] - fx) * (g[y] - gx) for y in graph.neighbors(x))


def gamma2(graph: Graph, f: Function, g: Function, x: int) -> float:
    """Evaluate Gamma2(f, g)(x) directly from its defining identity

    Only values of f and g on the 2-ball of x are read.
    """
    b1 = [x] + graph.neighbors(x)
    lap_f = {v: laplacian_apply(graph, f, v) for v in b1}
    lap_g = {v: laplacian_apply(graph, g, v) for v in b1}
    gamma_fg = {v: gamma(graph, f, g, v) for v in b1}
    lap_gamma = sum(gamma_fg[y] - gamma_fg[x] for y in b1[1:])
    return 0.5 * (lap_gamma - gamma(graph, f, lap_g, x) - gamma(graph, g, lap_f, x))


def _scaled_forms(graph: Graph, x: int, order: List[int]) -> Tuple[np.ndarray, np.ndarray]:
    """4 Gamma and 4 Gamma2 at x over the coordinates in order (x first)"""
    index = {v: i for i, v in enumerate(order)}
    m = len(order)

    def edge_sum(v: int) -> np.ndarray:
        # sum_{w~v} (e_w - e_v)(e_w - e_v)^T, i.e. twice the pointwise Gamma at v
        h = np.zeros((m, m), dtype=np.int64)
        i = index[v]
        for w in graph.neighbors(v):
            j = index[w]
            h[i, i] += 1
            h[j, j] += 1
            h[i, j] -= 1
            h[j, i] -= 1
        return h

    def laplacian_row(v: int) -> np.ndarray:
        row = np.zeros(m, dtype=np.int64)
        for w in graph.neighbors(v):
            row[index[w]] += 1
        row[index[v]] -= len(graph.neighbors(v))
        return row

    hx = edge_sum(x)
    lx = laplacian_row(x)
    g2 = np.zeros((m, m), dtype=np.int64)
    cross = np.zeros((m, m), dtype=np.int64)
    for y in graph.neighbors(x):
        g2 += edge_sum(y) - hx
        diff = np.zeros(m, dtype=np.int64)
        diff[index[y]] += 1
        diff[index[x]] -= 1
        cross += np.outer(diff, laplacian_row(y) - lx)
    g2 -= cross + cross.T
    return 2 * hx, g2


def local_forms(graph: Graph, x: int) -> Tuple[QuadraticForm, QuadraticForm]:
    """Gamma and Gamma2 at x of a host graph, over S1(x) then S2(x) in ascending order

    Edges inside S2(x) may be present in the host; they do not enter either
    form.
    """
    dist = bfs_distances(graph, x)
    s1 = [v for v in graph.vertices() if dist[v] == 1]
    s2 = [v for v in graph.vertices() if dist[v] == 2]
    g, g2 = _scaled_forms(graph, x, [x] + s1 + s2)
    labels = s1 + s2
    return QuadraticForm(g[1:, 1:], labels), QuadraticForm(g2[1:, 1:], labels)


def _ball_forms(ball: IncompleteTwoBall) -> Tuple[QuadraticForm, QuadraticForm]:
    graph = ball.to_graph()
    order = list(graph.vertices())
    g, g2 = _scaled_forms(graph, 0, order)
    labels = order[1:]
    return QuadraticForm(g[1:, 1:], labels), QuadraticForm(g2[1:, 1:], labels)


def gamma_form(ball: IncompleteTwoBall) -> QuadraticForm:
    """The form f -> Gamma(f, f)(center) with f(center) = 0

    It equals 1/2 sum_{y in S1} f(y)^2 and vanishes on S2 coordinates.
    """
    return _ball_forms(ball)[0]


def gamma2_form(ball: IncompleteTwoBall) -> QuadraticForm:
    """The form f -> Gamma2(f, f)(center) with f(center) = 0"""
    return _ball_forms(ball)[1]


def curvature_matrix(ball: IncompleteTwoBall, k: float) -> np.ndarray:
    """M(K) = Gamma2 - K Gamma as a float matrix"""
    gam, gam2 = _ball_forms(ball)
    return gam2.matrix - k * gam.matrix


def is_regular_compatible(ball: IncompleteTwoBall) -> bool:
    """Return True if every S1 vertex has the degree of the center"""
    return all(
        1 + s + o == ball.degree for s, o in zip(ball.spherical_degrees(), ball.s1_out_degrees())
    )


def upper_curvature_bound(ball: IncompleteTwoBall) -> float:
    """2 + #triangles(center) / D"""
    return 2 + ball.triangles_at_center() / ball.degree


def _check_kernel(gam2: QuadraticForm, degree: int):
    """Gamma2 must be positive on the S2 coordinates, where Gamma vanishes"""
    s2_diag = np.diag(gam2.scaled)[degree:]
    if np.any(s2_diag <= 0):
        raise InconsistencyError("Gamma2 is not positive definite on functions supported on S2")


def _float_feasibility(ball: IncompleteTwoBall, options: CurvatureOptions):
    # Gamma2 - K Gamma is PSD iff R - K/2 I is, and the eigenvalues of the
    # latter move with slope exactly -1/2 in K
    reduced = _reduced_float(ball)
    half_identity = 0.5 * np.eye(ball.degree)

    def feasible(k: float) -> bool:
        return is_psd(reduced - k * half_identity, method=options.eigen_method)

    return feasible


def curvature_feasible(ball: IncompleteTwoBall, k: float, options: Optional[CurvatureOptions] = None) -> bool:
    """Return True if Gamma2 - K Gamma is positive semidefinite (up to the float threshold)"""
    return _float_feasibility(ball, options or CurvatureOptions())(k)


def _bracket(feasible, ball: IncompleteTwoBall, upper, one):
    """Locate lo feasible and hi infeasible, or return (U, U) when the sharpness bound U is feasible"""
    if is_regular_compatible(ball):
        if feasible(upper):
            return upper, upper
        hi = upper
    else:
        hi = one
        for _ in range(MAX_BRACKET_DOUBLINGS):
            if not feasible(hi):
                break
            hi *= 2
        else:
            raise InconsistencyError(f"No infeasible upper end found for {ball!r}")
    lo = -2 * ball.degree**2 * one
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if feasible(lo):
            break
        lo *= 2
    else:
        raise InconsistencyError(f"No feasible lower end found for {ball!r}")
    return lo, hi


def k_infinity(
    ball: IncompleteTwoBall, tol: Optional[float] = None, options: Optional[CurvatureOptions] = None
) -> CurvatureReport:
    """Compute the curvature at the center of ball by bisection

    Parameters
    ----------
    ball :
        The ball
    tol :
        Width at which the bisection stops. Overrides options.tol.
    options :
        Curvature options. Default: CurvatureOptions().

    Returns
    -------
    :
        The curvature report of the center

    Raises
    ------
    InvalidParametersError
        If tol is not positive
    InconsistencyError
        If Gamma2 is not positive definite on functions supported on S2
    """
    options = options or CurvatureOptions()
    tol = options.tol if tol is None else tol
    if not tol > 0:
        raise InvalidParametersError(f"Tolerance must be positive, got {tol}")
    feasible = _float_feasibility(ball, options)
    lo, hi = _bracket(feasible, ball, upper_curvature_bound(ball), 1.0)
    if lo == hi:
        value = lo
    else:
        while hi - lo >= tol:
            mid = (lo + hi) / 2
            if feasible(mid):
                lo = mid
            else:
                hi = mid
        value = (lo + hi) / 2
        logger.debug(f"{ball!r}: bracket [{lo!r}, {hi!r}]")
    upper = upper_curvature_bound(ball)
    return CurvatureReport(
        k_infinity=value,
        upper_bound=upper,
        sharp=abs(value - upper) <= options.sharp_tol,
        triangles_vertex=ball.triangles_at_center(),
        degree=ball.degree,
        s1_out_regular=ball.is_s1_out_regular(),
        ball_type=lookup_ball_type(ball) if ball.is_quartic() else None,
    )


def reduced_curvature_matrix(ball: IncompleteTwoBall) -> List[List[Fraction]]:
    """Eliminate the S2 coordinates from Gamma2 exactly

    Gamma vanishes on S2 and Gamma2 is diagonal there, so the S2 block of
    Gamma2 - K Gamma does not depend on K. Its Schur complement is R - K/2 I
    with the D x D matrix R returned here, and Gamma2 - K Gamma is positive
    semidefinite iff R - K/2 I is.
    """
    gam2 = gamma2_form(ball)
    _check_kernel(gam2, ball.degree)
    s = gam2.scaled
    d = ball.degree
    s2 = range(d, gam2.dim)
    if any(s[z, w] for z in s2 for w in s2 if z != w):
        raise InconsistencyError("Gamma2 is not diagonal on S2")
    reduced = []
    for i in range(d):
        row = []
        for j in range(d):
            value = Fraction(int(s[i, j]))
            for z in s2:
                value -= Fraction(int(s[i, z]) * int(s[z, j]), int(s[z, z]))
            row.append(value / FORM_SCALE)
        reduced.append(row)
    return reduced


def _reduced_float(ball: IncompleteTwoBall) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in reduced_curvature_matrix(ball)])


def k_infinity_closed_form(ball: IncompleteTwoBall) -> float:
    """The curvature as 2 * lambda_min of the reduced matrix, in floating point"""
    return 2 * min_eigenvalue(_reduced_float(ball))


def k_infinity_exact(ball: IncompleteTwoBall, denom_bound: int = DEFAULT_DENOM_BOUND) -> Tuple[Fraction, Fraction]:
    """Bracket the curvature with exact rational arithmetic

    Parameters
    ----------
    ball :
        The ball
    denom_bound :
        The returned interval is narrower than 1 / denom_bound

    Returns
    -------
    :
        (lo, hi) where lo is certified feasible and hi certified
        infeasible, or lo == hi == 2 + #triangles / D when that upper bound
        is attained

    Raises
    ------
    InvalidParametersError
        If denom_bound < 2
    """
    if denom_bound < 2:
        raise InvalidParametersError(f"Denominator bound must be at least 2, got {denom_bound}")
    reduced = reduced_curvature_matrix(ball)
    d = ball.degree

    def feasible(k: Fraction) -> bool:
        return is_psd_exact([[reduced[i][j] - (k / 2 if i == j else 0) for j in range(d)] for i in range(d)])

    upper = 2 + Fraction(ball.triangles_at_center(), ball.degree)
    lo, hi = _bracket(feasible, ball, upper, Fraction(1))
    width = Fraction(1, denom_bound)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def is_curvature_sharp(
    ball: IncompleteTwoBall, tol: Optional[float] = None, options: Optional[CurvatureOptions] = None
) -> bool:
    """Return True if the center of a quartic ball attains 2 + #triangles / 4

    Parameters
    ----------
    ball :
        A quartic ball
    tol :
        Sharpness tolerance. Overrides options.sharp_tol.
    options :
        Curvature options. Default: CurvatureOptions().

    Raises
    ------
    DomainError
        If the ball is not quartic
    """
    options = options or CurvatureOptions()
    tol = options.sharp_tol if tol is None else tol
    if not tol > 0:
        raise InvalidParametersError(f"Tolerance must be positive, got {tol}")
    ball.require_quartic()
    report = k_infinity(ball, options=options)
    return report.k_infinity >= report.upper_bound - tol


def curvature_at(graph: Graph, x: int, options: Optional[CurvatureOptions] = None) -> CurvatureReport:
    """Compute the curvature report of vertex x of a graph"""
    check_vertex(graph, x)
    if graph.degree(x) == 0:
        raise DomainError(f"Vertex {x} is isolated; its curvature is not defined")
    ball = extract(graph, x, require_quartic=False)
    report = k_infinity(ball, options=options)
    return report.copy(update={"vertex": x})


def curvature_all(
    graph: Graph, options: Optional[CurvatureOptions] = None, progress: bool = False
) -> List[CurvatureReport]:
    """Compute the curvature report of every vertex of a graph"""
    if not graph.is_connected():
        logger.warning(f"{graph} is disconnected; curvature is computed per component")
    return [
        curvature_at(graph, x, options)
        for x in tqdm(graph.vertices(), desc="Vertex curvature", disable=not progress)
    ]


def _report_worker(args: Tuple[IncompleteTwoBall, CurvatureOptions]) -> CurvatureReport:
    ball, options = args
    return k_infinity(ball, options=options)


def batch_curvature(
    balls: Sequence[IncompleteTwoBall],
    options: Optional[CurvatureOptions] = None,
    jobs: int = 1,
    progress: bool = False,
) -> List[CurvatureReport]:
    """Compute the curvature report of many balls, in order

    Parameters
    ----------
    balls :
        The balls
    options :
        Curvature options
    jobs :
        Number of worker processes; 1 computes in this process. Default: 1
    progress :
        Show a progress bar

    Returns
    -------
    :
        One report per ball, in the order of balls
    """
    options = options or CurvatureOptions()
    args = [(ball, options) for ball in balls]
    if jobs <= 1 or len(args) < 2:
        return [_report_worker(a) for a in tqdm(args, desc="Ball curvature", disable=not progress)]
    jobs = min(jobs, cpu_count())
    chunksize, extra = divmod(len(args), jobs * 4)
    if extra:
        chunksize += 1
    logger.info(f"Computing curvature of {len(args)} balls with {jobs} processes")
    with Pool(processes=jobs) as pool:
        return list(
            tqdm(
                pool.imap(_report_worker, args, chunksize=chunksize),
                total=len(args),
                desc="Ball curvature",
                disable=not progress,
            )
        )
