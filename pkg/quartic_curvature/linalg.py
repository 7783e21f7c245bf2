"""
Small dense linear algebra for the curvature computation: smallest
eigenvalues in floating point (LAPACK through numpy, or cyclic Jacobi
rotations) and an exact positive semidefiniteness decision over the
rationals.
"""
import logging
import math
from fractions import Fraction
from functools import reduce
from typing import List, Sequence, Union

import numpy as np

from quartic_curvature.data_models import JACOBI_OFF_TOL, PSD_REL_TOL, EigenMethod
from quartic_curvature.exceptions import InvalidParametersError

__all__ = [
    "jacobi_eigenvalues",
    "eigenvalues",
    "min_eigenvalue",
    "is_psd",
    "is_psd_exact",
    "to_integer_matrix",
    "Rational",
]

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

MAX_JACOBI_SWEEPS = 100


def _as_symmetric(matrix) -> np.ndarray:
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParametersError(f"Expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * (1 + np.abs(a).max(initial=0))):
        raise InvalidParametersError("Matrix is not symmetric")
    return a


def jacobi_eigenvalues(matrix, off_tol: float = JACOBI_OFF_TOL) -> np.ndarray:
    """Compute the eigenvalues of a small symmetric matrix by cyclic Jacobi rotations

    Parameters
    ----------
    matrix :
        A symmetric matrix
    off_tol :
        Sweeps stop once the off-diagonal Frobenius norm drops below
        off_tol * (1 + ||matrix||_F)

    Returns
    -------
    :
        The eigenvalues in ascending order
    """
    a = _as_symmetric(matrix).copy()
    n = a.shape[0]
    threshold = off_tol * (1 + np.linalg.norm(a))
    for sweep in range(MAX_JACOBI_SWEEPS):
        off = math.sqrt(2 * np.sum(np.triu(a, 1) ** 2))
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
    else:
        logger.warning(f"Jacobi iteration did not converge in {MAX_JACOBI_SWEEPS} sweeps (n={n})")
    return np.sort(np.diag(a))


def eigenvalues(matrix, method: EigenMethod = "lapack") -> np.ndarray:
    """Return the eigenvalues of a symmetric matrix in ascending order"""
    if method == "lapack":
        return np.linalg.eigvalsh(_as_symmetric(matrix))
    elif method == "jacobi":
        return jacobi_eigenvalues(matrix)
    raise InvalidParametersError(f"Unknown eigenvalue method {method!r}")


def min_eigenvalue(matrix, method: EigenMethod = "lapack") -> float:
    """Return the smallest eigenvalue of a symmetric matrix (+inf for the empty matrix)"""
    values = eigenvalues(matrix, method)
    return float(values[0]) if len(values) else math.inf


def is_psd(matrix, method: EigenMethod = "lapack", rel_tol: float = PSD_REL_TOL) -> bool:
    """Decide positive semidefiniteness in floating point

    The matrix counts as positive semidefinite when its smallest eigenvalue
    is at least -rel_tol * (1 + ||matrix||_F).
    """
    a = np.asarray(matrix, dtype=float)
    return min_eigenvalue(a, method) >= -rel_tol * (1 + np.linalg.norm(a))


def to_integer_matrix(matrix: Sequence[Sequence[Rational]]) -> List[List[int]]:
    """Scale a rational matrix by the lcm of its denominators"""
    denominators = [Fraction(x).denominator for row in matrix for x in row]
    scale = reduce(lambda a, b: a * b // math.gcd(a, b), denominators, 1)
    return [[int(Fraction(x) * scale) for x in row] for row in matrix]


def is_psd_exact(matrix: Sequence[Sequence[Rational]]) -> bool:
    """Decide positive semidefiniteness exactly by fraction-free symmetric elimination

    A symmetric matrix A is positive semidefinite iff either it is zero, or
    it has a positive diagonal entry a_pp and the Schur complement of a_pp is
    positive semidefinite. A negative diagonal entry, or a zero diagonal
    entry in a nonzero row, rules it out. The Schur complement is formed
    scaled by a_pp, i.e. a_pp * a_ij - a_ip * a_pj, and reduced by the gcd
    of its entries so that all arithmetic stays in the integers.

    Parameters
    ----------
    matrix :
        A square symmetric matrix of ints or Fractions

    Returns
    -------
    :
        True if the matrix is positive semidefinite
    """
    a = to_integer_matrix(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise InvalidParametersError("Expected a square matrix")
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
        raise InvalidParametersError("Matrix is not symmetric")
    while a:
        diag = [a[i][i] for i in range(len(a))]
        if any(d < 0 for d in diag):
            return False
        if any(d == 0 and any(a[i]) for i, d in enumerate(diag)):
            return False
        pivots = [i for i, d in enumerate(diag) if d > 0]
        if not pivots:
            return True
        p = pivots[0]
        app = a[p][p]
        rest = [i for i in range(len(a)) if i != p]
        a = [[app * a[i][j] - a[i][p] * a[p][j] for j in rest] for i in rest]
        g = reduce(math.gcd, (abs(x) for row in a for x in row), 0)
        if g > 1:
            a = [[x // g for x in row] for row in a]
    return True
