"""Dense complex linear algebra: LU solves and extreme singular values.

Thin, contract-enforcing wrappers over LAPACK via scipy/numpy.  One
factorization per operator matrix is reused across all right-hand sides of
a solve (incident field plus the grazing-mode basis columns).
"""

import numpy as np
import scipy.linalg as _sla

from .exceptions import NumericalFailureError, SingularMatrixError

PIVOT_FLOOR = 1e-300


class LuFactorization:
    """LU factorization of a square complex matrix with partial pivoting.

    Immutable after construction; concurrent solves against one
    factorization are safe.
    """

    def __init__(self, matrix):
        matrix = np.ascontiguousarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise SingularMatrixError("LU factorization requires a square matrix")
        if not np.all(np.isfinite(matrix)):
            raise SingularMatrixError("matrix contains non-finite entries")
        self.shape = matrix.shape
        try:
            self._lu, self._piv = _sla.lu_factor(matrix)
        except _sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise SingularMatrixError(str(exc)) from exc
        if np.any(np.abs(np.diag(self._lu)) < PIVOT_FLOOR):
            raise SingularMatrixError("numerically zero pivot in LU factorization")

    def solve(self, rhs):
        """Solve M x = rhs for one vector or a stack of columns."""
        rhs = np.asarray(rhs, dtype=complex)
        if rhs.shape[0] != self.shape[0]:
            raise SingularMatrixError("right-hand side length does not match the matrix")
        return _sla.lu_solve((self._lu, self._piv), rhs)


def lu_solve(matrix, rhs):
    """One-shot LU solve of M x = rhs."""
    return LuFactorization(matrix).solve(rhs)


def svd_extremes(matrix):
    """(sigma_min, sigma_max) of a square complex matrix."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NumericalFailureError("singular-value extremes require a square matrix")
    try:
        s = np.linalg.svd(matrix, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    return float(s[-1]), float(s[0])
