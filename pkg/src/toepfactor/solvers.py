"""Baselines: dense Cholesky, triangular solves, Levinson-Durbin, and the
2-norm condition number."""

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, as_vector
from .errors import (
    Breakdown,
    DimensionMismatch,
    DomainError,
    IllConditioned,
    NotPositiveDefinite,
    ZeroPivot,
)


@dataclass(frozen=True)
class TriangularFactor:
    """A triangular matrix together with which triangle it occupies."""

    U: np.ndarray
    orientation: str = "upper"

    def __post_init__(self):
        U = as_matrix(self.U, "U")
        if U.shape[0] != U.shape[1]:
            raise DimensionMismatch(f"triangular factor must be square, got {U.shape}")
        if self.orientation not in ("upper", "lower"):
            raise DomainError(f"orientation must be 'upper' or 'lower', got {self.orientation!r}")
        off = np.tril(U, -1) if self.orientation == "upper" else np.triu(U, 1)
        if np.any(off != 0.0):
            raise DomainError(f"entries outside the {self.orientation} triangle must be exactly zero")
        U = U.copy()
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def n(self):
        return self.U.shape[0]

    @property
    def T(self):
        """The transposed factor, with the opposite orientation."""
        return TriangularFactor(self.U.T, "lower" if self.orientation == "upper" else "upper")


def cholesky_dense(M):
    """Right-looking Cholesky ``M = U^T U`` with ``U`` upper triangular.

    Raises ``NotPositiveDefinite`` carrying the 1-based index of the first
    non-positive pivot.
    """
    A = as_matrix(M).copy()
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"matrix must be square, got {A.shape}")
    if not np.array_equal(A, A.T):
        raise DomainError("matrix must be symmetric")
    U = np.zeros((n, n))
    for k in range(n):
        d = A[k, k]
        if not d > 0:
            raise NotPositiveDefinite(f"non-positive pivot {d:.3g} at position {k + 1}", step=k + 1)
        r = np.sqrt(d)
        U[k, k] = r
        U[k, k + 1 :] = A[k, k + 1 :] / r
        A[k + 1 :, k + 1 :] -= np.outer(U[k, k + 1 :], U[k, k + 1 :])
    return TriangularFactor(U, "upper")


def solve_triangular(F, b):
    """Forward (lower) or back (upper) substitution."""
    if not isinstance(F, TriangularFactor):
        F = TriangularFactor(F)
    b = as_vector(b, "b")
    n = F.n
    if b.size != n:
        raise DimensionMismatch(f"right-hand side of length {b.size} for an {n}x{n} system")
    A = F.U
    diag = np.diag(A)
    if np.any(diag == 0.0):
        raise ZeroPivot(f"zero diagonal entry at position {int(np.argmin(np.abs(diag))) + 1}")
    x = np.zeros(n)
    if F.orientation == "upper":
        for i in range(n - 1, -1, -1):
            x[i] = (b[i] - A[i, i + 1 :] @ x[i + 1 :]) / A[i, i]
    else:
        for i in range(n):
            x[i] = (b[i] - A[i, :i] @ x[:i]) / A[i, i]
    return x


def solve_with_factor(U, b):
    """Solve ``U^T U x = b`` by two triangular solves."""
    F = U if isinstance(U, TriangularFactor) else TriangularFactor(U)
    return solve_triangular(F, solve_triangular(F.T, b))


def levinson_solve(T, b):
    """Solve ``T x = b`` with the Levinson-Durbin recursion in O(n^2).

    Works on ``T / t_0``.  Returns ``(x, sines)``, where ``sines`` are the
    negated reflection coefficients, i.e. the same quantities a generator
    factorization of ``T`` reports.

    Raises ``Breakdown`` when a prediction-error energy becomes non-positive.
    """
    b = as_vector(b, "b")
    n = T.n
    if b.size != n:
        raise DimensionMismatch(f"right-hand side of length {b.size} for an {n}x{n} system")
    t0 = T.t0
    r = T.first_column[1:] / t0
    rhs = b / t0
    x = np.zeros(n)
    x[0] = rhs[0]
    if n == 1:
        return x, np.zeros(0)
    y = np.zeros(n - 1)  # solution of the Yule-Walker system of the current order
    refl = np.zeros(n - 1)
    alpha = -r[0]
    refl[0] = alpha
    y[0] = alpha
    beta = 1.0
    for k in range(1, n):
        beta *= (1.0 - alpha) * (1.0 + alpha)
        if not beta > 0:
            raise Breakdown(f"prediction error energy {beta:.3g} <= 0 at order {k}", step=k)
        mu = (rhs[k] - r[:k] @ x[k - 1 :: -1]) / beta
        x[:k] += mu * y[k - 1 :: -1]
        x[k] = mu
        if k < n - 1:
            alpha = (-r[k] - r[:k] @ y[k - 1 :: -1]) / beta
            refl[k] = alpha
            y[:k] += alpha * y[k - 1 :: -1]
            y[k] = alpha
    return x, -refl


def cond_2(T):
    """``||T||_2 ||T^{-1}||_2`` as the ratio of extreme eigenvalues.

    For matrices near the reciprocal of machine precision this is an estimate
    only: the smallest eigenvalue carries an absolute error of order
    ``eps * ||T||``.
    """
    A = as_matrix(T)
    try:
        ev = np.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"eigenvalue iteration did not converge: {exc}") from exc
    lo, hi = float(ev[0]), float(ev[-1])
    if not lo > 0:
        return float("inf")
    return hi / lo
