"""Vector/matrix primitives and the symmetric positive definite Toeplitz type.

Vectors and dense matrices are plain float64 numpy arrays; ``as_vector`` and
``as_matrix`` are the validation helpers used at every public entry point.
The shift-down matrix ``Z`` and the reversal matrix ``J`` are never stored,
only applied.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, IllConditioned

#: Unit roundoff for IEEE double precision.
EPS = 2.0**-53


def as_vector(x, name="x"):
    """Return ``x`` as a 1-D float64 array, rejecting empty or non-finite input."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains NaN or Inf")
    return arr


def as_matrix(M, name="M"):
    """Return ``M`` as a 2-D float64 array, rejecting empty or non-finite input."""
    if isinstance(M, ToeplitzSpd):
        return M.to_dense()
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must have dimensions >= 1")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains NaN or Inf")
    return arr


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ToeplitzSpd:
    """Symmetric Toeplitz matrix held by its first column ``t_0 ... t_{n-1}``.

    Only the cheap necessary conditions for positive definiteness are checked
    here (``t_0 > 0`` and ``|t_k| < t_0``); an indefinite matrix is detected
    later, when a factorization breaks down.
    """

    first_column: np.ndarray

    def __post_init__(self):
        t = as_vector(self.first_column, "first_column")
        if not t[0] > 0:
            raise DomainError(f"t_0 must be positive, got {t[0]!r}")
        if t.size > 1 and np.max(np.abs(t[1:])) >= t[0]:
            raise DomainError("|t_k| < t_0 is required for positive definiteness")
        object.__setattr__(self, "first_column", _frozen(t))

    @property
    def n(self):
        return self.first_column.size

    @property
    def t0(self):
        return float(self.first_column[0])

    def to_dense(self):
        t = self.first_column
        idx = np.arange(self.n)
        return t[np.abs(idx[:, None] - idx[None, :])]

    def __eq__(self, other):
        if not isinstance(other, ToeplitzSpd):
            return NotImplemented
        return np.array_equal(self.first_column, other.first_column)

    def __hash__(self):
        return hash(self.first_column.tobytes())

    def __repr__(self):
        return f"ToeplitzSpd(n={self.n}, t0={self.t0:g})"


def shift_down(x):
    """Apply ``Z``: ``(x_1, ..., x_n) -> (0, x_1, ..., x_{n-1})``."""
    x = as_vector(x)
    out = np.zeros_like(x)
    out[1:] = x[:-1]
    return out


def shift_down_by(x, j):
    """Apply ``Z^j`` (``j = 0`` is the identity)."""
    x = as_vector(x)
    out = np.zeros_like(x)
    if j < x.size:
        out[j:] = x[: x.size - j]
    return out


def reverse(x):
    """Apply the reversal matrix ``J``."""
    return as_vector(x)[::-1].copy()


def toeplitz_matvec(T, x):
    """Compute ``T @ x`` diagonal by diagonal in O(n^2) without forming ``T``."""
    x = as_vector(x)
    if x.size != T.n:
        raise DimensionMismatch(f"vector of length {x.size} for a {T.n}x{T.n} matrix")
    t = T.first_column
    y = t[0] * x
    for k in range(1, T.n):
        y[k:] += t[k] * x[:-k]
        y[:-k] += t[k] * x[k:]
    return y


def two_norm(M):
    """Spectral norm of a dense matrix or a ``ToeplitzSpd``.

    Symmetric input goes through a symmetric eigensolver (largest absolute
    eigenvalue); anything else through the largest singular value.
    """
    A = as_matrix(M)
    try:
        if A.shape[0] == A.shape[1] and np.array_equal(A, A.T):
            return float(np.max(np.abs(np.linalg.eigvalsh(A))))
        return float(np.linalg.norm(A, 2))
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"eigenvalue iteration did not converge: {exc}") from exc


def frobenius_norm(M):
    A = as_matrix(M)
    scale = float(np.max(np.abs(A)))
    if scale == 0.0:
        return 0.0
    # scaling first avoids underflow/overflow in the sum of squares
    return scale * float(np.linalg.norm(A / scale, "fro"))


def one_norm(M):
    """Maximum absolute column sum."""
    return float(np.max(np.sum(np.abs(as_matrix(M)), axis=0)))
