"""Full-matrix symmetric Bareiss elimination.

Two matrix sequences start from ``A(0) = A(-0) = T``.  Step ``i`` subtracts
``alpha_{i-1}`` times ``A(-(i-1))`` shifted down by ``i`` rows from
``A(i-1)``, and the mirrored update upwards; by symmetry one multiplier serves
both.  After ``n - 1`` steps ``A(n-1)`` is upper triangular, and row-scaling it
to unit-root diagonals gives the Cholesky factor.

This module keeps O(n^2) state on purpose: it is an independent cross-check
of the generator recursion in :mod:`toepfactor.factor`, not a fast path.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_vector
from .errors import Breakdown, DimensionMismatch, DomainError
from .solvers import TriangularFactor, solve_with_factor


@dataclass(frozen=True)
class BareissState:
    """``A(i)``, ``A(-i)`` and the multipliers used so far."""

    A_pos: np.ndarray
    A_neg: np.ndarray
    i: int
    alphas: np.ndarray


def bareiss_steps(T):
    """Yield the state after every step, starting with ``i = 0``.

    Raises ``Breakdown`` when a pivot ``A(-(i-1))[0, 0]`` is not positive or a
    multiplier reaches magnitude 1.
    """
    n = T.n
    A_pos = T.to_dense()
    A_neg = A_pos.copy()
    alphas = np.zeros(n - 1)
    yield BareissState(A_pos.copy(), A_neg.copy(), 0, alphas[:0].copy())
    for i in range(1, n):
        pivot = A_neg[0, 0]
        if not pivot > 0:
            raise Breakdown(f"non-positive pivot {pivot:.3g} at step {i}", step=i)
        alpha = A_pos[i, 0] / pivot
        if not abs(alpha) < 1:
            raise Breakdown(f"multiplier |alpha|={abs(alpha):.17g} >= 1 at step {i}", step=i)
        alphas[i - 1] = alpha
        new_pos = A_pos[i:] - alpha * A_neg[: n - i]
        new_neg = A_neg[: n - i] - alpha * A_pos[i:]
        A_pos[i:] = new_pos
        A_neg[: n - i] = new_neg
        A_pos[i, 0] = 0.0
        A_neg[n - 1 - i, n - 1] = 0.0
        yield BareissState(A_pos.copy(), A_neg.copy(), i, alphas[:i].copy())


def bareiss_factor(T):
    """Return ``(U, alphas)`` with ``T = U^T U`` and ``alphas[i-1]`` the step-``i`` multiplier.

    The multipliers coincide with the sines of the generator recursion.
    """
    state = None
    for state in bareiss_steps(T):
        pass
    A = state.A_pos
    d = np.diag(A)
    if np.any(~(d > 0)):
        k = int(np.argmax(~(d > 0)))
        raise Breakdown(f"non-positive diagonal {d[k]:.3g} in row {k + 1}", step=max(k, 1))
    U = np.triu(A) / np.sqrt(d)[:, None]
    return U, state.alphas


BAREISS_SOLVE_METHODS = ("bareiss", "hyperbolic", "mixed", "mixed_alt", "scaled_hyperbolic", "scaled_mixed")


def bareiss_solve(T, b, method="bareiss"):
    """Solve ``T x = b`` through a Cholesky factor and two triangular solves.

    ``method="bareiss"`` uses the full-matrix elimination above; the other
    choices use the generator recursion with that downdating variant.
    """
    b = as_vector(b, "b")
    if b.size != T.n:
        raise DimensionMismatch(f"right-hand side of length {b.size} for an {T.n}x{T.n} system")
    if method == "bareiss":
        U, _ = bareiss_factor(T)
    elif method in BAREISS_SOLVE_METHODS:
        from .factor import factor_toeplitz

        U = factor_toeplitz(T, method).U
    else:
        raise DomainError(f"unknown method {method!r}; choose from {BAREISS_SOLVE_METHODS}")
    return solve_with_factor(TriangularFactor(U), b)
