"""Cholesky factorization of displacement-rank-2 matrices by repeated downdating.

Starting from generators ``(u, v)`` of ``T`` (``T - Z T Z^T = u u^T - v v^T``,
``v[0] = 0``), ``n - 1`` elementary downdating steps yield the rows
``u_1, ..., u_n`` of the upper triangular factor ``U`` with ``T = U^T U``.
"""

from dataclasses import dataclass, field

import numpy as np

from .downdate import (
    SCALED_STEPS,
    UNSCALED_STEPS,
    GeneratorPair,
    ScaledGeneratorPair,
)
from .errors import DomainError

VARIANTS = tuple(UNSCALED_STEPS) + tuple(SCALED_STEPS)


@dataclass(frozen=True)
class FactorResult:
    """Upper triangular ``U`` (row ``k`` is ``u_k``), the ``v_k`` trajectory,
    and the sines of every step."""

    U: np.ndarray
    V: np.ndarray
    sines: np.ndarray
    variant: str
    warnings: tuple = field(default=())

    @property
    def n(self):
        return self.U.shape[0]

    @property
    def cosines(self):
        s = self.sines
        return np.sqrt((1.0 - s) * (1.0 + s))

    @property
    def reflection_coefficients(self):
        return -self.sines


@dataclass(frozen=True)
class ScaledFactorResult:
    """``T = W^T D^2 W`` with ``D = diag(D)``; ``X`` holds the scaled ``v``
    trajectory and ``betas`` its scale factors."""

    W: np.ndarray
    D: np.ndarray
    X: np.ndarray
    betas: np.ndarray
    sines: np.ndarray
    variant: str
    warnings: tuple = field(default=())

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def U(self):
        return self.D[:, None] * self.W

    @property
    def V(self):
        return self.betas[:, None] * self.X

    @property
    def reflection_coefficients(self):
        return -self.sines

    def unscaled(self):
        return FactorResult(self.U, self.V, self.sines, self.variant, self.warnings)


def _normalize_initial(g0):
    if g0.k != 1:
        raise DomainError(f"factorization starts at k=1, got k={g0.k}")
    if g0.u[0] < 0:
        # U[0, 0] > 0; u u^T is unchanged by the flip
        return GeneratorPair(-g0.u, g0.v, 1)
    return g0


def factor(g0, variant="mixed"):
    """Factor ``T(u, v)`` with one of the unscaled downdating variants.

    Parameters
    ----------
    g0 : GeneratorPair
        Initial generators with ``k = 1`` (``v[0] == 0`` is enforced by
        ``GeneratorPair`` itself).
    variant : {"hyperbolic", "mixed", "mixed_alt"}

    Raises
    ------
    Breakdown
        If some step has ``|u_k[k]| <= |v_k[k+1]|``; ``exc.step`` is ``k``.
    """
    if variant in SCALED_STEPS:
        return factor_scaled(g0, variant).unscaled()
    try:
        step = UNSCALED_STEPS[variant]
    except KeyError:
        raise DomainError(f"unknown variant {variant!r}; choose from {VARIANTS}") from None
    g = _normalize_initial(g0)
    n = g.n
    U = np.zeros((n, n))
    V = np.zeros((n, n))
    sines = np.zeros(n - 1)
    warnings = []
    U[0], V[0] = g.u, g.v
    for k in range(1, n):
        g = step(g)
        sines[k - 1] = g.theta.sin_theta
        if g.theta.near_breakdown:
            warnings.append(k)
        U[k], V[k] = g.u, g.v
    return FactorResult(U, V, sines, variant, tuple(warnings))


def factor_scaled(g0, variant="scaled_mixed"):
    """Factor into ``T = W^T D^2 W`` with a scaled downdating variant.

    ``g0`` may be a ``GeneratorPair`` (taken with unit scale factors) or a
    ``ScaledGeneratorPair``.
    """
    try:
        step = SCALED_STEPS[variant]
    except KeyError:
        raise DomainError(f"unknown scaled variant {variant!r}; choose from {tuple(SCALED_STEPS)}") from None
    if isinstance(g0, GeneratorPair):
        g = ScaledGeneratorPair.from_pair(_normalize_initial(g0))
    else:
        g = g0
        if g.k != 1:
            raise DomainError(f"factorization starts at k=1, got k={g.k}")
        if g.w[0] < 0:
            g = ScaledGeneratorPair(-g.w, g.x, g.alpha, g.beta, 1)
    n = g.n
    W = np.zeros((n, n))
    X = np.zeros((n, n))
    D = np.zeros(n)
    betas = np.zeros(n)
    sines = np.zeros(n - 1)
    warnings = []
    W[0], X[0], D[0], betas[0] = g.w, g.x, g.alpha, g.beta
    for k in range(1, n):
        g = step(g)
        sines[k - 1] = g.theta.sin_theta
        if g.theta.near_breakdown:
            warnings.append(k)
        W[k], X[k], D[k], betas[k] = g.w, g.x, g.alpha, g.beta
    return ScaledFactorResult(W, D, X, betas, sines, variant, tuple(warnings))


def factor_toeplitz(T, variant="mixed"):
    """Factor a ``ToeplitzSpd`` from its standard generators.

    Scaled variants return a ``ScaledFactorResult``, the others a
    ``FactorResult``.
    """
    from .genmat import toeplitz_generators

    g0 = toeplitz_generators(T)
    if variant in SCALED_STEPS:
        return factor_scaled(g0, variant)
    return factor(g0, variant)


def reflection_coefficients(T):
    """``-sin(theta_k)``, ``k = 1..n-1``, from a mixed-downdating factorization of ``T``."""
    return factor_toeplitz(T, "mixed").reflection_coefficients
