"""One elementary downdating step, in four flavours.

Given generators ``(u_k, v_k)`` with ``u_k[j] = 0`` for ``j < k`` and
``v_k[j] = 0`` for ``j <= k`` (1-based), a step produces ``(u_{k+1}, v_{k+1})``
with the staircase advanced by one and

    u_{k+1} u_{k+1}^T - v_{k+1} v_{k+1}^T = Z u_k u_k^T Z^T - v_k v_k^T.

All variants agree in exact arithmetic; they differ in rounding behaviour and
in cost.  Step indices ``k`` are 1-based throughout this module, array
indexing is 0-based.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import as_vector, shift_down
from .errors import Breakdown, DimensionMismatch, DomainError

#: ``cos(theta)`` below this flags a step as nearly singular.
NEAR_BREAKDOWN_COS = 1e-8

#: Scale factors of the scaled variants are folded into their vectors beyond this.
SCALE_LIMIT = 1e154


@dataclass(frozen=True)
class HyperbolicParams:
    """``(sin theta, cos theta)`` of the rotation ``H(theta)``."""

    sin_theta: float
    cos_theta: float

    @property
    def near_breakdown(self):
        return self.cos_theta < NEAR_BREAKDOWN_COS

    @property
    def norm(self):
        """Spectral norm ``(1 + |sin|) / cos`` of ``H(theta)``."""
        return (1.0 + abs(self.sin_theta)) / self.cos_theta

    def matrix(self):
        s, c = self.sin_theta, self.cos_theta
        return np.array([[1.0, -s], [-s, 1.0]]) / c


def rotation_params(a, b):
    """Hyperbolic rotation taking ``(a, b)`` to ``(sqrt(a^2 - b^2), 0)``.

    Raises ``Breakdown`` unless ``|a| > |b|`` strictly.
    """
    a = float(a)
    b = float(b)
    if not abs(a) > abs(b):
        raise Breakdown(f"hyperbolic rotation undefined: |a|={abs(a):.17g} <= |b|={abs(b):.17g}")
    s = b / a
    # (1 - s)(1 + s) keeps full relative accuracy when |s| is close to 1
    c = float(np.sqrt((1.0 - s) * (1.0 + s)))
    if c == 0.0:
        raise Breakdown("hyperbolic rotation undefined: cos(theta) underflows to 0")
    return HyperbolicParams(s, c)


def _check_staircase(a, b, k, names):
    n = a.size
    if b.size != n:
        raise DimensionMismatch(f"{names[0]} and {names[1]} differ in length ({n} vs {b.size})")
    if not 1 <= k <= n:
        raise DomainError(f"step index k={k} outside 1..{n}")
    if np.any(a[: k - 1] != 0.0):
        raise DomainError(f"{names[0]}[j] must vanish for j < k={k}")
    if np.any(b[:k] != 0.0):
        raise DomainError(f"{names[1]}[j] must vanish for j <= k={k}")


@dataclass(frozen=True)
class GeneratorPair:
    """Generators ``(u, v)`` at step ``k`` (1-based).

    ``theta`` holds the rotation that produced this pair, or ``None`` for an
    initial pair.
    """

    u: np.ndarray
    v: np.ndarray
    k: int = 1
    theta: HyperbolicParams | None = field(default=None, compare=False)

    def __post_init__(self):
        u = as_vector(self.u, "u").copy()
        v = as_vector(self.v, "v").copy()
        _check_staircase(u, v, self.k, ("u", "v"))
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self):
        return self.u.size

    def displacement(self):
        """``u u^T - v v^T``."""
        return np.outer(self.u, self.u) - np.outer(self.v, self.v)

    def shifted_displacement(self):
        """``Z u u^T Z^T - v v^T``, the matrix one downdating step must preserve."""
        zu = shift_down(self.u)
        return np.outer(zu, zu) - np.outer(self.v, self.v)


@dataclass(frozen=True)
class ScaledGeneratorPair:
    """Scaled generators: the unscaled pair is ``(alpha * w, beta * x)``."""

    w: np.ndarray
    x: np.ndarray
    alpha: float = 1.0
    beta: float = 1.0
    k: int = 1
    theta: HyperbolicParams | None = field(default=None, compare=False)

    def __post_init__(self):
        w = as_vector(self.w, "w").copy()
        x = as_vector(self.x, "x").copy()
        _check_staircase(w, x, self.k, ("w", "x"))
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("scale factors alpha and beta must be positive")
        w.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def n(self):
        return self.w.size

    def unscaled(self):
        return GeneratorPair(self.alpha * self.w, self.beta * self.x, self.k, self.theta)

    @classmethod
    def from_pair(cls, g):
        return cls(g.u, g.v, 1.0, 1.0, g.k)


def _prepare(g):
    if g.k >= g.n:
        raise DomainError(f"no downdating step left at k={g.k} for n={g.n}")
    return g.k - 1


def _params(a, b, k):
    try:
        return rotation_params(a, b)
    except Breakdown as exc:
        raise Breakdown(f"step {k}: {exc}", step=k) from None


def _finish(new_u, new_v, i):
    # staircase entries are exact zeros, not cancellation residue
    new_u[: i + 1] = 0.0
    new_v[: i + 2] = 0.0
    return new_u, new_v


def downdate_hyperbolic(g):
    """Apply ``H(theta_k)`` to the rows ``(Z u_k, v_k)``."""
    i = _prepare(g)
    zu = shift_down(g.u)
    p = _params(g.u[i], g.v[i + 1], g.k)
    s, c = p.sin_theta, p.cos_theta
    u, v = _finish((zu - s * g.v) / c, (g.v - s * zu) / c, i)
    return GeneratorPair(u, v, g.k + 1, p)


def downdate_mixed(g):
    """Mixed step: ``v_{k+1}`` by the hyperbolic formula, then ``u_{k+1}``
    from ``v_{k+1}`` through an orthogonal rotation."""
    i = _prepare(g)
    zu = shift_down(g.u)
    p = _params(g.u[i], g.v[i + 1], g.k)
    s, c = p.sin_theta, p.cos_theta
    v = (g.v - s * zu) / c
    v[: i + 2] = 0.0
    u = -s * v + c * zu
    u, v = _finish(u, v, i)
    return GeneratorPair(u, v, g.k + 1, p)


def downdate_mixed_alt(g):
    """Mixed step with the elimination order reversed (``u_{k+1}`` first)."""
    i = _prepare(g)
    zu = shift_down(g.u)
    p = _params(g.u[i], g.v[i + 1], g.k)
    s, c = p.sin_theta, p.cos_theta
    u = (zu - s * g.v) / c
    u[: i + 1] = 0.0
    v = -s * u + c * g.v
    u, v = _finish(u, v, i)
    return GeneratorPair(u, v, g.k + 1, p)


def downdate_scaled_hyperbolic(g):
    """Scaled hyperbolic step with ``alpha == beta``; about half the
    multiplications of the unscaled form."""
    if g.alpha != g.beta:
        raise DomainError("scaled hyperbolic downdating needs alpha == beta")
    i = _prepare(g)
    zw = shift_down(g.w)
    p = _params(g.w[i], g.x[i + 1], g.k)
    s = p.sin_theta
    w, x = _finish(zw - s * g.x, -s * zw + g.x, i)
    alpha = g.alpha / p.cos_theta
    if alpha > SCALE_LIMIT:
        w *= alpha
        x *= alpha
        alpha = 1.0
    return ScaledGeneratorPair(w, x, alpha, alpha, g.k + 1, p)


def downdate_scaled_mixed(g):
    """Scaled mixed step with independent scale factors ``alpha`` and ``beta``."""
    i = _prepare(g)
    zw = shift_down(g.w)
    p = _params(g.alpha * g.w[i], g.beta * g.x[i + 1], g.k)
    s, c = p.sin_theta, p.cos_theta
    alpha = g.alpha * c
    beta = g.beta / c
    x = g.x - (s * g.alpha / g.beta) * zw
    x[: i + 2] = 0.0
    w = -(s * beta / alpha) * x + zw
    w, x = _finish(w, x, i)
    if beta > SCALE_LIMIT:
        x *= beta
        beta = 1.0
    if alpha < 1.0 / SCALE_LIMIT:
        w *= alpha
        alpha = 1.0
    return ScaledGeneratorPair(w, x, alpha, beta, g.k + 1, p)


UNSCALED_STEPS = {
    "hyperbolic": downdate_hyperbolic,
    "mixed": downdate_mixed,
    "mixed_alt": downdate_mixed_alt,
}

SCALED_STEPS = {
    "scaled_hyperbolic": downdate_scaled_hyperbolic,
    "scaled_mixed": downdate_scaled_mixed,
}
