"""Test matrices: Toeplitz generators, the Prolate matrix, Toeplitz matrices
with prescribed reflection coefficients, and seeded random ensembles."""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ToeplitzSpd, as_matrix, as_vector
from .downdate import GeneratorPair
from .errors import DimensionMismatch, DomainError, NonPositiveDiagonal

#: Name recorded in experiment output so runs can be reproduced bit for bit.
RNG_NAME = f"numpy.random.Philox (numpy {np.__version__})"


def make_rng(seed):
    """Counter-based generator used by every seeded construction here."""
    return np.random.Generator(np.random.Philox(seed))


def toeplitz_generators(T):
    """Generators ``u = t / sqrt(t_0)``, ``v = (0, t_1, ..., t_{n-1}) / sqrt(t_0)``."""
    t = T.first_column
    if not t[0] > 0:
        raise NonPositiveDiagonal(f"t_0 must be positive, got {t[0]!r}")
    r = math.sqrt(t[0])
    u = t / r
    v = u.copy()
    v[0] = 0.0
    return GeneratorPair(u, v, 1)


def generators_from_dense(M, rtol=1e-12):
    """Generators ``(u, v)`` with ``v[0] = 0`` of a dense symmetric matrix.

    ``M - Z M Z^T - u u^T`` must equal ``-v v^T``; ``DomainError`` is raised
    when the displacement is not of that form (to ``rtol`` relative to ``M``).
    """
    M = as_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatch(f"matrix must be square, got {M.shape}")
    if not M[0, 0] > 0:
        raise NonPositiveDiagonal(f"M[0, 0] must be positive, got {M[0, 0]!r}")
    disp = M.copy()
    disp[1:, 1:] -= M[:-1, :-1]
    u = M[:, 0] / math.sqrt(M[0, 0])
    rest = np.outer(u, u) - disp  # should be v v^T
    j = int(np.argmax(np.diag(rest)))
    v = np.zeros(n)
    if rest[j, j] > 0:
        v = rest[:, j] / math.sqrt(rest[j, j])
    v[0] = 0.0
    scale = max(float(np.max(np.abs(M))), 1.0)
    err = np.max(np.abs(np.outer(v, v) - rest))
    if err > rtol * scale * n:
        raise DomainError(f"matrix does not have displacement rank 2 with v[0] = 0 (mismatch {err:.3g})")
    return GeneratorPair(u, v, 1)


def prolate(n, omega):
    """Prolate matrix: ``t_0 = 2 omega``, ``t_k = sin(2 pi omega k) / (pi k)``."""
    if not 0 < omega <= 0.5:
        raise DomainError(f"omega must lie in (0, 1/2], got {omega!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    k = np.arange(1, n)
    t = np.empty(n)
    t[0] = 2.0 * omega
    t[1:] = _sinpi(2.0 * omega * k) / (np.pi * k)
    return ToeplitzSpd(t)


def _sinpi(x):
    """``sin(pi x)`` with exact zeros at integers and exact +-1 at half-integers."""
    r = x - 2.0 * np.round(x / 2.0)  # r in [-1, 1]
    out = np.sin(np.pi * r)
    out[(r == 0.0) | (np.abs(r) == 1.0)] = 0.0
    out[r == 0.5] = 1.0
    out[r == -0.5] = -1.0
    return out


@dataclass(frozen=True)
class ReflectionSpec:
    """Diagonal value ``t0`` and reflection coefficients ``rho_1 .. rho_{n-1}``."""

    t0: float
    rhos: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        rhos = np.asarray(self.rhos, dtype=np.float64).reshape(-1)
        if not self.t0 > 0:
            raise DomainError(f"t0 must be positive, got {self.t0!r}")
        if not np.all(np.isfinite(rhos)) or np.any(np.abs(rhos) >= 1):
            raise DomainError("reflection coefficients must lie in (-1, 1)")
        rhos.setflags(write=False)
        object.__setattr__(self, "rhos", rhos)
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n(self):
        return self.rhos.size + 1


def from_reflection_coeffs(spec):
    """Toeplitz matrix whose factorization has sines ``-spec.rhos``.

    Runs the downdating recursion column by column.  Entry ``p`` of every
    generator depends only on ``t_0 .. t_{p-1}``, and the step-``p`` sine fixes
    the last entry ``v_p[p+1]`` of column ``p+1``.  Inverting the ``v`` update
    from step ``p`` back to step 1 recovers ``v_1[p+1] = t_p / sqrt(t_0)``; the
    ``u`` entries of that column then follow forwards.  O(n^2) work.
    """
    s = -spec.rhos
    c = np.sqrt((1.0 - s) * (1.0 + s))
    n = spec.n
    r = math.sqrt(spec.t0)
    t = np.empty(n)
    t[0] = spec.t0
    # u_col[j] = u_{j+1}[p-1], v_col[j] = v_{j+1}[p] (0-based positions)
    u_prev = np.zeros(n)
    u_prev[0] = r
    for p in range(1, n):
        v_col = np.zeros(p)
        v_col[p - 1] = s[p - 1] * u_prev[p - 1]
        for j in range(p - 2, -1, -1):
            v_col[j] = c[j] * v_col[j + 1] + s[j] * u_prev[j]
        t[p] = r * v_col[0]
        u_next = np.zeros(n)
        u_next[0] = v_col[0]
        # mixed form u_{j+2} = c_j Z u_{j+1} - s_j v_{j+2}; the hyperbolic form
        # divides by c_j and lets rounding errors grow from step to step
        v_after = np.append(v_col[1:], 0.0)
        u_next[1 : p + 1] = c[:p] * u_prev[:p] - s[:p] * v_after
        u_prev = u_next
    return ToeplitzSpd(t)


def alternating_rhos(n, magnitude, magnitude_of="reflection"):
    """``rho_i = (-1)^i * m`` for ``i = 1 .. n-1``.

    With ``magnitude_of="cosine"`` the given value is taken as ``|cos theta|``
    and ``m = sqrt(1 - magnitude^2)``.
    """
    if not 0 <= magnitude < 1 and magnitude_of == "reflection":
        raise DomainError("reflection coefficient magnitude must lie in [0, 1)")
    if magnitude_of == "cosine":
        if not 0 < magnitude <= 1:
            raise DomainError("cosine magnitude must lie in (0, 1]")
        magnitude = math.sqrt((1.0 - magnitude) * (1.0 + magnitude))
    elif magnitude_of != "reflection":
        raise DomainError(f"magnitude_of must be 'reflection' or 'cosine', got {magnitude_of!r}")
    signs = np.where(np.arange(1, n) % 2 == 0, 1.0, -1.0)
    return signs * magnitude


def random_rhos(n, rho_max, seed):
    if not 0 < rho_max < 1:
        raise DomainError(f"rho_max must lie in (0, 1), got {rho_max!r}")
    return make_rng(seed).uniform(-rho_max, rho_max, size=n - 1)


def random_spd_toeplitz(n, rho_max, seed, t0=1.0):
    """SPD Toeplitz matrix with reflection coefficients uniform in ``[-rho_max, rho_max]``."""
    return from_reflection_coeffs(ReflectionSpec(t0, random_rhos(n, rho_max, seed)))


@dataclass(frozen=True)
class Instance:
    """Recipe for one test matrix.

    kind="prolate"     params: n, omega
    kind="reflection"  params: t0, rhos  (or pattern="alternating", n, magnitude, magnitude_of)
    kind="random"      params: n, rho_max, seed, t0
    kind="explicit"    params: first_column
    """

    kind: str
    params: dict = field(default_factory=dict)

    def rhos(self):
        """Reflection coefficients if the recipe prescribes them, else ``None``."""
        p = self.params
        if self.kind == "reflection":
            if p.get("pattern", "explicit") == "alternating":
                return alternating_rhos(int(p["n"]), float(p["magnitude"]), p.get("magnitude_of", "reflection"))
            return np.asarray(p["rhos"], dtype=np.float64)
        if self.kind == "random":
            return random_rhos(int(p["n"]), float(p["rho_max"]), int(p["seed"]))
        return None

    def build(self):
        p = self.params
        if self.kind == "prolate":
            return prolate(int(p["n"]), float(p["omega"]))
        if self.kind in ("reflection", "random"):
            return from_reflection_coeffs(ReflectionSpec(float(p.get("t0", 1.0)), self.rhos()))
        if self.kind == "explicit":
            return ToeplitzSpd(as_vector(p["first_column"]))
        raise DomainError(f"unknown instance kind {self.kind!r}")

    def describe(self):
        p = self.params
        if self.kind == "prolate":
            return f"prolate(n={p['n']}, omega={p['omega']})"
        if self.kind == "random":
            return f"random(n={p['n']}, rho_max={p['rho_max']}, seed={p['seed']}, t0={p.get('t0', 1.0)})"
        if self.kind == "reflection" and p.get("pattern") == "alternating":
            return (
                f"alternating(n={p['n']}, magnitude={p['magnitude']!r}, "
                f"of={p.get('magnitude_of', 'reflection')}, t0={p.get('t0', 1.0)})"
            )
        if self.kind == "reflection":
            return f"reflection(n={len(p['rhos']) + 1}, t0={p.get('t0', 1.0)})"
        return f"explicit(n={len(p['first_column'])})"


#: Named ill-conditioned reference matrices.  For the alternating-sign cases
#: the magnitude is read as ``|cos theta|``; read as ``|rho|`` the matrices
#: are not numerically definite.
REFERENCE_INSTANCES = {
    "prolate21": Instance("prolate", {"n": 21, "omega": 0.25}),
    "alternating41": Instance(
        "reflection",
        {"pattern": "alternating", "n": 41, "magnitude": 0.8956680108101296, "magnitude_of": "cosine", "t0": 1.0},
    ),
    "alternating92": Instance(
        "reflection",
        {"pattern": "alternating", "n": 92, "magnitude": 0.9795872473975045, "magnitude_of": "cosine", "t0": 1.0},
    ),
}
