"""Error measures and the experiment driver.

Every ratio is expressed in units of the unit roundoff ``EPS`` and the
spectral norm, so a backward stable method gives values of order one.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bareiss import bareiss_factor
from .core import EPS, ToeplitzSpd, as_matrix, as_vector, toeplitz_matvec, two_norm
from .errors import DimensionMismatch, DomainError, ToeplitzError, ZeroSolution, ZeroTruth
from .factor import factor_toeplitz
from .genmat import make_rng
from .solvers import TriangularFactor, cholesky_dense, cond_2, levinson_solve, solve_with_factor


def _upper(U):
    if isinstance(U, TriangularFactor):
        return U.U if U.orientation == "upper" else U.U.T
    if hasattr(U, "U"):
        return np.asarray(U.U)
    return as_matrix(U, "U")


def decomposition_error(T, U):
    """``||T - U^T U||_2 / (eps ||T||_2)``."""
    A = as_matrix(T)
    R = _upper(U)
    if R.shape != A.shape:
        raise DimensionMismatch(f"factor of shape {R.shape} for a matrix of shape {A.shape}")
    E = A - R.T @ R
    E = 0.5 * (E + E.T)
    return two_norm(E) / (EPS * two_norm(A))


def scaled_residual(T, x, b):
    """``||T x - b||_2 / (eps ||x||_2 ||T||_2)``."""
    x = as_vector(x, "x")
    b = as_vector(b, "b")
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        raise ZeroSolution("scaled residual undefined for x = 0")
    if isinstance(T, ToeplitzSpd):
        r = toeplitz_matvec(T, x) - b
    else:
        r = as_matrix(T) @ x - b
    return float(np.linalg.norm(r)) / (EPS * nx * two_norm(T))


def solution_error(x_computed, x_true):
    """``||x_computed - x_true|| / ||x_true||``."""
    xc = as_vector(x_computed, "x_computed")
    xt = as_vector(x_true, "x_true")
    if xc.size != xt.size:
        raise DimensionMismatch("vectors differ in length")
    nt = float(np.linalg.norm(xt))
    if nt == 0.0:
        raise ZeroTruth("relative error undefined for x_true = 0")
    return float(np.linalg.norm(xc - xt)) / nt


def cybenko_bounds(rhos):
    """Bounds on ``t_0 ||T^{-1}||_1`` from the reflection coefficients.

    With ``s_i = -rho_i``::

        lower = max(1 / prod(1 - s_i^2), 1 / prod(1 + s_i))
        upper = prod((1 + |s_i|) / (1 - |s_i|))
    """
    rhos = np.asarray(rhos, dtype=np.float64).reshape(-1)
    if np.any(~np.isfinite(rhos)) or np.any(np.abs(rhos) >= 1):
        raise DomainError("reflection coefficients must lie in (-1, 1)")
    s = -rhos
    a = np.abs(s)
    # sums of logs; the products over/underflow for long sequences
    log_lower = max(-np.sum(np.log1p(-s) + np.log1p(s)), -np.sum(np.log1p(s)))
    log_upper = np.sum(np.log1p(a) - np.log1p(-a))
    return math.exp(min(log_lower, 709.0)), math.exp(min(log_upper, 709.0))


def inverse_one_norm(T):
    """``||T^{-1}||_1`` via the dense Cholesky factor (intended for small ``n``)."""
    F = cholesky_dense(as_matrix(T))
    n = F.n
    cols = [solve_with_factor(F, e) for e in np.eye(n)]
    return float(np.max(np.sum(np.abs(np.array(cols)), axis=1)))


@dataclass
class StabilityReport:
    algorithm: str
    n: int
    instance_descriptor: str
    cond_estimate: float
    decomp_error: float | None = None
    soln_error: float | None = None
    scaled_residual: float | None = None
    warnings: list = field(default_factory=list)
    error: str | None = None

    def as_row(self):
        return asdict(self)


def _factor_method(variant):
    def run(T):
        res = factor_toeplitz(T, variant)
        return res.U, [f"near-breakdown at step {k}" for k in res.warnings]

    return run


def _cholesky(T):
    return cholesky_dense(T.to_dense()).U, []


def _bareiss_full(T):
    return bareiss_factor(T)[0], []


#: name -> callable returning ``(U, warnings)``; ``None`` marks Levinson.
ALGORITHMS = {
    "cholesky": _cholesky,
    "bareiss_hyp": _factor_method("hyperbolic"),
    "bareiss_mixed": _factor_method("mixed"),
    "bareiss_mixed_alt": _factor_method("mixed_alt"),
    "bareiss_scaled_hyp": _factor_method("scaled_hyperbolic"),
    "bareiss_scaled_mixed": _factor_method("scaled_mixed"),
    "bareiss_full": _bareiss_full,
    "levinson": None,
}

#: Default algorithm set of a bench run.
STANDARD_ALGORITHMS = ("cholesky", "bareiss_hyp", "bareiss_mixed", "levinson")

RHS_MODES = ("unit_solution", "random", "scaled")


def make_rhs(T, rhs_mode="unit_solution", seed=0):
    """Return ``(b, x_true)``; ``x_true`` is ``None`` when it is not known.

    unit_solution: ``x_true`` alternates +-1, scaled to unit norm.
    random:        ``x_true`` standard normal, scaled to unit norm.
    scaled:        ``b`` standard normal of unit norm; the solution norm then
                   follows the conditioning of ``T``.
    """
    n = T.n
    if rhs_mode == "unit_solution":
        x = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        x /= np.linalg.norm(x)
        return toeplitz_matvec(T, x), x
    if rhs_mode == "random":
        x = make_rng(seed).standard_normal(n)
        x /= np.linalg.norm(x)
        return toeplitz_matvec(T, x), x
    if rhs_mode == "scaled":
        b = make_rng(seed).standard_normal(n)
        return b / np.linalg.norm(b), None
    raise DomainError(f"unknown rhs_mode {rhs_mode!r}; choose from {RHS_MODES}")


def _evaluate(name, T, b, x_true, descriptor, cond):
    report = StabilityReport(algorithm=name, n=T.n, instance_descriptor=descriptor, cond_estimate=cond)
    try:
        if name == "levinson":
            x, _ = levinson_solve(T, b)
        else:
            U, warnings = ALGORITHMS[name](T)
            report.warnings = warnings
            report.decomp_error = decomposition_error(T, U)
            x = solve_with_factor(TriangularFactor(U), b)
        if not np.all(np.isfinite(x)):
            raise DomainError("computed solution is not finite")
        if x_true is not None:
            report.soln_error = solution_error(x, x_true)
        report.scaled_residual = scaled_residual(T, x, b)
    except ToeplitzError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    return report


def run_experiment(instance, algorithms=STANDARD_ALGORITHMS, rhs_mode="unit_solution", seed=0, workers=1):
    """Solve one instance with each algorithm on the same right-hand side.

    ``instance`` is a :class:`toepfactor.genmat.Instance` or a ``ToeplitzSpd``.
    Failures (e.g. breakdown) are recorded in the report's ``error`` field
    instead of aborting the batch.  Reports come back sorted by algorithm name.
    """
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise DomainError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")
    if not algorithms:
        raise DomainError("at least one algorithm is required")
    if isinstance(instance, ToeplitzSpd):
        T, descriptor = instance, f"explicit(n={instance.n})"
    else:
        T, descriptor = instance.build(), instance.describe()
    b, x_true = make_rhs(T, rhs_mode, seed)
    cond = cond_2(T)
    names = sorted(set(algorithms))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda a: _evaluate(a, T, b, x_true, descriptor, cond), names))
    return [_evaluate(a, T, b, x_true, descriptor, cond) for a in names]


def _prefix_norms(M):
    """``out[k, j] = ||Z^j M[k]||`` for ``j = 0 .. n`` (``Z^j`` drops the last ``j`` entries)."""
    n = M.shape[1]
    csum = np.concatenate([np.zeros((M.shape[0], 1)), np.cumsum(M * M, axis=1)], axis=1)
    # ||Z^j x||^2 = sum of the first n - j squares
    return np.sqrt(csum[:, ::-1][:, : n + 1])


def shifted_norm_ratio(result):
    """Largest ``||Z^j v_k|| / ||Z^{j+1} u_k||`` over ``k = 1..n-1``, ``j >= 0``.

    At most 1 in exact arithmetic.  ``0/0`` counts as 0.
    """
    U, V = np.asarray(result.U), np.asarray(result.V)
    n = U.shape[0]
    nu = _prefix_norms(U[: n - 1])
    nv = _prefix_norms(V[: n - 1])
    num = nv[:, :n]  # j = 0 .. n-1
    den = nu[:, 1 : n + 1]  # j + 1
    return _max_ratio(num, den)


def rotation_growth_ratio(result):
    """Largest ``||H_k|| ||Z^j u_{k+1}|| / (2 (n-k-j) ||Z^{j+1} u_k||)`` over
    ``k = 1..n-1``, ``j = 0..n-k``.  At most 1 in exact arithmetic."""
    U = np.asarray(result.U)
    n = U.shape[0]
    s = np.asarray(result.sines)
    hnorm = (1.0 + np.abs(s)) / np.sqrt((1.0 - s) * (1.0 + s))
    nu = _prefix_norms(U)
    worst = 0.0
    for k in range(1, n):
        j = np.arange(0, n - k + 1)
        num = hnorm[k - 1] * nu[k, j]
        den = 2.0 * (n - k - j) * nu[k - 1, j + 1]
        worst = max(worst, _max_ratio(num, den))
    return worst


def _max_ratio(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.zeros(np.broadcast(num, den).shape)
    pos = den > 0
    out[pos] = num[pos] / den[pos]
    out[~pos & (num > 0)] = np.inf
    return float(np.max(out)) if out.size else 0.0
