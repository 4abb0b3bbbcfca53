"""Numbered acceptance criteria.  Each test records one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` for the summary block, or
``python tests/test_acceptance.py`` for the lines alone.
"""

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, EXAMPLE_T, ensemble
from toepfactor import (
    REFERENCE_INSTANCES,
    VARIANTS,
    Breakdown,
    GeneratorPair,
    ReflectionSpec,
    bareiss_factor,
    cholesky_dense,
    cond_2,
    cybenko_bounds,
    factor,
    factor_toeplitz,
    from_reflection_coeffs,
    reflection_coefficients,
    run_experiment,
)
from toepfactor.core import EPS
from toepfactor.genmat import make_rng
from toepfactor.stability import inverse_one_norm, rotation_growth_ratio, shifted_norm_ratio

pytestmark = pytest.mark.acceptance

TOL_EXAMPLE = 1e-12
TOL_ROUND_TRIP = 1e-10
ROUND_TRIP_SPECS = 200
ROUND_TRIP_SEED = 20240601
MAX_CONSTANT = 100.0
NORM_SLACK = 1 + 1e-10
TOL_EQUIVALENCE = 1e-10
WELL_CONDITIONED = 1e6
RESIDUAL_OK = 1e2
BAREISS_ALGS = ("bareiss_hyp", "bareiss_mixed", "bareiss_full")


def record(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_worked_example():
    g = GeneratorPair([5.0, 4.0, 3.0], [0.0, 3.0, 1.0])
    chol = cholesky_dense(EXAMPLE_T).U
    worst_recon = worst_chol = 0.0
    for variant in VARIANTS:
        U = factor(g, variant).U
        worst_recon = max(worst_recon, np.linalg.norm(EXAMPLE_T - U.T @ U, "fro"))
        worst_chol = max(worst_chol, np.max(np.abs(U - chol)))
    ok = worst_recon <= TOL_EXAMPLE and worst_chol <= TOL_EXAMPLE
    record(1, ok, f"5 variants, max ||T-U^T U||_F={worst_recon:.2e}, max |U-chol|={worst_chol:.2e} (tol {TOL_EXAMPLE:g})")


def test_criterion_2_reflection_round_trip():
    rng = make_rng(ROUND_TRIP_SEED)
    failures = breakdowns = 0
    worst = 0.0
    worst_ok_cond = 0.0
    for _ in range(ROUND_TRIP_SPECS):
        n = int(rng.integers(2, 61))
        rhos = rng.uniform(-0.95, 0.95, n - 1)
        T = from_reflection_coeffs(ReflectionSpec(1.0, rhos))
        try:
            err = float(np.max(np.abs(reflection_coefficients(T) - rhos)))
        except Breakdown:
            breakdowns += 1
            failures += 1
            continue
        worst = max(worst, err)
        if err > TOL_ROUND_TRIP:
            failures += 1
        else:
            worst_ok_cond = max(worst_ok_cond, cond_2(T))
    record(
        2,
        failures == 0,
        f"{ROUND_TRIP_SPECS - failures}/{ROUND_TRIP_SPECS} specs within {TOL_ROUND_TRIP:g} "
        f"({breakdowns} breakdowns, worst finite error {worst:.2e}, largest passing cond {worst_ok_cond:.1e})",
    )


def test_criterion_3_error_growth():
    c_hyp = c_mix = 0.0
    by_n = {}
    for _, T, _ in ensemble():
        n = T.n
        A = T.to_dense()
        for variant in VARIANTS:
            U = factor_toeplitz(T, variant).U
            E = A - U.T @ U
            err = np.linalg.norm(0.5 * (E + E.T), 2) / (EPS * T.t0)
            by_n.setdefault(n, []).append(err)
            if "hyperbolic" in variant:
                c_hyp = max(c_hyp, err / n**3)
            else:
                c_mix = max(c_mix, err / n**2)
    medians = ", ".join(f"n={n}: {np.median(v):.1f}" for n, v in sorted(by_n.items()))
    ok = c_hyp <= MAX_CONSTANT and c_mix <= MAX_CONSTANT
    record(3, ok, f"fitted C hyperbolic (n^3)={c_hyp:.2e}, mixed (n^2)={c_mix:.2e}; median errors {medians}")


def test_criterion_4_norm_inequalities():
    worst1 = worst2 = 0.0
    count = 0
    for _, T, _ in ensemble(max_n=40):
        for variant in VARIANTS:
            res = factor_toeplitz(T, variant)
            worst1 = max(worst1, shifted_norm_ratio(res))
            worst2 = max(worst2, rotation_growth_ratio(res))
            count += 1
    ok = worst1 <= NORM_SLACK and worst2 <= NORM_SLACK
    record(4, ok, f"{count} trajectories, max shifted-norm ratio {worst1:.4f}, max rotation-growth ratio {worst2:.4f}")


def test_criterion_5_bareiss_equivalence():
    worst_alpha = worst_u = 0.0
    used = skipped = 0
    for _, T, _ in ensemble(max_n=40):
        if cond_2(T) > WELL_CONDITIONED:
            skipped += 1
            continue
        used += 1
        U, alphas = bareiss_factor(T)
        res = factor_toeplitz(T, "mixed")
        worst_alpha = max(worst_alpha, np.max(np.abs(alphas - res.sines)) / np.max(np.abs(res.sines)))
        worst_u = max(worst_u, np.max(np.abs(U - res.U)) / np.max(np.abs(res.U)))
    ok = worst_alpha <= TOL_EQUIVALENCE and worst_u <= TOL_EQUIVALENCE
    record(
        5,
        ok,
        f"{used} instances (n<=40, cond<={WELL_CONDITIONED:g}; {skipped} above), "
        f"max rel alpha-sine gap {worst_alpha:.2e}, max rel U gap {worst_u:.2e}",
    )


def _reports(name):
    return {r.algorithm: r for r in run_experiment(REFERENCE_INSTANCES[name], ("cholesky",) + BAREISS_ALGS + ("levinson",))}


def test_criterion_6_prolate_reference():
    reports = _reports("prolate21")
    cond = reports["levinson"].cond_estimate
    bareiss = max(reports[a].scaled_residual for a in ("bareiss_hyp", "bareiss_mixed"))
    lev = reports["levinson"].scaled_residual
    ok = 3.19e13 <= cond <= 3.19e15 and bareiss <= RESIDUAL_OK and lev >= RESIDUAL_OK
    record(6, ok, f"cond={cond:.2e} (target 3.19e14), Bareiss s_B max={bareiss:.2f}, Levinson s_L={lev:.2e}")


def test_criterion_7_alternating_reference():
    parts = []
    ok = True
    for name, target in (("alternating41", 1.47e5), ("alternating92", 1.06e5)):
        reports = _reports(name)
        lev = reports["levinson"].scaled_residual
        stable = max(reports[a].scaled_residual for a in ("cholesky",) + BAREISS_ALGS)
        ok &= target / 1e2 <= lev <= target * 1e2 and stable <= RESIDUAL_OK
        parts.append(f"{name}: Levinson {lev:.2e} (target {target:.2e}), Bareiss/Cholesky max {stable:.2f}")
    record(7, ok, "; ".join(parts))


def test_criterion_8_cybenko_bracket():
    worst_low = np.inf
    worst_high = 0.0
    count = 0
    for _, T, rhos in ensemble(max_n=40):
        lo, hi = cybenko_bounds(rhos)
        m = inverse_one_norm(T) * T.t0
        worst_low = min(worst_low, m / lo)
        worst_high = max(worst_high, m / hi)
        count += 1
    ok = worst_low >= 1 - 1e-10 and worst_high <= 1 + 1e-10
    record(8, ok, f"{count} instances, min measured/lower={worst_low:.3f}, max measured/upper={worst_high:.3g}")


def test_criterion_9_backward_stability():
    samples = []
    for _, T, _ in ensemble():
        for mode in ("unit_solution", "random", "scaled"):
            for r in run_experiment(T, BAREISS_ALGS, rhs_mode=mode, seed=T.n):
                assert r.error is None, r.error
                samples.append((T.n, r.scaled_residual))
    n = np.array([s[0] for s in samples], dtype=float)
    res = np.array([s[1] for s in samples])
    fit = None
    for degree in range(4):
        coeff = float(np.max(res / n**degree))
        if coeff <= MAX_CONSTANT:
            fit = (degree, coeff)
            break
    detail = f"{len(samples)} solves, max s_B={res.max():.2f}"
    if fit:
        detail += f", c2(n) = {fit[1]:.3g} * n^{fit[0]}"
    record(9, fit is not None, detail)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
