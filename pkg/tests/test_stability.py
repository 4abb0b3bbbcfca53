import numpy as np
import pytest

from conftest import EXAMPLE_T, EXAMPLE_U, ensemble
from toepfactor import (
    REFERENCE_INSTANCES,
    DimensionMismatch,
    DomainError,
    Instance,
    ReflectionSpec,
    ToeplitzSpd,
    TriangularFactor,
    ZeroSolution,
    ZeroTruth,
    alternating_rhos,
    cholesky_dense,
    cybenko_bounds,
    decomposition_error,
    factor_toeplitz,
    from_reflection_coeffs,
    prolate,
    run_experiment,
    scaled_residual,
    solution_error,
)
from toepfactor.stability import (
    ALGORITHMS,
    STANDARD_ALGORITHMS,
    inverse_one_norm,
    make_rhs,
    rotation_growth_ratio,
    shifted_norm_ratio,
)


def test_decomposition_error_examples():
    assert decomposition_error(EXAMPLE_T, EXAMPLE_U) <= 2.0
    assert decomposition_error(np.array([[4.0, 2.0], [2.0, 2.0]]), np.array([[2.0, 1.0], [0.0, 1.0]])) == 0.0
    T = prolate(21, 0.25)
    chol = decomposition_error(T, cholesky_dense(T.to_dense()))
    hyp = decomposition_error(T, factor_toeplitz(T, "hyperbolic"))
    assert 1e-2 <= chol <= 1e1
    assert 1e-1 <= hyp <= 1e2
    with pytest.raises(DimensionMismatch):
        decomposition_error(T, np.eye(3))


def test_decomposition_error_accepts_lower_factor():
    F = TriangularFactor(EXAMPLE_U.T, "lower")
    assert decomposition_error(EXAMPLE_T, F) == decomposition_error(EXAMPLE_T, EXAMPLE_U)


def test_scaled_residual_examples():
    T = ToeplitzSpd([1.0, 0.0, 0.0])
    assert scaled_residual(T, [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    with pytest.raises(ZeroSolution):
        scaled_residual(T, np.zeros(3), np.ones(3))
    # one unit of residual in the last entry, ||x|| = 1, ||T|| = 1
    assert scaled_residual(T, [1.0, 0.0, 0.0], [1.0, 0.0, 1.0]) == pytest.approx(2.0**53)


def test_solution_error_examples():
    x = np.array([1.0, -2.0, 0.5])
    assert solution_error(x, x) == 0.0
    assert solution_error(2 * x, x) == 1.0
    with pytest.raises(ZeroTruth):
        solution_error(x, np.zeros(3))
    with pytest.raises(DimensionMismatch):
        solution_error(x, x[:2])


def test_cybenko_examples():
    assert cybenko_bounds(np.zeros(5)) == (1.0, 1.0)
    lo, hi = cybenko_bounds([0.6])
    assert lo == pytest.approx(2.5, rel=1e-15) and hi == pytest.approx(4.0, rel=1e-15)
    T = from_reflection_coeffs(ReflectionSpec(1.0, [0.6]))
    assert lo * (1 - 1e-14) <= inverse_one_norm(T) <= hi
    with pytest.raises(DomainError):
        cybenko_bounds([1.0])


def test_cybenko_upper_bound_dominates_cond():
    _, hi = cybenko_bounds(REFERENCE_INSTANCES["alternating41"].rhos())
    assert hi >= 8.5e15


def test_cybenko_brackets_ensemble():
    for label, T, rhos in ensemble(max_n=40):
        lo, hi = cybenko_bounds(rhos)
        m = inverse_one_norm(T) * T.t0
        assert lo * (1 - 1e-10) <= m <= hi * (1 + 1e-10), label


def test_make_rhs_modes():
    T = prolate(6, 0.25)
    b, x = make_rhs(T, "unit_solution")
    assert np.linalg.norm(x) == pytest.approx(1.0) and np.all(np.abs(x) == np.abs(x[0]))
    b2, x2 = make_rhs(T, "random", seed=3)
    b3, x3 = make_rhs(T, "random", seed=3)
    assert np.array_equal(b2, b3) and np.linalg.norm(x2) == pytest.approx(1.0)
    b, x = make_rhs(T, "scaled", seed=1)
    assert x is None and np.linalg.norm(b) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        make_rhs(T, "zeros")


def test_identity_experiment_all_algorithms():
    reports = run_experiment(Instance("prolate", {"n": 6, "omega": 0.5}), tuple(ALGORITHMS))
    assert [r.algorithm for r in reports] == sorted(ALGORITHMS)
    for r in reports:
        assert r.error is None
        assert r.scaled_residual <= 10
        assert (r.decomp_error is None) == (r.algorithm == "levinson")


def test_experiment_records_breakdown():
    reports = run_experiment(ToeplitzSpd([1.0, 0.9, 0.0]), ("bareiss_mixed", "cholesky"))
    assert all(r.error for r in reports)
    assert "Breakdown" in reports[0].error


def test_experiment_validation():
    with pytest.raises(DomainError):
        run_experiment(prolate(4, 0.25), ("gauss",))
    with pytest.raises(DomainError):
        run_experiment(prolate(4, 0.25), ())


def test_experiment_workers_are_deterministic():
    inst = Instance("random", {"n": 30, "rho_max": 0.7, "seed": 2})
    a = run_experiment(inst, tuple(ALGORITHMS), workers=1)
    b = run_experiment(inst, tuple(ALGORITHMS), workers=4)
    assert [r.as_row() for r in a] == [r.as_row() for r in b]


def test_prolate_reference_rows():
    reports = {r.algorithm: r for r in run_experiment(REFERENCE_INSTANCES["prolate21"])}
    assert set(reports) == set(STANDARD_ALGORITHMS)
    for name in ("cholesky", "bareiss_hyp", "bareiss_mixed"):
        assert reports[name].scaled_residual <= 1e2
    assert reports["levinson"].scaled_residual >= 1e2
    assert 1e-5 <= reports["cholesky"].soln_error <= 1e0


def test_alternating92_levinson():
    reports = {r.algorithm: r for r in run_experiment(REFERENCE_INSTANCES["alternating92"])}
    assert 1.06e3 <= reports["levinson"].scaled_residual <= 1.06e7


def test_residual_sanity_over_ensemble():
    for label, T, _ in ensemble():
        for r in run_experiment(T, ("cholesky", "bareiss_hyp", "bareiss_mixed", "bareiss_full")):
            assert r.error is None, (label, r.error)
            assert r.scaled_residual <= 1e3, (label, r.algorithm)


def test_norm_ratio_checks_detect_violations():
    res = factor_toeplitz(from_reflection_coeffs(ReflectionSpec(1.0, alternating_rhos(8, 0.5))), "mixed")
    assert shifted_norm_ratio(res) <= 1.0 + 1e-10
    assert rotation_growth_ratio(res) <= 1.0 + 1e-10
    bad = type(res)(res.U, 10 * res.V, res.sines, res.variant)
    assert shifted_norm_ratio(bad) > 1.0
