"""Cholesky factorization of symmetric positive definite displacement-rank-2
matrices by elementary downdating, and the Bareiss/Levinson stability harness."""

from .bareiss import BareissState, bareiss_factor, bareiss_solve, bareiss_steps
from .core import (
    EPS,
    ToeplitzSpd,
    frobenius_norm,
    one_norm,
    reverse,
    shift_down,
    toeplitz_matvec,
    two_norm,
)
from .downdate import (
    GeneratorPair,
    HyperbolicParams,
    ScaledGeneratorPair,
    downdate_hyperbolic,
    downdate_mixed,
    downdate_mixed_alt,
    downdate_scaled_hyperbolic,
    downdate_scaled_mixed,
    rotation_params,
)
from .errors import (
    Breakdown,
    DimensionMismatch,
    DomainError,
    IllConditioned,
    NonPositiveDiagonal,
    NotPositiveDefinite,
    ToeplitzError,
    ZeroPivot,
    ZeroSolution,
    ZeroTruth,
)
from .factor import (
    VARIANTS,
    FactorResult,
    ScaledFactorResult,
    factor,
    factor_scaled,
    factor_toeplitz,
    reflection_coefficients,
)
from .genmat import (
    REFERENCE_INSTANCES,
    Instance,
    ReflectionSpec,
    alternating_rhos,
    from_reflection_coeffs,
    generators_from_dense,
    prolate,
    random_spd_toeplitz,
    toeplitz_generators,
)
from .solvers import (
    TriangularFactor,
    cholesky_dense,
    cond_2,
    levinson_solve,
    solve_triangular,
    solve_with_factor,
)
from .stability import (
    StabilityReport,
    cybenko_bounds,
    decomposition_error,
    run_experiment,
    scaled_residual,
    solution_error,
)

__version__ = "0.1.0"
