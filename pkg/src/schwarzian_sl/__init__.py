"""Generalized Sturm-Liouville eigenvalue problems via Riccati and
Schwarzian reformulations, with complex-plane spectral webs for stability
problems."""

from .core import (
    BoundaryKind,
    BoundarySpec,
    Coefficients,
    Diagnostic,
    Domain,
    SchwarzianSLError,
    SLProblem,
    ZeroCoefficient,
    kappa_squared,
    validate,
)
from .integrate import (
    DimensionMismatch,
    NonFiniteRhs,
    OdeSystem,
    StopReason,
    Tolerances,
    Trajectory,
    integrate,
    integrate_bidirectional,
    integrate_checkpoints,
)
from .minimalist import (
    DEFAULT_GAUGE,
    PhiSubstitution,
    ZeroGauge,
    phase_system,
    phi_rhs,
    riccati_rhs,
    riccati_system,
    solve_finite_interval,
)
from .schwarzian import (
    Approach,
    DegenerateBoundary,
    DegenerateLaunch,
    GState,
    NotAsymptotic,
    PhiState,
    QuantizationKind,
    QuantizationResult,
    SampledFunction,
    ZeroDerivative,
    default_g_initial_state,
    default_initial_state,
    eigenfunction,
    eigenfunction_bidirectional,
    g_difference_value,
    g_system,
    g_system_rhs,
    phi_system,
    phi_system_rhs,
    phi_winding_value,
    quantization,
    reconstruct_F,
    schwarzian_derivative,
    solve_asymptotic,
    solve_constant_from_bc,
)
from .rootfind import (
    Charge,
    Crossing,
    DispersionPoint,
    NoConvergence,
    RealScan,
    SpectralWeb,
    dispersion_scan,
    refine_complex_root,
    scan_real,
    spectral_web,
)
from .mhd import (
    AxisLimits,
    CoefficientRatios,
    CohnJetModel,
    JetQuantizationFunction,
    LimitNotConverged,
    MhdEquilibrium,
    ModeParams,
    ProfileSegment,
    SingularSurface,
    YSamples,
    axis_limits,
    coefficient_ratios,
    eigenfunctions_y,
    jet_quantization,
    jet_trajectories,
    y1_g_system_rhs,
    y1_phi_system_rhs,
    y1_system,
    y_riccati_rhs,
    y_riccati_system,
)
from .catalog import (
    CATALOG,
    CatalogEntry,
    StabilityConfig,
    Target,
    cohn_jet,
    const_oscillator,
    get_entry,
    harmonic,
    morse,
    morse_eigenvalues,
    paine,
    problem_from_json,
)

__version__ = "0.1.0"
