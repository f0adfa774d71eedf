"""Spectral rates and heralding efficiency of thin-crystal Type-I down-conversion sources."""

__version__ = "0.1.0"

from .dispersion import (  # noqa: E402
    DispersionRangeError,
    DispersionSet,
    IndexSample,
    bibo,
    dispersion_sample,
    index_pump,
    index_spdc,
    load_dispersion,
    principal_indices,
)
from .modeoverlap import (  # noqa: E402
    BeamConfig,
    OracleError,
    OverlapConstants,
    focusing_ratio,
    mode_sum,
    numeric_overlap_oracle,
    overlap_constants,
    phi00,
    phi_nm,
)
from .phasematch import (  # noqa: E402
    PRESETS,
    CrystalParams,
    EmissionCurve,
    Geometry,
    GeometrySolveError,
    PhaseMismatch,
    TotalInternalReflection,
    emission_angle_curve,
    omega_to_wavelength,
    phase_mismatch,
    solve_geometry,
    taylor_mismatch_degenerate,
    wavelength_to_omega,
)
from .quadrature import QuadratureError, gk15  # noqa: E402
from .rates import (  # noqa: E402
    ModeSumWarning,
    RateReport,
    Source,
    SpectralCurve,
    SpectralFilter,
    bandwidth_nm_to_angular,
    filter_transmission,
    heralding_efficiency,
    joint_spectral_rate,
    singles_spectral_rate,
    spectral_curves,
    spectral_window,
    total_joint_rate,
    total_singles_rate,
)
