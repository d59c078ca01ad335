"""Laplacian spectra on balls and boxes, heat-trace volume asymptotics,
and the thermostatic dual picture built on them."""

from .heattrace import (
    EnergyLevel,
    HeatTraceResult,
    WeylScanRow,
    expand_levels,
    group_energies,
    heat_trace,
    weyl_convergence_scan,
    weyl_volume_estimate,
)
from .specfun import (
    DEFAULT_QUADRATURE,
    QuadratureError,
    QuadratureSpec,
    integrate,
    sine_integral,
)
from .spectra import (
    AngularMode,
    BoxMode,
    DEGENERACY_REL_TOLERANCE,
    NumericSpectrum,
    Potential,
    RadialMode,
    angular_modes,
    box_modes,
    eval_radial_wavefunction,
    hilbert_dim_min,
    radial_modes,
    solve_radial_numeric,
    tensor_ground_space,
)
from .thermo import (
    NEGATIVE_INFINITE_ENTROPY,
    DualityPoint,
    EntropyOverflowError,
    FundamentalEquation,
    NoRealSolution,
    boltzmann_weight_from_entropy,
    density_from_entropy,
    duality_map,
    duality_map_from_temperature,
    entropy_expectation,
    entropy_from_density,
    ideal_gas_entropy,
    qm_partition,
    quasistatic_partition,
    real_time_phase,
    solve_fiducial_wavenumber,
    thermal_partition,
)
from .units import UnitSystem, kinetic_prefactor, natural_units

__version__ = "0.1.0"

__all__ = [
    "AngularMode",
    "BoxMode",
    "DEFAULT_QUADRATURE",
    "DEGENERACY_REL_TOLERANCE",
    "DualityPoint",
    "EnergyLevel",
    "EntropyOverflowError",
    "FundamentalEquation",
    "HeatTraceResult",
    "NEGATIVE_INFINITE_ENTROPY",
    "NoRealSolution",
    "NumericSpectrum",
    "Potential",
    "QuadratureError",
    "QuadratureSpec",
    "RadialMode",
    "UnitSystem",
    "WeylScanRow",
    "angular_modes",
    "boltzmann_weight_from_entropy",
    "box_modes",
    "density_from_entropy",
    "duality_map",
    "duality_map_from_temperature",
    "entropy_expectation",
    "entropy_from_density",
    "eval_radial_wavefunction",
    "expand_levels",
    "group_energies",
    "heat_trace",
    "hilbert_dim_min",
    "ideal_gas_entropy",
    "integrate",
    "kinetic_prefactor",
    "natural_units",
    "qm_partition",
    "quasistatic_partition",
    "radial_modes",
    "real_time_phase",
    "sine_integral",
    "solve_fiducial_wavenumber",
    "solve_radial_numeric",
    "tensor_ground_space",
    "thermal_partition",
    "weyl_convergence_scan",
    "weyl_volume_estimate",
]
