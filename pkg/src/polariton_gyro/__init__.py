"""Slow-light hybrid Sagnac gyroscope: closed-form model and envelope-equation oracle."""
from .constants import CONSTANTS, EARTH_RATE, PhysicalConstants
from .model import (
    AtomSpecies,
    ControlField,
    DegenerateSegmentError,
    DerivedMediumQuantities,
    LoopGeometry,
    MediumSegment,
    ProbeField,
    SagnacReport,
    UndefinedRatioError,
    absorption_coefficient,
    collision_limited_vgr_min,
    coupling_constant,
    critical_tan2,
    derived_quantities,
    enhancement_factor,
    group_velocity,
    min_xi_for_absorption,
    opacity,
    probe_phase_gradient,
    recoil_velocity,
    sagnac_phase_hybrid,
    sagnac_phase_optical,
    sagnac_report,
    segment_at_xi,
    uniform_enhancement,
    validity_check,
    xi_parameter,
)
from .envelope import (
    ConvergenceError,
    OracleOptions,
    PropagationResult,
    SingularCoherenceError,
    VelocityGrid,
    compare_to_analytic,
    propagate_probe,
    sagnac_phase_numeric,
    stationary_coherences,
    velocity_grid,
)

__version__ = "0.1.0"
