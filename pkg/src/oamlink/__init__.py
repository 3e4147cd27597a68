"""Simulation of UCA-based line-of-sight OAM radio links under misalignment,
with electronic-only and hybrid mechanical + electronic beam steering."""

from .channel import (
    ChannelMatrix,
    OamMatrix,
    channel_coeff,
    channel_matrices,
    channel_matrix,
    dft_vector,
    oam_effective,
    partial_dft,
    simulate_reception,
)
from .config import CarrierGrid, LinkConfig, default_link
from .geometry import (
    ArrayGeometry,
    Pose,
    STAGE_AFTER_PITCH_YAW,
    STAGE_AFTER_ROLL,
    STAGE_INITIAL,
    alpha_from,
    distance,
    phi_azimuth,
    psi_from,
    rotation_matrix,
    rx_element_position,
)
from .metrics import ModePair, asymptotic_sir, capacity, check_monotonicity, sinr, sir, sir_asymptotic
from .optimizer import SaParams, SaTrace, capacity_objective, capacity_profile, grid_search_roll, optimize_roll
from .pipeline import HybridResult, hybrid_pipeline
from .servo import ServoConfig, angle_from_duty, duty_from_angle, execute_rotation
from .steering import (
    MechanicalCommand,
    ResidualPose,
    SteeringPhases,
    closed_form_diag,
    combined_e,
    mechanical_pitch_yaw,
    mechanical_roll,
    phases_e1,
    phases_e2,
    phases_eo,
)
from .complexity import ComplexityParams, CostBreakdown, cost_electronic, cost_hybrid, relative_cost

__version__ = "0.1.0"
