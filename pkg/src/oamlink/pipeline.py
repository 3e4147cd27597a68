"""End-to-end hybrid beam steering: mechanical coarse alignment, electronic refinement.

Stages, in causal order:

1. F1 - servo rotation in yaw and pitch toward the estimated pose, leaving a
   small residual bounded by the potentiometer accuracy.
2. E1 - electronic schedule countering the residual.
3. F2 - servo roll rotation to the capacity-optimal angle found by the
   annealer (the roll objective does not depend on the residual, so F2 may
   run before or after E1).
4. E2 - electronic adjustment re-aiming the E1 correction at the rolled
   element angles.

Arrival-angle estimation itself is out of scope: estimates are the true
angles plus a configurable additive error, and the servo quantization then
bounds the residual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import OamMatrix, oam_effective
from .config import LinkConfig
from .geometry import PITCH, ROLL, YAW, Pose
from .optimizer import SaParams, SaTrace, optimize_roll
from .servo import ServoConfig, execute_rotation
from .steering import (
    MechanicalCommand,
    ResidualPose,
    SteeringPhases,
    combined_e,
    mechanical_pitch_yaw,
    mechanical_roll,
    phases_e1,
    phases_e2,
)

FOUR_STEP = "four_step"
TWO_STEP = "two_step"


@dataclass
class HybridResult:
    """Everything the hybrid pipeline produced for one pose."""

    effective: list[OamMatrix]
    command: MechanicalCommand
    phases: list[SteeringPhases]
    residual: ResidualPose
    theta_star: float
    trace: SaTrace
    servo_steps: dict[str, int]


def hybrid_pipeline(
    pose: Pose,
    cfg: LinkConfig,
    sa_params: SaParams | None = None,
    servo_cfg: ServoConfig | None = None,
    aoa_error: tuple[float, float] = (0.0, 0.0),
    theta_star: float | None = None,
    order: str = FOUR_STEP,
) -> HybridResult:
    """Run the full steering chain and return the effective mode-domain channel.

    ``theta_star`` short-circuits the annealer with a precomputed roll angle
    (it depends only on the link, not on the pose).  ``order`` selects the
    four-step bookkeeping (separate E1 and E2 weights) or the merged
    two-step bookkeeping (single summed schedule); both produce the same
    effective matrices.
    """
    if order not in (FOUR_STEP, TWO_STEP):
        raise ValueError(f"unknown pipeline order {order!r}")
    servo_cfg = servo_cfg if servo_cfg is not None else ServoConfig()
    sa_params = sa_params if sa_params is not None else SaParams()

    # F1: coarse mechanical alignment at servo accuracy.
    gamma_hat, steps_yaw = execute_rotation(YAW, pose.gamma + aoa_error[0], servo_cfg)
    psi_hat, steps_pitch = execute_rotation(PITCH, pose.psi + aoa_error[1], servo_cfg)
    residual, _ = mechanical_pitch_yaw(
        pose, MechanicalCommand(gamma_hat, psi_hat), cfg, servo=servo_cfg
    )

    # Roll optimization and F2.
    if theta_star is None:
        theta_star, trace = optimize_roll(cfg, sa_params)
    else:
        trace = SaTrace()
    theta_achieved, steps_roll = execute_rotation(ROLL, theta_star, servo_cfg)
    channels = mechanical_roll(residual, theta_achieved, cfg)

    command = MechanicalCommand(gamma_hat, psi_hat, theta_achieved)
    effective: list[OamMatrix] = []
    phase_schedules: list[SteeringPhases] = []
    for p, H in enumerate(channels):
        if order == FOUR_STEP:
            e1 = phases_e1(p, residual, cfg)
            e2 = phases_e2(p, residual, theta_achieved, cfg)
            effective.append(oam_effective(H, cfg.modes, [e1, e2]))
            phase_schedules.append(SteeringPhases(p, e1.phases + e2.phases))
        else:
            combined = combined_e(p, residual, theta_achieved, cfg)
            effective.append(oam_effective(H, cfg.modes, combined))
            phase_schedules.append(combined)
    return HybridResult(
        effective=effective,
        command=command,
        phases=phase_schedules,
        residual=residual,
        theta_star=theta_achieved,
        trace=trace,
        servo_steps={"yaw": steps_yaw, "pitch": steps_pitch, "roll": steps_roll},
    )
