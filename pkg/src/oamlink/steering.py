"""Electronic steering phase schedules and mechanical rotation of the channel.

Electronic steering folds per-element phase shifts into the despiralization
weights; each stage has a closed-form schedule:

* ``phases_eo`` counters the full pose (electronic-only operation),
* ``phases_e1`` counters the small residual pose left after the pitch/yaw
  mechanical rotation,
* ``phases_e2`` re-aims after the roll rotation by supplying exactly the
  element-angle difference terms the roll introduced.

Mechanical rotation is a non-linear operation on the channel: it moves the
element positions, so the channel matrices are rebuilt at the appropriate
stage rather than multiplied by anything.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, channel_matrices
from .config import LinkConfig
from .geometry import (
    Pose,
    STAGE_AFTER_PITCH_YAW,
    STAGE_AFTER_ROLL,
)


@dataclass(frozen=True)
class SteeringPhases:
    """Per-element steering phases [rad] at one subcarrier (stored unwrapped)."""

    subcarrier_index: int
    phases: np.ndarray

    @property
    def row(self) -> np.ndarray:
        """Unit-modulus weights exp(i * phases)."""
        return np.exp(1j * np.asarray(self.phases))


@dataclass(frozen=True)
class MechanicalCommand:
    """Commanded mechanical rotation angles [rad] per axis."""

    yaw_cmd: float
    pitch_cmd: float
    roll_cmd: float = 0.0


@dataclass(frozen=True)
class ResidualPose:
    """Misalignment left after mechanical pitch/yaw rotation.

    Accuracy claims for the electronic stages assume the small-angle regime
    (residuals within a few tenths of a degree up to a few degrees).
    """

    gamma_bar: float
    psi_bar: float

    def as_pose(self, roll: float = 0.0) -> Pose:
        return Pose(self.gamma_bar, self.psi_bar, roll)


def phases_eo(p: int, psi: float, gamma: float, cfg: LinkConfig) -> SteeringPhases:
    """Electronic-only schedule: k_p R_r (sin(theta_m) sin(psi) cos(gamma) - cos(theta_m) sin(gamma))."""
    k_rr = cfg.wavenumber(p) * cfg.rx.radius
    theta = cfg.rx.element_angles
    w = k_rr * (np.sin(theta) * math.sin(psi) * math.cos(gamma) - np.cos(theta) * math.sin(gamma))
    return SteeringPhases(p, w)


def phases_e1(p: int, residual: ResidualPose, cfg: LinkConfig) -> SteeringPhases:
    """Post-mechanical schedule: same form as phases_eo at the residual angles."""
    return phases_eo(p, residual.psi_bar, residual.gamma_bar, cfg)


def phases_e2(p: int, residual: ResidualPose, theta_star: float, cfg: LinkConfig) -> SteeringPhases:
    """Roll-compensation schedule.

    2 k_p R_r sin(theta*/2) * (cos(gb) cos(theta*/2 + theta_m) sin(pb)
    + sin(gb) sin(theta*/2 + theta_m)), the exact increment that moves the
    phases_e1 correction from element angles theta_m to theta_m + theta*.
    """
    k_rr = cfg.wavenumber(p) * cfg.rx.radius
    theta = cfg.rx.element_angles
    half = 0.5 * theta_star
    gb, pb = residual.gamma_bar, residual.psi_bar
    w = (
        2.0
        * k_rr
        * math.sin(half)
        * (math.cos(gb) * np.cos(half + theta) * math.sin(pb) + math.sin(gb) * np.sin(half + theta))
    )
    return SteeringPhases(p, w)


def combined_e(p: int, residual: ResidualPose, theta_star: float, cfg: LinkConfig) -> SteeringPhases:
    """Elementwise sum of the two electronic stages (Hadamard product of weights)."""
    return SteeringPhases(
        p, phases_e1(p, residual, cfg).phases + phases_e2(p, residual, theta_star, cfg).phases
    )


def mechanical_pitch_yaw(
    pose: Pose,
    command: MechanicalCommand,
    cfg: LinkConfig,
    servo=None,
) -> tuple[ResidualPose, list[ChannelMatrix]]:
    """Rotate the array in yaw and pitch; rebuild the channel at the residual pose."""
    if servo is not None:
        lo, hi = servo.reachable_range
        for cmd in (command.yaw_cmd, command.pitch_cmd):
            if not lo <= cmd <= hi:
                raise ValueError(f"command {cmd} rad outside servo range [{lo}, {hi}]")
    residual = ResidualPose(pose.gamma - command.yaw_cmd, pose.psi - command.pitch_cmd)
    if not (abs(residual.gamma_bar) < math.pi / 2 and abs(residual.psi_bar) < math.pi / 2):
        raise ValueError("residual misalignment must stay below pi/2 per axis")
    channels = channel_matrices(None, residual.as_pose(), STAGE_AFTER_PITCH_YAW, cfg)
    return residual, channels


def mechanical_roll(
    residual: ResidualPose,
    theta_star: float,
    cfg: LinkConfig,
) -> list[ChannelMatrix]:
    """Rotate the array about boresight; rebuild the channel with offset element angles."""
    if not abs(theta_star) <= math.pi:
        raise ValueError(f"roll angle must satisfy |theta| <= pi, got {theta_star}")
    return channel_matrices(None, residual.as_pose(roll=theta_star), STAGE_AFTER_ROLL, cfg)


def closed_form_diag(p: int, mode: int, theta: float, cfg: LinkConfig) -> complex:
    """Mode-domain diagonal entry of the fully steered link at roll angle ``theta``.

    N * eta(p) * sum_delta exp(i (2*pi*delta/N - theta) * mode
    + i S_p cos(2*pi*delta/N - theta)); exactly periodic in theta with period
    2*pi/N.  The despiralization convention here tracks the rolled element
    angles, so the value equals the fixed-DFT double sum times the unit phase
    exp(-i * mode * theta); magnitudes (hence SINR and capacity) coincide.
    """
    n = cfg.n_elements
    s = cfg.coupling(p)
    delta = 2.0 * math.pi * np.arange(1, n + 1) / n - theta
    total = np.sum(np.exp(1j * (delta * mode + s * np.cos(delta))))
    return complex(n * cfg.eta(p) * total)


def export_phase_schedule_csv(path, cfg: LinkConfig, schedules) -> None:
    """Write per-element phases as CSV rows (subcarrier_hz, element_index, phase_rad)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subcarrier_hz", "element_index", "phase_rad"])
        for sched in schedules:
            freq = cfg.carriers.frequencies[sched.subcarrier_index]
            for idx, phase in enumerate(sched.phases, start=1):
                writer.writerow([repr(float(freq)), idx, repr(float(phase))])
