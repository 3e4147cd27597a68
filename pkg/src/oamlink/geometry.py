"""Coordinate-frame math for a tilted receive UCA.

The receive array sits at range ``r`` on the transmit boresight and can be
rotated in yaw (about its vertical axis), pitch (about its horizontal axis)
and roll (about boresight).  Everything here is a pure function of angles:
rotation matrices, element positions in the frame parallel to the transmit
array, exact and far-field element-to-element distances, and the identities
tying yaw/pitch to the elevation/azimuth of the arrival direction.

Angles are radians throughout.  Element indices ``m``/``n`` are 1-based to
match the usual array-notation convention; the internal arrays are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PITCH = "pitch"
YAW = "yaw"
ROLL = "roll"

STAGE_INITIAL = "initial"
STAGE_AFTER_PITCH_YAW = "after_pitch_yaw"
STAGE_AFTER_ROLL = "after_roll"
STAGES = (STAGE_INITIAL, STAGE_AFTER_PITCH_YAW, STAGE_AFTER_ROLL)

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class Pose:
    """Receive-array attitude: yaw ``gamma``, pitch ``psi``, roll about boresight.

    Yaw and pitch live in the open interval (-pi/2, pi/2); the derived
    boresight tilt ``alpha`` then always lies in [0, pi/2).
    """

    gamma: float
    psi: float
    roll: float = 0.0

    def __post_init__(self):
        if not (abs(self.gamma) < _HALF_PI and abs(self.psi) < _HALF_PI):
            raise ValueError(
                f"yaw/pitch must satisfy |angle| < pi/2, got gamma={self.gamma}, psi={self.psi}"
            )
        if not (math.isfinite(self.gamma) and math.isfinite(self.psi) and math.isfinite(self.roll)):
            raise ValueError("pose angles must be finite")

    @property
    def alpha(self) -> float:
        """Tilt of the array normal away from boresight."""
        return alpha_from(self.psi, self.gamma)


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform circular array: element count, radius [m], angle of element 1."""

    n_elements: int
    radius: float
    initial_angle: float = 0.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def element_angle(self, m: int) -> float:
        """In-plane angle of element ``m`` (1-based): 2*pi*(m-1)/N + initial_angle."""
        if not 1 <= m <= self.n_elements:
            raise IndexError(f"element index {m} outside 1..{self.n_elements}")
        return 2.0 * math.pi * (m - 1) / self.n_elements + self.initial_angle

    @property
    def element_angles(self) -> np.ndarray:
        """All element angles as a length-N array (index 0 is element 1)."""
        return 2.0 * math.pi * np.arange(self.n_elements) / self.n_elements + self.initial_angle


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """3x3 rotation matrix for the pitch (x), yaw (y) or roll (z) axis."""
    if not math.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    c, s = math.cos(angle), math.sin(angle)
    if axis == PITCH:
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis == YAW:
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if axis == ROLL:
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    raise ValueError(f"unknown rotation axis {axis!r}")


def alpha_from(psi: float, gamma: float) -> float:
    """Boresight tilt from pitch and yaw: arccos(cos(psi) * cos(gamma))."""
    if not (abs(psi) < _HALF_PI and abs(gamma) < _HALF_PI):
        raise ValueError(f"pitch/yaw must satisfy |angle| < pi/2, got psi={psi}, gamma={gamma}")
    c = math.cos(psi) * math.cos(gamma)
    return math.acos(min(1.0, max(-1.0, c)))


def psi_from(alpha: float, gamma: float) -> float:
    """Pitch recovered from tilt and yaw: arccos(cos(alpha) / cos(gamma)).

    Returns the non-negative pitch.  Raises when cos(alpha) > cos(gamma),
    i.e. when no pitch can produce the requested tilt at this yaw.
    """
    if not abs(gamma) < _HALF_PI:
        raise ValueError(f"yaw must satisfy |gamma| < pi/2, got {gamma}")
    ratio = math.cos(alpha) / math.cos(gamma)
    if ratio > 1.0 + 1e-9:
        raise ValueError(f"no valid pitch: cos(alpha)={math.cos(alpha)} exceeds cos(gamma)={math.cos(gamma)}")
    return math.acos(min(1.0, max(-1.0, ratio)))


def phi_azimuth(gamma: float, psi: float) -> float:
    """Azimuth of the arrival direction in the tilted receive-array frame.

    Two-branch form: pi/2 + arccos(.) for gamma >= 0 and pi/2 - arccos(.)
    for gamma < 0, continuous across gamma = 0 where both branches meet at
    pi/2 (for psi > 0).  Undefined when gamma = psi = 0 since the arrival
    direction is then along boresight.  For psi >= 0 the result lies in
    [0, pi]; negative pitch continues the same branches past that range
    (the value is an angle on the circle).
    """
    if not (abs(gamma) < _HALF_PI and abs(psi) < _HALF_PI):
        raise ValueError(f"yaw/pitch must satisfy |angle| < pi/2, got gamma={gamma}, psi={psi}")
    if gamma == 0.0 and psi == 0.0:
        raise ValueError("azimuth undefined for gamma = psi = 0 (boresight arrival)")
    num = 2.0 * math.cos(gamma) * math.sin(psi)
    den = math.sqrt(3.0 - 2.0 * math.cos(2.0 * gamma) * math.cos(psi) ** 2 - math.cos(2.0 * psi))
    arg = min(1.0, max(-1.0, num / den))
    if gamma >= 0.0:
        return _HALF_PI + math.acos(arg)
    return _HALF_PI - math.acos(arg)


def _stage_angles(pose: Pose | None, residual: Pose | None, stage: str) -> tuple[float, float, float]:
    """Resolve (gamma, psi, extra roll) for a steering stage.

    ``initial`` uses the raw pose; the post-rotation stages use the residual
    attitude, with ``after_roll`` additionally offsetting every element angle
    by the residual's roll field.
    """
    if stage == STAGE_INITIAL:
        if pose is None:
            raise ValueError("stage 'initial' requires a pose")
        return pose.gamma, pose.psi, 0.0
    if stage == STAGE_AFTER_PITCH_YAW:
        if residual is None:
            raise ValueError("stage 'after_pitch_yaw' requires a residual pose")
        return residual.gamma, residual.psi, 0.0
    if stage == STAGE_AFTER_ROLL:
        if residual is None:
            raise ValueError("stage 'after_roll' requires a residual pose")
        return residual.gamma, residual.psi, residual.roll
    raise ValueError(f"unknown stage {stage!r}")


def rx_element_position(
    m: int,
    pose: Pose | None,
    residual: Pose | None,
    stage: str,
    rx: ArrayGeometry,
) -> np.ndarray:
    """Position of receive element ``m`` in the frame parallel to the transmit array.

    Closed form of R_yaw(gamma) @ R_pitch(psi) applied to the in-plane element
    vector, with the stage-appropriate angles and (for ``after_roll``) the
    rolled element angle.
    """
    gamma, psi, roll = _stage_angles(pose, residual, stage)
    theta = rx.element_angle(m) + roll
    st, ct = math.sin(theta), math.cos(theta)
    sg, cg = math.sin(gamma), math.cos(gamma)
    sp, cp = math.sin(psi), math.cos(psi)
    return rx.radius * np.array(
        [ct * cg + st * sp * sg, st * cp, st * sp * cg - ct * sg]
    )


def distance(
    n: int,
    m: int,
    pose: Pose | None,
    residual: Pose | None,
    stage: str,
    cfg,
    method: str = "farfield",
) -> float:
    """Transmit element ``n`` to receive element ``m`` distance [m].

    ``cfg`` carries ``tx``/``rx`` array geometries and the center range
    ``range_r``.  The exact method takes the Euclidean norm between element
    positions; the far-field method evaluates the first-order expansion in
    (array radius / range), which keeps only phase-relevant terms.
    """
    tx, rx, r = cfg.tx, cfg.rx, cfg.range_r
    phi_n = tx.element_angle(n)
    if method == "exact":
        q = rx_element_position(m, pose, residual, stage, rx)
        t = tx.radius * np.array([math.cos(phi_n), math.sin(phi_n), 0.0])
        return float(np.linalg.norm(q + np.array([0.0, 0.0, r]) - t))
    if method != "farfield":
        raise ValueError(f"unknown distance method {method!r}")
    gamma, psi, roll = _stage_angles(pose, residual, stage)
    theta = rx.element_angle(m) + roll
    st, ct = math.sin(theta), math.cos(theta)
    sg, cg = math.sin(gamma), math.cos(gamma)
    sp, cp = math.sin(psi), math.cos(psi)
    sf, cf = math.sin(phi_n), math.cos(phi_n)
    rr_rt = rx.radius * tx.radius / r
    return (
        r
        - rr_rt * st * cf * sp * sg
        - rr_rt * (ct * cf * cg + st * sf * cp)
        + rx.radius * (st * sp * cg - ct * sg)
    )
