"""PWM servo model for the three mechanical rotation axes.

The commanded angle maps linearly onto the PWM duty cycle:
angle = pi/(pulse_max - pulse_min) * (duty*period - pulse_mid), so the
mid-width pulse is 0 rad and the min/max widths bound the reachable range.
The potentiometer feedback quantizes what the gear actually reaches to
multiples of ``accuracy_nu``; the step count doubles as the rotation-cost
unit in the complexity model.  Rotation dynamics are not modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import PITCH, ROLL, YAW

_AXES = (PITCH, YAW, ROLL)


@dataclass(frozen=True)
class ServoConfig:
    """PWM timing [s] and potentiometer accuracy [rad].

    Defaults follow standard hobby-servo pulse widths (1/1.5/2 ms over a
    20 ms period, i.e. a +-pi/2 reachable range) with 0.3 degree accuracy.
    """

    period_k: float = 0.020
    pulse_min: float = 0.001
    pulse_mid: float = 0.0015
    pulse_max: float = 0.002
    accuracy_nu: float = math.radians(0.3)

    def __post_init__(self):
        if not (0 < self.pulse_min < self.pulse_mid < self.pulse_max <= self.period_k):
            raise ValueError("pulse widths must satisfy 0 < min < mid < max <= period")
        if not self.accuracy_nu > 0:
            raise ValueError("potentiometer accuracy must be positive")

    @property
    def reachable_range(self) -> tuple[float, float]:
        """Angle interval [rad] the gear can be commanded to."""
        span = self.pulse_max - self.pulse_min
        return (
            math.pi * (self.pulse_min - self.pulse_mid) / span,
            math.pi * (self.pulse_max - self.pulse_mid) / span,
        )


def angle_from_duty(duty: float, servo: ServoConfig) -> float:
    """Angle [rad] commanded by a PWM duty-cycle fraction."""
    pulse = duty * servo.period_k
    if not servo.pulse_min <= pulse <= servo.pulse_max:
        raise ValueError(
            f"duty {duty} gives pulse {pulse}s outside [{servo.pulse_min}, {servo.pulse_max}]"
        )
    return math.pi / (servo.pulse_max - servo.pulse_min) * (pulse - servo.pulse_mid)


def duty_from_angle(theta_cmd: float, servo: ServoConfig) -> float:
    """Duty-cycle fraction that commands ``theta_cmd`` [rad]; inverse of angle_from_duty."""
    lo, hi = servo.reachable_range
    if not lo <= theta_cmd <= hi:
        raise ValueError(f"angle {theta_cmd} rad outside reachable range [{lo}, {hi}]")
    return (theta_cmd * (servo.pulse_max - servo.pulse_min) / math.pi + servo.pulse_mid) / servo.period_k


def execute_rotation(axis: str, target: float, servo: ServoConfig) -> tuple[float, int]:
    """Rotate one axis toward ``target`` [rad].

    Returns (achieved angle, potentiometer step count).  The achieved angle
    is the target rounded to the nearest multiple of the accuracy (ties to
    even), so the residual never exceeds accuracy_nu / 2.
    """
    if axis not in _AXES:
        raise ValueError(f"unknown axis {axis!r}")
    lo, hi = servo.reachable_range
    if not lo <= target <= hi:
        raise ValueError(f"target {target} rad outside reachable range [{lo}, {hi}]")
    steps = round(target / servo.accuracy_nu)
    return steps * servo.accuracy_nu, abs(steps)
