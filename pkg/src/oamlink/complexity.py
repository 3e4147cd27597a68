"""Order-level operation counts for hybrid versus electronic-only steering.

Each pipeline stage contributes one big-O term evaluated with unit
constants: cubic terms for the eigendecomposition-based arrival-angle
estimation at the coarse (P_bar, U_bar) and refined (P_tilde, U_tilde)
grids, angle/accuracy ratios for the mechanical rotations, the annealer's
total inner-iteration count, and P*U*N^2 for applying the electronic
weights.  This is a cost *model* matching how such comparisons are usually
plotted, not a cycle-accurate measurement.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ComplexityParams:
    """Everything the cost terms depend on.

    Angles are radians (only ratios to ``nu`` enter, so units cancel);
    the annealing fields mirror SaParams.
    """

    p_data: int = 8
    u_data: int = 9
    p_coarse: int = 4
    u_coarse: int = 4
    p_fine: int = 8
    u_fine: int = 8
    n_elements: int = 10
    inner_iters: int = 20
    cooling: float = 0.9
    t_init: float = 100.0
    t_min: float = 1e-3
    gamma_cmd: float = math.radians(60.0)
    psi_cmd: float = math.radians(60.0)
    theta_star: float = math.radians(10.0)
    nu: float = math.radians(0.3)

    def __post_init__(self):
        for name in ("p_data", "u_data", "p_coarse", "u_coarse", "p_fine", "u_fine", "n_elements", "inner_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not (self.p_coarse <= self.p_fine and self.u_coarse <= self.u_fine):
            raise ValueError("coarse estimation grid must not exceed the fine grid")
        if not 0 < self.cooling < 1:
            raise ValueError("cooling must be in (0, 1)")
        if not 0 < self.t_min < self.t_init:
            raise ValueError("need 0 < t_min < t_init")
        if not self.nu > 0:
            raise ValueError("nu must be positive")


@dataclass(frozen=True)
class CostBreakdown:
    """Per-stage abstract operation counts and their sum."""

    terms: dict[str, float]

    @property
    def total(self) -> float:
        return sum(self.terms.values())


def _annealer_evals(params: ComplexityParams) -> float:
    """inner_iters * log_cooling(t_min / t_init): total candidate evaluations."""
    return params.inner_iters * math.log(params.t_min / params.t_init) / math.log(params.cooling)


def cost_electronic(params: ComplexityParams) -> CostBreakdown:
    """Electronic-only steering: refined estimation plus weight application."""
    return CostBreakdown(
        {
            "aoa_estimation": float(params.p_fine**3 * params.u_fine**3),
            "electronic_steering": float(params.p_data * params.u_data * params.n_elements**2),
        }
    )


def cost_hybrid(params: ComplexityParams) -> CostBreakdown:
    """Hybrid steering: coarse estimation, two mechanical stages, annealer,
    refined estimation and weight application."""
    return CostBreakdown(
        {
            "coarse_aoa_estimation": float(params.p_coarse**3 * params.u_coarse**3),
            "mechanical_pitch_yaw": (abs(params.psi_cmd) + abs(params.gamma_cmd)) / params.nu,
            "roll_optimization": _annealer_evals(params),
            "mechanical_roll": abs(params.theta_star) / params.nu,
            "refined_aoa_estimation": float(params.p_fine**3 * params.u_fine**3),
            "electronic_steering": float(params.p_data * params.u_data * params.n_elements**2),
        }
    )


def relative_cost(params: ComplexityParams) -> float:
    """Hybrid total over electronic-only total."""
    return cost_hybrid(params).total / cost_electronic(params).total


def export_sweep_csv(path, params: ComplexityParams, n_values, p_values) -> None:
    """Sweep element count and subcarrier count; write cost totals and their ratio."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_elements", "p_data", "cost_hybrid", "cost_electronic", "ratio"])
        for n in n_values:
            for p in p_values:
                swept = replace(params, n_elements=int(n), p_data=int(p))
                hybrid = cost_hybrid(swept).total
                electronic = cost_electronic(swept).total
                writer.writerow([int(n), int(p), repr(hybrid), repr(electronic), repr(hybrid / electronic)])
