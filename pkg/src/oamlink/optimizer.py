"""Simulated-annealing search for the roll angle that maximizes capacity.

The objective is the interference-free diagonal model of the fully steered
link: every mode sees SINR = rho * |h_diag|^2, so the capacity depends on the
roll angle only through the per-mode diagonal magnitudes.  The objective is
periodic with period 2*pi/N, hence the search interval [-pi/N, pi/N].

A brute-force grid search over the same interval serves as the optimizer's
reference; annealing runs are deterministic for a given seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .config import LinkConfig


@dataclass(frozen=True)
class SaParams:
    """Annealing schedule.

    ``step_scale`` is the largest perturbation magnitude [rad] at the initial
    temperature; None picks (pi/N)/10 for the link at hand.  Perturbations
    shrink proportionally to the current temperature.
    """

    t_init: float = 100.0
    t_min: float = 1e-3
    cooling: float = 0.9
    inner_iters: int = 20
    step_scale: float | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if not 0 < self.t_min < self.t_init:
            raise ValueError("need 0 < t_min < t_init")
        if not 0 < self.cooling < 1:
            raise ValueError("cooling must be in (0, 1)")
        if self.inner_iters < 1:
            raise ValueError("inner_iters must be >= 1")
        if self.step_scale is not None and not self.step_scale > 0:
            raise ValueError("step_scale must be positive")

    @property
    def outer_iterations(self) -> int:
        """Number of temperature levels until t_init * cooling^k <= t_min."""
        return math.ceil(math.log(self.t_min / self.t_init) / math.log(self.cooling))


@dataclass
class SaTrace:
    """Per-temperature record of an annealing run."""

    temperatures: list[float] = field(default_factory=list)
    best_thetas: list[float] = field(default_factory=list)
    best_capacities: list[float] = field(default_factory=list)
    accepted_counts: list[int] = field(default_factory=list)

    def append(self, temperature: float, best_theta: float, best_capacity: float, accepted: int):
        self.temperatures.append(temperature)
        self.best_thetas.append(best_theta)
        self.best_capacities.append(best_capacity)
        self.accepted_counts.append(accepted)

    def __len__(self) -> int:
        return len(self.temperatures)


def capacity_profile(thetas, cfg: LinkConfig) -> np.ndarray:
    """Diagonal-model capacity [bits/s/Hz] at each roll angle (vectorized)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n = cfg.n_elements
    modes = np.asarray(cfg.modes, dtype=float)
    delta = 2.0 * math.pi * np.arange(1, n + 1) / n
    total = np.zeros(thetas.shape[0])
    for p in range(cfg.n_subcarriers):
        s = cfg.coupling(p)
        scale = n * abs(cfg.eta(p))
        ang = delta[None, :] - thetas[:, None]  # (T, N)
        phase = ang[:, None, :] * modes[None, :, None] + s * np.cos(ang)[:, None, :]
        h_abs = scale * np.abs(np.exp(1j * phase).sum(axis=2))  # (T, U)
        total += np.log2(1.0 + cfg.snr_rho * h_abs**2).sum(axis=1)
    return total / cfg.n_subcarriers


def capacity_objective(theta: float, cfg: LinkConfig) -> float:
    """Diagonal-model capacity at a single roll angle."""
    return float(capacity_profile(theta, cfg)[0])


def grid_search_roll(cfg: LinkConfig, resolution: int) -> tuple[float, float]:
    """Exhaustive argmax of the objective on a uniform grid over [-pi/N, pi/N]."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    half = math.pi / cfg.n_elements
    thetas = np.linspace(-half, half, resolution)
    caps = capacity_profile(thetas, cfg)
    best = int(np.argmax(caps))
    return float(thetas[best]), float(caps[best])


def optimize_roll(
    cfg: LinkConfig,
    sa: SaParams,
    theta_init: float | None = None,
) -> tuple[float, SaTrace]:
    """Anneal the roll angle over [-pi/N, pi/N].

    Per inner iteration a signed perturbation ``e`` (uniform over
    [-step, step] scaled by temperature) proposes theta + e, reflected to
    theta - e when that leaves the interval.  A candidate is accepted when
    it improves the capacity or passes the Metropolis draw
    exp((c_new - c) / T); after each temperature level the walk restarts
    from the best point seen so far if anything was accepted at that level.
    """
    half = math.pi / cfg.n_elements
    step0 = sa.step_scale if sa.step_scale is not None else half / 10.0
    rng = np.random.default_rng(sa.rng_seed)
    theta = -half if theta_init is None else float(theta_init)
    if not -half <= theta <= half:
        raise ValueError(f"theta_init {theta} outside [-pi/N, pi/N]")
    cap = capacity_objective(theta, cfg)
    theta_best, cap_best = theta, cap
    temperature = sa.t_init
    trace = SaTrace()
    while temperature > sa.t_min:
        accepted = 0
        step = step0 * temperature / sa.t_init
        for _ in range(sa.inner_iters):
            e = rng.uniform(-step, step)
            cand = theta + e
            if not -half < cand < half:
                cand = theta - e
            cand = min(max(cand, -half), half)
            cap_new = capacity_objective(cand, cfg)
            if cap_new > cap or rng.random() < math.exp((cap_new - cap) / temperature):
                theta, cap = cand, cap_new
                accepted += 1
                if cap > cap_best:
                    theta_best, cap_best = theta, cap
        if accepted:
            theta, cap = theta_best, cap_best
        trace.append(temperature, theta_best, cap_best, accepted)
        temperature *= sa.cooling
    return theta_best, trace


def export_trace_csv(path, trace: SaTrace) -> None:
    """Write the annealing trace as CSV (one row per temperature level)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["outer_iter", "temperature", "best_theta_rad", "best_capacity_bps_hz", "accepted"])
        for i in range(len(trace)):
            writer.writerow(
                [
                    i,
                    repr(trace.temperatures[i]),
                    repr(trace.best_thetas[i]),
                    repr(trace.best_capacities[i]),
                    trace.accepted_counts[i],
                ]
            )
