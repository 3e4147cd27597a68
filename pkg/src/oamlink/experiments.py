"""Experiment harness: key-value configs, named runs, CSV results, manifests.

Configs are flat ``key = value`` text with dotted namespaces and ``#``
comments; unknown keys are hard errors.  Every key has a default matching
the reference link (N = 10, nine modes, 20-wavelength radii at 450
wavelengths range, 8 subcarriers from 3.9982 GHz), with the angle-sweep and
roll-profile runs defaulting to 6 subcarriers as in the corresponding
workbench plots.  A run writes one CSV plus a ``manifest.txt`` that is
itself a valid config resolving to the exact same run: re-running a
manifest reproduces the CSV byte for byte.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel import channel_matrices, channel_matrix, oam_effective
from .config import LinkConfig, default_link
from .geometry import Pose, STAGE_AFTER_ROLL, STAGE_INITIAL
from .metrics import asymptotic_sir, capacity, steered_sir
from .optimizer import SaParams, capacity_profile, optimize_roll
from .pipeline import hybrid_pipeline
from .servo import ServoConfig
from .steering import ResidualPose, phases_eo
from .complexity import ComplexityParams, cost_electronic, cost_hybrid

EXPERIMENT_NAMES = (
    "sweep-yaw",
    "sweep-pitch",
    "roll-profile",
    "hybrid-compare",
    "sa-trace",
    "monotonicity",
    "complexity",
)


class ConfigError(ValueError):
    """Invalid experiment configuration (parse failure or out-of-domain value)."""


# key -> (default, type); order fixes the serialization layout.
SCHEMA: dict[str, tuple] = {
    "experiment.name": ("", str),
    "scenario.n_elements": (10, int),
    "scenario.n_subcarriers": (8, int),
    "scenario.freq_start_hz": (3.9982e9, float),
    "scenario.freq_stop_hz": (4.2387e9, float),
    "scenario.mode_min": (-4, int),
    "scenario.mode_max": (4, int),
    "scenario.radius_rx_wavelengths": (20.0, float),
    "scenario.radius_tx_wavelengths": (20.0, float),
    "scenario.range_wavelengths": (450.0, float),
    "scenario.rx_initial_angle_deg": (0.0, float),
    "scenario.tx_initial_angle_deg": (0.0, float),
    "scenario.snr_db": (20.0, float),
    "pose.gamma_deg": (60.0, float),
    "pose.psi_deg": (60.0, float),
    "pose.aoa_error_gamma_deg": (0.0, float),
    "pose.aoa_error_psi_deg": (0.0, float),
    "snr.start_db": (0.0, float),
    "snr.stop_db": (30.0, float),
    "snr.step_db": (2.0, float),
    "sweep.start_deg": (0.0, float),
    "sweep.stop_deg": (85.0, float),
    "sweep.count": (18, int),
    "roll.start_deg": (-180.0, float),
    "roll.stop_deg": (180.0, float),
    "roll.count": (1441, int),
    "sa.t_init": (100.0, float),
    "sa.t_min": (1e-3, float),
    "sa.cooling": (0.9, float),
    "sa.inner_iters": (20, int),
    "sa.step_scale_rad": (0.0, float),  # 0 = automatic (pi/N)/10
    "sa.seed": (0, int),
    "servo.period_s": (0.020, float),
    "servo.pulse_min_s": (0.001, float),
    "servo.pulse_mid_s": (0.0015, float),
    "servo.pulse_max_s": (0.002, float),
    "servo.accuracy_deg": (0.3, float),
    "monotonicity.s_coupling": (0.01, float),
    "monotonicity.start_deg": (1.0, float),
    "monotonicity.stop_deg": (89.0, float),
    "monotonicity.count": (50, int),
    "complexity.p_coarse": (4, int),
    "complexity.u_coarse": (4, int),
    "complexity.p_fine": (8, int),
    "complexity.u_fine": (8, int),
    "complexity.u_data": (9, int),
    "complexity.theta_star_deg": (10.0, float),
    "complexity.n_min": (8, int),
    "complexity.n_max": (32, int),
    "complexity.p_min": (4, int),
    "complexity.p_max": (16, int),
}

# Subcarrier counts for the plots that use the narrower grid.
_EXPERIMENT_OVERRIDES = {
    "sweep-yaw": {"scenario.n_subcarriers": 6},
    "sweep-pitch": {"scenario.n_subcarriers": 6},
    "roll-profile": {"scenario.n_subcarriers": 6},
}

_POSITIVE_INT_KEYS = (
    "scenario.n_elements",
    "scenario.n_subcarriers",
    "sweep.count",
    "roll.count",
    "sa.inner_iters",
    "monotonicity.count",
    "complexity.p_coarse",
    "complexity.u_coarse",
    "complexity.p_fine",
    "complexity.u_fine",
    "complexity.u_data",
    "complexity.n_min",
    "complexity.n_max",
    "complexity.p_min",
    "complexity.p_max",
)


def parse_config(text: str) -> dict:
    """Parse flat key-value config text into an overrides dict.

    Raises ConfigError with the line number on malformed lines and for
    unknown keys or out-of-domain values.
    """
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        _, typ = SCHEMA[key]
        try:
            parsed = typ(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from None
        overrides[key] = parsed
    _validate_domains(overrides)
    return overrides


def _validate_domains(overrides: dict) -> None:
    for key in _POSITIVE_INT_KEYS:
        if key in overrides and overrides[key] < 1:
            raise ConfigError(f"key {key!r} must be >= 1, got {overrides[key]}")
    for key in ("scenario.radius_rx_wavelengths", "scenario.radius_tx_wavelengths", "scenario.range_wavelengths"):
        if key in overrides and not overrides[key] > 0:
            raise ConfigError(f"key {key!r} must be positive, got {overrides[key]}")
    for key in ("pose.gamma_deg", "pose.psi_deg"):
        if key in overrides and not abs(overrides[key]) < 90.0:
            raise ConfigError(f"key {key!r} must satisfy |angle| < 90 degrees, got {overrides[key]}")
    name = overrides.get("experiment.name", "")
    if name and name not in EXPERIMENT_NAMES:
        raise ConfigError(f"key 'experiment.name': unknown experiment {name!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """A named experiment with its fully resolved configuration."""

    name: str
    values: dict

    @classmethod
    def resolve(cls, name: str, overrides: dict | None = None) -> "ExperimentSpec":
        if name not in EXPERIMENT_NAMES:
            raise ConfigError(f"unknown experiment {name!r}")
        overrides = dict(overrides or {})
        cfg_name = overrides.pop("experiment.name", "")
        if cfg_name and cfg_name != name:
            raise ConfigError(
                f"config names experiment {cfg_name!r} but {name!r} was requested"
            )
        values = {key: default for key, (default, _) in SCHEMA.items()}
        values.update(_EXPERIMENT_OVERRIDES.get(name, {}))
        values.update(overrides)
        values["experiment.name"] = name
        spec = cls(name, values)
        spec.link()  # surface domain errors (mode count vs N, ...) at resolve time
        return spec

    def __getitem__(self, key: str):
        return self.values[key]

    def link(self) -> LinkConfig:
        try:
            return default_link(
                n_elements=self["scenario.n_elements"],
                n_subcarriers=self["scenario.n_subcarriers"],
                modes=tuple(range(self["scenario.mode_min"], self["scenario.mode_max"] + 1)),
                radius_wavelengths=self["scenario.radius_rx_wavelengths"],
                range_wavelengths=self["scenario.range_wavelengths"],
                snr_db=self["scenario.snr_db"],
                rx_initial_angle=math.radians(self["scenario.rx_initial_angle_deg"]),
                tx_initial_angle=math.radians(self["scenario.tx_initial_angle_deg"]),
                freq_start_hz=self["scenario.freq_start_hz"],
                freq_stop_hz=self["scenario.freq_stop_hz"],
            )
        except ValueError as exc:
            raise ConfigError(f"scenario: {exc}") from None

    def pose(self) -> Pose:
        return Pose(math.radians(self["pose.gamma_deg"]), math.radians(self["pose.psi_deg"]))

    def sa_params(self, seed: int | None = None) -> SaParams:
        step = self["sa.step_scale_rad"]
        return SaParams(
            t_init=self["sa.t_init"],
            t_min=self["sa.t_min"],
            cooling=self["sa.cooling"],
            inner_iters=self["sa.inner_iters"],
            step_scale=None if step == 0.0 else step,
            rng_seed=self["sa.seed"] if seed is None else seed,
        )

    def servo_config(self) -> ServoConfig:
        return ServoConfig(
            period_k=self["servo.period_s"],
            pulse_min=self["servo.pulse_min_s"],
            pulse_mid=self["servo.pulse_mid_s"],
            pulse_max=self["servo.pulse_max_s"],
            accuracy_nu=math.radians(self["servo.accuracy_deg"]),
        )

    def snr_grid_db(self) -> np.ndarray:
        return np.arange(self["snr.start_db"], self["snr.stop_db"] + 1e-9, self["snr.step_db"])

    def sweep_grid_deg(self) -> np.ndarray:
        start, stop = self["sweep.start_deg"], self["sweep.stop_deg"]
        if not (-90.0 < start < 90.0 and -90.0 < stop < 90.0 and start < stop):
            raise ConfigError("sweep bounds must satisfy -90 < start < stop < 90 degrees")
        return np.linspace(start, stop, self["sweep.count"])


def serialize_config(spec: ExperimentSpec) -> str:
    """Canonical text form of a resolved spec (parses back to the same spec)."""
    lines = []
    for key in SCHEMA:
        value = spec.values[key]
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _electronic_capacities(pose_angles, cfg: LinkConfig, rhos) -> dict:
    """Capacity of the electronically steered link per scheme at one pose.

    Returns {'none': [...], 'electronic': [...]} with one value per rho.
    """
    gamma, psi = pose_angles
    pose = Pose(gamma, psi)
    misaligned = gamma != 0.0 or psi != 0.0
    plain, steered = [], []
    for p in range(cfg.n_subcarriers):
        H = channel_matrix(p, pose, None, STAGE_INITIAL, cfg)
        plain.append(oam_effective(H, cfg.modes))
        steer = phases_eo(p, psi, gamma, cfg) if misaligned else None
        steered.append(oam_effective(H, cfg.modes, steer))
    return {
        "none": [capacity(plain, rho) for rho in rhos],
        "electronic": [capacity(steered, rho) for rho in rhos],
    }


def _run_angle_sweep(spec: ExperimentSpec, workers: int, axis: str):
    cfg = spec.link()
    angles_deg = spec.sweep_grid_deg()
    snrs_db = spec.snr_grid_db()
    rhos = [10.0 ** (s / 10.0) for s in snrs_db]
    aligned = _electronic_capacities((0.0, 0.0), cfg, rhos)["none"]

    def point(angle_deg: float):
        angle = math.radians(angle_deg)
        pose_angles = (angle, 0.0) if axis == "yaw" else (0.0, angle)
        return _electronic_capacities(pose_angles, cfg, rhos)

    results = _map_points(point, angles_deg, workers)
    header = ["angle_deg", "snr_db", "scheme", "capacity_bps_hz"]
    rows = []
    for angle_deg, caps in zip(angles_deg, results):
        for j, snr_db in enumerate(snrs_db):
            rows.append([_fmt(angle_deg), _fmt(snr_db), "aligned", _fmt(aligned[j])])
            rows.append([_fmt(angle_deg), _fmt(snr_db), "none", _fmt(caps["none"][j])])
            rows.append([_fmt(angle_deg), _fmt(snr_db), "electronic", _fmt(caps["electronic"][j])])
    return header, rows


def _run_roll_profile(spec: ExperimentSpec, workers: int):
    cfg = spec.link()
    thetas_deg = np.linspace(spec["roll.start_deg"], spec["roll.stop_deg"], spec["roll.count"])
    thetas = np.radians(thetas_deg)
    caps = capacity_profile(thetas, cfg)
    header = ["theta_deg", "theta_rad", "capacity_bps_hz"]
    rows = [[_fmt(d), _fmt(r), _fmt(c)] for d, r, c in zip(thetas_deg, thetas, caps)]
    return header, rows


def _run_hybrid_compare(spec: ExperimentSpec, workers: int):
    cfg = spec.link()
    servo = spec.servo_config()
    sa = spec.sa_params()
    # equal yaw and pitch swept together from alignment up to the config pose
    angles_deg = np.linspace(0.0, max(spec["pose.gamma_deg"], spec["pose.psi_deg"]), 7)
    snrs_db = spec.snr_grid_db()
    rhos = [10.0 ** (s / 10.0) for s in snrs_db]
    # The roll objective does not depend on the pose: anneal once, reuse.
    theta_star, _ = optimize_roll(cfg, sa)
    aoa_error = (
        math.radians(spec["pose.aoa_error_gamma_deg"]),
        math.radians(spec["pose.aoa_error_psi_deg"]),
    )

    def point(angle_deg: float):
        angle = math.radians(angle_deg)
        pose = Pose(angle, angle)
        result = hybrid_pipeline(pose, cfg, sa, servo, aoa_error=aoa_error, theta_star=theta_star)
        hybrid = [capacity(result.effective, rho) for rho in rhos]
        electronic = _electronic_capacities((angle, angle), cfg, rhos)["electronic"]
        rolled = channel_matrices(
            None, ResidualPose(0.0, 0.0).as_pose(roll=result.theta_star), STAGE_AFTER_ROLL, cfg
        )
        perfect_eff = [oam_effective(H, cfg.modes) for H in rolled]
        perfect = [capacity(perfect_eff, rho) for rho in rhos]
        return hybrid, electronic, perfect

    results = _map_points(point, angles_deg, workers)
    header = ["angle_deg", "snr_db", "scheme", "capacity_bps_hz"]
    rows = []
    for angle_deg, (hybrid, electronic, perfect) in zip(angles_deg, results):
        for j, snr_db in enumerate(snrs_db):
            rows.append([_fmt(angle_deg), _fmt(snr_db), "perfect", _fmt(perfect[j])])
            rows.append([_fmt(angle_deg), _fmt(snr_db), "hybrid", _fmt(hybrid[j])])
            rows.append([_fmt(angle_deg), _fmt(snr_db), "electronic", _fmt(electronic[j])])
    return header, rows


def _run_sa_trace(spec: ExperimentSpec, workers: int):
    cfg = spec.link()
    theta_star, trace = optimize_roll(cfg, spec.sa_params())
    header = ["outer_iter", "temperature", "best_theta_rad", "best_capacity_bps_hz", "accepted"]
    rows = [
        [
            str(i),
            _fmt(trace.temperatures[i]),
            _fmt(trace.best_thetas[i]),
            _fmt(trace.best_capacities[i]),
            str(trace.accepted_counts[i]),
        ]
        for i in range(len(trace))
    ]
    return header, rows


def _run_monotonicity(spec: ExperimentSpec, workers: int):
    cfg = spec.link()
    s_target = spec["monotonicity.s_coupling"]
    grid_deg = np.linspace(
        spec["monotonicity.start_deg"], spec["monotonicity.stop_deg"], spec["monotonicity.count"]
    )

    def point(args):
        axis, u, angle_deg = args
        angle = math.radians(angle_deg)
        exact = steered_sir(axis, cfg.modes, u, angle, s_target, cfg.n_elements)
        asym = asymptotic_sir(cfg.modes, u, cfg.n_elements, angle, s_target)
        return exact, asym

    tasks = [
        (axis, u, angle_deg)
        for axis in ("yaw", "pitch")
        for u in range(cfg.n_modes)
        for angle_deg in grid_deg
    ]
    results = _map_points(point, tasks, workers)
    header = ["axis", "mode", "angle_deg", "sir_linear", "sir_asymptotic"]
    rows = [
        [axis, str(cfg.modes[u]), _fmt(angle_deg), _fmt(exact), _fmt(asym)]
        for (axis, u, angle_deg), (exact, asym) in zip(tasks, results)
    ]
    return header, rows


def _run_complexity(spec: ExperimentSpec, workers: int):
    params = ComplexityParams(
        p_data=spec["scenario.n_subcarriers"],
        u_data=spec["complexity.u_data"],
        p_coarse=spec["complexity.p_coarse"],
        u_coarse=spec["complexity.u_coarse"],
        p_fine=spec["complexity.p_fine"],
        u_fine=spec["complexity.u_fine"],
        n_elements=spec["scenario.n_elements"],
        inner_iters=spec["sa.inner_iters"],
        cooling=spec["sa.cooling"],
        t_init=spec["sa.t_init"],
        t_min=spec["sa.t_min"],
        gamma_cmd=math.radians(spec["pose.gamma_deg"]),
        psi_cmd=math.radians(spec["pose.psi_deg"]),
        theta_star=math.radians(spec["complexity.theta_star_deg"]),
        nu=math.radians(spec["servo.accuracy_deg"]),
    )
    header = ["n_elements", "p_data", "cost_hybrid", "cost_electronic", "ratio"]
    rows = []
    for n in range(spec["complexity.n_min"], spec["complexity.n_max"] + 1):
        for p in range(spec["complexity.p_min"], spec["complexity.p_max"] + 1):
            swept = replace(params, n_elements=n, p_data=p)
            hy, el = cost_hybrid(swept).total, cost_electronic(swept).total
            rows.append([str(n), str(p), _fmt(hy), _fmt(el), _fmt(hy / el)])
    return header, rows


def _map_points(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


_RUNNERS = {
    "sweep-yaw": lambda spec, workers: _run_angle_sweep(spec, workers, "yaw"),
    "sweep-pitch": lambda spec, workers: _run_angle_sweep(spec, workers, "pitch"),
    "roll-profile": _run_roll_profile,
    "hybrid-compare": _run_hybrid_compare,
    "sa-trace": _run_sa_trace,
    "monotonicity": _run_monotonicity,
    "complexity": _run_complexity,
}


def run(
    spec: ExperimentSpec,
    out_dir,
    seed: int | None = None,
    workers: int = 1,
) -> tuple[Path, Path]:
    """Execute an experiment; write ``<name>.csv`` and ``manifest.txt``.

    ``seed`` overrides the config's sa.seed.  Returns (csv_path,
    manifest_path).  Outputs are deterministic for a given resolved spec.
    """
    if seed is not None:
        spec = ExperimentSpec(spec.name, {**spec.values, "sa.seed": int(seed)})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    header, rows = _RUNNERS[spec.name](spec, workers)
    wall = time.monotonic() - started

    csv_path = out / f"{spec.name}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    manifest_path = out / "manifest.txt"
    with open(manifest_path, "w") as fh:
        fh.write(f"# oamlink {__version__} experiment manifest\n")
        fh.write(f"# wall_time_s = {wall:.3f}\n")
        fh.write(f"# rows = {len(rows)}\n")
        fh.write(serialize_config(spec))
    return csv_path, manifest_path
