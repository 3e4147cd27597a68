"""SINR/SIR/capacity metrics and the small-coupling SIR analysis."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oamlink import (
    ModePair,
    Pose,
    STAGE_INITIAL,
    asymptotic_sir,
    capacity,
    channel_matrix,
    check_monotonicity,
    default_link,
    oam_effective,
    phases_eo,
    sinr,
    sir,
    sir_asymptotic,
)
from oamlink.channel import OamMatrix
from oamlink.metrics import scaled_coupling_link, steered_mode_entry, steered_sir

MODES = tuple(range(-4, 5))


def electronic_effective(pose: Pose, cfg, p: int = 0):
    H = channel_matrix(p, pose, None, STAGE_INITIAL, cfg)
    return oam_effective(H, cfg.modes, phases_eo(p, pose.psi, pose.gamma, cfg))


def test_sinr_diagonal_matrix():
    eff = OamMatrix(np.diag([2.0 + 0j, 0.5 + 0j]))
    assert sinr(eff, 0, 10.0) == pytest.approx(10.0 * 4.0)
    assert sinr(eff, 1, 10.0) == pytest.approx(10.0 * 0.25)


def test_sinr_equal_entries_two_modes():
    h = 0.7 - 0.2j
    eff = OamMatrix(np.array([[h, h], [h, h]]))
    rho = 31.0
    expected = rho * abs(h) ** 2 / (rho * abs(h) ** 2 + 1.0)
    assert sinr(eff, 0, rho) == pytest.approx(expected)


def test_sinr_validation():
    eff = OamMatrix(np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        sinr(eff, 0, 0.0)
    with pytest.raises(IndexError):
        sinr(eff, 2, 1.0)


def test_sir_diagonal_is_infinite():
    assert sir(OamMatrix(np.diag([1.0 + 0j, 2.0 + 0j])), 0) == math.inf


def test_sinr_approaches_sir_at_high_snr():
    cfg = default_link()
    eff = electronic_effective(Pose(math.radians(20), 0.0), cfg)
    s = sir(eff, 4)
    high = sinr(eff, 4, 1e9)
    assert abs(high - s) / s < 1e-6


@settings(max_examples=20)
@given(st.integers(0, 2**31 - 1))
def test_sinr_sir_limit_identity(seed):
    rng = np.random.default_rng(seed)
    eff = OamMatrix(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    for rho in (1e6, 1e9):
        for u in range(4):
            row = np.abs(eff.entries[u]) ** 2
            interference = row.sum() - row[u]
            lhs = sinr(eff, u, rho) * (1.0 + 1.0 / (rho * interference))
            assert lhs == pytest.approx(sir(eff, u), rel=1e-6)


def test_sir_decreases_between_small_yaw_points():
    cfg = default_link()
    a = sir(electronic_effective(Pose(math.radians(5), 0.0), cfg), 5)
    b = sir(electronic_effective(Pose(math.radians(10), 0.0), cfg), 5)
    assert math.isfinite(a) and a > b


def test_capacity_single_mode_unit_sinr():
    eff = OamMatrix(np.array([[1.0 + 0j]]))
    assert capacity([eff], 1.0) == pytest.approx(1.0)


def test_capacity_increases_when_interference_removed():
    cfg = default_link()
    eff = electronic_effective(Pose(math.radians(30), math.radians(10)), cfg)
    cleaned = OamMatrix(np.diag(np.diag(eff.entries)))
    assert capacity([cleaned], 100.0) > capacity([eff], 100.0)


@settings(max_examples=20)
@given(st.integers(0, 2**31 - 1))
def test_capacity_invariant_under_row_phase_rotation(seed):
    rng = np.random.default_rng(seed)
    eff = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    phases = np.exp(1j * rng.uniform(-math.pi, math.pi, 5))
    rotated = OamMatrix(phases[:, None] * eff)
    assert capacity([OamMatrix(eff)], 50.0) == pytest.approx(capacity([rotated], 50.0), rel=1e-12)


def test_aligned_reference_capacity_regression():
    # the perfect-alignment reference curve shared by the angle-sweep and
    # hybrid-compare experiments, frozen from the first oracle run
    expected = {
        8: {0: 22.229520862, 10: 48.512208216, 20: 77.635489479, 30: 107.408443116},
        6: {0: 22.219890137, 10: 48.478942717, 20: 77.563309636, 30: 107.322267650},
    }
    for n_sub, curve in expected.items():
        cfg = default_link(n_subcarriers=n_sub)
        effs = [
            oam_effective(channel_matrix(p, Pose(0.0, 0.0), None, STAGE_INITIAL, cfg), cfg.modes)
            for p in range(n_sub)
        ]
        for snr_db, value in curve.items():
            assert capacity(effs, 10 ** (snr_db / 10)) == pytest.approx(value, abs=1e-8)


def test_mode_pair_orders():
    pair = ModePair.from_modes(MODES, u=8, v=4, n_elements=10)  # l_u=4, l_v=0
    assert pair.t == 4
    assert pair.tau == 4
    assert pair.tau_bar == 2
    assert pair.chi == 2
    odd = ModePair.from_modes(MODES, u=5, v=4, n_elements=10)  # l_u=1, l_v=0
    assert odd.t == 1
    assert odd.tau_bar == 0.5
    for p in (pair, odd):
        assert 0 <= p.tau <= 5 and 0 <= p.tau_bar <= 5 and 0 <= p.chi <= 5


def test_sir_asymptotic_zero_interference_at_zero_yaw():
    pair = ModePair.from_modes(MODES, u=5, v=3, n_elements=10)  # t=2
    signal, interference = sir_asymptotic(pair, 0.0, 0.01)
    assert interference == 0.0
    assert signal > 0.0


def test_sir_asymptotic_odd_difference_vanishes():
    pair = ModePair.from_modes(MODES, u=5, v=4, n_elements=10)  # t=1
    _, interference = sir_asymptotic(pair, math.radians(40), 0.01)
    assert interference == 0.0


def test_sir_asymptotic_signal_linear_specialization():
    # tau=1 mode: signal term reduces to eta_scale * S * (1 + cos g) / 4
    pair = ModePair.from_modes(MODES, u=5, v=3, n_elements=10)
    gamma = math.radians(37)
    signal, _ = sir_asymptotic(pair, gamma, 0.01, eta_scale=2.5)
    assert signal == pytest.approx(2.5 * 0.01 * (1 + math.cos(gamma)) / 4.0, rel=1e-12)


def test_steered_entry_matches_double_sum_at_moderate_coupling():
    cfg = default_link()
    for s_target in (1.0, 5.585053606381855):
        scaled = scaled_coupling_link(cfg, s_target)
        for axis in ("yaw", "pitch"):
            angle = math.radians(33)
            pose = Pose(angle, 0.0) if axis == "yaw" else Pose(0.0, angle)
            eff = electronic_effective(pose, scaled).entries
            scale = scaled.eta(0) * scaled.n_elements**2
            for u in (0, 4, 5):
                for v in (2, 4, 8):
                    bessel = steered_mode_entry(axis, scaled.modes, u, v, angle, s_target, 10)
                    assert abs(bessel * scale - eff[u, v]) < 1e-10


def test_exact_sir_converges_to_asymptotic():
    ratios = []
    for s in (0.1, 0.01, 0.001):
        worst = 0.0
        for u in range(9):
            for gdeg in (10, 30, 60):
                g = math.radians(gdeg)
                exact = steered_sir("yaw", MODES, u, g, s, 10)
                asym = asymptotic_sir(MODES, u, 10, g, s)
                worst = max(worst, abs(exact / asym - 1.0))
        ratios.append(worst)
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.05


def test_check_monotonicity_small_coupling_all_modes():
    cfg = default_link()
    grid = np.radians(np.linspace(1, 89, 50))
    for axis in ("yaw", "pitch"):
        for u in range(9):
            ok, worst = check_monotonicity(axis, u, 0.01, grid, cfg)
            assert ok, f"{axis} mode index {u}: worst increase {worst}"


def test_check_monotonicity_single_point_vacuous():
    cfg = default_link()
    ok, worst = check_monotonicity("yaw", 4, 0.01, [math.radians(10)], cfg)
    assert ok and worst == 0.0


def test_check_monotonicity_reports_violation_at_full_coupling():
    # at the reference coupling (~5.6) per-mode SIR is not monotone; the
    # checker must report, not mask, the violation
    cfg = default_link()
    grid = np.radians(np.linspace(1, 89, 50))
    ok, worst = check_monotonicity("yaw", 4, 5.585053606381855, grid, cfg)
    assert not ok and worst > 1.0


def test_check_monotonicity_validates_input():
    cfg = default_link()
    with pytest.raises(ValueError):
        check_monotonicity("roll", 0, 0.01, [0.1, 0.2], cfg)
    with pytest.raises(ValueError):
        check_monotonicity("yaw", 0, 0.01, [0.2, 0.1], cfg)


def test_asymptotic_sir_monotone_decreasing():
    grid = np.radians(np.linspace(1, 89, 50))
    for u in range(9):
        vals = [asymptotic_sir(MODES, u, 10, g, 0.01) for g in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))
