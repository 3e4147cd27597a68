"""Rotation matrices, angle identities, element positions and distances."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oamlink import (
    ArrayGeometry,
    Pose,
    STAGE_AFTER_PITCH_YAW,
    STAGE_AFTER_ROLL,
    STAGE_INITIAL,
    alpha_from,
    default_link,
    distance,
    phi_azimuth,
    psi_from,
    rotation_matrix,
    rx_element_position,
)
from oamlink.geometry import PITCH, ROLL, YAW

# frozen from a 30-digit evaluation of arccos(cos(30deg) * cos(45deg))
ALPHA_30_45 = 0.911738290968487636358489564317
# frozen from a 30-digit evaluation of pi/2 - arccos(1/sqrt(3))
PHI_M45_45 = 0.615479708670387341067464589124

angles = st.floats(-math.pi, math.pi, allow_nan=False)
open_angles = st.floats(-1.39, 1.39)  # ~80 degrees, inside the open pi/2 domain


def test_rotation_matrix_identity_at_zero():
    assert np.allclose(rotation_matrix(PITCH, 0.0), np.eye(3), atol=0)


def test_rotation_matrix_yaw_quarter_turn():
    expected = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
    assert np.allclose(rotation_matrix(YAW, math.pi / 2), expected, atol=1e-15)


def test_rotation_matrix_roll_inverse_composition():
    theta = 0.7342
    prod = rotation_matrix(ROLL, theta) @ rotation_matrix(ROLL, -theta)
    assert np.abs(prod - np.eye(3)).max() < 1e-14


@given(st.sampled_from([PITCH, YAW, ROLL]), angles)
def test_rotation_matrix_orthogonal_unit_determinant(axis, angle):
    M = rotation_matrix(axis, angle)
    assert np.abs(M.T @ M - np.eye(3)).max() < 1e-13
    assert abs(np.linalg.det(M) - 1.0) < 1e-13


def test_rotation_matrix_bad_axis():
    with pytest.raises(ValueError):
        rotation_matrix("boresight", 0.1)


def test_alpha_from_aligned_and_single_axis():
    assert alpha_from(0.0, 0.0) == 0.0
    psi = math.radians(60)
    assert alpha_from(psi, 0.0) == pytest.approx(psi, abs=1e-15)


def test_alpha_from_frozen_value():
    assert alpha_from(math.radians(30), math.radians(45)) == pytest.approx(ALPHA_30_45, abs=1e-14)


def test_alpha_from_domain_error():
    with pytest.raises(ValueError):
        alpha_from(math.pi / 2, 0.0)


def test_psi_from_trivial_cases():
    assert psi_from(0.0, 0.0) == 0.0
    alpha = math.radians(37)
    assert psi_from(alpha, 0.0) == pytest.approx(alpha, abs=1e-15)


def test_psi_from_round_trip_spot():
    psi, gamma = math.radians(20), math.radians(35)
    assert psi_from(alpha_from(psi, gamma), gamma) == pytest.approx(psi, abs=1e-12)


def test_psi_from_domain_error():
    # tilt smaller than the yaw alone can produce
    with pytest.raises(ValueError):
        psi_from(math.radians(10), math.radians(40))


@given(open_angles, open_angles)
def test_alpha_psi_round_trip(psi, gamma):
    assert psi_from(alpha_from(psi, gamma), gamma) == pytest.approx(abs(psi), abs=1e-12)


def test_round_trip_grid():
    grid = np.radians(np.linspace(-80, 80, 100))
    for psi in grid:
        for gamma in grid:
            assert psi_from(alpha_from(psi, gamma), gamma) == pytest.approx(abs(psi), abs=1e-12)


def test_phi_azimuth_limits():
    assert phi_azimuth(0.0, math.radians(30)) == pytest.approx(math.pi / 2, abs=1e-12)
    assert phi_azimuth(1e-12, math.radians(30)) == pytest.approx(math.pi / 2, abs=1e-5)
    # vanishing pitch at positive yaw: the arccos argument drops to 0
    assert phi_azimuth(math.radians(45), 1e-14) == pytest.approx(math.pi, abs=1e-6)


def test_phi_azimuth_frozen_second_branch():
    assert phi_azimuth(math.radians(-45), math.radians(45)) == pytest.approx(PHI_M45_45, abs=1e-14)


def test_phi_azimuth_continuity_at_zero_yaw():
    # both branches approach pi/2 as gamma -> 0 for fixed positive pitch
    for psi in np.radians(np.linspace(1, 85, 100)):
        for eps in (1e-9, -1e-9):
            assert phi_azimuth(eps, psi) == pytest.approx(math.pi / 2, abs=1e-6)


def test_phi_azimuth_matches_propagation_direction():
    # azimuth of the boresight propagation direction projected onto the
    # rotated array plane, computed with generic rotation matrices
    for gamma in np.radians([-70, -31, -5, 4, 28, 66]):
        for psi in np.radians([3, 17, 44, 71]):
            M = rotation_matrix(YAW, gamma) @ rotation_matrix(PITCH, psi)
            z = np.array([0.0, 0.0, 1.0])
            expected = math.atan2(z @ M[:, 1], z @ M[:, 0])
            got = phi_azimuth(gamma, psi)
            diff = (got - expected + math.pi) % (2 * math.pi) - math.pi
            assert abs(diff) < 1e-12


def test_phi_azimuth_undefined_at_origin():
    with pytest.raises(ValueError):
        phi_azimuth(0.0, 0.0)


def test_element_angle_one_based_mapping():
    geo = ArrayGeometry(10, 1.0, initial_angle=0.25)
    assert geo.element_angle(1) == 0.25
    assert geo.element_angle(2) == pytest.approx(0.25 + 2 * math.pi / 10)
    assert np.allclose(geo.element_angles, [geo.element_angle(m) for m in range(1, 11)])
    with pytest.raises(IndexError):
        geo.element_angle(0)
    with pytest.raises(IndexError):
        geo.element_angle(11)


def test_pose_validation():
    with pytest.raises(ValueError):
        Pose(math.pi / 2, 0.0)
    with pytest.raises(ValueError):
        Pose(0.0, -math.pi / 2)
    assert Pose(0.1, -0.2, roll=2.5).alpha > 0


def test_rx_element_position_aligned():
    rx = ArrayGeometry(8, 2.0)
    pose = Pose(0.0, 0.0)
    assert np.allclose(rx_element_position(1, pose, None, STAGE_INITIAL, rx), [2.0, 0.0, 0.0])
    for m in range(1, 9):
        q = rx_element_position(m, pose, None, STAGE_INITIAL, rx)
        assert q[2] == pytest.approx(0.0, abs=1e-15)


def test_rx_element_position_matches_matrix_product():
    rx = ArrayGeometry(10, 1.4997, initial_angle=0.1)
    pose = Pose(math.radians(30), math.radians(20))
    for m in (1, 3, 7, 10):
        theta = rx.element_angle(m)
        x0 = rx.radius * np.array([math.cos(theta), math.sin(theta), 0.0])
        expected = rotation_matrix(YAW, pose.gamma) @ rotation_matrix(PITCH, pose.psi) @ x0
        got = rx_element_position(m, pose, None, STAGE_INITIAL, rx)
        assert np.abs(got - expected).max() < 1e-12


def test_rx_element_position_stages():
    rx = ArrayGeometry(10, 1.5)
    pose = Pose(math.radians(40), math.radians(25))
    residual = Pose(math.radians(0.2), math.radians(-0.1), roll=0.3)
    # residual stage equals the initial-stage formula at the residual angles
    after = rx_element_position(4, pose, residual, STAGE_AFTER_PITCH_YAW, rx)
    direct = rx_element_position(4, Pose(residual.gamma, residual.psi), None, STAGE_INITIAL, rx)
    assert np.allclose(after, direct, atol=0)
    # roll stage: generic matrix product including the boresight rotation
    theta = rx.element_angle(4)
    x0 = rx.radius * np.array([math.cos(theta), math.sin(theta), 0.0])
    expected = (
        rotation_matrix(YAW, residual.gamma)
        @ rotation_matrix(PITCH, residual.psi)
        @ rotation_matrix(ROLL, residual.roll)
        @ x0
    )
    got = rx_element_position(4, pose, residual, STAGE_AFTER_ROLL, rx)
    assert np.abs(got - expected).max() < 1e-12


def test_rx_element_position_requires_residual():
    rx = ArrayGeometry(4, 1.0)
    with pytest.raises(ValueError):
        rx_element_position(1, Pose(0, 0), None, STAGE_AFTER_PITCH_YAW, rx)
    with pytest.raises(ValueError):
        rx_element_position(1, None, None, STAGE_INITIAL, rx)
    with pytest.raises(ValueError):
        rx_element_position(1, Pose(0, 0), None, "after_warp", rx)


def test_distance_farfield_aligned_reference_element():
    cfg = default_link()
    d = distance(1, 1, Pose(0.0, 0.0), None, STAGE_INITIAL, cfg, method="farfield")
    assert d == pytest.approx(cfg.range_r - cfg.rx.radius * cfg.tx.radius / cfg.range_r, rel=1e-15)


def test_distance_farfield_error_bound_at_default_range():
    # pinned after an exhaustive oracle run: the expansion drops a uniform
    # (Rr^2 + Rt^2) / (2 r) term (~0.89 wavelengths here), giving ~2e-3
    # relative error at 450-wavelength range
    cfg = default_link()
    pose = Pose(math.radians(30), math.radians(20))
    worst = 0.0
    for m in range(1, 11):
        for n in range(1, 11):
            exact = distance(n, m, pose, None, STAGE_INITIAL, cfg, method="exact")
            far = distance(n, m, pose, None, STAGE_INITIAL, cfg, method="farfield")
            worst = max(worst, abs(exact - far) / exact)
    assert worst < 2.0e-3


def test_distance_farfield_error_decreases_with_range():
    import warnings

    pose = Pose(math.radians(30), math.radians(20))
    errs = []
    for rw in (100.0, 450.0, 1000.0):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = default_link(range_wavelengths=rw)
        worst = 0.0
        for m in range(1, 11):
            for n in range(1, 11):
                exact = distance(n, m, pose, None, STAGE_INITIAL, cfg, method="exact")
                far = distance(n, m, pose, None, STAGE_INITIAL, cfg, method="farfield")
                worst = max(worst, abs(exact - far) / exact)
        errs.append(worst)
    assert errs[0] > errs[1] > errs[2]


def test_distance_residual_stage_collapses_to_aligned():
    cfg = default_link()
    residual = Pose(0.0, 0.0)
    for m, n in ((1, 1), (3, 8), (10, 2)):
        after = distance(n, m, None, residual, STAGE_AFTER_PITCH_YAW, cfg)
        aligned = distance(n, m, Pose(0.0, 0.0), None, STAGE_INITIAL, cfg)
        assert after == pytest.approx(aligned, rel=1e-15)


def test_distance_index_errors():
    cfg = default_link()
    with pytest.raises(IndexError):
        distance(0, 1, Pose(0, 0), None, STAGE_INITIAL, cfg)
    with pytest.raises(IndexError):
        distance(1, 11, Pose(0, 0), None, STAGE_INITIAL, cfg)
