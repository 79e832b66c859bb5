"""
의사스핀 연산자 대수 / 교환 계층 테스트
"""

import math

import numpy as np
import pytest

from nopa_bell_simulation.core.exceptions import InvalidParameterError, TruncationError
from nopa_bell_simulation.core.fock_space import SparseOperator, TruncatedFockSpace
from nopa_bell_simulation.operators.pseudospin import (
    SpinAxis,
    SpinFamily,
    build_spin,
    commutator,
    verify_hierarchy,
    verify_spin_algebra,
)


@pytest.mark.parametrize("d", [1, 2, 4, 8])
def test_spin_algebra_binary_groups(d):
    report = verify_spin_algebra(d, TruncatedFockSpace(16))
    assert report.passed, report.failed
    assert report.max_residual <= 1e-12


def test_spin_algebra_non_power_group():
    """d = 3, M = 12 (2d | M)"""
    assert verify_spin_algebra(3, TruncatedFockSpace(12)).passed


def test_partial_block_rejected():
    with pytest.raises(TruncationError):
        SpinFamily(3, TruncatedFockSpace(16))
    with pytest.raises(TruncationError):
        build_spin('x', 16, TruncatedFockSpace(16))


def test_d1_matches_pauli_matrices():
    space = TruncatedFockSpace(2)
    np.testing.assert_array_equal(build_spin('x', 1, space).to_dense(), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(build_spin('y', 1, space).to_dense(), [[0, -1j], [1j, 0]])
    np.testing.assert_array_equal(build_spin('z', 1, space).to_dense(), [[1, 0], [0, -1]])


def test_z_signs_follow_groups():
    z = build_spin('z', 2, TruncatedFockSpace(8)).to_dense().diagonal().real
    np.testing.assert_array_equal(z, [1, 1, -1, -1, 1, 1, -1, -1])


def test_theta_axis():
    space = TruncatedFockSpace(8)
    assert build_spin(SpinAxis.theta(0.0), 2, space).equals(build_spin('z', 2, space))
    assert build_spin(SpinAxis.theta(math.pi / 2), 2, space).equals(build_spin('x', 2, space), atol=1e-15)


def test_plus_minus_adjoint():
    space = TruncatedFockSpace(8)
    assert build_spin('minus', 2, space).equals(build_spin('plus', 2, space).adjoint())


def test_commuting_hierarchy():
    """j ≠ k 인 모든 축 조합 교환 (레벨 0..2 → 27 쌍)"""
    report = verify_hierarchy(2, TruncatedFockSpace(8))
    assert report.pairs_checked == 27
    assert report.passed
    assert report.nonzero_pairs == []


def test_hierarchy_needs_enough_levels():
    with pytest.raises(TruncationError):
        verify_hierarchy(3, TruncatedFockSpace(8))


def test_non_power_groups_do_not_commute():
    """[s_{x,2}, s_{x,3}] ≠ 0 (M = 24)"""
    space = TruncatedFockSpace(24)
    assert not commutator(build_spin('x', 2, space), build_spin('x', 3, space)).is_zero()


def test_same_level_anticommutes():
    space = TruncatedFockSpace(8)
    x, y = build_spin('x', 2, space), build_spin('y', 2, space)
    assert (x @ y + y @ x).is_zero()
    assert (commutator(x, y) - build_spin('z', 2, space) * 2j).is_zero()


def test_invalid_axis_and_group():
    with pytest.raises(ValueError):
        SpinAxis.parse('w')
    with pytest.raises(InvalidParameterError):
        build_spin('x', 0, TruncatedFockSpace(4))


def test_identity_check():
    space = TruncatedFockSpace(4)
    x = build_spin('x', 1, space)
    assert (x @ x).equals(SparseOperator.identity(4))


def test_commuting_hierarchy_four_levels():
    """M = 32, 레벨 0..3"""
    report = verify_hierarchy(3, TruncatedFockSpace(32))
    assert report.pairs_checked == 54
    assert report.max_residual == 0.0


def test_hierarchy_requires_divisible_dimension():
    """M = 24: 레벨 0..2 는 가능, 레벨 3 (2·8 ∤ 24) 은 사전 거부"""
    space = TruncatedFockSpace(24)
    assert verify_hierarchy(2, space).passed
    with pytest.raises(TruncationError, match='나누지 않습니다'):
        verify_hierarchy(3, space)


@pytest.mark.parametrize("d", [1, 2, 4, 8])
def test_spin_operators_are_hermitian(d):
    space = TruncatedFockSpace(16)
    for axis in ('x', 'y', 'z', SpinAxis.theta(0.9), SpinAxis.theta(-2.4)):
        assert build_spin(axis, d, space).is_hermitian(atol=1e-15)


@pytest.mark.parametrize("d", [1, 2, 4])
def test_theta_spectrum_is_balanced(d):
    """s_{θ,d} 고유값 ±1, 각각 M/2 중복"""
    space = TruncatedFockSpace(16)
    for theta in np.linspace(0.0, 2 * math.pi, 8, endpoint=False):
        eigenvalues = np.sort(build_spin(SpinAxis.theta(theta), d, space).eigenvalues().real)
        np.testing.assert_allclose(eigenvalues, np.repeat([-1.0, 1.0], 8), atol=1e-12)
