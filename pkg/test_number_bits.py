"""
비트 연산자, 절단 수 연산자, 고유벡터, 양자 XOR 테스트
"""

import numpy as np
import pytest

from nopa_bell_simulation.core.exceptions import DimensionMismatchError, InvalidParameterError, TruncationError
from nopa_bell_simulation.core.fock_space import SparseOperator, TruncatedFockSpace, apply, nopa_coefficients
from nopa_bell_simulation.operators.number_bits import (
    NumberBasis,
    bit_marginal,
    bit_operator,
    hermitian_part,
    is_bit_valued,
    normalized_eigenvector,
    number_spectrum,
    popcount,
    product_decomposition_check,
    quantum_xor,
    truncated_number_operator,
    vacuum_xbit_block_probability,
    xbasis_eigenvector,
    ybasis_eigenvector,
)
from nopa_bell_simulation.operators.pseudospin import build_spin


def test_popcount():
    values = np.array([0, 1, 2, 3, 7, 255, 2 ** 40 + 1])
    np.testing.assert_array_equal(popcount(values), [0, 1, 1, 2, 3, 8, 2])


def test_z_bit_operators():
    space = TruncatedFockSpace(4)
    np.testing.assert_array_equal(bit_operator('z', 0, space).to_dense().diagonal().real, [0, 1, 0, 1])
    np.testing.assert_array_equal(bit_operator('z', 1, space).to_dense().diagonal().real, [0, 0, 1, 1])
    with pytest.raises(TruncationError):
        bit_operator('z', 2, space)


def test_bit_operators_are_projectors():
    space = TruncatedFockSpace(16)
    for basis in ('z', 'x', 'y', NumberBasis.theta(0.3)):
        for k in range(4):
            assert is_bit_valued(bit_operator(basis, k, space))


def test_number_operator_z_diagonal():
    """n_{z,d} 대각 = n mod 2^d"""
    space = TruncatedFockSpace(16)
    for d in (1, 2, 3, 4):
        diagonal = truncated_number_operator('z', d, space).to_dense().diagonal().real
        np.testing.assert_array_equal(diagonal, np.arange(16) % 2 ** d)
    with pytest.raises(TruncationError):
        truncated_number_operator('z', 5, space)


@pytest.mark.parametrize("basis", ['x', 'y'])
def test_number_operator_spectrum(basis):
    space = TruncatedFockSpace(8)
    eigenvalues = np.sort(truncated_number_operator(basis, 3, space).eigenvalues().real)
    np.testing.assert_allclose(eigenvalues, np.arange(8), atol=1e-10)


def test_xbasis_eigenvector_examples():
    space = TruncatedFockSpace(4)
    np.testing.assert_array_equal(xbasis_eigenvector(1, space).coefficients, [1, -1, 1, -1])
    np.testing.assert_array_equal(xbasis_eigenvector(3, space).coefficients, [1, -1, -1, 1])


def test_ybasis_eigenvector_example():
    space = TruncatedFockSpace(4)
    np.testing.assert_array_equal(ybasis_eigenvector(0, space).coefficients, [1, 1j, 1j, -1])


@pytest.mark.parametrize("basis,builder", [('x', xbasis_eigenvector), ('y', ybasis_eigenvector)])
def test_eigenvalue_relation(basis, builder):
    """s_{basis,2^k} |m⟩ = (−1)^{bit_k m} |m⟩"""
    space = TruncatedFockSpace(8)
    for k in range(3):
        spin = build_spin(basis, 2 ** k, space)
        for m in range(8):
            v = builder(m, space).to_state()
            sign = -1 if (m >> k) & 1 else 1
            np.testing.assert_array_equal(apply(spin, v).amplitudes, sign * v.amplitudes)


def test_normalized_eigenvector():
    v = normalized_eigenvector(5, 'x', TruncatedFockSpace(8))
    assert v.norm() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        normalized_eigenvector(0, 'z', TruncatedFockSpace(8))
    with pytest.raises(InvalidParameterError):
        xbasis_eigenvector(8, TruncatedFockSpace(8))


def test_quantum_xor_is_not_commutative():
    """b_z ⊕ b_x − b_x ⊕ b_z = −i s_y"""
    space = TruncatedFockSpace(2)
    bz, bx = bit_operator('z', 0, space), bit_operator('x', 0, space)
    difference = quantum_xor(bz, bx) - quantum_xor(bx, bz)
    assert difference.equals(build_spin('y', 1, space) * (-1j), atol=1e-15)
    assert hermitian_part(quantum_xor(bz, bx)).is_hermitian(atol=1e-15)


def test_quantum_xor_commuting_bits():
    """같은 기저에서는 고전 XOR"""
    space = TruncatedFockSpace(4)
    b0, b1 = bit_operator('z', 0, space), bit_operator('z', 1, space)
    diagonal = quantum_xor(b0, b1).to_dense().diagonal().real
    np.testing.assert_array_equal(diagonal, [0, 1, 1, 0])


def test_quantum_xor_rejects_non_bits():
    space = TruncatedFockSpace(4)
    with pytest.raises(InvalidParameterError):
        quantum_xor(SparseOperator.identity(4) * 2, bit_operator('z', 0, space))
    with pytest.raises(DimensionMismatchError):
        quantum_xor(bit_operator('z', 0, space), bit_operator('z', 0, TruncatedFockSpace(8)))


def test_product_decomposition():
    report = product_decomposition_check(TruncatedFockSpace(8))
    assert report.residual == 0.0
    assert report.passed
    with pytest.raises(TruncationError):
        product_decomposition_check(TruncatedFockSpace(2))


def test_vacuum_block_probability():
    space = TruncatedFockSpace(16)
    assert vacuum_xbit_block_probability(0, 1, space) == pytest.approx(0.5, abs=1e-12)
    assert vacuum_xbit_block_probability(0, 2, space) == pytest.approx(0.25, abs=1e-12)
    assert vacuum_xbit_block_probability(1, 2, space) == pytest.approx(0.25, abs=1e-12)


def test_bit_marginal_x_is_half():
    """NOPA 상태의 x-비트 주변 확률 1/2"""
    state = nopa_coefficients(1.0, TruncatedFockSpace(16))
    for k in range(3):
        assert bit_marginal(state, 'x', k) == pytest.approx(0.5, abs=1e-12)
    assert bit_marginal(state, 'z', 0) == pytest.approx(
        float(np.sum(state.probabilities()[1::2])), abs=1e-12,
    )


@pytest.mark.parametrize("basis,builder", [('x', xbasis_eigenvector), ('y', ybasis_eigenvector)])
def test_eigenvalue_relation_five_bits(basis, builder):
    space = TruncatedFockSpace.from_bit_depth(5)
    for k in range(5):
        spin = build_spin(basis, 2 ** k, space)
        for m in range(32):
            v = builder(m, space).to_state()
            sign = -1 if (m >> k) & 1 else 1
            assert np.array_equal(apply(spin, v).amplitudes, sign * v.amplitudes)


def test_vacuum_block_probability_below_envelope():
    space = TruncatedFockSpace.from_bit_depth(6)
    for k in range(3):
        for L in range(1, 4):
            p = vacuum_xbit_block_probability(k, L, space)
            assert p == pytest.approx(2.0 ** -L, abs=1e-12)
            assert p < (2.0 / 3.0) ** L


def test_number_spectrum_degeneracy():
    """M = 16, d = 2: 각 고유값 0..3 이 4 번씩"""
    space = TruncatedFockSpace(16)
    for basis in ('z', 'x', 'y'):
        np.testing.assert_allclose(number_spectrum(basis, 2, space), np.repeat(np.arange(4), 4), atol=1e-10)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_bit_cross_term_factorizes(r):
    """⟨B₀ B'₁⟩ ≈ ⟨B₀⟩⟨B'₁⟩: 한 비트 값은 다른 비트에 대한 정보를 주지 않음"""
    report = product_decomposition_check(TruncatedFockSpace(16), r=r)
    assert report.cross_term == pytest.approx(report.marginal_product, abs=1e-6)
    assert report.independence_gap <= 1e-6
    assert 0.0 < report.cross_term < 1.0
