import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratadjoint.builtins import example_41, random_self_map
from ratadjoint.errors import DomainViolation, PoleAtOrigin
from ratadjoint.hardy import (
    HardyPoly,
    adjoint_oracle,
    adjoint_via_matrix,
    backward_shift,
    forward_shift,
    inner_product,
    kernel_coeffs,
    series_divide,
    taylor_of_rational,
)
from ratadjoint.rational import RationalMap

cplx = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
hardy = st.lists(cplx, min_size=1, max_size=10).map(HardyPoly)
disc = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * np.pi)).map(lambda t: t[0] * np.exp(1j * t[1]))


def test_orthonormal_monomials():
    for n in range(4):
        for m in range(4):
            assert inner_product(HardyPoly.monomial(n), HardyPoly.monomial(m)) == (n == m)


@given(hardy, hardy)
def test_conjugate_symmetry(f, g):
    assert abs(inner_product(f, g) - np.conj(inner_product(g, f))) < 1e-12


@given(hardy, disc)
def test_reproducing_property(f, z):
    K = kernel_coeffs(z, len(f) - 1)
    assert abs(inner_product(f, K) - f(z)) <= 1e-10 * (1 + f.norm())


def test_kernel_coeffs():
    assert np.array_equal(kernel_coeffs(0, 3).coeffs, [1, 0, 0, 0])
    assert np.allclose(kernel_coeffs(0.5, 3).coeffs, [1, 0.5, 0.25, 0.125])
    with pytest.raises(DomainViolation):
        kernel_coeffs(1.0, 3)


def test_backward_shift():
    assert backward_shift(HardyPoly([1])).degree == -1
    assert np.array_equal(backward_shift(HardyPoly([0, 2, 0, 1])).coeffs, [2, 0, 1])


@given(hardy, hardy)
def test_shift_adjointness(f, g):
    assert abs(inner_product(forward_shift(f), g) - inner_product(f, backward_shift(g))) < 1e-10


def test_taylor():
    assert np.allclose(taylor_of_rational(RationalMap.from_coeffs([1], [1, -1]), 3).coeffs, [1, 1, 1, 1])
    assert np.allclose(taylor_of_rational(example_41(), 2).coeffs, [1 / 3, 1 / 9, 4 / 27], atol=1e-15)
    with pytest.raises(PoleAtOrigin):
        series_divide(np.array([1.0]), np.array([0.0, 1.0]), 3)


def test_taylor_reconstruction():
    rng = np.random.default_rng(1)
    phi = random_self_map(rng, 3)
    N = 12
    t = taylor_of_rational(phi, N).coeffs
    back = np.convolve(t, phi.den.coeffs)[: N + 1]
    ref = np.zeros(N + 1, dtype=complex)
    ref[: phi.num.coeffs.size] = phi.num.coeffs
    assert np.allclose(back, ref, atol=1e-12)


@given(disc)
def test_oracle_z_squared(z):
    phi = RationalMap.from_coeffs([0, 0, 1], [1])
    assert abs(adjoint_oracle(phi, HardyPoly([0, 0, 1, 0, 1]), z) - (z * z + z)) < 1e-13


@settings(max_examples=30, deadline=None)
@given(hardy, st.integers(1, 4), st.integers(0, 10**6))
def test_oracle_value_at_zero_and_constant(f, d, seed):
    phi = random_self_map(np.random.default_rng(seed), d)
    assert adjoint_oracle(phi, f, 0) == f.coeffs[0]
    z = 0.3 - 0.4j
    ref = 1 / (1 - np.conj(phi.at_zero) * z)
    assert abs(adjoint_oracle(phi, HardyPoly([1]), z) - ref) < 1e-13


def test_matrix_path_agrees():
    rng = np.random.default_rng(3)
    phi = example_41()
    f = HardyPoly(rng.normal(size=8) + 1j * rng.normal(size=8))
    for z in (0.3, -0.5j, 0.6 + 0.2j):
        assert abs(adjoint_via_matrix(phi, f, z, 200) - adjoint_oracle(phi, f, z)) < 1e-10
