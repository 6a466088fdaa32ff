import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratadjoint.errors import DegreeZero
from ratadjoint.poly import ComplexPoly, add, derivative, gcd_approx, mul, peval, roots, sub

SQ3 = np.sqrt(3.0)

cplx = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
coeff_lists = st.lists(cplx, min_size=1, max_size=8)


def test_eval_constant_term():
    assert peval(ComplexPoly([1, 2, 3]), 0) == 1


def test_eval_at_blaschke_critical_value():
    delta = ComplexPoly([1, -14, 1])
    assert abs(delta(7 + 4 * SQ3)) < 1e-12


@given(coeff_lists, cplx)
def test_eval_matches_power_sum(c, z):
    p = ComplexPoly(c)
    ref = sum(a * z**k for k, a in enumerate(c))
    assert abs(p(z) - ref) <= 1e-9 * (1 + sum(abs(a) * abs(z) ** k for k, a in enumerate(c)))


def test_vectorized_eval():
    p = ComplexPoly([1, 0, 1])
    assert np.allclose(p(np.array([0, 1j, 2])), [1, 0, 5])


def test_mul_basics():
    z = ComplexPoly.monomial(1)
    assert mul(z, z) == ComplexPoly([0, 0, 1])
    assert mul(ComplexPoly([1, 2]), ComplexPoly([])).is_zero
    assert mul(ComplexPoly([1, -2]), ComplexPoly([2, -1])) == ComplexPoly([2, -5, 2])


def test_zero_poly_degree():
    assert ComplexPoly([0, 0]).degree == -1
    assert ComplexPoly([]).is_zero


@given(coeff_lists, coeff_lists)
def test_add_sub_inverse(a, b):
    p, q = ComplexPoly(a), ComplexPoly(b)
    assert sub(add(p, q), q).allclose(p, atol=1e-9)


def test_derivative():
    assert derivative(ComplexPoly([5])).is_zero
    assert derivative(ComplexPoly([1, 2, 3])) == ComplexPoly([2, 6])


def test_derivative_of_f_d():
    f3 = ComplexPoly([1, 2, 3])  # 1 + 2z + 3z^2
    assert derivative(f3) == ComplexPoly([2, 6])


def test_roots_quadratic():
    r = roots(ComplexPoly([1, -14, 1]))
    assert np.allclose(r.roots, [7 - 4 * SQ3, 7 + 4 * SQ3], atol=1e-12)
    assert not r.has_multiple


def test_roots_double_zero():
    r = roots(ComplexPoly([0, 0, 1]))
    assert r.cluster_sizes() == [2]
    assert r.has_multiple
    assert np.all(r.roots == 0)


def test_roots_of_constant_raise():
    with pytest.raises(DegreeZero):
        roots(ComplexPoly([3]))


@pytest.mark.parametrize("d", range(2, 7))
def test_roots_of_g_d(d):
    g = ComplexPoly([1] * d + [-d])  # (1 - z) f_d(z)
    r = roots(g)
    assert np.all(np.abs(r.roots) <= 1 + 1e-9)
    assert np.max(r.residuals) <= 1e-10
    near_one = np.abs(r.roots - 1) < 1e-8
    assert near_one.sum() == 1
    assert not r.has_multiple


@settings(max_examples=60, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=7, unique=True))
def test_roots_recover_planted(rts):
    rts = np.array(rts)
    # keep the planted roots well separated so the assignment is unambiguous
    if len(rts) > 1 and np.min(np.abs(rts[:, None] - rts[None, :]) + np.eye(len(rts))) < 1e-2:
        return
    found = roots(ComplexPoly.from_roots(rts)).roots
    for r in rts:
        assert np.min(np.abs(found - r)) <= 1e-6 * max(1, abs(r))


def test_gcd_trivial():
    assert gcd_approx(ComplexPoly([-1, 0, 1]), ComplexPoly([-1, 1])).allclose(ComplexPoly([-1, 1]))
    assert gcd_approx(ComplexPoly([1, 2, 3]), ComplexPoly([1])) == ComplexPoly([1])


def test_gcd_planted_factor():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = complex(rng.normal(), rng.normal())
        p = ComplexPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
        q = ComplexPoly(rng.normal(size=3) + 1j * rng.normal(size=3))
        lin = ComplexPoly([-a, 1])
        g = gcd_approx(p * lin, q * lin)
        assert g.degree == 1
        assert abs(g.coeffs[0] + a) < 1e-8
