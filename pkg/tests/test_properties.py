"""Cross-module properties on random certified self-maps."""
import numpy as np
from hypothesis import assume, given, settings, strategies as st

from ratadjoint.adjoint import FORMS, hmr_eval, preimage_fiber
from ratadjoint.builtins import random_self_map
from ratadjoint.errors import NotRegularValue
from ratadjoint.hardy import HardyPoly, adjoint_oracle, inner_product, taylor_of_rational
from ratadjoint.rational import exterior_map

seeds = st.integers(0, 2**31 - 1)
degrees = st.integers(1, 5)
disc = st.tuples(st.floats(0.0, 0.97), st.floats(0, 2 * np.pi)).map(lambda t: t[0] * np.exp(1j * t[1]))
cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
hardy = st.lists(cplx, min_size=1, max_size=12).map(HardyPoly)


def _fiber(phi, z):
    try:
        return preimage_fiber(phi.exterior, z)
    except NotRegularValue:
        assume(False)


@settings(max_examples=60, deadline=None)
@given(seeds, degrees, hardy, disc)
def test_forms_match_oracle(seed, d, f, z):
    phi = random_self_map(np.random.default_rng(seed), d)
    F = _fiber(phi, z)
    ref = adjoint_oracle(phi, f, z)
    for form in FORMS:
        v = hmr_eval(phi, f, z, form, fib=F).value
        assert abs(v - ref) <= 1e-9 * (1 + abs(ref)) * (1 + f.norm())


@settings(max_examples=40, deadline=None)
@given(seeds, degrees, hardy, hardy, cplx, disc)
def test_adjoint_is_linear(seed, d, f, g, a, z):
    phi = random_self_map(np.random.default_rng(seed), d)
    F = _fiber(phi, z)
    lhs = hmr_eval(phi, f * a + g, z, fib=F).value
    rhs = a * hmr_eval(phi, f, z, fib=F).value + hmr_eval(phi, g, z, fib=F).value
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs) + abs(rhs))


@settings(max_examples=25, deadline=None)
@given(seeds, degrees, st.integers(0, 6), st.integers(0, 6))
def test_adjoint_pairing_on_monomials(seed, d, n, m):
    """<C_phi^* z^n, z^m> = <z^n, phi^m> via Taylor coefficients of the oracle output."""
    phi = random_self_map(np.random.default_rng(seed), d)
    f = HardyPoly.monomial(n)
    # C_phi^* f is analytic; recover its m-th coefficient from values on a small circle
    r, K = 0.5, 64
    zs = r * np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.array([adjoint_oracle(phi, f, z) for z in zs])
    coeff_m = np.mean(vals * np.exp(-2j * np.pi * m * np.arange(K) / K)) / r**m
    t = taylor_of_rational(phi, n).coeffs
    pm = np.array([1.0 + 0j])
    for _ in range(m):
        pm = np.convolve(pm, t)[: n + 1]
    assert abs(coeff_m - inner_product(f, HardyPoly(pm))) < 1e-8


@settings(max_examples=40, deadline=None)
@given(seeds, degrees)
def test_exterior_involution(seed, d):
    phi = random_self_map(np.random.default_rng(seed), d)
    assert exterior_map(exterior_map(phi)).equals(phi, atol=1e-12)
