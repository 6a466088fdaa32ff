"""Acceptance criteria, one test per criterion."""
import numpy as np

from conftest import ALL_MAPS, cached_atlas, cached_map, cached_report
from ratadjoint.adjoint import (
    FORMS,
    amusing_identity_residual,
    hmr_eval,
    hmr_eval_bs,
    hmr_eval_thm,
    kernel_partial_fractions,
    preimage_fiber,
)
from ratadjoint.builtins import ORACLE_SUITE, builtin, example_41, pole_cancel_example, random_self_map
from ratadjoint.config import DEFAULT_TOL
from ratadjoint.continuation import monodromy
from ratadjoint.errors import NotRegularValue, PoleProximity
from ratadjoint.hardy import HardyPoly, adjoint_oracle
from ratadjoint.rational import INF, critical_data, exterior_map, is_inf
from ratadjoint.regularity import MapClass, blaschke_never_outer_regular_check, decomposition_report
from ratadjoint.verify import random_disc_points, random_poly


def _random_f(rng, max_degree, exact_degree=False):
    if exact_degree:
        n = max_degree
        return HardyPoly(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
    return random_poly(rng, max_degree)


def _regular_fibers(phi, rng, n, r_max=0.99):
    out = []
    while len(out) < n:
        z = complex(random_disc_points(rng, 1, r_max)[0])
        try:
            out.append(preimage_fiber(phi.exterior, z))
        except NotRegularValue:
            continue
    return out


def test_01_z_squared_adjoint(accept, rng):
    phi = builtin("z-pow:n=2")
    fs = [_random_f(rng, 20) for _ in range(50)]
    fibers = _regular_fibers(phi, rng, 100)
    worst = 0.0
    for F in fibers:
        z = F.z
        for f in fs:
            even = f.coeffs[0::2]
            ref = complex(np.polynomial.polynomial.polyval(z, even))
            for form in FORMS:
                v = FORMS[form](phi, f, z, fib=F).value
                worst = max(worst, abs(v - ref) / abs(ref))
    accept(1, "z^2 adjoint", worst <= 1e-10, f"max rel err {worst:.2e} over 50 f x 100 z x 3 forms")


def test_02_oracle_equivalence(accept, rng):
    worst_far, worst_near, n_near, n_total = 0.0, 0.0, 0, 0
    for name in ORACLE_SUITE:
        phi = builtin(name)
        crit = critical_data(phi.exterior).values_finite()
        crit_in = crit[np.abs(crit) < 1 - 2e-3]
        fibers = _regular_fibers(phi, rng, 50)
        # a few points deliberately within 1e-3 of interior critical values
        for c in crit_in:
            for t in range(3):
                z = c + 5e-4 * np.exp(2j * np.pi * (t + rng.random()) / 3)
                fibers.append(preimage_fiber(phi.exterior, z))
        fs = [_random_f(rng, 16) for _ in range(20)]
        for F in fibers:
            near = crit.size > 0 and np.min(np.abs(crit - F.z)) < 1e-3
            for f in fs:
                oracle = adjoint_oracle(phi, f, F.z)
                for form in FORMS:
                    try:
                        v = FORMS[form](phi, f, F.z, fib=F).value
                    except PoleProximity:
                        continue
                    err = abs(v - oracle) / (1 + abs(oracle))
                    n_total += 1
                    if near:
                        n_near += 1
                        worst_near = max(worst_near, err)
                    else:
                        worst_far = max(worst_far, err)
    ok = worst_far <= 1e-9 and worst_near <= 1e-7
    accept(2, "oracle equivalence", ok,
           f"max err {worst_far:.2e} (regular), {worst_near:.2e} near critical ({n_near} of {n_total} checks)")


def test_03_value_at_zero(accept, rng):
    bad = 0
    for name in ALL_MAPS:
        phi = cached_map(name)
        for _ in range(100):
            f = _random_f(rng, 16)
            for form in ("thm", "cor", "bs", "auto"):
                if hmr_eval(phi, f, 0.0, form).value != f.coeffs[0]:
                    bad += 1
    accept(3, "value at zero", bad == 0, f"{bad} inexact values over {len(ALL_MAPS)} maps x 100 f x 4 forms")


def test_04_constant_function(accept, rng):
    one = HardyPoly([1.0])
    worst = 0.0
    for name in ALL_MAPS:
        phi = cached_map(name)
        a0 = np.conj(phi.at_zero)
        for F in _regular_fibers(phi, rng, 100):
            ref = 1.0 / (1.0 - a0 * F.z)
            v = hmr_eval(phi, one, F.z, fib=F).value
            worst = max(worst, abs(v - ref) / abs(ref))
    accept(4, "constant function", worst <= 1e-12, f"max rel err {worst:.2e}")


def test_05_pole_cancellation(accept, rng):
    phi = pole_cancel_example()
    z0 = 1.0 / np.conj(phi.at_infinity)
    assert abs(z0) < 1
    worst_pt, worst_near = 0.0, 0.0
    for _ in range(20):
        f = _random_f(rng, 12)
        v = hmr_eval_bs(phi, f, z0).value
        worst_pt = max(worst_pt, abs(v - adjoint_oracle(phi, f, z0)))
        for k in range(4):
            z = z0 + 1e-3 * np.exp(2j * np.pi * (k + rng.random()) / 4)
            t = hmr_eval_thm(phi, f, z).value
            b = hmr_eval_bs(phi, f, z).value
            worst_near = max(worst_near, abs(t - b))
    ok = worst_pt <= 1e-9 and worst_near <= 1e-8
    accept(5, "pole cancellation", ok, f"bs vs oracle at z0 {worst_pt:.2e}; thm vs bs at 1e-3 {worst_near:.2e}")


def test_06_amusing_identity(accept, rng):
    worst = 0.0
    for name in ("example-4.1", "example-4.2"):
        phi = builtin(name)
        for F in _regular_fibers(phi, rng, 50):
            worst = max(worst, amusing_identity_residual(phi, F.z, fib=F))
    accept(6, "amusing identity", worst <= 1e-10, f"max residual {worst:.2e}")


def test_07_partial_fractions(accept, rng):
    worst, maps = 0.0, 0
    for name in ALL_MAPS:
        phi = cached_map(name)
        if is_inf(phi.at_infinity):
            continue
        maps += 1
        for F in _regular_fibers(phi, rng, 20):
            if F.z == 0:
                continue
            pf = kernel_partial_fractions(phi, F.z, fib=F)
            w = random_disc_points(rng, 20, 0.99)
            exact = 1.0 / (1.0 - np.conj(F.z) * phi(w))
            worst = max(worst, float(np.max(np.abs(pf(w) - exact))))
    accept(7, "partial fractions", worst <= 1e-10, f"max residual {worst:.2e} over {maps} maps")


def test_08_critical_values(accept):
    vals = critical_data(example_41()).critical_values
    finite = sorted((complex(v) for v in vals if v is not INF), key=abs)
    ok41 = len(finite) == 2 and abs(finite[0]) <= 1e-10 and abs(finite[1] - 4 / 13) <= 1e-10
    bvals = [v for v in critical_data(builtin("blaschke-2.6")).critical_values if v is not INF]
    target = 7 + 4 * np.sqrt(3)
    err26 = min(abs(v - target) for v in bvals)
    accept(8, "critical values", ok41 and err26 <= 1e-9,
           f"4.1 -> {[round(abs(v), 12) for v in finite]}; 2.6 distance to 7+4sqrt3 {err26:.2e}")


def test_09_classification_table(accept):
    rows, problems = [], []

    def check(name, cond, what):
        if not cond:
            problems.append(f"{name}: {what}")

    for name in ("example-4.1", "example-4.2", "blaschke-2.6",
                 *(f"family-5.3:d={d}" for d in range(2, 7)),
                 *(f"z-over-a-minus-zn:a=2,n={n}" for n in (2, 3, 4))):
        phi, rep = cached_map(name), cached_report(name)
        rows.append(f"{name}={rep.map_class.value}")
        if name == "blaschke-2.6":
            check(name, rep.map_class is MapClass.NOT_OUTER_REGULAR, rep.map_class.value)
            continue
        if name == "example-4.2":
            check(name, rep.map_class is MapClass.OUTER_REGULAR, rep.map_class.value)
            atlas = cached_atlas(name)
            bs = decomposition_report(phi, "bs_form", report=rep, atlas=atlas)
            wf = decomposition_report(phi, "weighted_form", report=rep, atlas=atlas)
            check(name, bs.legitimate and not wf.legitimate, "bs legitimate / weighted not")
            continue
        check(name, rep.map_class is MapClass.STRONGLY_OUTER_REGULAR, rep.map_class.value)
        if name.startswith("family-5.3"):
            bc = rep.boundary_contacts
            check(name, len(bc) == 1 and abs(bc[0] - 1) <= 1e-8, f"contacts {bc}")
            dec = decomposition_report(phi, "bs_form", report=rep, atlas=cached_atlas(name))
            check(name, len(dec.non_compact_labels) == 1, f"non-compact {dec.non_compact_labels}")
    accept(9, "classification table", not problems, "; ".join(problems) or f"{len(rows)} maps as expected")


def test_10_blaschke_never_outer_regular(accept):
    s = blaschke_never_outer_regular_check(seed=7, trials=50)
    accept(10, "Blaschke products", s.ok, f"{s.passed}/{s.trials} not outer regular")


def test_11_fiber_containment(accept, rng):
    escaped, worst = 0, 0.0
    for name in ALL_MAPS:
        phi = cached_map(name)
        n = 0
        while n < 500:
            z = complex(random_disc_points(rng, 1, 0.999)[0])
            try:
                F = preimage_fiber(phi.exterior, z, check_disc=False)
            except NotRegularValue:
                continue
            n += 1
            m = float(np.max(np.abs(F.points)))
            worst = max(worst, m)
            escaped += m >= 1
    accept(11, "fiber containment", escaped == 0, f"max |w| = {worst:.6f} over {len(ALL_MAPS)} maps x 500 z")


def _loop_is_clear(crit, center, radius):
    return crit.size == 0 or np.min(np.abs(crit - center)) > radius * 1.2 + 1e-3


def test_12_monodromy(accept, rng):
    sq = monodromy(builtin("z-pow:n=2").exterior, 0.0, 0.5, 64)
    set_errs = [sq.set_error]
    ident = 0
    trials = 0
    names = [n for n in ALL_MAPS]
    while trials < 20:
        phi = cached_map(names[int(rng.integers(len(names)))])
        crit = critical_data(phi.exterior).values_finite()
        center = complex(random_disc_points(rng, 1, 0.8)[0])
        radius = 0.05 + 0.15 * rng.random()
        if not _loop_is_clear(crit, center, radius):
            continue
        trials += 1
        res = monodromy(phi.exterior, center, radius, 64)
        ident += res.is_identity
        set_errs.append(res.set_error)
    ok = sq.cycles == "(0 1)" and ident == 20 and max(set_errs) <= 1e-10
    accept(12, "monodromy", ok, f"z^2 -> {sq.cycles}; {ident}/20 identity; max set error {max(set_errs):.2e}")


def test_13_branch_disjointness(accept):
    dists = {name: cached_atlas(name).min_interbranch_distance() for name in ALL_MAPS}
    worst = min(dists, key=dists.get)
    accept(13, "branch disjointness", dists[worst] > DEFAULT_TOL.cluster_tol,
           f"min distance {dists[worst]:.3e} ({worst})")


def test_14_exterior_map(accept, rng):
    e = exterior_map(example_41())
    exact = (np.array_equal(e.num.coeffs, np.array([-1, -1, 3], dtype=complex))
             and np.array_equal(e.den.coeffs, np.array([0, 0, 1], dtype=complex)))
    worst = 0.0
    for k in range(50):
        phi = random_self_map(rng, 1 + k % 5)
        back = exterior_map(exterior_map(phi))
        scale = max(np.max(np.abs(phi.num.coeffs)), np.max(np.abs(phi.den.coeffs)))
        err = max(np.max(np.abs(back.num.coeffs - phi.num.coeffs)),
                  np.max(np.abs(back.den.coeffs - phi.den.coeffs))) / scale
        worst = max(worst, err)
    accept(14, "exterior map", exact and worst <= 1e-12, f"4.1 exact={exact}; involution err {worst:.2e}")
