"""Outer regularity, Blaschke detection, boundary contacts and decomposition reports.

Compactness of a composition factor C_sigma is judged by the geometric test
sup|sigma| < 1 over the closed disc (computed on a boundary grid), not by any
operator-theoretic computation. Sup estimates are grid values and carry the
grid size in the report.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .builtins import random_blaschke
from .config import DEFAULT_TOL, Tolerances
from .continuation import BranchAtlas, branch_atlas, continue_branch, _fiber_at
from .errors import RatAdjointError
from .rational import INF, RationalMap, critical_data, ext_modulus, rho, roots


class MapClass(str, enum.Enum):
    STRONGLY_OUTER_REGULAR = "strongly_outer_regular"
    OUTER_REGULAR = "outer_regular"
    NOT_OUTER_REGULAR = "not_outer_regular"

    @property
    def is_outer_regular(self) -> bool:
        return self is not MapClass.NOT_OUTER_REGULAR


ALL_OF_BOUNDARY = "all_of_boundary"


def location_tag(w, margin: float) -> str:
    if w is INF:
        return "infinity"
    r = abs(w)
    if r < 1 - margin:
        return "U"
    if r <= 1 + margin:
        return "boundary"
    return "U_e"


def _boundary_modulus(phi: RationalMap, n: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n) / n
    return theta, np.abs(phi(np.exp(1j * theta)))


def is_finite_blaschke(phi: RationalMap, tol: Tolerances = DEFAULT_TOL) -> bool:
    """|phi| = 1 on the circle and zeros are the reflections of the poles."""
    d = phi.degree
    if d < 1 or phi.num.degree != d:
        return False
    _, mod = _boundary_modulus(phi, tol.boundary_grid)
    if np.max(np.abs(mod - 1.0)) > tol.blaschke_tol:
        return False
    zs = list(roots(phi.num, tol).roots)
    n_zero_needed = d - max(phi.den.degree, 0)
    zero_like = [z for z in zs if abs(z) < tol.reflection_match_tol]
    if len(zero_like) < n_zero_needed:
        return False
    for z in zero_like[:n_zero_needed]:
        zs.remove(z)
    if phi.den.degree >= 1:
        targets = [rho(complex(p)) for p in roots(phi.den, tol).roots]
        for t in targets:
            if not zs:
                return False
            dist = [abs(z - t) for z in zs]
            k = int(np.argmin(dist))
            if dist[k] > tol.reflection_match_tol * max(1.0, abs(t)):
                return False
            zs.pop(k)
    return not zs


def boundary_contacts(phi: RationalMap, tol: Tolerances = DEFAULT_TOL):
    """Points of the unit circle where |phi| reaches 1.

    Returns ``ALL_OF_BOUNDARY`` for finite Blaschke products, else a tuple of
    polished contact points sorted by argument in [0, 2 pi).
    """
    if is_finite_blaschke(phi, tol):
        return ALL_OF_BOUNDARY
    n = tol.sup_grid
    theta, mod = _boundary_modulus(phi, n)
    left, right = np.roll(mod, 1), np.roll(mod, -1)
    cand = np.nonzero((mod >= left) & (mod >= right) & (mod > 1 - 1e-3))[0]
    h = 2 * np.pi / n
    found: list[float] = []
    for k in cand:
        res = minimize_scalar(
            lambda t: -abs(phi(np.exp(1j * t))),
            bounds=(theta[k] - h, theta[k] + h),
            method="bounded",
            options={"xatol": 1e-13},
        )
        t, val = float(res.x), abs(phi(np.exp(1j * float(res.x))))
        if val <= mod[k]:
            t, val = float(theta[k]), float(mod[k])
        if val >= 1 - tol.contact_tol:
            t = t % (2 * np.pi)
            if all(min(abs(t - s), 2 * np.pi - abs(t - s)) > 1e-6 for s in found):
                found.append(t)
    found.sort()
    pts = []
    for t in found:
        z = np.exp(1j * t)
        # snap to exact real/imaginary axes when the angle is that close
        if abs(z.imag) < 1e-12:
            z = complex(np.sign(z.real), 0.0)
        elif abs(z.real) < 1e-12:
            z = complex(0.0, np.sign(z.imag))
        pts.append(complex(z))
    return tuple(pts)


@dataclass(frozen=True)
class RegularityReport:
    map_class: MapClass
    critical_values_inside: tuple
    critical_values_outside_or_boundary: tuple
    phi_at_infinity: object
    phi_at_infinity_location: str
    phi_at_zero: complex
    is_blaschke: bool
    boundary_contacts: object  # tuple of points or ALL_OF_BOUNDARY
    critical_points: tuple = ()
    indeterminate: tuple = ()
    diagnostics: tuple = ()

    @property
    def n_boundary_contacts(self):
        return None if self.boundary_contacts == ALL_OF_BOUNDARY else len(self.boundary_contacts)

    def as_dict(self) -> dict:
        from .serialize import cjson
        bc = self.boundary_contacts
        return {
            "class": self.map_class.value,
            "critical_values_inside": [cjson(v) for v in self.critical_values_inside],
            "critical_values_outside_or_boundary": [cjson(v) for v in self.critical_values_outside_or_boundary],
            "critical_points": [cjson(v) for v in self.critical_points],
            "phi_at_infinity": cjson(self.phi_at_infinity),
            "phi_at_infinity_location": self.phi_at_infinity_location,
            "phi_at_zero": cjson(self.phi_at_zero),
            "is_blaschke": self.is_blaschke,
            "boundary_contacts": bc if bc == ALL_OF_BOUNDARY else [cjson(z) for z in bc],
            "boundary_contact_count": self.n_boundary_contacts,
            "indeterminate": [cjson(v) for v in self.indeterminate],
            "diagnostics": list(self.diagnostics),
        }


def classify(phi: RationalMap, tol: Tolerances = DEFAULT_TOL) -> RegularityReport:
    cd = critical_data(phi, tol)
    m = tol.class_margin
    inside, outside, indet, diag = [], [], [], []
    for v, wit in zip(cd.critical_values, cd.witnesses):
        r = ext_modulus(v)
        if r < 1 - m:
            inside.append(v)
        else:
            outside.append(v)
            if abs(r - 1) <= m:
                indet.append(v)
                diag.append(f"critical value {v} lies within {m:g} of the unit circle (indeterminate)")
            else:
                diag.append(f"critical value {v} (from critical point {wit[0]}) lies outside U")
    a = phi.at_infinity
    loc = location_tag(a, m)
    if loc == "boundary":
        diag.append("phi(inf) lies on the unit circle")
    outer = not outside
    strong = outer and loc == "U"
    cls = MapClass.STRONGLY_OUTER_REGULAR if strong else MapClass.OUTER_REGULAR if outer else MapClass.NOT_OUTER_REGULAR
    blaschke = is_finite_blaschke(phi, tol)
    contacts = ALL_OF_BOUNDARY if blaschke else boundary_contacts(phi, tol)
    return RegularityReport(
        map_class=cls,
        critical_values_inside=tuple(inside),
        critical_values_outside_or_boundary=tuple(outside),
        phi_at_infinity=a,
        phi_at_infinity_location=loc,
        phi_at_zero=complex(phi.at_zero),
        is_blaschke=blaschke,
        boundary_contacts=contacts,
        critical_points=cd.critical_points,
        indeterminate=tuple(indet),
        diagnostics=tuple(diag),
    )


# ---------------------------------------------------------------------------
# decomposition reports

FORMS = ("bs_form", "weighted_form")


@dataclass(frozen=True)
class SummandRecord:
    label: int
    sup_sigma: float
    min_sigma: float
    sup_weight: float
    weight_bounded: bool
    composition_compact: bool

    def as_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and not np.isfinite(v) else v) for k, v in self.__dict__.items()}


@dataclass(frozen=True)
class DecompositionReport:
    form: str
    map_class: MapClass
    lambda_descriptor: dict
    summands: tuple[SummandRecord, ...]
    legitimate: bool
    atlas_radius: float
    atlas_grid: int
    atlas_monodromy: tuple[int, ...]
    min_interbranch_distance: float
    non_compact_labels: tuple[int, ...]
    conclusion: str = ""
    diagnostics: tuple = ()

    def as_dict(self) -> dict:
        return {
            "form": self.form,
            "class": self.map_class.value,
            "lambda": self.lambda_descriptor,
            "summands": [s.as_dict() for s in self.summands],
            "legitimate": self.legitimate,
            "atlas": {
                "radius": self.atlas_radius,
                "grid": self.atlas_grid,
                "monodromy": list(self.atlas_monodromy),
                "min_interbranch_distance": self.min_interbranch_distance,
            },
            "non_compact_labels": list(self.non_compact_labels),
            "conclusion": self.conclusion,
            "diagnostics": list(self.diagnostics),
        }


def atlas_for(phi: RationalMap, report: RegularityReport | None = None,
              tol: Tolerances = DEFAULT_TOL) -> BranchAtlas:
    """Boundary atlas of the branches of phi_e^{-1}.

    For outer regular maps the branches are holomorphic across the unit
    circle, so the atlas sits on |z| = 1 itself and includes the images of the
    boundary contacts. Otherwise it sits on |z| = 1 - atlas_inset, nudged off
    any critical value of phi_e.
    """
    report = report or classify(phi, tol)
    phi_e = phi.exterior
    crit_e = [rho(v) for v in critical_data(phi, tol).critical_values]
    crit_e = [abs(c) for c in crit_e if c is not INF]
    extra = ()
    if report.map_class.is_outer_regular:
        radius = 1.0
        if report.boundary_contacts != ALL_OF_BOUNDARY:
            extra = tuple(complex(phi(z)) for z in report.boundary_contacts)
    else:
        radius = 1.0 - tol.atlas_inset
        for _ in range(8):
            if all(abs(r - radius) > 1e-5 for r in crit_e):
                break
            radius -= 0.37 * tol.atlas_inset
    return branch_atlas(phi_e, radius, tol.sup_grid, tol, extra_z=extra)


def _values_at(phi: RationalMap, atlas: BranchAtlas, z: complex, tol: Tolerances) -> np.ndarray:
    """Branch values at z (label order), continued radially from the atlas node at the same angle."""
    k = int(np.argmin(np.abs(np.angle(atlas.z * np.conj(z))))) if z != 0 else 0
    start = atlas.z[k]
    base = _fiber_at(phi.exterior, start, tol)
    # relabel the base to match the atlas ordering at node k
    D = np.abs(atlas.points[k][:, None] - base.points[None, :])
    order = np.argmin(D, axis=1)
    base = type(base)(base.z, base.points[order], base.deriv_at_points[order], tuple(range(order.size)), base.margin)
    if abs(z - start) < 1e-15:
        return base.points
    path = start + (z - start) * np.linspace(0, 1, 65)
    return continue_branch(phi.exterior, base, path, tol).points


def decomposition_report(
    phi: RationalMap,
    form: str,
    tol: Tolerances = DEFAULT_TOL,
    *,
    report: RegularityReport | None = None,
    atlas: BranchAtlas | None = None,
) -> DecompositionReport:
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    report = report or classify(phi, tol)
    atlas = atlas or atlas_for(phi, report, tol)
    cls = report.map_class
    diag = []
    a = phi.at_infinity
    if form == "bs_form":
        lam = {"term": "Lambda_0", "kernel_point": phi.at_zero, "bounded": True}
        legit = cls.is_outer_regular
    else:
        lam = {"term": "Lambda_inf", "kernel_point": a, "bounded": location_tag(a, tol.class_margin) == "U"}
        legit = cls is MapClass.STRONGLY_OUTER_REGULAR
    holomorphic = cls.is_outer_regular and atlas.monodromy_trivial
    if not atlas.monodromy_trivial:
        diag.append("branches are not single-valued on the disc (nontrivial monodromy around the atlas)")

    # labels whose branch vanishes at 1/conj(phi(inf)) inside the closed disc
    zero_labels: set[int] = set()
    if form == "weighted_form" and holomorphic:
        z0 = 0j if a is INF else (None if a == 0 else 1.0 / np.conj(a))
        if z0 is not None and abs(z0) <= 1 + tol.class_margin:
            try:
                vals = _values_at(phi, atlas, z0, tol)
                zero_labels = {int(np.argmin(np.abs(vals)))}
                diag.append(f"branch {min(zero_labels)} vanishes at z = {complex(z0):.6g}; its weight has a pole")
            except RatAdjointError as exc:
                diag.append(f"could not locate vanishing branch: {exc}")

    P, SP, Z = atlas.points, atlas.sigma_prime, atlas.z[:, None]
    summands = []
    d = P.shape[1]
    for j in range(d):
        s, sp = P[:, j], SP[:, j]
        sup_s = float(np.max(np.abs(s)))
        min_s = float(np.min(np.abs(s)))
        h = np.abs(Z[:, 0] * sp)
        if form == "bs_form":
            sup_w = float(np.max(h))
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                g = h / np.abs(s)
            sup_w = float(np.max(g)) if min_s > tol.derivative_floor else np.inf
            if j in zero_labels:
                sup_w = np.inf
        bounded = holomorphic and np.isfinite(sup_w) and j not in zero_labels
        if form == "weighted_form":
            bounded = bounded and min_s > tol.compact_margin
        compact = holomorphic and sup_s < 1 - tol.compact_margin
        summands.append(SummandRecord(j, sup_s, min_s, sup_w, bool(bounded), bool(compact)))

    non_compact = tuple(r.label for r in summands if not r.composition_compact)
    conclusion = ""
    nc = report.n_boundary_contacts
    if cls.is_outer_regular and nc == 1 and len(non_compact) == 1:
        j = non_compact[0]
        if form == "weighted_form" and cls is MapClass.STRONGLY_OUTER_REGULAR:
            conclusion = f"C_phi^* = compact + M_g C_sigma with sigma = branch {j}, g = z sigma'/sigma"
        elif form == "bs_form":
            conclusion = f"C_phi^* = compact + M_h C_sigma B with sigma = branch {j}, h = z sigma'"
    return DecompositionReport(
        form=form,
        map_class=cls,
        lambda_descriptor=lam,
        summands=tuple(summands),
        legitimate=bool(legit),
        atlas_radius=atlas.radius,
        atlas_grid=int(atlas.z.size),
        atlas_monodromy=atlas.loop_permutation,
        min_interbranch_distance=atlas.min_interbranch_distance(),
        non_compact_labels=non_compact,
        conclusion=conclusion,
        diagnostics=tuple(diag),
    )


@dataclass(frozen=True)
class BlaschkeCheckSummary:
    trials: int
    passed: int
    failures: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


def blaschke_never_outer_regular_check(seed: int, trials: int, tol: Tolerances = DEFAULT_TOL) -> BlaschkeCheckSummary:
    """Random Blaschke products of degree 2..5 must all classify as not outer regular."""
    rng = np.random.default_rng(seed)
    passed, failures = 0, []
    for t in range(trials):
        deg = int(rng.integers(2, 6))
        B = random_blaschke(rng, deg)
        rep = classify(B, tol)
        if rep.map_class is MapClass.NOT_OUTER_REGULAR:
            passed += 1
        else:
            failures.append({"trial": t, "degree": deg, "class": rep.map_class.value,
                             "critical_values": list(rep.critical_values_inside)})
    return BlaschkeCheckSummary(trials, passed, tuple(failures))
