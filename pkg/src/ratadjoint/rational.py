"""Rational self-maps of the Riemann sphere.

Points of the sphere are plain complex numbers plus the sentinel ``INF``.
A :class:`RationalMap` is always stored reduced, with a monic denominator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DegreeZero, IndeterminateValue, ZeroDenominator
from .poly import ComplexPoly, RootSet, cluster_points, divide_out, gcd_approx, roots


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ExtPoint = Union[complex, _Infinity]


def is_inf(w) -> bool:
    return w is INF


def rho(w: ExtPoint) -> ExtPoint:
    """Inversion in the unit circle, w -> 1/conj(w), with 0 <-> INF."""
    if w is INF:
        return 0j
    w = complex(w)
    if w == 0:
        return INF
    return 1.0 / w.conjugate()


def chordal(a: ExtPoint, b: ExtPoint) -> float:
    """Chordal distance on the Riemann sphere (diameter 1 normalization)."""
    if a is INF and b is INF:
        return 0.0
    if a is INF:
        a, b = b, a
    if b is INF:
        return 1.0 / np.sqrt(1.0 + abs(a) ** 2)
    return abs(a - b) / (np.sqrt(1.0 + abs(a) ** 2) * np.sqrt(1.0 + abs(b) ** 2))


def ext_modulus(w: ExtPoint) -> float:
    return np.inf if w is INF else abs(w)


@dataclass(frozen=True, eq=False)
class RationalMap:
    """Reduced quotient ``num/den`` with ``den`` monic.

    Build through :func:`reduce` (or :meth:`from_coeffs`); the constructor
    itself trusts its inputs.
    """

    num: ComplexPoly
    den: ComplexPoly
    name: str = field(default="", compare=False)

    @classmethod
    def from_coeffs(cls, num: Sequence[complex], den: Sequence[complex], name: str = "",
                    tol: Tolerances = DEFAULT_TOL) -> "RationalMap":
        return reduce(ComplexPoly(num), ComplexPoly(den), tol, name=name)

    @cached_property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    @cached_property
    def wronskian(self) -> ComplexPoly:
        """num' den - num den' (numerator of the derivative, unreduced)."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    @cached_property
    def at_infinity(self) -> ExtPoint:
        return eval_ext(self, INF)

    @cached_property
    def at_zero(self) -> ExtPoint:
        return eval_ext(self, 0j)

    @cached_property
    def exterior(self) -> "RationalMap":
        return exterior_map(self)

    def __call__(self, w):
        """Vectorized finite evaluation num(w)/den(w); poles give inf/nan."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(self.num(w)) / np.asarray(self.den(w))
        return complex(out) if np.ndim(out) == 0 else out

    def deriv(self, w):
        """Vectorized derivative values (num'den - num den')/den^2."""
        d = np.asarray(self.den(w))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(self.wronskian(w)) / (d * d)
        return complex(out) if np.ndim(out) == 0 else out

    def equals(self, other: "RationalMap", atol: float = 1e-12) -> bool:
        return self.num.allclose(other.num, atol) and self.den.allclose(other.den, atol)

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        num = [complex(c) for c in np.round(self.num.coeffs, 12)]
        den = [complex(c) for c in np.round(self.den.coeffs, 12)]
        return f"RationalMap{tag}(num={num}, den={den})"


def reduce(num: ComplexPoly, den: ComplexPoly, tol: Tolerances = DEFAULT_TOL, name: str = "") -> RationalMap:
    """Cancel approximate common factors and make the denominator monic."""
    num = ComplexPoly(num.coeffs) if isinstance(num, ComplexPoly) else ComplexPoly(num)
    den = ComplexPoly(den.coeffs) if isinstance(den, ComplexPoly) else ComplexPoly(den)
    if den.is_zero:
        raise ZeroDenominator("denominator is identically zero")
    if num.is_zero:
        return RationalMap(ComplexPoly(), ComplexPoly([1.0]), name)
    if num.degree >= 1 and den.degree >= 1:
        g = gcd_approx(num, den, tol)
        if g.degree >= 1:
            common = roots(g, tol).roots
            num = divide_out(num, common)
            den = divide_out(den, common)
    lead = den.leading
    if lead != 1:
        num = ComplexPoly(num.coeffs / lead)
        den = ComplexPoly(den.coeffs / lead)
    return RationalMap(num, den, name)


def eval_ext(R: RationalMap, w: ExtPoint, tol: Tolerances = DEFAULT_TOL) -> ExtPoint:
    """Evaluate on the sphere, returning ``INF`` at poles and handling w = INF."""
    if w is INF:
        dn, dd = R.num.degree, R.den.degree
        if dn > dd:
            return INF
        if dn < dd:
            return 0j
        return R.num.leading / R.den.leading
    w = complex(w)
    n, d = R.num(w), R.den(w)
    fn = tol.normalization_floor * max(float(R.num.scale_at(w)), 1e-300)
    fd = tol.normalization_floor * float(R.den.scale_at(w))
    if abs(d) <= fd:
        if abs(n) <= fn and not R.num.is_zero:
            raise IndeterminateValue(f"num and den both vanish at {w!r}")
        if R.num.is_zero:
            return 0j
        return INF
    return n / d


def exterior_map(phi: RationalMap, tol: Tolerances = DEFAULT_TOL) -> RationalMap:
    """rho o phi o rho, built on coefficients.

    With phi = p/q padded to length d+1 the result is rev(conj q)/rev(conj p).
    """
    if phi.num.is_zero:
        raise ZeroDenominator("the zero map has no exterior map")
    n = phi.degree + 1
    p = np.conj(phi.num.padded(n))[::-1]
    q = np.conj(phi.den.padded(n))[::-1]
    name = f"{phi.name}_e" if phi.name else ""
    return reduce(ComplexPoly(q), ComplexPoly(p), tol, name=name)


def derivative_map(R: RationalMap, tol: Tolerances = DEFAULT_TOL) -> RationalMap:
    return reduce(R.wronskian, R.den * R.den, tol)


# ---------------------------------------------------------------------------
# fibers, regularity, critical structure

@dataclass(frozen=True)
class ExtFiber:
    """Preimage of one point, counted with multiplicity (``len(points) == degree``)."""

    value: ExtPoint
    points: tuple
    finite: RootSet | None
    n_infinite: int

    @property
    def finite_points(self) -> np.ndarray:
        return np.array([p for p in self.points if p is not INF], dtype=complex)

    def __len__(self):
        return len(self.points)


def fiber(R: RationalMap, z: ExtPoint, tol: Tolerances = DEFAULT_TOL, *,
          initial: Sequence[complex] | None = None) -> ExtFiber:
    d = R.degree
    if d < 1:
        raise DegreeZero("fiber of a constant map")
    if z is INF:
        P = R.den
    else:
        P = R.num - complex(z) * R.den
    if P.degree >= 1:
        rs = roots(P, tol, initial=initial)
        pts = [complex(r) for r in rs.roots]
    else:
        rs, pts = None, []
    n_inf = d - len(pts)
    return ExtFiber(z, tuple(pts) + (INF,) * n_inf, rs, n_inf)


def fiber_margin(points: Sequence[ExtPoint]) -> float:
    """Minimum pairwise chordal distance."""
    m = np.inf
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            m = min(m, chordal(points[i], points[j]))
    return float(m)


def spherical_derivative(R: RationalMap, w: complex) -> float:
    """|R'(w)| (1+|w|^2) / (1+|R(w)|^2), finite w, finite R(w)."""
    v = R(w)
    if not np.isfinite(v):
        return np.inf
    return abs(R.deriv(w)) * (1.0 + abs(w) ** 2) / (1.0 + abs(v) ** 2)


@dataclass(frozen=True)
class Regularity:
    regular: bool
    margin: float
    min_derivative: float
    fiber: ExtFiber

    def __bool__(self):
        return self.regular


def is_regular_value(R: RationalMap, z: ExtPoint, tol: Tolerances = DEFAULT_TOL) -> Regularity:
    """True iff the fiber has ``degree`` chordally distinct points, none critical."""
    F = fiber(R, z, tol)
    margin = fiber_margin(F.points) if len(F.points) > 1 else np.inf
    dmin = np.inf
    for w in F.points:
        if w is INF:
            continue
        if z is INF:
            continue
        dmin = min(dmin, spherical_derivative(R, w))
    ok = margin > tol.cluster_tol and dmin > tol.derivative_floor and F.n_infinite <= 1
    return Regularity(bool(ok), float(margin), float(dmin), F)


@dataclass(frozen=True)
class CriticalData:
    critical_points: tuple
    critical_values: tuple
    witnesses: tuple  # witnesses[k] = critical points mapping to critical_values[k]

    def values_finite(self) -> np.ndarray:
        return np.array([v for v in self.critical_values if v is not INF], dtype=complex)


def infinity_multiplicity(R: RationalMap) -> int:
    """Multiplicity of INF in the fiber over R(INF)."""
    c = R.at_infinity
    if c is INF:
        return R.num.degree - R.den.degree
    return R.degree - (R.num - c * R.den).degree if not (R.num - c * R.den).is_zero else R.degree


def critical_data(R: RationalMap, tol: Tolerances = DEFAULT_TOL) -> CriticalData:
    if R.degree < 1:
        raise DegreeZero("constant map has no critical structure")
    pts: list = []
    W = R.wronskian
    if W.degree >= 1:
        rs = roots(W, tol)
        pts.extend(complex(r) for r in rs.distinct_roots())
    if infinity_multiplicity(R) > 1:
        pts.append(INF)
    vals = [eval_ext(R, p, tol) for p in pts]
    # deduplicate values chordally
    groups: list[list[int]] = []
    for i, v in enumerate(vals):
        for g in groups:
            if chordal(vals[g[0]], v) < tol.cluster_tol:
                g.append(i)
                break
        else:
            groups.append([i])
    values = tuple(vals[g[0]] for g in groups)
    witnesses = tuple(tuple(pts[i] for i in g) for g in groups)
    return CriticalData(tuple(pts), values, witnesses)


@dataclass(frozen=True)
class SelfMapCertificate:
    ok: bool
    max_modulus: float
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_self_map_of_disc(phi: RationalMap, tol: Tolerances = DEFAULT_TOL) -> SelfMapCertificate:
    """Membership in Rat(U) at grid resolution (maximum principle on the circle)."""
    if phi.den.degree >= 1:
        poles = roots(phi.den, tol).roots
        inside = poles[np.abs(poles) <= 1.0 + tol.cluster_tol]
        if inside.size:
            return SelfMapCertificate(False, np.inf, f"pole in the closed disc at {complex(inside[0]):.6g}")
    theta = 2 * np.pi * np.arange(tol.boundary_grid) / tol.boundary_grid
    vals = np.abs(phi(np.exp(1j * theta)))
    mx = float(np.max(vals))
    if mx > 1.0 + tol.boundary_tol:
        k = int(np.argmax(vals))
        return SelfMapCertificate(False, mx, f"|phi| = {mx:.6g} > 1 at theta = {theta[k]:.6g}")
    return SelfMapCertificate(True, mx)


def certify(phi: RationalMap, tol: Tolerances = DEFAULT_TOL) -> RationalMap:
    from .errors import NotSelfMap

    cert = is_self_map_of_disc(phi, tol)
    if not cert:
        raise NotSelfMap(cert.reason, cert.max_modulus)
    return phi
