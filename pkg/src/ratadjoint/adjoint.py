"""Closed-form evaluation of C_phi^* f(z) through preimages of the exterior map.

Three arrangements are provided:

``thm``  f(0)/(1 - conj(phi(inf)) z) + z sum_j sigma_j'(z)/sigma_j(z) f(sigma_j(z))
``cor``  f(0)/(1 - conj(phi(inf)) z) + z sum_{w in phi_e^{-1}(z)} f(w)/(w phi_e'(w))
``bs``   f(0)/(1 - conj(phi(0)) z)   + z sum_j sigma_j'(z) (Bf)(sigma_j(z))

where the sigma_j(z) are the points of the fiber of phi_e over z and
sigma_j'(z) = 1/phi_e'(sigma_j(z)). The first two break down at
z = 1/conj(phi(inf)) (a removable singularity); the ``bs`` arrangement does
not, and :func:`hmr_eval` delegates to it inside the pole guard.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DegreeZero, FiberEscape, NotInH20, NotRegularValue, PoleProximity
from .hardy import HardyPoly, backward_shift
from .rational import INF, RationalMap, fiber, fiber_margin, rho


@dataclass(frozen=True)
class PreimageFiber:
    """Fiber of phi_e over a regular value z, with branch derivatives attached."""

    z: complex
    points: np.ndarray            # sigma_j(z)
    deriv_at_points: np.ndarray   # phi_e'(sigma_j(z))
    branch_labels: tuple[int, ...]
    margin: float = np.inf        # min pairwise chordal distance

    @property
    def sigma(self) -> np.ndarray:
        return self.points

    @property
    def sigma_prime(self) -> np.ndarray:
        return 1.0 / self.deriv_at_points

    def by_label(self) -> dict[int, complex]:
        return {lab: complex(p) for lab, p in zip(self.branch_labels, self.points)}

    def relabel(self, labels: Sequence[int]) -> "PreimageFiber":
        return PreimageFiber(self.z, self.points, self.deriv_at_points, tuple(labels), self.margin)


def _polish(phi_e: RationalMap, z: complex, w: np.ndarray, steps: int = 2) -> np.ndarray:
    P = phi_e.num - z * phi_e.den
    dP = P.derivative()
    for _ in range(steps):
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = P(w) / dP(w)
        ok = np.isfinite(corr) & (np.abs(corr) < 1e-3 * np.maximum(1.0, np.abs(w)))
        w = np.where(ok, w - corr, w)
    return w


def preimage_fiber(
    phi_e: RationalMap,
    z: complex,
    tol: Tolerances = DEFAULT_TOL,
    *,
    check_disc: bool = True,
    initial: Sequence[complex] | None = None,
) -> PreimageFiber:
    """Fiber of ``phi_e`` over ``z`` with Newton polish and regularity checks.

    Labels follow a canonical (real, imag) sort unless the caller relabels.
    With ``check_disc`` the point must lie in the open disc and every fiber
    point must as well.
    """
    z = complex(z)
    if check_disc and abs(z) >= 1:
        raise FiberEscape(f"|z| = {abs(z)} is outside the open disc")
    F = fiber(phi_e, z, tol, initial=initial)
    if F.n_infinite:
        raise NotRegularValue(z, 0.0, "(fiber contains infinity)")
    w = _polish(phi_e, z, np.array(F.points, dtype=complex))
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    margin = fiber_margin(list(w)) if w.size > 1 else np.inf
    deriv = np.asarray(phi_e.deriv(w), dtype=complex)
    if margin <= tol.cluster_tol:
        raise NotRegularValue(z, margin, "(fiber points collide)")
    if np.any(~np.isfinite(deriv)) or np.min(np.abs(deriv)) <= tol.derivative_floor:
        raise NotRegularValue(z, margin, "(derivative below floor)")
    if check_disc and np.any(np.abs(w) >= 1.0):
        raise FiberEscape(f"fiber point of modulus {np.max(np.abs(w)):.6g} >= 1; phi is not in Rat(U)?")
    return PreimageFiber(z, w, deriv, tuple(range(w.size)), float(margin))


@dataclass(frozen=True)
class AdjointEvaluation:
    z: complex
    value: complex
    form_used: str
    lambda_term: complex
    branch_terms: tuple[complex, ...] = ()
    branch_labels: tuple[int, ...] = ()
    condition_flags: tuple[str, ...] = field(default_factory=tuple)

    def bookkeeping_error(self) -> float:
        return abs(self.value - (self.lambda_term + sum(self.branch_terms)))

    def as_dict(self) -> dict:
        from .serialize import cjson
        return {
            "z": cjson(self.z),
            "value": cjson(self.value),
            "form_used": self.form_used,
            "lambda_term": cjson(self.lambda_term),
            "branch_terms": [cjson(t) for t in self.branch_terms],
            "branch_labels": list(self.branch_labels),
            "condition_flags": list(self.condition_flags),
        }


def _pole_point(phi: RationalMap):
    """1/conj(phi(inf)), or None when phi(inf) is 0 or INF (no finite pole)."""
    a = phi.at_infinity
    if a is INF or a == 0:
        return None
    return 1.0 / np.conj(a)


def _lambda_inf(phi: RationalMap, f0: complex, z: complex) -> complex:
    a = phi.at_infinity
    if a is INF:
        return 0j
    return f0 / (1.0 - np.conj(a) * z)


def _lambda_zero(phi: RationalMap, f0: complex, z: complex) -> complex:
    return f0 / (1.0 - np.conj(phi.at_zero) * z)


def _flags(phi: RationalMap, z: complex, F: PreimageFiber | None, tol: Tolerances) -> tuple[str, ...]:
    flags = []
    zp = _pole_point(phi)
    if zp is not None and abs(z - zp) < 10 * tol.pole_guard:
        flags.append("near-pole")
    if F is not None and F.margin < tol.near_critical_margin:
        flags.append("near-critical")
    return tuple(flags)


def _check(phi: RationalMap, f: HardyPoly):
    if phi.degree < 1:
        raise DegreeZero("adjoint formulas need degree d > 0")
    if not isinstance(f, HardyPoly):
        f = HardyPoly(f)
    return f


def _at_zero(f: HardyPoly, form: str) -> AdjointEvaluation:
    f0 = f.at_zero()
    return AdjointEvaluation(0j, f0, form, f0)


def _fiber_for(phi, z, tol, F):
    return F if F is not None else preimage_fiber(phi.exterior, z, tol)


def hmr_eval_thm(phi: RationalMap, f: HardyPoly, z: complex, tol: Tolerances = DEFAULT_TOL,
                 *, fib: PreimageFiber | None = None) -> AdjointEvaluation:
    """Branch form with weights z sigma_j'(z)/sigma_j(z)."""
    f = _check(phi, f)
    z = complex(z)
    if z == 0:
        return _at_zero(f, "thm")
    zp = _pole_point(phi)
    if zp is not None and abs(z - zp) < tol.pole_guard:
        raise PoleProximity(f"z within {tol.pole_guard:g} of 1/conj(phi(inf)) = {zp:.6g}")
    F = _fiber_for(phi, z, tol, fib)
    s, sp = F.sigma, F.sigma_prime
    if np.min(np.abs(s)) <= tol.derivative_floor:
        raise PoleProximity("a branch value vanishes at z")
    terms = z * sp / s * f(s)
    lam = _lambda_inf(phi, f.at_zero(), z)
    return AdjointEvaluation(z, lam + terms.sum(), "thm", lam, tuple(complex(t) for t in terms),
                             F.branch_labels, _flags(phi, z, F, tol))


def hmr_eval_cor(phi: RationalMap, f: HardyPoly, z: complex, tol: Tolerances = DEFAULT_TOL,
                 *, fib: PreimageFiber | None = None) -> AdjointEvaluation:
    """Fiber-sum form f(w)/(w phi_e'(w))."""
    f = _check(phi, f)
    z = complex(z)
    if z == 0:
        return _at_zero(f, "cor")
    zp = _pole_point(phi)
    if zp is not None and abs(z - zp) < tol.pole_guard:
        raise PoleProximity(f"z within {tol.pole_guard:g} of 1/conj(phi(inf)) = {zp:.6g}")
    F = _fiber_for(phi, z, tol, fib)
    w, dw = F.points, F.deriv_at_points
    if np.min(np.abs(w)) <= tol.derivative_floor:
        raise PoleProximity("a fiber point vanishes at z")
    terms = z * f(w) / (w * dw)
    lam = _lambda_inf(phi, f.at_zero(), z)
    return AdjointEvaluation(z, lam + terms.sum(), "cor", lam, tuple(complex(t) for t in terms),
                             F.branch_labels, _flags(phi, z, F, tol))


def hmr_eval_bs(phi: RationalMap, f: HardyPoly, z: complex, tol: Tolerances = DEFAULT_TOL,
                *, fib: PreimageFiber | None = None) -> AdjointEvaluation:
    """Backward-shift form; finite at 1/conj(phi(inf))."""
    f = _check(phi, f)
    z = complex(z)
    if z == 0:
        return _at_zero(f, "bs")
    F = _fiber_for(phi, z, tol, fib)
    Bf = backward_shift(f)
    terms = z * F.sigma_prime * Bf(F.sigma) if len(Bf) else np.zeros(F.points.size, dtype=complex)
    lam = _lambda_zero(phi, f.at_zero(), z)
    return AdjointEvaluation(z, lam + terms.sum(), "bs", lam, tuple(complex(t) for t in terms),
                             F.branch_labels, _flags(phi, z, F, tol))


FORMS = {"thm": hmr_eval_thm, "cor": hmr_eval_cor, "bs": hmr_eval_bs}


def hmr_eval(phi: RationalMap, f: HardyPoly, z: complex, form: str = "auto",
             tol: Tolerances = DEFAULT_TOL, *, fib: PreimageFiber | None = None) -> AdjointEvaluation:
    """Dispatch on ``form``; ``auto`` uses ``cor`` except inside the pole guard, where ``bs`` is used.

    An explicit ``thm``/``cor`` request inside the guard also falls back to ``bs``.
    """
    if form == "auto":
        form = "cor"
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    try:
        return FORMS[form](phi, f, z, tol, fib=fib)
    except PoleProximity:
        return hmr_eval_bs(phi, f, z, tol, fib=fib)


def omega_eval(phi: RationalMap, f: HardyPoly, z: complex, tol: Tolerances = DEFAULT_TOL,
               *, fib: PreimageFiber | None = None) -> complex:
    """Omega_phi f(z) = sum_j sigma_j'(z) (Bf)(sigma_j(z)) for f with f(0) = 0."""
    f = _check(phi, f)
    if f.at_zero() != 0:
        raise NotInH20(f"f(0) = {f.at_zero()} != 0")
    F = _fiber_for(phi, complex(z), tol, fib)
    Bf = backward_shift(f)
    return complex(np.sum(F.sigma_prime * Bf(F.sigma)))


def amusing_identity_residual(phi: RationalMap, z: complex, tol: Tolerances = DEFAULT_TOL,
                              *, fib: PreimageFiber | None = None) -> float:
    """|[1/(1-conj(phi(0))z) - 1/(1-conj(phi(inf))z)] - z sum_w 1/(w phi_e'(w))|.

    The second kernel term is read as 0 when phi(inf) = inf.
    """
    a = phi.at_infinity
    z = complex(z)
    zp = _pole_point(phi)
    if zp is not None and abs(z - zp) < tol.pole_guard:
        raise PoleProximity("z inside the pole guard")
    F = _fiber_for(phi, z, tol, fib)
    w, dw = F.points, F.deriv_at_points
    if np.min(np.abs(w)) <= tol.derivative_floor:
        raise PoleProximity("a fiber point vanishes at z")
    lhs = 1.0 / (1.0 - np.conj(phi.at_zero) * z) - _lambda_inf(phi, 1.0, z)
    rhs = z * np.sum(1.0 / (w * dw))
    return float(abs(lhs - rhs))


@dataclass(frozen=True)
class KernelPartialFractions:
    """1/(1 - conj(z) phi(w)) = alpha + sum_j residues[j]/(w - poles[j])."""

    z: complex
    alpha: complex
    poles: np.ndarray
    residues: np.ndarray

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return self.alpha + np.sum(self.residues / (w[..., None] - self.poles), axis=-1)


def kernel_partial_fractions(phi: RationalMap, z: complex, tol: Tolerances = DEFAULT_TOL,
                             *, fib: PreimageFiber | None = None) -> KernelPartialFractions:
    """Partial fractions of C_phi K_z from the exterior fiber.

    Poles are the reflections w_j = 1/conj(sigma_j(z)); residues are
    -1/(conj(z) phi'(w_j)); the constant is K_z(phi(inf)).
    """
    z = complex(z)
    if z == 0:
        raise ValueError("C_phi K_0 is constant; no poles")
    a = phi.at_infinity
    F = _fiber_for(phi, z, tol, fib)
    if np.min(np.abs(F.points)) <= tol.derivative_floor:
        raise PoleProximity("a pole of C_phi K_z sits at infinity")
    poles = np.array([rho(complex(s)) for s in F.points], dtype=complex)
    residues = -1.0 / (np.conj(z) * np.asarray(phi.deriv(poles)))
    alpha = 0j if a is INF else 1.0 / (1.0 - np.conj(z) * a)
    return KernelPartialFractions(z, alpha, poles, residues)


def hmr_eval_pfe(phi: RationalMap, f: HardyPoly, z: complex, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Adjoint value assembled straight from the kernel partial fractions.

    C_phi^* f(z) = f(0) conj(alpha) - sum_j conj(beta_j) rho(w_j) f(rho(w_j)).
    """
    f = _check(phi, f)
    pf = kernel_partial_fractions(phi, z, tol)
    pts = 1.0 / np.conj(pf.poles)
    return complex(f.at_zero() * np.conj(pf.alpha) - np.sum(np.conj(pf.residues) * pts * f(pts)))
