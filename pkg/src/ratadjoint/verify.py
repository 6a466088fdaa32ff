"""Invariant suites run by ``ratadjoint verify``.

Each suite samples seeded random polynomials ``f`` and points ``z`` in the
disc and records the worst error of one identity. Points that turn out not
to be regular values are skipped and counted.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .adjoint import (
    FORMS,
    amusing_identity_residual,
    hmr_eval,
    kernel_partial_fractions,
    preimage_fiber,
)
from .config import DEFAULT_TOL, Tolerances
from .errors import FiberEscape, NotRegularValue, PoleProximity
from .hardy import HardyPoly, adjoint_oracle
from .rational import RationalMap

NEAR_CRITICAL_DISTANCE = 1e-3


def random_poly(rng: np.random.Generator, max_degree: int) -> HardyPoly:
    n = int(rng.integers(0, max_degree + 1))
    return HardyPoly(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))


def random_disc_points(rng: np.random.Generator, n: int, r_max: float = 0.99) -> np.ndarray:
    r = r_max * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def rel_err(value: complex, ref: complex) -> float:
    return abs(value - ref) / (1.0 + abs(ref))


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    max_err: float = 0.0
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    def record(self, err: float, z: complex, tolerance: float | None = None):
        self.checked += 1
        self.max_err = max(self.max_err, err)
        if not err <= (self.tolerance if tolerance is None else tolerance):
            self.failures.append({"z": [z.real, z.imag], "err": err})

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "checked": self.checked,
            "skipped": self.skipped,
            "max_err": self.max_err,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "failures": self.failures[:5],
        }


@dataclass
class VerifySummary:
    map_name: str
    seed: int
    trials: int
    suites: dict

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites.values())

    @property
    def max_err(self) -> float:
        return max((s.max_err for s in self.suites.values()), default=0.0)

    def as_dict(self) -> dict:
        return {
            "map": self.map_name,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "max_err": self.max_err,
            "suites": {k: v.as_dict() for k, v in self.suites.items()},
        }


def _near_critical(z: complex, crit: np.ndarray) -> bool:
    return crit.size > 0 and float(np.min(np.abs(crit - z))) < NEAR_CRITICAL_DISTANCE


def run_suites(
    phi: RationalMap,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    *,
    max_degree: int = 16,
    err_tol: float = 1e-9,
    near_tol: float = 1e-7,
) -> VerifySummary:
    from .rational import critical_data

    rng = np.random.default_rng(seed)
    crit = critical_data(phi.exterior, tol).values_finite()
    suites = {
        "three_form_agreement": SuiteResult("three_form_agreement", err_tol),
        "oracle_agreement": SuiteResult("oracle_agreement", err_tol),
        "amusing_identity": SuiteResult("amusing_identity", 1e-10),
        "partial_fractions": SuiteResult("partial_fractions", 1e-10),
        "fiber_containment": SuiteResult("fiber_containment", 0.0),
    }
    for _ in range(trials):
        f = random_poly(rng, max_degree)
        z = complex(random_disc_points(rng, 1)[0])
        w_probe = random_disc_points(rng, 4, 0.95)
        try:
            F = preimage_fiber(phi.exterior, z, tol)
        except (NotRegularValue, FiberEscape):
            for s in suites.values():
                s.skipped += 1
            continue
        near = _near_critical(z, crit)
        lim = near_tol if near else err_tol

        suites["fiber_containment"].record(0.0 if np.all(np.abs(F.points) < 1) else 1.0, z)

        oracle = adjoint_oracle(phi, f, z)
        vals = {}
        for form in FORMS:
            try:
                vals[form] = FORMS[form](phi, f, z, tol, fib=F).value
            except PoleProximity:
                pass
        spread = max(rel_err(a, vals["bs"]) for a in vals.values())
        suites["three_form_agreement"].record(spread, z, lim)
        auto = hmr_eval(phi, f, z, "auto", tol, fib=F).value
        suites["oracle_agreement"].record(rel_err(auto, oracle), z, lim)

        try:
            suites["amusing_identity"].record(amusing_identity_residual(phi, z, tol, fib=F), z)
        except PoleProximity:
            suites["amusing_identity"].skipped += 1

        if z != 0:
            try:
                pf = kernel_partial_fractions(phi, z, tol, fib=F)
            except PoleProximity:
                suites["partial_fractions"].skipped += 1
            else:
                exact = 1.0 / (1.0 - np.conj(z) * np.asarray(phi(w_probe)))
                err = float(np.max(np.abs(pf(w_probe) - exact) / (1.0 + np.abs(exact))))
                suites["partial_fractions"].record(err, z)
    return VerifySummary(phi.name, seed, trials, suites)
