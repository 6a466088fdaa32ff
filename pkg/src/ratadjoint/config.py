"""Numerical tolerances shared by every module.

All thresholds live in one frozen dataclass so a run can be reproduced from
its tolerance set alone. Functions take ``tol=DEFAULT_TOL`` and never read
module globals beyond that default.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # complex-poly
    normalization_floor: float = 1e-13   # relative to max |coeff|
    root_residual_tol: float = 1e-10     # normalized backward error
    cluster_tol: float = 1e-7
    gcd_match_tol: float = 1e-7
    max_sweeps: int = 200
    # rational-map
    boundary_tol: float = 1e-9
    boundary_grid: int = 4096
    # adjoint-formula
    derivative_floor: float = 1e-10
    pole_guard: float = 1e-4
    near_critical_margin: float = 1e-5
    fiber_residual_tol: float = 1e-11
    max_refine_depth: int = 20
    matching_safety: float = 3.0
    # regularity
    class_margin: float = 1e-8
    compact_margin: float = 1e-6
    blaschke_tol: float = 1e-9
    reflection_match_tol: float = 1e-7
    contact_tol: float = 1e-8
    sup_grid: int = 8192
    atlas_inset: float = 1e-3

    def override(self, **changes) -> "Tolerances":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def parse_overrides(cls, items, base: "Tolerances | None" = None) -> "Tolerances":
        """Build a tolerance set from ``name=value`` strings (CLI ``--tol``)."""
        base = base or DEFAULT_TOL
        types = {f.name: f.type for f in fields(cls)}
        changes = {}
        for item in items or ():
            name, _, value = item.partition("=")
            name = name.strip()
            if name not in types:
                raise KeyError(f"unknown tolerance {name!r}")
            changes[name] = int(value) if types[name] in ("int", int) else float(value)
        return base.override(**changes)


DEFAULT_TOL = Tolerances()
