"""Numerical continuation of the branches of phi_e^{-1} along paths of regular values.

Branches are identified by integer labels carried from a base fiber. Each
step predicts the new fiber to first order (sigma_j + sigma_j' dz), solves
for the true fiber warm-started at the prediction, and matches predicted to
computed points. A step is accepted only when every nearest-point match beats
the runner-up by ``matching_safety`` times the step-induced motion bound;
otherwise it is bisected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .adjoint import PreimageFiber, preimage_fiber
from .config import DEFAULT_TOL, Tolerances
from .errors import MatchingAmbiguity, NotRegularValue, PathThroughCriticalValue
from .poly import _horner2
from .rational import RationalMap


def _fiber_at(phi_e, z, tol, initial=None) -> PreimageFiber:
    try:
        return preimage_fiber(phi_e, z, tol, check_disc=False, initial=initial)
    except NotRegularValue as exc:
        raise PathThroughCriticalValue(f"path meets a critical value near {complex(z):.6g}: {exc}") from exc


def _match(pred: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest-point assignment and its margin (runner-up minus best, minimized)."""
    D = np.abs(pred[:, None] - new[None, :])
    best = np.argmin(D, axis=1)
    if pred.size == 1:
        return best, np.inf
    Ds = np.partition(D, 1, axis=1)
    margin = float(np.min(Ds[:, 1] - Ds[:, 0]))
    if len(set(best.tolist())) != best.size:
        margin = -1.0
    return best, margin


def _horner(c: np.ndarray, w: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(w)
    for a in c[::-1]:
        acc = acc * w + a
    return acc


class _Tracker:
    """Coefficient arrays of phi_e prepared once per continuation run."""

    def __init__(self, phi_e: RationalMap):
        n = max(phi_e.num.coeffs.size, phi_e.den.coeffs.size)
        self.num = phi_e.num.padded(n)
        self.den = phi_e.den.padded(n)
        self.wr = phi_e.wronskian.coeffs
        self.den_c = phi_e.den.coeffs
        self.d = phi_e.degree


def _newton_step(trk: _Tracker, target: complex, pred: np.ndarray, tol: Tolerances):
    """Corrector only: Newton from the prediction, verified cheaply. None if unsure."""
    c = trk.num - target * trk.den
    if c.size - 1 != pred.size or abs(c[-1]) <= tol.normalization_floor * np.max(np.abs(c)):
        return None
    w = pred
    for it in range(5):
        p, dp = _horner2(c, w)
        corr = p / dp
        w = w - corr
        if it >= 1 and np.max(np.abs(corr) / np.maximum(1.0, np.abs(w))) <= 1e-15:
            break
    else:
        if not np.all(np.isfinite(w)) or np.max(np.abs(corr) / np.maximum(1.0, np.abs(w))) > 1e-13:
            return None
    if not np.all(np.isfinite(w)):
        return None
    diffs = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(diffs, np.inf)
    gap = float(diffs.min()) if w.size > 1 else np.inf
    if gap <= tol.cluster_tol:
        return None
    dd = _horner(trk.den_c, w)
    deriv = _horner(trk.wr, w) / (dd * dd)
    if not np.all(np.isfinite(deriv)) or np.min(np.abs(deriv)) <= tol.derivative_floor:
        return None
    return PreimageFiber(target, w, deriv, (), gap)


def _step(phi_e, trk, cur: PreimageFiber, target: complex, tol: Tolerances, depth: int) -> PreimageFiber:
    dz = target - cur.z
    sp = 1.0 / cur.deriv_at_points
    pred = cur.points + sp * dz
    new = _newton_step(trk, target, pred, tol)
    if new is None:
        new = _fiber_at(phi_e, target, tol, initial=pred)
    best, margin = _match(pred, new.points)
    motion = abs(dz) * float(np.max(np.abs(sp)))
    if margin > tol.matching_safety * motion:
        return PreimageFiber(new.z, new.points[best], new.deriv_at_points[best], cur.branch_labels, new.margin)
    if depth >= tol.max_refine_depth:
        raise MatchingAmbiguity(f"could not resolve branch matching near {target:.6g} after {depth} bisections")
    mid = cur.z + 0.5 * dz
    half = _step(phi_e, trk, cur, mid, tol, depth + 1)
    return _step(phi_e, trk, half, target, tol, depth + 1)


def continue_branch(
    phi_e: RationalMap,
    fiber0: PreimageFiber,
    path: Sequence[complex],
    tol: Tolerances = DEFAULT_TOL,
    *,
    keep_trace: bool = False,
):
    """Transport ``fiber0`` along ``path`` (which starts at ``fiber0.z``).

    Points in the returned fiber are ordered like ``fiber0`` (index i carries
    label ``fiber0.branch_labels[i]``). With ``keep_trace`` a list of the
    fibers at every path node is returned as well.
    """
    path = [complex(p) for p in path]
    if not path or abs(path[0] - fiber0.z) > 1e-14 * max(1.0, abs(fiber0.z)):
        path = [fiber0.z] + path
    cur = fiber0
    trace = [fiber0]
    trk = _Tracker(phi_e)
    for target in path[1:]:
        if target == cur.z:
            continue
        cur = _step(phi_e, trk, cur, target, tol, 0)
        if keep_trace:
            trace.append(cur)
    return (cur, trace) if keep_trace else cur


def circle_path(center: complex, radius: float, steps: int, start_angle: float = 0.0) -> np.ndarray:
    theta = start_angle + 2 * np.pi * np.arange(steps + 1) / steps
    return complex(center) + radius * np.exp(1j * theta)


def loop_permutation(start: PreimageFiber, end: PreimageFiber) -> tuple[tuple[int, ...], float]:
    """perm[i] = j when the branch starting at point i finishes at point j; plus set mismatch."""
    D = np.abs(end.points[:, None] - start.points[None, :])
    perm = np.argmin(D, axis=1)
    err = float(np.max(D[np.arange(perm.size), perm]))
    if np.unique(perm).size != perm.size:
        raise MatchingAmbiguity("loop end does not return to the starting fiber")
    return tuple(int(j) for j in perm), err


def cycle_notation(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True)
class MonodromyResult:
    permutation: tuple[int, ...]
    cycles: str
    base_fiber: PreimageFiber
    end_fiber: PreimageFiber
    set_error: float

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.permutation))


def monodromy(
    phi_e: RationalMap,
    center: complex,
    radius: float,
    steps: int = 64,
    tol: Tolerances = DEFAULT_TOL,
    *,
    start_angle: float = 0.0,
) -> MonodromyResult:
    """Permutation of branch labels after one positive loop around ``center``."""
    path = circle_path(center, radius, steps, start_angle)
    base = _fiber_at(phi_e, path[0], tol)
    end = continue_branch(phi_e, base, path, tol)
    perm, err = loop_permutation(base, end)
    return MonodromyResult(perm, cycle_notation(perm), base, end, err)


@dataclass(frozen=True)
class BranchAtlas:
    """Branch values sampled along a closed circle, columns indexed by label."""

    radius: float
    z: np.ndarray            # (n,)
    points: np.ndarray       # (n, d) sigma_j(z_k)
    sigma_prime: np.ndarray  # (n, d)
    loop_permutation: tuple[int, ...]
    loop_error: float

    @property
    def monodromy_trivial(self) -> bool:
        return all(i == j for i, j in enumerate(self.loop_permutation))

    def min_interbranch_distance(self) -> float:
        d = self.points.shape[1]
        if d < 2:
            return np.inf
        diffs = np.abs(self.points[:, :, None] - self.points[:, None, :])
        iu = np.triu_indices(d, 1)
        return float(np.min(diffs[:, iu[0], iu[1]]))


def branch_atlas(
    phi_e: RationalMap,
    radius: float,
    n: int,
    tol: Tolerances = DEFAULT_TOL,
    *,
    extra_z: Sequence[complex] = (),
) -> BranchAtlas:
    """Continue all branches once around |z| = radius through ``n`` equispaced nodes.

    ``extra_z`` (points on the same circle) are spliced into the node list in
    angular order, so that specific points are sampled exactly.
    """
    theta = 2 * np.pi * np.arange(n) / n
    extra = np.angle(np.asarray(extra_z, dtype=complex)) % (2 * np.pi) if len(extra_z) else np.zeros(0)
    theta = np.unique(np.concatenate([theta, extra]))
    z = radius * np.exp(1j * theta)
    if len(extra_z):
        # keep the exact requested points
        for e in extra_z:
            k = int(np.argmin(np.abs(z - e)))
            z[k] = complex(e)
    base = _fiber_at(phi_e, z[0], tol)
    path = np.concatenate([z, z[:1]])
    end, trace = continue_branch(phi_e, base, path, tol, keep_trace=True)
    # trace holds fibers at every node except the (skipped) coincident start
    pts = np.array([t.points for t in trace[:-1]])
    sp = np.array([t.sigma_prime for t in trace[:-1]])
    perm, err = loop_permutation(base, end)
    return BranchAtlas(radius, z, pts, sp, perm, err)


def in_slit_domain(z: complex, critical_values: Sequence[complex], width: float = 1e-12) -> bool:
    """Membership in the open disc minus radial slits from each critical value in U to the circle."""
    z = complex(z)
    if abs(z) >= 1:
        return False
    for c in critical_values:
        if c is None or not np.isfinite(abs(c)) or abs(c) >= 1:
            continue
        if c == 0:
            # slit along the positive real axis
            if z.imag == 0 and z.real >= 0:
                return False
            continue
        u = c / abs(c)
        t = (z * np.conj(u)).real
        perp = abs((z * np.conj(u)).imag)
        if t >= abs(c) and perp <= width:
            return False
    return True
