"""Dense complex polynomials and simultaneous root finding.

Coefficients are stored in ascending order, ``coeffs[k]`` multiplying
``z**k``. Trailing coefficients below ``normalization_floor * max|coeff|``
are stripped on construction, so the zero polynomial has no coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DegreeZero, NonConvergence


def _normalize(c: np.ndarray, floor: float) -> np.ndarray:
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    keep = np.nonzero(mags > floor * top)[0]
    return c[: keep[-1] + 1]


class ComplexPoly:
    """Immutable polynomial with complex coefficients.

    Supports ``+ - *`` with other polynomials and scalars, and evaluation by
    calling the instance on a scalar or an array.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = (), *, floor: float = DEFAULT_TOL.normalization_floor):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel()
        c = _normalize(c.copy(), floor)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coeff
        return cls(c)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "ComplexPoly":
        c = np.array([leading], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self._c.size - 1

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def leading(self) -> complex:
        return complex(self._c[-1]) if self._c.size else 0j

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=complex)
        out[: self._c.size] = self._c
        return out

    def scale_at(self, z) -> np.ndarray | float:
        """sum |c_k| max(1,|z|)^k -- the magnitude against which residuals are measured."""
        r = np.maximum(1.0, np.abs(z))
        acc = np.zeros_like(r, dtype=float)
        for a in np.abs(self._c[::-1]):
            acc = acc * r + a
        return acc

    def __call__(self, z):
        """Horner evaluation; exact 0 for the zero polynomial."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self._c[::-1]:
            acc = acc * z + a
        return complex(acc) if acc.ndim == 0 else acc

    def derivative(self) -> "ComplexPoly":
        if self._c.size <= 1:
            return ComplexPoly()
        return ComplexPoly(self._c[1:] * np.arange(1, self._c.size))

    def conj(self) -> "ComplexPoly":
        return ComplexPoly(np.conj(self._c))

    def __add__(self, other) -> "ComplexPoly":
        other = _as_poly(other)
        n = max(self._c.size, other._c.size)
        return ComplexPoly(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self._c)

    def __sub__(self, other) -> "ComplexPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "ComplexPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "ComplexPoly":
        if np.isscalar(other):
            return ComplexPoly(self._c * complex(other))
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return ComplexPoly()
        return ComplexPoly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def allclose(self, other: "ComplexPoly", atol: float = 1e-12) -> bool:
        n = max(self._c.size, other._c.size)
        return bool(np.max(np.abs(self.padded(n) - other.padded(n)), initial=0.0) <= atol)

    def deflate(self, root: complex) -> "ComplexPoly":
        """Quotient by ``(z - root)``; the remainder is discarded."""
        c = self._c
        if c.size <= 1:
            return ComplexPoly()
        q = np.zeros(c.size - 1, dtype=complex)
        acc = 0j
        for k in range(c.size - 1, 0, -1):
            acc = acc * root + c[k]
            q[k - 1] = acc
        return ComplexPoly(q)

    def __repr__(self) -> str:
        terms = ", ".join(f"{complex(a):.6g}" for a in self._c)
        return f"ComplexPoly([{terms}])"


def _as_poly(x) -> ComplexPoly:
    if isinstance(x, ComplexPoly):
        return x
    if np.isscalar(x):
        return ComplexPoly([x])
    return ComplexPoly(x)


# module-level aliases mirroring the operation names
def peval(p: ComplexPoly, z):
    return p(z)


def add(p, q) -> ComplexPoly:
    return _as_poly(p) + _as_poly(q)


def sub(p, q) -> ComplexPoly:
    return _as_poly(p) - _as_poly(q)


def mul(p, q) -> ComplexPoly:
    return _as_poly(p) * _as_poly(q)


def scale(p, alpha: complex) -> ComplexPoly:
    return _as_poly(p) * complex(alpha)


def derivative(p) -> ComplexPoly:
    return _as_poly(p).derivative()


# ---------------------------------------------------------------------------
# root finding

@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    multiplicity_clusters: tuple[tuple[int, ...], ...]
    sweeps: int = 0

    def __len__(self) -> int:
        return self.roots.size

    def cluster_sizes(self) -> list[int]:
        return [len(c) for c in self.multiplicity_clusters]

    @property
    def has_multiple(self) -> bool:
        return any(len(c) > 1 for c in self.multiplicity_clusters)

    def distinct_roots(self) -> np.ndarray:
        """One representative (cluster mean) per cluster."""
        return np.array([self.roots[list(c)].mean() for c in self.multiplicity_clusters], dtype=complex)


def cluster_points(points: np.ndarray, tol: float, metric=None) -> tuple[tuple[int, ...], ...]:
    """Single-linkage clusters of points closer than ``tol``."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            d = abs(points[i] - points[j]) if metric is None else metric(points[i], points[j])
            if d < tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: g[0]))


def _residuals(p: ComplexPoly, z: np.ndarray) -> np.ndarray:
    return np.abs(p(z)) / p.scale_at(z)


def _horner2(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values of p and p' at every point of ``z`` in one Horner pass."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for a in c[::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(c: np.ndarray, z: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, int]:
    """Aberth-Ehrlich iteration, all approximations updated per sweep.

    Converged approximations are frozen so they cannot drift back out.
    """
    n = z.size
    eps = np.finfo(float).eps
    active = np.ones(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for sweep in range(1, max_sweeps + 1):
        p, dp = _horner2(c, z)
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1.0 - ratio * s)
        exact = p == 0
        step[exact] = 0.0
        bad = ~np.isfinite(step)
        if bad.any():
            # p'(z)=0 or a collision: kick the point off the stationary spot
            step[bad] = 1e-3 * np.maximum(1.0, np.abs(z[bad])) * np.exp(1j * (0.7 + np.arange(bad.sum())))
        step[~active] = 0.0
        z = z - step
        done = np.abs(step) <= 4 * eps * np.maximum(1.0, np.abs(z))
        active &= ~(done | exact)
        if not active.any():
            return z, sweep
    return z, max_sweeps


def roots(
    p: ComplexPoly,
    tol: Tolerances = DEFAULT_TOL,
    *,
    initial: Sequence[complex] | None = None,
    seed: int = 0,
) -> RootSet:
    """All complex roots of ``p`` by Aberth-Ehrlich iteration.

    Exact zero low-order coefficients are split off as exact zero roots.
    ``initial`` warm-starts the iteration (used by branch continuation);
    otherwise starting points sit on a circle of radius
    ``1 + max|c_k / c_d|`` with a seeded angular jitter.

    Raises
    ------
    DegreeZero
        For constant (or zero) ``p``.
    NonConvergence
        When any normalized residual stays above ``tol.root_residual_tol``.
    """
    p = _as_poly(p)
    d = p.degree
    if d < 1:
        raise DegreeZero(f"roots() needs degree >= 1, got {d}")
    c = p.coeffs
    nz = int(np.argmax(c != 0))
    core = c[nz:]
    m = core.size - 1
    found = np.zeros(0, dtype=complex)
    sweeps = 0
    if m >= 1:
        core = core / core[-1]
        if initial is not None and len(initial) >= d:
            init = np.asarray(initial, dtype=complex)
            if nz:
                # drop the guesses closest to the exact zeros
                order = np.argsort(np.abs(init))
                init = init[np.sort(order[nz:])]
            init = init[:m].copy()
        else:
            rng = np.random.default_rng(seed)
            radius = 1.0 + np.max(np.abs(core[:-1]))
            # the Cauchy bound is loose; the geometric mean of |c0| keeps starts near the bulk
            inner = abs(core[0]) ** (1.0 / m) if core[0] != 0 else radius
            radius = min(radius, max(inner, 1e-3))
            theta = 2 * np.pi * np.arange(m) / m + 0.4 + 0.1 * rng.random()
            init = radius * np.exp(1j * theta)
        found, sweeps = _aberth(core, init.astype(complex), tol.max_sweeps)
        # one Newton polish for simple roots
        pv, dv = _horner2(core, found)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = pv / dv
        ok = np.isfinite(corr) & (np.abs(corr) < 1e-6 * np.maximum(1.0, np.abs(found)))
        found = np.where(ok, found - corr, found)
    all_roots = np.concatenate([np.zeros(nz, dtype=complex), found])
    res = _residuals(p, all_roots)
    if np.any(~np.isfinite(res)) or np.any(res > tol.root_residual_tol):
        raise NonConvergence(
            f"root residual {np.nanmax(res):.3e} > {tol.root_residual_tol:.1e} after {sweeps} sweeps"
        )
    order = np.lexsort((all_roots.imag, all_roots.real))
    all_roots = all_roots[order]
    res = res[order]
    clusters = cluster_points(all_roots, tol.cluster_tol)
    return RootSet(all_roots, res, clusters, sweeps)


def gcd_approx(p: ComplexPoly, q: ComplexPoly, tol: Tolerances = DEFAULT_TOL) -> ComplexPoly:
    """Approximate monic GCD by greedy matching of roots within ``gcd_match_tol``.

    Returns the constant 1 when nothing matches (or either input is constant).
    """
    p, q = _as_poly(p), _as_poly(q)
    if p.is_zero and q.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if p.is_zero:
        return ComplexPoly(q.coeffs / q.leading)
    if q.is_zero:
        return ComplexPoly(p.coeffs / p.leading)
    if p.degree < 1 or q.degree < 1:
        return ComplexPoly([1.0])
    rp = roots(p, tol).roots
    rq = list(roots(q, tol).roots)
    common = []
    for r in rp:
        if not rq:
            break
        dist = np.abs(np.asarray(rq) - r)
        k = int(np.argmin(dist))
        if dist[k] < tol.gcd_match_tol * max(1.0, abs(r)):
            common.append(0.5 * (r + rq.pop(k)))
    return ComplexPoly.from_roots(common)


def divide_out(p: ComplexPoly, rts: Iterable[complex]) -> ComplexPoly:
    for r in rts:
        p = p.deflate(r)
    return p
