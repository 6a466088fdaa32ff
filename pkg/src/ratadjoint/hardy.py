"""Finite Maclaurin vectors as elements of H^2 and the series-division oracle.

The oracle evaluates ``C_phi^* f(z) = <f, C_phi K_z>`` by expanding
``1/(1 - conj(z) phi(w))`` in powers of ``w``. For polynomial ``f`` the inner
product only needs the first ``deg f + 1`` coefficients, so no truncation
error enters -- this is the ground truth the closed-form evaluations are
checked against, and it never touches a preimage fiber.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DomainViolation, PoleAtOrigin
from .rational import RationalMap


class HardyPoly:
    """Polynomial element of H^2, ``coeffs[n]`` = n-th Maclaurin coefficient."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel().copy()
        c.setflags(write=False)
        self._c = c

    @classmethod
    def monomial(cls, n: int, coeff: complex = 1.0) -> "HardyPoly":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = coeff
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        nz = np.nonzero(self._c)[0]
        return int(nz[-1]) if nz.size else -1

    def __len__(self):
        return self._c.size

    def at_zero(self) -> complex:
        return complex(self._c[0]) if self._c.size else 0j

    def derivative_at_zero(self) -> complex:
        return complex(self._c[1]) if self._c.size > 1 else 0j

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self._c[::-1]:
            acc = acc * z + a
        return complex(acc) if acc.ndim == 0 else acc

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self._c) ** 2)))

    def _pad(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=complex)
        out[: self._c.size] = self._c
        return out

    def __add__(self, other: "HardyPoly") -> "HardyPoly":
        n = max(len(self), len(other))
        return HardyPoly(self._pad(n) + other._pad(n))

    def __sub__(self, other: "HardyPoly") -> "HardyPoly":
        n = max(len(self), len(other))
        return HardyPoly(self._pad(n) - other._pad(n))

    def __mul__(self, alpha: complex) -> "HardyPoly":
        return HardyPoly(self._c * complex(alpha))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HardyPoly({[complex(a) for a in self._c]})"


def inner_product(f: HardyPoly, g: HardyPoly) -> complex:
    n = min(len(f), len(g))
    return complex(np.sum(f.coeffs[:n] * np.conj(g.coeffs[:n])))


def kernel_coeffs(z: complex, N: int) -> HardyPoly:
    """Coefficients conj(z)^n, n = 0..N, of the reproducing kernel at z."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainViolation(f"kernel point must lie in the open disc, got |z| = {abs(z)}")
    if N < 0:
        raise ValueError("N must be >= 0")
    return HardyPoly(np.conj(z) ** np.arange(N + 1))


def backward_shift(f: HardyPoly) -> HardyPoly:
    return HardyPoly(f.coeffs[1:])


def forward_shift(f: HardyPoly) -> HardyPoly:
    return HardyPoly(np.concatenate([[0j], f.coeffs]))


def series_divide(num: np.ndarray, den: np.ndarray, N: int) -> np.ndarray:
    """First N+1 Maclaurin coefficients of num/den (ascending coefficient arrays)."""
    if den.size == 0 or den[0] == 0:
        raise PoleAtOrigin("denominator vanishes at the origin")
    a = np.zeros(N + 1, dtype=complex)
    m = min(num.size, N + 1)
    a[:m] = num[:m]
    b = np.asarray(den, dtype=complex)
    c = np.zeros(N + 1, dtype=complex)
    for n in range(N + 1):
        k = min(n, b.size - 1)
        acc = a[n]
        if k:
            acc -= np.dot(b[1 : k + 1], c[n - 1 :: -1][:k])
        c[n] = acc / b[0]
    return c


def taylor_of_rational(R: RationalMap, N: int) -> HardyPoly:
    return HardyPoly(series_divide(R.num.coeffs, R.den.coeffs, N))


def kernel_pullback_coeffs(phi: RationalMap, z: complex, N: int) -> np.ndarray:
    """Maclaurin coefficients of w -> 1/(1 - conj(z) phi(w)) = den/(den - conj(z) num)."""
    if z == 0:
        # K_0 = 1, so the pullback is exactly the constant 1
        out = np.zeros(N + 1, dtype=complex)
        out[0] = 1.0
        return out
    n = max(phi.num.coeffs.size, phi.den.coeffs.size)
    den = phi.den.padded(n)
    bottom = den - np.conj(z) * phi.num.padded(n)
    return series_divide(den, bottom, N)


def adjoint_oracle(phi: RationalMap, f: HardyPoly, z: complex) -> complex:
    """C_phi^* f(z) via <f, C_phi K_z>; exact for polynomial f up to rounding."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainViolation(f"evaluation point must lie in the open disc, got |z| = {abs(z)}")
    N = max(len(f) - 1, 0)
    c = kernel_pullback_coeffs(phi, z, N)
    return complex(np.sum(f.coeffs * np.conj(c[: len(f)])))


def composition_matrix(phi: RationalMap, n_rows: int, n_cols: int) -> np.ndarray:
    """M[k, m] = k-th Maclaurin coefficient of phi**m (slow reference path)."""
    s = series_divide(phi.num.coeffs, phi.den.coeffs, n_rows - 1)
    M = np.zeros((n_rows, n_cols), dtype=complex)
    col = np.zeros(n_rows, dtype=complex)
    col[0] = 1.0
    for m in range(n_cols):
        M[:, m] = col
        col = np.convolve(col, s)[:n_rows]
    return M


def adjoint_via_matrix(phi: RationalMap, f: HardyPoly, z: complex, n_terms: int = 400) -> complex:
    """sum_m z^m <f, phi^m>, truncated after ``n_terms`` powers."""
    M = composition_matrix(phi, len(f), n_terms)
    coeffs = M.conj().T @ f.coeffs
    return complex(np.polynomial.polynomial.polyval(complex(z), coeffs))
