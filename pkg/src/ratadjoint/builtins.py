"""Named example maps and seeded random generators of disc self-maps."""
from __future__ import annotations

import re

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .poly import ComplexPoly
from .rational import RationalMap, is_self_map_of_disc, reduce


def example_41() -> RationalMap:
    """1/(3 - z - z^2)."""
    return RationalMap.from_coeffs([1], [3, -1, -1], name="example-4.1")


def example_42() -> RationalMap:
    """z^2/(3 - z - z^2)."""
    return RationalMap.from_coeffs([0, 0, 1], [3, -1, -1], name="example-4.2")


def blaschke_26() -> RationalMap:
    """z (1 - 2z)/(2 - z)."""
    return RationalMap.from_coeffs([0, 1, -2], [2, -1], name="blaschke-2.6")


def family_53(d: int) -> RationalMap:
    """1/((d+1) - z - z^2 - ... - z^d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return RationalMap.from_coeffs([1], [d + 1] + [-1] * d, name=f"family-5.3:d={d}")


def z_pow(n: int) -> RationalMap:
    return RationalMap.from_coeffs([0] * n + [1], [1], name=f"z-pow:n={n}")


def z_over_a_minus_zn(a: complex, n: int) -> RationalMap:
    a_txt = f"{a.real:g}" if isinstance(a, complex) and a.imag == 0 else f"{a}"
    return RationalMap.from_coeffs([0, 1], [a] + [0] * (n - 1) + [-1], name=f"z-over-a-minus-zn:a={a_txt},n={n}")


def pole_cancel_example() -> RationalMap:
    """(2z^2 + z/2)/(6 - z - z^2): phi(inf) = -2, so 1/conj(phi(inf)) = -1/2 lies in U."""
    return RationalMap.from_coeffs([0, 0.5, 2], [6, -1, -1], name="pole-cancel")


_PARAM = re.compile(r"^(?P<base>[a-z0-9.\-]+)(?::(?P<args>.*))?$")


def _parse_args(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        k, _, v = part.partition("=")
        out[k.strip()] = v.strip()
    return out


def builtin(name: str) -> RationalMap:
    """Resolve a builtin name such as ``family-5.3:d=4`` or ``z-over-a-minus-zn:a=2,n=3``."""
    m = _PARAM.match(name.strip())
    if not m:
        raise KeyError(f"unknown builtin {name!r}")
    base, args = m["base"], _parse_args(m["args"])
    if base == "example-4.1":
        return example_41()
    if base == "example-4.2":
        return example_42()
    if base == "blaschke-2.6":
        return blaschke_26()
    if base == "family-5.3":
        return family_53(int(args.get("d", 2)))
    if base == "z-pow":
        return z_pow(int(args.get("n", 2)))
    if base == "z-over-a-minus-zn":
        return z_over_a_minus_zn(complex(args.get("a", "2")), int(args.get("n", 2)))
    if base == "pole-cancel":
        return pole_cancel_example()
    raise KeyError(f"unknown builtin {name!r}")


BUILTIN_NAMES = (
    "example-4.1",
    "example-4.2",
    "blaschke-2.6",
    *(f"family-5.3:d={d}" for d in range(2, 7)),
    "z-pow:n=2",
    *(f"z-over-a-minus-zn:a=2,n={n}" for n in (2, 3, 4)),
)

# builtins used by the oracle-equivalence suite
ORACLE_SUITE = (
    "example-4.1",
    "example-4.2",
    "blaschke-2.6",
    *(f"family-5.3:d={d}" for d in range(2, 7)),
    *(f"z-over-a-minus-zn:a=2,n={n}" for n in (2, 3, 4)),
)


# ---------------------------------------------------------------------------
# random maps

def random_blaschke(rng: np.random.Generator, degree: int, max_modulus: float = 0.9) -> RationalMap:
    """omega prod (a_j - z)/(1 - conj(a_j) z) with a_j uniform in |a| < max_modulus."""
    r = max_modulus * np.sqrt(rng.random(degree))
    a = r * np.exp(2j * np.pi * rng.random(degree))
    omega = np.exp(2j * np.pi * rng.random())
    num = ComplexPoly([omega])
    den = ComplexPoly([1.0])
    for aj in a:
        num = num * ComplexPoly([aj, -1.0])
        den = den * ComplexPoly([1.0, -np.conj(aj)])
    return reduce(num, den, name=f"random-blaschke:d={degree}")


def random_self_map(
    rng: np.random.Generator,
    degree: int,
    *,
    target_sup: float = 0.9,
    pole_min: float = 1.3,
    tol: Tolerances = DEFAULT_TOL,
) -> RationalMap:
    """Random reduced map of exact ``degree`` with sup over the closed disc = ``target_sup``.

    Poles sit in |z| >= ``pole_min``; the numerator is a random polynomial of
    the same degree, rescaled on a boundary grid. The result is certified.
    """
    while True:
        pr = (pole_min + 2.0 * rng.random(degree)) * np.exp(2j * np.pi * rng.random(degree))
        den = ComplexPoly.from_roots(pr)
        num = ComplexPoly(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1))
        phi = reduce(num, den)
        if phi.degree != degree:
            continue
        theta = 2 * np.pi * np.arange(4096) / 4096
        mx = float(np.max(np.abs(phi(np.exp(1j * theta)))))
        phi = RationalMap(ComplexPoly(phi.num.coeffs * (target_sup / mx)), phi.den, name=f"random:d={degree}")
        if is_self_map_of_disc(phi, tol):
            return phi
