"""Empirical ratios ||z Omega_phi f|| / ||f|| on truncations of H^2_0.

For f(0) = 0 we have C_phi^* f = z Omega_phi f, and the Maclaurin
coefficients of C_phi^* f are <f, phi^m>. Those are read off the
composition matrix, truncated after ``--powers`` columns.

    python3 scripts/omega_norm_ratios.py --max-degree 40 --powers 3000
"""
import argparse

import numpy as np

from ratadjoint.builtins import BUILTIN_NAMES, builtin
from ratadjoint.hardy import composition_matrix


def ratios(phi, max_degree, powers, n_random, rng):
    M = composition_matrix(phi, max_degree + 1, powers)
    adj = M.conj().T  # adj @ f = coefficients of C_phi^* f
    out = []
    for n in range(1, max_degree + 1):
        out.append(np.linalg.norm(adj[:, n]))
    rand = []
    for _ in range(n_random):
        f = rng.normal(size=max_degree + 1) + 1j * rng.normal(size=max_degree + 1)
        f[0] = 0
        rand.append(np.linalg.norm(adj @ f) / np.linalg.norm(f))
    # largest singular value over H^2_0 truncated to degree max_degree
    smax = np.linalg.svd(adj[:, 1:], compute_uv=False)[0]
    return np.array(out), np.array(rand), smax


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=30)
    ap.add_argument("--powers", type=int, default=2000)
    ap.add_argument("--random", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'map':28s} {'max mono':>9s} {'last mono':>9s} {'max rand':>9s} {'trunc norm':>10s}")
    for name in BUILTIN_NAMES:
        mono, rand, smax = ratios(builtin(name), args.max_degree, args.powers, args.random, rng)
        print(f"{name:28s} {mono.max():9.4f} {mono[-1]:9.4f} {rand.max():9.4f} {smax:10.4f}")


if __name__ == "__main__":
    main()
