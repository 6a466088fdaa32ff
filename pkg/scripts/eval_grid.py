"""Evaluate C_phi^* f on a polar grid with every formula and the oracle; emit CSV.

    python3 scripts/eval_grid.py example-4.1 --f 1,2,0,-1 --angles 64 --radii 8 > grid.csv
"""
import argparse
import csv
import sys

import numpy as np

from ratadjoint.adjoint import FORMS, preimage_fiber
from ratadjoint.builtins import builtin
from ratadjoint.errors import NotRegularValue, PoleProximity
from ratadjoint.hardy import HardyPoly, adjoint_oracle


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("map")
    ap.add_argument("--f", default="1,1,1", help="real coefficients, ascending")
    ap.add_argument("--angles", type=int, default=32)
    ap.add_argument("--radii", type=int, default=6)
    ap.add_argument("--r-max", type=float, default=0.98)
    args = ap.parse_args()
    phi = builtin(args.map)
    f = HardyPoly([float(c) for c in args.f.split(",")])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["r", "theta", "re", "im", "oracle_re", "oracle_im"] + [f"err_{k}" for k in FORMS])
    for r in np.linspace(args.r_max / args.radii, args.r_max, args.radii):
        for t in 2 * np.pi * np.arange(args.angles) / args.angles:
            z = r * np.exp(1j * t)
            ref = adjoint_oracle(phi, f, z)
            errs = []
            try:
                F = preimage_fiber(phi.exterior, z)
            except NotRegularValue:
                F = None
            for form, fn in FORMS.items():
                try:
                    errs.append(abs(fn(phi, f, z, fib=F).value - ref) if F is not None else "")
                except PoleProximity:
                    errs.append("")
            w.writerow([r, t, z.real, z.imag, ref.real, ref.imag] + errs)


if __name__ == "__main__":
    main()
