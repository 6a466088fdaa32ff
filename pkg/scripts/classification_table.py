"""Classify every builtin map and summarize both operator decompositions.

    python3 scripts/classification_table.py [--json out.json]
"""
import argparse
import time

from ratadjoint.builtins import BUILTIN_NAMES, builtin, pole_cancel_example
from ratadjoint.regularity import FORMS, atlas_for, classify, decomposition_report
from ratadjoint.serialize import dumps


def row(name):
    phi = pole_cancel_example() if name == "pole-cancel" else builtin(name)
    t0 = time.perf_counter()
    rep = classify(phi)
    atlas = atlas_for(phi, rep)
    dec = {f: decomposition_report(phi, f, report=rep, atlas=atlas) for f in FORMS}
    return {
        "map": name,
        "class": rep.map_class.value,
        "phi_inf": rep.phi_at_infinity_location,
        "contacts": rep.n_boundary_contacts if rep.n_boundary_contacts is not None else "all",
        "blaschke": rep.is_blaschke,
        "bs_legit": dec["bs_form"].legitimate,
        "weighted_legit": dec["weighted_form"].legitimate,
        "non_compact": list(dec["bs_form"].non_compact_labels),
        "monodromy": list(atlas.loop_permutation),
        "min_gap": atlas.min_interbranch_distance(),
        "seconds": round(time.perf_counter() - t0, 2),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--json", help="also write rows as JSON")
    args = ap.parse_args()
    rows = [row(n) for n in BUILTIN_NAMES + ("pole-cancel",)]
    hdr = f"{'map':28s} {'class':24s} {'phi(inf)':9s} {'contacts':8s} {'bs':5s} {'wtd':5s} {'non-compact':12s} {'min gap':9s}"
    print(hdr)
    print("-" * len(hdr))
    for r in rows:
        print(f"{r['map']:28s} {r['class']:24s} {r['phi_inf']:9s} {str(r['contacts']):8s} "
              f"{str(r['bs_legit']):5s} {str(r['weighted_legit']):5s} {str(r['non_compact']):12s} {r['min_gap']:.3e}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dumps(rows, indent=2))


if __name__ == "__main__":
    main()
