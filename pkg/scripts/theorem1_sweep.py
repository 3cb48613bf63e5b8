"""Observed multiplier ratios against the k-bound over a grid of functions and weights.

Emits CSV: f, alpha, k, max observed ratio per probe family, bound, ratio/bound.
"""
import argparse
import csv
import sys

from schwarzmult.multiplier import theorem1_bound, theorem1_ratios
from schwarzmult.schwarzian import ahlfors_weill_k
from schwarzmult.series import build_from_spec

DEFAULT_FNS = ("scaled-koebe:0.2", "scaled-koebe:0.3", "scaled-koebe:0.4", "quad:0.1", "quad:0.2", "quad:0.3")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fn", nargs="*", default=list(DEFAULT_FNS))
    ap.add_argument("--alpha", nargs="*", type=float, default=[2.5, 3.0, 5.0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["f", "alpha", "k", "random", "basis", "probes", "gram", "bound", "fraction"])
    for spec in args.fn:
        f = build_from_spec(spec, with_dilatation=False)
        k = ahlfors_weill_k(f)
        if k is None:
            print(f"skip {spec}: no Ahlfors-Weill bound", file=sys.stderr)
            continue
        for alpha in args.alpha:
            r = theorem1_ratios(f, alpha, args.trials, args.seed)
            bound = theorem1_bound(alpha, k)
            top = max(max(r["random"]), max(r["basis"]), max(r["probes"]), r["gram"])
            w.writerow([spec, alpha, f"{k:.10g}", f"{max(r['random']):.10g}", f"{max(r['basis']):.10g}",
                        f"{max(r['probes']):.10g}", f"{r['gram']:.10g}", f"{bound:.10g}", f"{top / bound:.6f}"])


if __name__ == "__main__":
    main()
