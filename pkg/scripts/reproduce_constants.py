"""Print the threshold constants and the Hedenmalm regime table at t = -2."""
import argparse
import json

import numpy as np

from schwarzmult.cli import thresholds
from schwarzmult.spectrum import hedenmalm_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, default=-2.0)
    args = ap.parse_args()
    print(json.dumps(thresholds(), indent=2))
    print("k,bound,regime")
    for k in np.round(np.arange(0.05, 1.0, 0.05), 2):
        b = hedenmalm_bound(float(k), args.t)
        print(f"{k:.2f},{b.bound:.10f},{b.regime}")


if __name__ == "__main__":
    main()
