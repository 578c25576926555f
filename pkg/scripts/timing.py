"""Wall time of the four singular-value methods as the channel count grows."""

import argparse

import numpy as np

from convspectra import make_layer
from convspectra.approximation import run_method


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channels", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--kernel", type=int, default=3)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--skip-exact-above", type=int, default=32,
                    help="skip the dense exact and circular SVDs above this many channels")
    args = ap.parse_args()

    methods = ("exact", "circular", "sample", "quantile")
    print(f"{'channels':>8} | " + " ".join(f"{m:>10}" for m in methods))
    for c in args.channels:
        w = np.random.default_rng(c).uniform(-0.5, 0.5, (c, c, args.kernel, args.kernel))
        layer = make_layer(w, args.n)
        cells = []
        for m in methods:
            if m in ("exact", "circular") and c > args.skip_exact_above:
                cells.append(f"{'-':>10}")
                continue
            _, secs = run_method(layer, m, size_cap=None)
            cells.append(f"{secs:9.3f}s")
        print(f"{c:>8} | " + " ".join(cells))


if __name__ == "__main__":
    main()
