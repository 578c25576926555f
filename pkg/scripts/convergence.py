"""How the circulant and quantile estimates approach the exact spectrum as the input grows."""

import argparse

import numpy as np

from convspectra import circular_spectrum, exact_layer_spectrum, make_layer, quantile_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shape", type=int, nargs=4, default=[1, 1, 3, 3])
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 12, 24])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = np.random.default_rng(args.seed).uniform(-0.5, 0.5, args.shape)
    print(f"{'n':>4} | {'mean|T-C|':>10} {'max|T-Q|':>10} {'max|T-C|':>10}")
    for n in args.sizes:
        layer = make_layer(w, n)
        e = exact_layer_spectrum(layer, size_cap=None).values
        c = circular_spectrum(layer, size_cap=None).values
        q = quantile_spectrum(layer).values
        print(f"{n:>4} | {np.mean(np.abs(e - c)):10.5f} {np.max(np.abs(e - q)):10.5f} {np.max(np.abs(e - c)):10.5f}")


if __name__ == "__main__":
    main()
