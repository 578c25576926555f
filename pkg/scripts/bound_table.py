"""Spectral-norm bounds relative to the circulant norm, with timings, over random filters."""

import argparse

import numpy as np

from convspectra import bound_report, make_layer


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channels", type=int, nargs="+", default=[16, 64])
    ap.add_argument("--kernels", type=int, nargs="+", default=[1, 3, 5, 7])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--with-exact", action="store_true", help="also report the exact Toeplitz norm (slow)")
    args = ap.parse_args()

    print(f"{'shape':>14} | {'r13':>6} {'r14':>6} {'r15':>6} | {'t13 ms':>8} {'t14 ms':>8} {'t15 ms':>8}"
          + (" | T/C" if args.with_exact else ""))
    for c in args.channels:
        for k in args.kernels:
            ratios, times, tc = [], [], []
            for seed in range(args.seeds):
                w = np.random.default_rng(seed).uniform(-0.5, 0.5, (c, c, k, k))
                rep = bound_report(make_layer(w, max(args.n, k)), with_exact=args.with_exact)
                ratios.append([rep.ratios[b] for b in ("bound13", "bound14", "bound15")])
                times.append([1e3 * rep.timings[b] for b in ("bound13", "bound14", "bound15")])
                if args.with_exact:
                    tc.append(rep.sigma_max_T / rep.sigma_max_C)
            r, t = np.mean(ratios, axis=0), np.median(times, axis=0)
            line = f"{c}x{c}x{k}x{k}".rjust(14) + f" | {r[0]:6.3f} {r[1]:6.3f} {r[2]:6.3f} | {t[0]:8.2f} {t[1]:8.2f} {t[2]:8.2f}"
            if tc:
                line += f" | {np.mean(tc):.4f}"
            print(line)


if __name__ == "__main__":
    main()
