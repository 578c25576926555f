"""Mean approximation errors over random filters, one row per filter shape.

    python3 scripts/monte_carlo_table.py --trials 100 --shapes 8x8x3x3 8x8x5x5
"""

import argparse
import json

from convspectra import QuantileConfig
from convspectra.montecarlo import monte_carlo


def parse_shape(text):
    parts = tuple(int(x) for x in text.lower().split("x"))
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected C_OUTxC_INxHxW, got {text!r}")
    return parts


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--shapes", type=parse_shape, nargs="+", default=[(8, 8, 3, 3), (8, 8, 5, 5)])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--dist", choices=("uniform", "gaussian"), default="uniform")
    ap.add_argument("--gamma", type=float, default=0.5)
    ap.add_argument("--json", action="store_true", help="emit full summaries as JSON")
    args = ap.parse_args()

    rows = []
    for shape in args.shapes:
        s = monte_carlo(shape, n=args.n, trials=args.trials, seed=args.seed, dist=args.dist,
                        config=QuantileConfig(gamma=args.gamma))
        rows.append(s)
    if args.json:
        print(json.dumps([r.as_dict() for r in rows], indent=1))
        return
    print(f"n={args.n}, trials={args.trials}, seed={args.seed}, dist={args.dist}, gamma={args.gamma}")
    print(f"{'shape':>12} | {'overall CA':>10} {'overall QI':>10} | {'sigma1 CA':>10} {'sigma1 QI':>10}")
    for r in rows:
        st = r.stats()
        cells = [100 * st[k]["mean"] for k in ("circular_overall", "quantile_overall", "circular_first", "quantile_first")]
        print(f"{'x'.join(map(str, r.shape)):>12} | {cells[0]:9.2f}% {cells[1]:9.2f}% | {cells[2]:9.2f}% {cells[3]:9.2f}%")


if __name__ == "__main__":
    main()
