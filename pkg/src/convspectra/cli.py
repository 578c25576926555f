"""``conv-spectra`` command line interface.

Exit codes: 0 success, 2 validation error, 3 size cap exceeded,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .approximation import DEFAULT_SIZE_CAP, QuantileConfig, check_size_cap, compare_methods, run_method
from .bounds import bound_report
from .core import ConvLayer, NoConvergence, SizeCapExceeded, ValidationError
from .filterfile import dims_of, parse_filter_file
from .montecarlo import monte_carlo
from .operators import build_T_strided
from .svd import exact_spectrum

SUBCOMMANDS = ("exact", "circular", "sample", "quantile", "bounds", "compare", "bench")
EXIT_OK, EXIT_VALIDATION, EXIT_SIZE_CAP, EXIT_NO_CONVERGENCE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conv-spectra", description="Singular spectra and spectral-norm bounds of 2-D conv layers.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--filter", dest="filter_path", help="filter manifest (JSON) or binary sidecar")
    p.add_argument("--n", type=int, help="input side length (overrides the manifest)")
    p.add_argument("--stride", type=int, help="stride g (exact method only supports g > 1)")
    p.add_argument("--gamma", type=float, default=0.5, help="quantile offset in (0, 1)")
    p.add_argument("--interp", choices=("linear", "kernel"), default="linear")
    p.add_argument("--grid", type=int, help="grid side for the one/inf-norm bound (default: n)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=("uniform", "gaussian"), default="uniform")
    p.add_argument("--shape", type=int, nargs=4, metavar=("C_OUT", "C_IN", "H", "W"),
                   help="filter shape for bench")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for bench")
    p.add_argument("--top-k", type=int, dest="top_k", help="truncate emitted spectra")
    p.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP, dest="size_cap",
                   help="max dense entries for exact/circular (0 disables)")
    p.add_argument("--with-exact", action="store_true", dest="with_exact",
                   help="bounds: also compute the exact Toeplitz norm")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _floats(a) -> list[float]:
    return [float(x) for x in np.asarray(a).ravel()]


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("out", "format")}


def _load(args: argparse.Namespace) -> ConvLayer:
    if not args.filter_path:
        raise ValidationError(f"'{args.command}' needs --filter")
    return parse_filter_file(args.filter_path, n=args.n, stride=args.stride)


def _cap(args) -> Optional[int]:
    return None if args.size_cap == 0 else args.size_cap


def _layer_echo(layer: ConvLayer) -> dict:
    f = layer.filter
    return {"shape": [f.c_out, f.c_in, f.h, f.w], "pad": list(layer.pad.as_tuple()),
            "n": layer.n, "stride": layer.geom.stride}


def cmd_run(args: argparse.Namespace) -> dict:
    """Run one of the per-filter subcommands and return the report as a dict."""
    layer = _load(args)
    qcfg = QuantileConfig(gamma=args.gamma, interp=args.interp)
    report: dict = {
        "tool": "conv-spectra", "version": __version__, "command": args.command,
        "config": _config_echo(args), "seed": args.seed, "layer": _layer_echo(layer),
    }
    cmd = args.command
    if cmd in ("exact", "circular", "sample", "quantile"):
        if layer.geom.stride != 1:
            if cmd != "exact":
                raise ValidationError(f"'{cmd}' supports stride 1 only; use 'exact' for strided layers")
            check_size_cap(layer, _cap(args))
            t0 = time.perf_counter()
            spec = exact_spectrum(build_T_strided(layer))
            secs = time.perf_counter() - t0
        else:
            spec, secs = run_method(layer, cmd, config=qcfg, size_cap=_cap(args))
        vals = spec.top(args.top_k)
        report["spectra"] = {cmd: _floats(vals)}
        report["count"] = len(spec)
        report["timings"] = {cmd: secs}
        if spec.clusters is not None:
            report["clusters"] = [_floats(c[: args.top_k] if args.top_k else c) for c in spec.clusters]
    elif cmd == "bounds":
        br = bound_report(layer, with_exact=args.with_exact, n_grid=args.grid, size_cap=_cap(args))
        report["bounds"] = br.as_dict()
        report["timings"] = br.timings
    elif cmd == "compare":
        er = compare_methods(layer, ("circular", "sample", "quantile"), config=qcfg, size_cap=_cap(args))
        report["spectra"] = {m: _floats(r.spectrum.top(args.top_k)) for m, r in er.results.items()}
        report["errors"] = {m: {"overall": r.overall_error, "first": r.first_error} for m, r in er.results.items()}
        report["timings"] = {m: r.seconds for m, r in er.results.items()}
    return report


def cmd_bench(args: argparse.Namespace) -> dict:
    if args.shape is None:
        raise ValidationError("'bench' needs --shape C_OUT C_IN H W")
    n = args.n if args.n is not None else 10
    summary = monte_carlo(dims_of(args.shape), n=n, trials=args.trials, seed=args.seed, dist=args.dist,
                          config=QuantileConfig(gamma=args.gamma, interp=args.interp), jobs=args.jobs)
    return {
        "tool": "conv-spectra", "version": __version__, "command": "bench",
        "config": _config_echo(args), "seed": args.seed, **summary.as_dict(),
    }


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    if report["command"] == "bench":
        wr.writerow(["trial", "circular_overall", "circular_first", "quantile_overall", "quantile_first"])
        for t in report["per_trial"]:
            wr.writerow([t["trial"], repr(t["circular_overall"]), repr(t["circular_first"]),
                         repr(t["quantile_overall"]), repr(t["quantile_first"])])
    elif report["command"] == "bounds":
        b = report["bounds"]
        wr.writerow(["quantity", "value", "ratio_to_circular"])
        for k, v in b["bounds"].items():
            wr.writerow([k, repr(v), repr(b["ratios"][k])])
        wr.writerow(["sigma_max_C", repr(b["sigma_max_C"]), repr(1.0)])
        if b["sigma_max_T"] is not None:
            wr.writerow(["sigma_max_T", repr(b["sigma_max_T"]), ""])
    else:
        wr.writerow(["method", "index", "value"])
        for m, vals in report["spectra"].items():
            for i, v in enumerate(vals, start=1):
                wr.writerow([m, i, repr(v)])
    return buf.getvalue()


def emit(report: dict, fmt: str, out: Optional[str]) -> None:
    text = json.dumps(report, indent=1) + "\n" if fmt == "json" else to_csv(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = cmd_bench(args) if args.command == "bench" else cmd_run(args)
        emit(report, args.format, args.out)
    except SizeCapExceeded as exc:
        print(f"conv-spectra: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except NoConvergence as exc:
        print(f"conv-spectra: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ValidationError as exc:
        print(f"conv-spectra: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
