"""Command-line front end: one subcommand per experiment scenario.

Grids accept either comma-separated values ("0.1,0.25,0.5") or inclusive
start:stop:step ranges ("0.05:0.95:0.05").  Output goes to --out or stdout;
failures print a JSON error object on stderr and exit nonzero.
"""

import argparse
import json
import sys

from .experiments import (
    SCENARIOS, ConfigError, ExperimentConfig, run_scenario, render_output,
)

__all__ = ["main", "build_parser"]


def _parse_float_list(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        values = []
        k = 0
        while True:
            v = round(start + k * step, 12)
            if v > stop + 1e-9:
                break
            values.append(v)
            k += 1
        return tuple(values)
    return tuple(float(p) for p in text.split(",") if p.strip())


def _parse_int_list(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (int(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(",") if p.strip())


def _add_common(sub):
    sub.add_argument("--n", type=int, help="single lattice size")
    sub.add_argument("--n-list", type=_parse_int_list, help="lattice sizes (comma list or start:stop:step)")
    sub.add_argument("--gamma", type=float, help="single dissipation rate")
    sub.add_argument("--gamma-grid", type=_parse_float_list, help="rate grid (comma list or start:stop:step)")
    sub.add_argument("--delta", type=_parse_float_list, help="hopping asymmetry value(s), comma separated")
    sub.add_argument("--chi", type=float, default=0.1, help="dimerization strength")
    sub.add_argument("--c", type=float, default=1.0, help="quantum-jump weight in [0, 1]")
    sub.add_argument("--jumps", choices=("collective", "local", "local-bare"), default="collective")
    sub.add_argument("--bc", choices=("open", "periodic"), default="open", help="boundary conditions")
    sub.add_argument("--epsilon", type=float, default=1e-10, help="corner perturbation strength")
    sub.add_argument("--disorder-w", type=_parse_float_list, default=(5e-4,),
                     help="disorder strength(s), comma separated")
    sub.add_argument("--realizations", type=int, default=1000, help="disorder ensemble size")
    sub.add_argument("--seed", type=int, default=2024, help="base RNG seed")
    sub.add_argument("--t", type=float, default=10.0, help="evolution time for overlap traces")
    sub.add_argument("--workers", type=int, default=1, help="parallel workers for ensembles")
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--format", choices=("csv", "json", "dot"), default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lindlat",
        description="Lindblad dynamics on asymmetric-hopping lattices: scans, sensors, spectra.",
    )
    subs = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in SCENARIOS:
        sub = subs.add_parser(name, help=f"run the {name} scenario")
        _add_common(sub)
        if name == "bistability":
            sub.add_argument("--model", choices=("spin", "euclid"), default="spin")
            sub.add_argument("--spin", type=float, default=20.0, help="spin magnitude S")
        if name == "perturbed-spectrum":
            sub.add_argument("--include-liouvillian", action="store_true",
                             help="also diagonalize the full Liouvillian pair (slow)")
    return parser


def config_from_args(args):
    n_list = args.n_list or ((args.n,) if args.n else ())
    gamma_grid = args.gamma_grid or ((args.gamma,) if args.gamma is not None else ())
    if args.scenario == "fock-lattice" and args.format == "csv":
        fmt = "json"
    else:
        fmt = args.format
    cfg = ExperimentConfig(
        scenario=args.scenario,
        n_list=tuple(n_list),
        gamma_grid=tuple(gamma_grid),
        delta_list=tuple(args.delta or ()),
        chi=args.chi,
        spin=getattr(args, "spin", 20.0),
        boundary=args.bc,
        jumps_kind=args.jumps,
        c=args.c,
        epsilon=args.epsilon,
        disorder_w=tuple(args.disorder_w),
        realizations=args.realizations,
        seed=args.seed,
        t=args.t,
        bistability_model=getattr(args, "model", "spin"),
        include_liouvillian=getattr(args, "include_liouvillian", False),
        workers=args.workers,
    )
    return cfg, fmt


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, fmt = config_from_args(args)
        cfg = cfg.validated()
        result, extras = run_scenario(cfg)
        text = render_output(cfg, result, extras, fmt=fmt)
    except ConfigError as exc:
        json.dump({"error": "config", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except Exception as exc:  # runtime failure: report, do not traceback-spam
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
