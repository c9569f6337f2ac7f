"""Command line interface for the benchmark harness.

Usage:

    anysort bench --mode termination --sizes 8,16,32 --trials 1000 \
        --seed 1 --algos corsort:rho,quicksort:natural --out r.csv --plot r.svg

Every flag can also come from a ``key=value`` config file passed with
``--config``; explicit flags override file values.  Exit code 0 on
success, 1 with a diagnostic line on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    ExperimentConfig,
    emit_csv,
    emit_plot,
    run_profile_experiment,
    run_termination_experiment,
)
from .metrics import DEFAULT_LEVELS
from .sorters import ALGORITHMS, SorterSpec

_DEFAULTS = {
    "mode": "termination",
    "sizes": "8,16,32,64,128,256,512,1024",
    "trials": "10000",
    "seed": "0",
    "algos": ("corsort:rho,quicksort:natural,asort:rho,mergesort_dfs:natural,"
              "mergesort_bfs:rho,heapsort:natural,ford_johnson:rho"),
    "levels": ",".join(f"{v:g}" for v in DEFAULT_LEVELS),
    "out": "",
    "plot": "",
    "jobs": "1",
}

# estimator used when an --algos entry gives only the algorithm name
_DEFAULT_ESTIMATOR = {
    "quicksort": "natural",
    "mergesort_dfs": "natural",
    "heapsort": "natural",
}


def parse_algos(text: str) -> tuple[SorterSpec, ...]:
    """Parse 'name[:estimator],...' into sorter specs."""
    specs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, est = part.partition(":")
        if not est:
            est = _DEFAULT_ESTIMATOR.get(name, "rho")
        specs.append(SorterSpec(name, est))
    if not specs:
        raise ValueError("no algorithms given")
    return tuple(specs)


def read_config_file(path: str) -> dict[str, str]:
    """Read key=value lines; blank lines and #-comments are skipped."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in _DEFAULTS:
                raise ValueError(f"{path}:{lineno}: expected 'key=value' with key in "
                                 f"{sorted(_DEFAULTS)}, got {line!r}")
            values[key] = value.strip()
    return values


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge defaults, config file, and explicit flags (strongest last)."""
    merged = dict(_DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = str(flag)
    return ExperimentConfig(
        mode=merged["mode"],
        sizes=tuple(int(s) for s in merged["sizes"].split(",") if s.strip()),
        algorithms=parse_algos(merged["algos"]),
        trials=int(merged["trials"]),
        seed=int(merged["seed"]),
        levels=tuple(float(s) for s in merged["levels"].split(",") if s.strip()),
        out=merged["out"] or None,
        plot=merged["plot"] or None,
        jobs=int(merged["jobs"]),
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anysort", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    bench = sub.add_parser("bench", help="run a sorting benchmark experiment")
    bench.add_argument("--mode", choices=("termination", "profile"),
                       help="termination: overhead quantiles per n; profile: per-step distance quantiles")
    bench.add_argument("--sizes", help="comma-separated input sizes, each >= 2")
    bench.add_argument("--trials", type=int, help="random inputs per size (default 10000)")
    bench.add_argument("--seed", type=int, help="experiment seed (default 0)")
    bench.add_argument("--algos",
                       help=f"comma-separated name[:estimator]; names: {', '.join(ALGORITHMS)}")
    bench.add_argument("--levels", help="comma-separated quantile percentages")
    bench.add_argument("--out", help="CSV output path (default: CSV to stdout)")
    bench.add_argument("--plot", help="SVG output path")
    bench.add_argument("--jobs", type=int, help="worker processes for trials (default 1)")
    bench.add_argument("--config", help="key=value config file; flags override it")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if cfg.mode == "termination":
            rows = run_termination_experiment(cfg)
        else:
            rows = run_profile_experiment(cfg)
        if cfg.out:
            emit_csv(rows, cfg.out)
        if cfg.plot:
            emit_plot(rows, cfg.plot)
        if not cfg.out and not cfg.plot:
            sys.stdout.write("algorithm,estimator,n,step,quantile,value\n")
            from .bench import _row_key

            for r in sorted(rows, key=_row_key):
                step = "" if r.step is None else str(r.step)
                sys.stdout.write(f"{r.algorithm},{r.estimator},{r.n},{step},{r.quantile:g},{r.value:.17g}\n")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
