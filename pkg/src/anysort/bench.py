"""Reproducible benchmark harness: seeded inputs, experiments, CSV, SVG.

Determinism contract: every output byte is a pure function of the
configuration.  Inputs come from a splitmix64 generator keyed on
(seed, trial index) with rejection sampling and a Fisher-Yates shuffle,
so the same key gives the same permutation on every platform.  Trials
are independent, so parallel execution cannot change the results.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from .metrics import DEFAULT_LEVELS, relative_overhead
from .sorters import HiddenList, SorterSpec, count_comparisons, tau_profile

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class _SplitMix:
    """splitmix64 stream: 64-bit state advanced by the golden gamma."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix64(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), by rejection (no modulo bias)."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next64()
            if v < limit:
                return v % bound


def generate_permutation(seed: int, trial_index: int, n: int) -> HiddenList:
    """Uniform permutation of 0..n-1, identical for identical keys.

    The stream seed mixes the experiment seed with the trial index, so
    each trial gets an independent stream and trials can run in any
    order or in parallel without changing the outputs.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = _SplitMix(_mix64(_mix64(seed) ^ (trial_index + 1) * _GOLDEN))
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return HiddenList(perm)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines one benchmark run."""

    mode: str
    sizes: tuple[int, ...]
    algorithms: tuple[SorterSpec, ...]
    trials: int = 10_000
    seed: int = 0
    levels: tuple[float, ...] = DEFAULT_LEVELS
    out: str | None = None
    plot: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("termination", "profile"):
            raise ValueError(f"mode must be 'termination' or 'profile', got {self.mode!r}")
        if not self.sizes:
            raise ValueError("need at least one size")
        for n in self.sizes:
            if n < 2:
                raise ValueError(f"sizes must be >= 2 (the overhead bound and the "
                                 f"normalization need at least one pair), got {n}")
        if not self.algorithms:
            raise ValueError("need at least one algorithm spec")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.levels:
            raise ValueError("need at least one quantile level")
        for v in self.levels:
            if not 0.0 <= v <= 100.0:
                raise ValueError(f"levels are percentages in [0, 100], got {v}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")


@dataclass(frozen=True)
class ResultRow:
    """One aggregated value: a quantile of a metric at one key."""

    algorithm: str
    estimator: str
    n: int
    step: int | None
    quantile: float
    value: float


def _termination_trial(args) -> int:
    spec, seed, trial, n = args
    return count_comparisons(spec, generate_permutation(seed, trial, n))


def _profile_trial(args) -> np.ndarray:
    spec, seed, trial, n = args
    return tau_profile(spec, generate_permutation(seed, trial, n)).astype(np.int32)


def _map_trials(fn, argslist, jobs: int):
    if jobs <= 1:
        return [fn(a) for a in argslist]
    with multiprocessing.Pool(jobs) as pool:
        chunk = max(1, len(argslist) // (jobs * 4))
        return pool.map(fn, argslist, chunksize=chunk)


def run_termination_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Quantiles of relative overhead at termination, per (spec, n)."""
    if cfg.mode != "termination":
        raise ValueError(f"config mode is {cfg.mode!r}, expected 'termination'")
    rows: list[ResultRow] = []
    fractions = [v / 100.0 for v in cfg.levels]
    for spec in cfg.algorithms:
        for n in cfg.sizes:
            args = [(spec, cfg.seed, t, n) for t in range(cfg.trials)]
            counts = _map_trials(_termination_trial, args, cfg.jobs)
            overheads = np.array([relative_overhead(c, n) for c in counts], np.float64)
            values = np.quantile(overheads, fractions, method="linear")
            for lv, val in zip(cfg.levels, values):
                rows.append(ResultRow(spec.algorithm, spec.estimator, n, None, lv, float(val)))
    return rows


def run_profile_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Quantiles of the normalized per-step distance, per (spec, n, step).

    All specs of one n share a horizon (the longest run observed), and
    shorter profiles are padded with zeros: past termination the
    estimate is the final, sorted order.  Steps are 1-based comparison
    counts.
    """
    if cfg.mode != "profile":
        raise ValueError(f"config mode is {cfg.mode!r}, expected 'profile'")
    rows: list[ResultRow] = []
    fractions = [v / 100.0 for v in cfg.levels]
    for n in cfg.sizes:
        per_spec: list[list[np.ndarray]] = []
        horizon = 0
        for spec in cfg.algorithms:
            args = [(spec, cfg.seed, t, n) for t in range(cfg.trials)]
            taus = _map_trials(_profile_trial, args, cfg.jobs)
            horizon = max(horizon, max(len(t) for t in taus))
            per_spec.append(taus)
        npairs = n * (n - 1) / 2
        for spec, taus in zip(cfg.algorithms, per_spec):
            matrix = np.zeros((cfg.trials, horizon), np.float64)
            for t, arr in enumerate(taus):
                matrix[t, : len(arr)] = arr
            values = np.quantile(matrix, fractions, axis=0, method="linear") / npairs
            for li, lv in enumerate(cfg.levels):
                for k in range(horizon):
                    rows.append(
                        ResultRow(spec.algorithm, spec.estimator, n, k + 1, lv, float(values[li, k]))
                    )
    return rows


# ---------------------------------------------------------------------------
# CSV


def _row_key(row: ResultRow):
    return (row.algorithm, row.estimator, row.n, -1 if row.step is None else row.step, row.quantile)


def emit_csv(rows, path: str) -> None:
    """Write rows sorted by key; bit-exact for equal inputs.

    Header ``algorithm,estimator,n,step,quantile,value``; UTF-8, LF
    endings, 17 significant digits on values, empty step column in
    termination mode.
    """
    rows = sorted(rows, key=_row_key)
    if not rows:
        raise ValueError("no rows to write")
    keys = {_row_key(r) for r in rows}
    if len(keys) != len(rows):
        raise ValueError("duplicate rows for the same (algorithm, estimator, n, step, quantile)")
    lines = ["algorithm,estimator,n,step,quantile,value"]
    for r in rows:
        step = "" if r.step is None else str(r.step)
        lines.append(f"{r.algorithm},{r.estimator},{r.n},{step},{r.quantile:g},{r.value:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def load_csv(path: str) -> list[ResultRow]:
    """Parse a file written by emit_csv; values round-trip exactly."""
    rows: list[ResultRow] = []
    with open(path, encoding="utf-8", newline="") as f:
        header = f.readline().rstrip("\n")
        if header != "algorithm,estimator,n,step,quantile,value":
            raise ValueError(f"unrecognized header: {header!r}")
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            alg, est, n, step, quantile, value = line.split(",")
            rows.append(
                ResultRow(alg, est, int(n), int(step) if step else None, float(quantile), float(value))
            )
    return rows


# ---------------------------------------------------------------------------
# SVG plot

_PALETTE = (
    "#0072b2",
    "#d55e00",
    "#009e73",
    "#cc79a7",
    "#e69f00",
    "#56b4e9",
    "#f0e442",
    "#555555",
)

_WIDTH, _HEIGHT = 960, 540
_ML, _MR, _MT, _MB = 72, 24, 24, 56


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """A few round tick positions covering [lo, hi]."""
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * span:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def emit_plot(rows, path: str) -> None:
    """Render rows as a standalone SVG: median lines plus quantile bands.

    Termination rows (no step) plot overhead against n on a log x-axis;
    profile rows plot the normalized distance against the step.  Bands
    pair the outermost levels inward; the middle level is the line.
    The output depends only on the row values, so a plot regenerated
    from the CSV is byte-identical to one from live rows.
    """
    rows = sorted(rows, key=_row_key)
    if not rows:
        raise ValueError("no rows to plot")
    kinds = {r.step is None for r in rows}
    if len(kinds) != 1:
        raise ValueError("rows mix termination and profile results")
    termination = rows[0].step is None
    multi_n = len({r.n for r in rows}) > 1
    series: dict[tuple, dict[float, list[tuple[float, float]]]] = {}
    for r in rows:
        skey = (r.algorithm, r.estimator) if termination else (r.algorithm, r.estimator, r.n)
        x = float(r.n) if termination else float(r.step)
        series.setdefault(skey, {}).setdefault(r.quantile, []).append((x, r.value))

    def xmap_raw(x: float) -> float:
        return math.log10(x) if termination else x

    xs = [xmap_raw(x) for grp in series.values() for pts in grp.values() for x, _ in pts]
    ys = [y for grp in series.values() for pts in grp.values() for _, y in pts]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    ypad = 0.05 * (yhi - ylo)
    ylo -= ypad
    yhi += ypad
    pw = _WIDTH - _ML - _MR
    ph = _HEIGHT - _MT - _MB

    def X(x: float) -> float:
        return _ML + (xmap_raw(x) - xlo) / (xhi - xlo) * pw

    def Y(y: float) -> float:
        return _MT + (yhi - y) / (yhi - ylo) * ph

    svg = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#999"/>',
    ]

    # y grid and labels
    for tv in _nice_ticks(ylo, yhi):
        y = Y(tv)
        svg.append(f'<line x1="{_ML}" y1="{_fmt(y)}" x2="{_WIDTH - _MR}" y2="{_fmt(y)}" stroke="#e5e5e5"/>')
        svg.append(f'<text x="{_ML - 6}" y="{_fmt(y + 4)}" text-anchor="end">{tv:g}</text>')
    # x ticks
    if termination:
        xticks = sorted({r.n for r in rows})
    else:
        xticks = _nice_ticks(xlo, xhi)
        xticks = [int(t) for t in xticks if t >= 1]
    for tv in xticks:
        x = X(float(tv))
        svg.append(f'<line x1="{_fmt(x)}" y1="{_MT + ph}" x2="{_fmt(x)}" y2="{_MT + ph + 5}" stroke="#666"/>')
        svg.append(f'<text x="{_fmt(x)}" y="{_MT + ph + 20}" text-anchor="middle">{tv:g}</text>')
    xlabel = "input size n (log scale)" if termination else "comparisons performed"
    ylabel = "overhead vs lower bound (%)" if termination else "normalized distance to sorted"
    svg.append(f'<text x="{_ML + pw / 2:.0f}" y="{_HEIGHT - 14}" text-anchor="middle">{xlabel}</text>')
    svg.append(
        f'<text x="18" y="{_MT + ph / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MT + ph / 2:.0f})">{ylabel}</text>'
    )

    def polyline_points(pts: list[tuple[float, float]]) -> str:
        return " ".join(f"{_fmt(X(x))},{_fmt(Y(y))}" for x, y in pts)

    for si, (skey, grp) in enumerate(sorted(series.items())):
        color = _PALETTE[si % len(_PALETTE)]
        levels = sorted(grp)
        pairs = []
        lo_i, hi_i = 0, len(levels) - 1
        while lo_i < hi_i:
            pairs.append((levels[lo_i], levels[hi_i]))
            lo_i += 1
            hi_i -= 1
        median_level = levels[lo_i] if lo_i == hi_i else None
        for bi, (la, lb) in enumerate(pairs):
            low = sorted(grp[la])
            high = sorted(grp[lb])
            opacity = 0.15 + 0.12 * bi
            points = (
                " ".join(f"{_fmt(X(x))},{_fmt(Y(y))}" for x, y in high)
                + " "
                + " ".join(f"{_fmt(X(x))},{_fmt(Y(y))}" for x, y in reversed(low))
            )
            svg.append(f'<polygon points="{points}" fill="{color}" fill-opacity="{opacity:.2f}" stroke="none"/>')
        if median_level is not None:
            pts = sorted(grp[median_level])
            svg.append(
                f'<polyline points="{polyline_points(pts)}" fill="none" stroke="{color}" stroke-width="1.8"/>'
            )
        label = f"{skey[0]}:{skey[1]}"
        if not termination and multi_n:
            label += f" n={skey[2]}"
        ly = _MT + 16 + 16 * si
        lx = _WIDTH - _MR - 190
        svg.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="3"/>')
        svg.append(f'<text x="{lx + 28}" y="{ly}">{label}</text>')

    svg.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(svg) + "\n")
