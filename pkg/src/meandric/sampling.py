"""Exactly uniform sampling of meandric systems and Monte Carlo checks.

Sampling recipe: draw a uniformly random arrangement of n up-steps and
n + 1 down-steps, rotate it to start just after the first minimum of its
prefix-sum walk (the unique rotation whose proper prefixes never go
negative), and drop the final down-step.  The result is an exactly
uniform balanced nonnegative step sequence, which the stack bijection
turns into an exactly uniform non-crossing matching.  Everything is
driven by counter-based (keyed Philox) randomness, so each draw is a pure
function of ``(seed, stream, position)``: parallel workers need no shared
state and results cannot depend on scheduling.

Summary statistics are accumulated in exact integer arithmetic and
converted to floats once at the end, which makes summaries bit-identical
for a fixed seed regardless of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import ndtr
from scipy.stats import chi2

from .analysis import clt_parameters
from .combinatorics import NonCrossingMatching, enumerate_matchings
from .errors import MeandricError
from .meanders import MeandricSystem, Shape, format_shape

__all__ = [
    "UPPER_STREAM",
    "LOWER_STREAM",
    "sample_matching",
    "sample_system",
    "ExperimentConfig",
    "SampleSummary",
    "run_experiment",
    "anderson_darling_statistic",
    "AD_CRITICAL_VALUES",
    "chi_square_uniformity",
    "UniformityReport",
    "matching_uniformity",
    "GateCheck",
    "GateReport",
    "evaluate_gates",
    "CltReport",
    "clt_report",
]

UPPER_STREAM = 0
LOWER_STREAM = 1
_DITHER_STREAM = 2

_CHUNK = 1024

# Critical values for the normality statistic with mean and variance
# estimated from the sample (applied to the size-adjusted statistic).
AD_CRITICAL_VALUES = {0.10: 0.631, 0.05: 0.752, 0.025: 0.873, 0.01: 1.035}


def _philox_key(seed: int, stream: int, position: int) -> int:
    """128-bit Philox key from (seed, stream, position)."""
    if not 0 <= position < 1 << 60:
        raise ValueError(f"position {position} out of range")
    if not 0 <= stream < 16:
        raise ValueError(f"stream {stream} out of range")
    return ((seed & (1 << 64) - 1) << 64) | (stream << 60) | position


def _dyck_steps(n: int, position: int, seed: int, stream: int) -> np.ndarray:
    """Uniform balanced nonnegative step sequence of length 2n."""
    gen = np.random.Generator(np.random.Philox(key=_philox_key(seed, stream, position)))
    perm = gen.permutation(2 * n + 1)
    walk = np.where(perm < n, 1, -1)
    prefix = np.cumsum(walk)
    pivot = int(np.argmin(prefix))  # first minimum: the one good rotation
    rotated = np.concatenate([walk[pivot + 1 :], walk[: pivot + 1]])
    return rotated[: 2 * n]


def _partner_from_steps(steps: np.ndarray) -> np.ndarray:
    """0-based partner array of the stack pairing of a step sequence.

    Arcs at the same nesting depth alternate open/close from left to
    right, so a stable sort by depth pairs adjacent entries.
    """
    prefix = np.cumsum(steps)
    depth = np.where(steps == 1, prefix, prefix + 1)
    order = np.argsort(depth, kind="stable")
    partner = np.empty(steps.shape[0], dtype=np.int64)
    opens, closes = order[0::2], order[1::2]
    partner[opens] = closes
    partner[closes] = opens
    return partner


def sample_matching(n: int, position: int, seed: int, stream: int = UPPER_STREAM) -> NonCrossingMatching:
    """Exactly uniform non-crossing matching of [2n]; a pure function of
    (seed, stream, position)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    partner0 = _partner_from_steps(_dyck_steps(n, position, seed, stream))
    return NonCrossingMatching((0,) + tuple(int(v) + 1 for v in partner0))


def sample_system(n: int, position: int, seed: int) -> MeandricSystem:
    """Uniform meandric system: independent upper and lower matchings
    drawn from separate sub-streams of the same position."""
    return MeandricSystem(
        sample_matching(n, position, seed, UPPER_STREAM),
        sample_matching(n, position, seed, LOWER_STREAM),
    )


def _count_occurrences(up: np.ndarray, lo: np.ndarray, shape: Shape) -> int:
    """Occurrences of the shape in 0-based partner arrays, vectorized over
    all starting positions."""
    width = up.shape[0] - 2 * shape.half_length + 1
    if width <= 0:
        return 0
    idx = np.arange(width)
    ok = np.ones(width, dtype=bool)
    for a, b in shape.upper:
        ok &= up[a - 1 : a - 1 + width] == idx + (b - 1)
    for a, b in shape.lower:
        ok &= lo[a - 1 : a - 1 + width] == idx + (b - 1)
    return int(np.count_nonzero(ok))


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo run: count a shape in ``sample_count`` uniform
    systems of size n at the given seed."""

    n: int
    sample_count: int
    shape: Shape
    seed: int
    worker_count: int = 1

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.shape.half_length > self.n:
            raise MeandricError(
                f"shape of half-length {self.shape.half_length} cannot fit in a size-{self.n} system"
            )
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


def _experiment_chunk(args: tuple[int, Shape, int, int, int]) -> np.ndarray:
    n, shape, seed, start, stop = args
    out = np.empty(stop - start, dtype=np.int64)
    for k, position in enumerate(range(start, stop)):
        up = _partner_from_steps(_dyck_steps(n, position, seed, UPPER_STREAM))
        lo = _partner_from_steps(_dyck_steps(n, position, seed, LOWER_STREAM))
        out[k] = _count_occurrences(up, lo, shape)
    return out


def _run_chunks(worker, args_list: list, worker_count: int) -> list:
    if worker_count <= 1 or len(args_list) <= 1:
        return [worker(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=worker_count) as pool:
        return list(pool.map(worker, args_list, chunksize=1))


@dataclass(frozen=True)
class SampleSummary:
    """Statistics of one experiment, with the CLT predictions alongside.

    Standardized sample moments use population central moments; the
    normality statistic is reported twice, once on the raw standardized
    counts and once after adding a uniform(-1/2, 1/2) dither that removes
    the integer-lattice artifact (the counts live on a lattice whose
    spacing does not shrink with the sample size, which inflates any
    continuous-distribution test; the dithered statistic is the one
    gates should use).
    """

    n: int
    sample_count: int
    seed: int
    shape_text: str
    histogram: tuple[tuple[int, int], ...]
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    predicted_mean: float
    predicted_variance: float
    z_mean: float
    z_variance: float
    ad_statistic: float
    ad_statistic_raw: float
    ad_level: float
    ad_critical: float
    ad_pass: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.sample_count,
            "seed": self.seed,
            "shape": self.shape_text,
            "histogram": {str(x): c for x, c in self.histogram},
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "excessKurtosis": self.excess_kurtosis,
            "predictedMean": self.predicted_mean,
            "predictedVariance": self.predicted_variance,
            "zMean": self.z_mean,
            "zVariance": self.z_variance,
            "adStatistic": self.ad_statistic,
            "adStatisticRaw": self.ad_statistic_raw,
            "adLevel": self.ad_level,
            "adCritical": self.ad_critical,
            "adPass": self.ad_pass,
        }


def anderson_darling_statistic(values: np.ndarray) -> float:
    """Size-adjusted normality statistic with estimated mean/variance."""
    x = np.sort(np.asarray(values, dtype=float))
    count = x.size
    z = (x - x.mean()) / x.std(ddof=1)
    cdf = np.clip(ndtr(z), 1e-15, 1 - 1e-15)
    i = np.arange(1, count + 1)
    a2 = -count - np.mean((2 * i - 1) * (np.log(cdf) + np.log1p(-cdf[::-1])))
    return float(a2 * (1 + 0.75 / count + 2.25 / count**2))


def _central_moments(histogram: Sequence[tuple[int, int]], total: int) -> tuple[Fraction, ...]:
    """Exact population central moments m1..m4 from an integer histogram."""
    raw = [0, 0, 0, 0, 0]
    for x, c in histogram:
        p = 1
        for k in range(1, 5):
            p *= x
            raw[k] += c * p
    mean = Fraction(raw[1], total)
    m2 = Fraction(raw[2], total) - mean**2
    m3 = Fraction(raw[3], total) - 3 * mean * Fraction(raw[2], total) + 2 * mean**3
    m4 = (
        Fraction(raw[4], total)
        - 4 * mean * Fraction(raw[3], total)
        + 6 * mean**2 * Fraction(raw[2], total)
        - 3 * mean**4
    )
    return mean, m2, m3, m4


def run_experiment(cfg: ExperimentConfig, ad_level: float = 0.01) -> SampleSummary:
    """Run the experiment and summarize against the CLT prediction.

    The result depends only on (n, sample_count, shape, seed): work is
    split into fixed-size position chunks merged in position order, and
    statistics come from exact integer accumulators.
    """
    xs = samples_array(cfg)
    values, counts = np.unique(xs, return_counts=True)
    histogram = tuple((int(v), int(c)) for v, c in zip(values, counts))
    total = cfg.sample_count

    mean, m2, m3, m4 = _central_moments(histogram, total)
    variance = m2 * total / (total - 1) if total > 1 else Fraction(0)
    skew = float(m3) / float(m2) ** 1.5 if m2 > 0 else 0.0
    exkurt = float(m4) / float(m2) ** 2 - 3 if m2 > 0 else 0.0

    params = clt_parameters(cfg.shape)
    pred_mean = cfg.n * params.mean
    pred_var = cfg.n * params.variance
    z_mean = (float(mean) - float(pred_mean)) / math.sqrt(float(pred_var) / total)
    z_var = (float(variance) - float(pred_var)) / (float(pred_var) * math.sqrt(2 / (total - 1)))

    sorted_values = np.repeat(values, counts).astype(float)
    gen = np.random.Generator(np.random.Philox(key=_philox_key(cfg.seed, _DITHER_STREAM, 0)))
    dithered = sorted_values + gen.random(total) - 0.5
    ad = anderson_darling_statistic(dithered)
    ad_raw = anderson_darling_statistic(sorted_values)
    critical = AD_CRITICAL_VALUES[ad_level]

    return SampleSummary(
        n=cfg.n,
        sample_count=cfg.sample_count,
        seed=cfg.seed,
        shape_text=format_shape(cfg.shape),
        histogram=histogram,
        mean=float(mean),
        variance=float(variance),
        skewness=skew,
        excess_kurtosis=exkurt,
        predicted_mean=float(pred_mean),
        predicted_variance=float(pred_var),
        z_mean=z_mean,
        z_variance=z_var,
        ad_statistic=ad,
        ad_statistic_raw=ad_raw,
        ad_level=ad_level,
        ad_critical=critical,
        ad_pass=ad < critical,
    )


def samples_array(cfg: ExperimentConfig) -> np.ndarray:
    """Shape counts for positions 0..sample_count-1, in position order."""
    chunks = [
        (cfg.n, cfg.shape, cfg.seed, start, min(start + _CHUNK, cfg.sample_count))
        for start in range(0, cfg.sample_count, _CHUNK)
    ]
    parts = _run_chunks(_experiment_chunk, chunks, cfg.worker_count)
    return np.concatenate(parts)


def samples_csv(xs: np.ndarray) -> str:
    """Per-sample CSV: one (position, count) row per draw."""
    lines = ["position,x"]
    lines += [f"{i},{int(x)}" for i, x in enumerate(xs)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Uniformity check
# ---------------------------------------------------------------------------


def chi_square_uniformity(counts: Sequence[int]) -> tuple[float, float]:
    """Chi-square statistic and p-value against the uniform law."""
    c = np.asarray(counts, dtype=float)
    expected = c.sum() / c.size
    stat = float(((c - expected) ** 2 / expected).sum())
    return stat, float(chi2.sf(stat, c.size - 1))


@dataclass(frozen=True)
class UniformityReport:
    n: int
    draws: int
    seed: int
    counts: tuple[int, ...]
    statistic: float
    p_value: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "draws": self.draws,
            "seed": self.seed,
            "counts": list(self.counts),
            "statistic": self.statistic,
            "pValue": self.p_value,
        }


def _uniformity_chunk(args: tuple[int, int, int, int, dict]) -> np.ndarray:
    n, seed, start, stop, index = args
    out = np.zeros(len(index), dtype=np.int64)
    for position in range(start, stop):
        m = sample_matching(n, position, seed)
        out[index[m.partner]] += 1
    return out


def matching_uniformity(n: int, draws: int, seed: int, worker_count: int = 1) -> UniformityReport:
    """Draw matchings and chi-square the observed counts over all
    ``catalan(n)`` outcomes against exact uniformity."""
    index = {m.partner: k for k, m in enumerate(enumerate_matchings(n))}
    chunk = 50_000
    chunks = [
        (n, seed, start, min(start + chunk, draws), index) for start in range(0, draws, chunk)
    ]
    parts = _run_chunks(_uniformity_chunk, chunks, worker_count)
    counts = np.sum(parts, axis=0)
    stat, p = chi_square_uniformity(counts)
    return UniformityReport(
        n=n, draws=draws, seed=seed, counts=tuple(int(c) for c in counts), statistic=stat, p_value=p
    )


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateCheck:
    name: str
    value: float
    requirement: str
    passed: bool


@dataclass(frozen=True)
class GateReport:
    checks: tuple[GateCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "checks": [
                {"name": c.name, "value": c.value, "requirement": c.requirement, "pass": c.passed}
                for c in self.checks
            ],
            "pass": self.all_pass,
        }


def evaluate_gates(summary: SampleSummary, profile: str = "full") -> GateReport:
    """Statistical gates on a summary.

    ``meanvar``: per-vertex mean within 0.002 absolute of the predicted
    coefficient, and variance within 5 percent of the prediction.
    ``full`` adds the skewness bound 0.1 and the normality gate at the
    summary's configured level.
    """
    if profile not in ("meanvar", "full"):
        raise ValueError(f"unknown gate profile {profile!r}")
    mean_dev = abs(summary.mean - summary.predicted_mean) / summary.n
    var_ratio = summary.variance / summary.predicted_variance
    checks = [
        GateCheck("mean-rate", mean_dev, "|mean - predicted| / n < 0.002", mean_dev < 0.002),
        GateCheck("variance-ratio", var_ratio, "in [0.95, 1.05]", 0.95 <= var_ratio <= 1.05),
    ]
    if profile == "full":
        checks.append(
            GateCheck("skewness", summary.skewness, "|skewness| < 0.1", abs(summary.skewness) < 0.1)
        )
        checks.append(
            GateCheck(
                "normality",
                summary.ad_statistic,
                f"dithered statistic < {summary.ad_critical} ({summary.ad_level:.0%} level)",
                summary.ad_pass,
            )
        )
    return GateReport(tuple(checks))


# ---------------------------------------------------------------------------
# CLT drift report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CltReport:
    """Standardized moments across increasing n, for eyeballing the drift
    of (mean, variance, skewness, excess kurtosis) toward (0, 1, 0, 0)."""

    summaries: tuple[SampleSummary, ...]

    def rows(self) -> list[dict]:
        out = []
        for s in self.summaries:
            sd = math.sqrt(s.predicted_variance)
            out.append(
                {
                    "n": s.n,
                    "samples": s.sample_count,
                    "standardizedMean": (s.mean - s.predicted_mean) / sd,
                    "varianceRatio": s.variance / s.predicted_variance,
                    "skewness": s.skewness,
                    "excessKurtosis": s.excess_kurtosis,
                    "adStatistic": s.ad_statistic,
                }
            )
        return out

    def csv_text(self) -> str:
        cols = [
            "n",
            "samples",
            "standardizedMean",
            "varianceRatio",
            "skewness",
            "excessKurtosis",
            "adStatistic",
        ]
        lines = [",".join(cols)]
        for row in self.rows():
            lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {"rows": self.rows(), "summaries": [s.to_json_dict() for s in self.summaries]}


def clt_report(configs: Iterable[ExperimentConfig]) -> CltReport:
    """Run experiments over at least two sizes n and tabulate the drift of
    the standardized moments."""
    cfgs = list(configs)
    if len({c.n for c in cfgs}) < 2:
        raise ValueError("clt_report needs configs with at least two distinct n")
    return CltReport(tuple(run_experiment(c) for c in cfgs))
