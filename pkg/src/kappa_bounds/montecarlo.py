"""Monte Carlo estimates of condition-number tails and log-moments.

Trials are grouped into fixed-size blocks whose size depends only on the
matrix shape.  Block ``b`` draws its variates from a Philox generator with
key ``seed`` and counter ``b``, so every trial's matrix is a function of
(seed, trial index) alone and results do not depend on how blocks are
spread over worker processes.  Per-block partial results are always
combined in block order.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import stats

from .bounds import upper_tail
from .errors import DomainError, SVDConvergenceError, VacuousConfigError
from .shapes import Field, MatrixShape, TailQuery, raw_from_scaled

MAX_ROWS = 512
CONFIDENCE = 0.99
# Upper bound x trials below this means the tail cannot be resolved.
MIN_EXPECTED_HITS = 10
# Automatic thresholds keep at least this many expected hits under the upper bound.
TARGET_EXPECTED_HITS = 50

_BLOCK_VARIATES = 1 << 20


@dataclass(frozen=True)
class SampleConfig:
    shape: MatrixShape
    field: Field
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "field", Field.parse(self.field))
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError(f"workers must be a positive integer, got {self.workers!r}")
        if self.shape.m > MAX_ROWS:
            raise DomainError(f"sampling supports m <= {MAX_ROWS}, got m = {self.shape.m}")


@dataclass(frozen=True)
class EmpiricalTail:
    threshold: float
    trials: int
    hits: int
    estimate: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class EmpiricalLogMoment:
    mean_log_kappa: float
    std_error: float
    trials: int


@dataclass
class SimulationResult:
    config: SampleConfig
    thresholds: list[float]
    hits: list[int]
    trials: int
    log_moment: EmpiricalLogMoment
    failures: int = 0
    tails: list[EmpiricalTail] = dc_field(default_factory=list)


def block_size(shape: MatrixShape, field: Field) -> int:
    """Trials per RNG block: the largest power of two within the variate budget."""
    per_trial = shape.m * shape.n * Field.parse(field).beta
    size = max(1, _BLOCK_VARIATES // per_trial)
    return 1 << (size.bit_length() - 1)


def _generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


def sample_block(shape: MatrixShape, field: Field, seed: int, block: int, count: int) -> np.ndarray:
    """The first ``count`` Gaussian matrices of block ``block``, shape (count, m, n)."""
    rng = _generator(seed, block)
    if field is Field.REAL:
        return rng.standard_normal((count, shape.m, shape.n))
    parts = rng.standard_normal((count, shape.m, shape.n, 2))
    return parts[..., 0] + 1j * parts[..., 1]


def condition_number(matrix) -> np.ndarray | float:
    """2-norm condition number sigma_max / sigma_min via singular values.

    Accepts a single matrix or a stack (..., m, n); wide or tall inputs
    are both fine.
    """
    a = np.asarray(matrix)
    if a.ndim < 2:
        raise DomainError("condition_number needs at least a 2-D array")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SVDConvergenceError(str(exc)) from exc
    with np.errstate(divide="ignore"):
        kappa = s[..., 0] / s[..., -1]
    return float(kappa) if kappa.ndim == 0 else kappa


def _block_kappas(a: np.ndarray) -> tuple[np.ndarray, int]:
    try:
        return condition_number(a), 0
    except SVDConvergenceError:
        pass
    kept = []
    for one in a:
        try:
            kept.append(condition_number(one))
        except SVDConvergenceError:
            continue
    return np.asarray(kept, dtype=float), len(a) - len(kept)


def _blocks(config: SampleConfig) -> list[tuple[int, int]]:
    size = block_size(config.shape, config.field)
    full, rest = divmod(config.trials, size)
    out = [(b, size) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out


def sample_condition_numbers(config: SampleConfig) -> Iterator[np.ndarray]:
    """Yield condition numbers block by block, in trial order.

    Trials whose singular value computation fails are dropped.
    """
    for block, count in _blocks(config):
        a = sample_block(config.shape, config.field, config.seed, block, count)
        yield _block_kappas(a)[0]


@dataclass(frozen=True)
class _BlockSummary:
    count: int
    failures: int
    hits: tuple[int, ...]
    mean: float
    m2: float


def _summarise_block(args) -> _BlockSummary:
    shape, field, seed, block, count, thresholds = args
    kappa, failures = _block_kappas(sample_block(shape, field, seed, block, count))
    srt = np.sort(kappa)
    hits = tuple(int(len(srt) - np.searchsorted(srt, t, side="right")) for t in thresholds)
    logs = np.log(kappa)
    if len(logs) == 0:
        return _BlockSummary(0, failures, hits, 0.0, 0.0)
    mean = float(logs.mean())
    return _BlockSummary(len(logs), failures, hits, mean, float(((logs - mean) ** 2).sum()))


def clopper_pearson(hits: int, trials: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    """Exact two-sided binomial confidence interval from Beta quantiles."""
    alpha = 1.0 - confidence
    lo = 0.0 if hits == 0 else float(stats.beta.ppf(alpha / 2, hits, trials - hits + 1))
    hi = 1.0 if hits == trials else float(stats.beta.ppf(1 - alpha / 2, hits + 1, trials - hits))
    return lo, hi


def run_trials(config: SampleConfig, thresholds: Sequence[float] = ()) -> SimulationResult:
    """One pass over all trials, counting raw-threshold exceedances and ln kappa moments."""
    thresholds = [float(t) for t in thresholds]
    if any(not (t > 0.0 and math.isfinite(t)) for t in thresholds):
        raise DomainError("thresholds must be positive and finite")
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise DomainError("thresholds must be sorted ascending")
    jobs = [
        (config.shape, config.field, config.seed, block, count, tuple(thresholds))
        for block, count in _blocks(config)
    ]
    if config.workers == 1 or len(jobs) == 1:
        summaries = list(map(_summarise_block, jobs))
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunk = max(1, len(jobs) // (4 * config.workers))
            summaries = list(pool.map(_summarise_block, jobs, chunksize=chunk))

    # Chan et al. pairwise update, applied in block order.
    total, mean, m2 = 0, 0.0, 0.0
    hits = [0] * len(thresholds)
    failures = 0
    for s in summaries:
        failures += s.failures
        for i, h in enumerate(s.hits):
            hits[i] += h
        if s.count == 0:
            continue
        new_total = total + s.count
        delta = s.mean - mean
        mean += delta * s.count / new_total
        m2 += s.m2 + delta * delta * total * s.count / new_total
        total = new_total

    std_error = math.sqrt(m2 / (total - 1) / total) if total > 1 else math.inf
    result = SimulationResult(
        config, thresholds, hits, total, EmpiricalLogMoment(mean, std_error, total), failures
    )
    for t, h in zip(thresholds, hits):
        lo, hi = clopper_pearson(h, total)
        result.tails.append(EmpiricalTail(t, total, h, h / total, lo, hi))
    return result


def empirical_tail(config: SampleConfig, thresholds: Sequence[float]) -> list[EmpiricalTail]:
    """Empirical P(kappa > t) with 99% Clopper-Pearson intervals for raw thresholds ``t``."""
    return run_trials(config, thresholds).tails


def empirical_log_moment(config: SampleConfig) -> EmpiricalLogMoment:
    if config.trials < 1000:
        raise DomainError("log-moment estimates need at least 1000 trials")
    return run_trials(config).log_moment


def require_resolvable(shape: MatrixShape, field: Field, x_scaled: float, trials: int) -> None:
    """Refuse thresholds whose analytic upper bound predicts < 10 hits."""
    expected = upper_tail(TailQuery(shape, field, x_scaled)).value * trials
    if expected < MIN_EXPECTED_HITS:
        raise VacuousConfigError(
            f"{field} {shape} at scaled x = {x_scaled:.6g}: upper bound x trials = {expected:.3g}"
            f" < {MIN_EXPECTED_HITS}; the empirical interval would be vacuous"
        )


def auto_thresholds(
    shape: MatrixShape, field: Field, trials: int, count: int = 3
) -> list[float]:
    """Scaled thresholds from d up to where the upper bound predicts 50 hits, log-spaced.

    Raises :class:`VacuousConfigError` when even x = d is out of reach.
    """
    field = Field.parse(field)
    beta = field.beta
    ub_at_d = upper_tail(TailQuery(shape, field, float(shape.d)))
    # Solve (2 pi)^(-beta/2) (C/x)^(beta d) = target / trials for x.
    log_target = math.log(TARGET_EXPECTED_HITS / trials) + 0.5 * beta * math.log(2 * math.pi)
    x_max = ub_at_d.constant_used * math.exp(-log_target / (beta * shape.d))
    if x_max < shape.d:
        raise VacuousConfigError(
            f"{field} {shape}: {trials} trials cannot reach {TARGET_EXPECTED_HITS} expected hits"
            f" at any valid threshold (x >= d = {shape.d})"
        )
    if count == 1:
        return [float(shape.d)]
    lo, hi = math.log(shape.d), math.log(x_max)
    inner = [math.exp(lo + (hi - lo) * i / (count - 1)) for i in range(1, count - 1)]
    return [float(shape.d), *inner, x_max]


def scaled_to_raw(shape: MatrixShape, xs: Sequence[float]) -> list[float]:
    return [raw_from_scaled(shape, x) for x in xs]
