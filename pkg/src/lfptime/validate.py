"""Signal-character checks: long memory, temporal correlation, and chaos.

These estimators answer one question: does a recording behave like a
structured physiological series (persistent, strongly autocorrelated,
weakly chaotic) or like noise?  A shuffled surrogate destroys the temporal
ordering while keeping the amplitude distribution, which gives each
estimator a built-in negative control.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .core import Signal

__all__ = [
    "AutocorrSeries",
    "HurstFit",
    "LyapunovEstimate",
    "BasicFeatures",
    "autocorrelation",
    "hurst_rs",
    "shuffle_surrogate",
    "lyapunov_max",
    "basic_features",
]


@dataclass(frozen=True)
class AutocorrSeries:
    lags: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    fs: float = 1.0

    def at(self, lag: int) -> float:
        return float(self.values[lag])


@dataclass(frozen=True)
class HurstFit:
    """Least-squares fit of log mean rescaled range against log scale.

    exponent is the slope; 0.5 means uncorrelated increments, values
    toward 1 mean persistent long memory.  amplitude is exp(intercept).
    """

    exponent: float
    amplitude: float
    per_scale: tuple  # of (scale, mean rescaled range)
    r_squared: float

    def __post_init__(self):
        if not 0.0 < self.exponent < 1.5:
            raise ValueError(f"exponent out of plausible range: {self.exponent}")


@dataclass(frozen=True)
class LyapunovEstimate:
    """Largest Lyapunov exponent from the mean log divergence of neighbors.

    lam is in units of 1/sample: multiply by fs for 1/second.
    divergence_curve holds (step, mean log distance) pairs; fit_range is
    the half-open [start, stop) slice of the curve used for the slope.
    """

    lam: float
    divergence_curve: tuple
    fit_range: tuple

    def __post_init__(self):
        start, stop = self.fit_range
        if not (0 <= start < stop <= len(self.divergence_curve)):
            raise ValueError(f"fit_range {self.fit_range} outside divergence curve")


@dataclass(frozen=True)
class BasicFeatures:
    minimum: float
    maximum: float
    mean: float
    median: float
    stdev: float

    def __post_init__(self):
        if not (self.minimum <= self.median <= self.maximum):
            raise ValueError("median outside [min, max]")
        if not (self.minimum <= self.mean <= self.maximum):
            raise ValueError("mean outside [min, max]")
        if self.stdev < 0:
            raise ValueError("stdev must be non-negative")


def autocorrelation(signal: Signal, max_lag: int) -> AutocorrSeries:
    """Biased normalized autocorrelation for lags 0..max_lag.

    r(k) = sum_t (x_t - mean)(x_{t+k} - mean) / sum_t (x_t - mean)^2,
    so r(0) == 1 and |r(k)| <= 1.
    """
    x = signal.samples
    n = x.size
    if not 1 <= max_lag < n:
        raise ValueError(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise ValueError("zero variance: autocorrelation undefined for a constant signal")
    vals = np.empty(max_lag + 1)
    vals[0] = 1.0
    for k in range(1, max_lag + 1):
        vals[k] = np.dot(d[:-k], d[k:]) / denom
    return AutocorrSeries(np.arange(max_lag + 1), vals, signal.fs)


def _log_spaced_scales(min_scale: int, max_scale: int, per_decade: int) -> np.ndarray:
    decades = np.log10(max_scale / min_scale)
    count = max(2, int(round(decades * per_decade)) + 1)
    scales = np.unique(np.round(np.geomspace(min_scale, max_scale, count)).astype(int))
    return scales


def hurst_rs(
    signal: Signal,
    min_scale: int = 16,
    max_scale: int | None = None,
    scales_per_decade: int = 8,
) -> HurstFit:
    """Hurst exponent by the rescaled-range method.

    For each scale n the signal is cut into floor(N/n) blocks.  Within a
    block, R is the range of the cumulative sum of deviations from the
    block mean and S the block standard deviation; R/S is averaged over
    blocks.  The exponent is the slope of log(mean R/S) on log(n).
    """
    x = signal.samples
    n_total = x.size
    if min_scale < 8:
        raise ValueError(f"min_scale must be >= 8, got {min_scale}")
    if max_scale is None:
        max_scale = n_total // 4
    if max_scale > n_total // 2:
        raise ValueError(f"max_scale {max_scale} exceeds half the signal length")
    if max_scale <= min_scale:
        raise ValueError("insufficient scales: max_scale must exceed min_scale")
    scales = _log_spaced_scales(min_scale, max_scale, scales_per_decade)
    per_scale = []
    for n in scales:
        blocks = n_total // n
        seg = x[: blocks * n].reshape(blocks, n)
        dev = seg - seg.mean(axis=1, keepdims=True)
        z = np.cumsum(dev, axis=1)
        rng = z.max(axis=1) - z.min(axis=1)
        sd = seg.std(axis=1)
        ok = sd > 0
        if not np.any(ok):
            continue
        per_scale.append((int(n), float(np.mean(rng[ok] / sd[ok]))))
    if len(per_scale) < 3:
        raise ValueError("insufficient scales: need at least 3 usable scales")
    log_n = np.log([s for s, _ in per_scale])
    log_rs = np.log([r for _, r in per_scale])
    slope, intercept = np.polyfit(log_n, log_rs, 1)
    resid = log_rs - (slope * log_n + intercept)
    ss_tot = float(np.sum((log_rs - log_rs.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    return HurstFit(float(slope), float(np.exp(intercept)), tuple(per_scale), r2)


def shuffle_surrogate(signal: Signal, seed: int) -> Signal:
    """Random permutation of the samples (same multiset, no temporal order)."""
    rng = np.random.default_rng(seed)
    return Signal(rng.permutation(signal.samples), signal.fs, signal.channel_id)


def _auto_delay(x: np.ndarray, cap: int) -> int:
    """First lag where autocorrelation drops below 1 - 1/e."""
    target = 1.0 - 1.0 / np.e
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise ValueError("zero variance: cannot pick an embedding delay")
    for k in range(1, cap + 1):
        if np.dot(d[:-k], d[k:]) / denom < target:
            return k
    return cap


def lyapunov_max(
    signal: Signal,
    embed_dim: int = 6,
    delay: int | None = None,
    theiler: int | None = None,
    fit_range: tuple[int, int] | None = None,
    n_steps: int = 50,
) -> LyapunovEstimate:
    """Largest Lyapunov exponent via nearest-neighbor divergence.

    The series is delay-embedded; each point is paired with its nearest
    neighbor more than `theiler` steps away in time; the mean log distance
    between the pairs is tracked as both evolve.  The exponent (per
    sample) is the least-squares slope over fit_range, which defaults to
    the first tenth of the divergence curve where growth is still
    exponential rather than saturated.
    """
    x = signal.samples
    if embed_dim < 1:
        raise ValueError(f"embed_dim must be >= 1, got {embed_dim}")
    if delay is None:
        delay = _auto_delay(x, cap=max(1, x.size // 10))
    if delay < 1:
        raise ValueError(f"delay must be >= 1, got {delay}")
    m_points = x.size - (embed_dim - 1) * delay
    if m_points < 100:
        raise ValueError("series too short: need at least 100 embedded points")
    emb = np.column_stack([x[i * delay : i * delay + m_points] for i in range(embed_dim)])
    if theiler is None:
        theiler = max(1, embed_dim * delay)

    tree = cKDTree(emb)
    k_query = min(m_points, 2 * theiler + 8)
    dist, idx = tree.query(emb, k=k_query, workers=-1)
    ref = np.arange(m_points)
    neighbor = np.full(m_points, -1)
    for col in range(1, k_query):
        need = neighbor < 0
        good = need & (np.abs(idx[:, col] - ref) > theiler) & (dist[:, col] > 0)
        neighbor[good] = idx[good, col]
    valid = neighbor >= 0
    i_idx = ref[valid]
    j_idx = neighbor[valid]
    if i_idx.size < 10:
        raise ValueError("series too short: not enough valid neighbor pairs")

    n_steps = int(min(n_steps, m_points - 2))
    curve = []
    for k in range(n_steps + 1):
        in_range = (i_idx + k < m_points) & (j_idx + k < m_points)
        if np.count_nonzero(in_range) < 10:
            break
        sep = emb[i_idx[in_range] + k] - emb[j_idx[in_range] + k]
        d_k = np.sqrt(np.sum(sep * sep, axis=1))
        d_k = d_k[d_k > 0]
        if d_k.size < 10:
            break
        curve.append((k, float(np.mean(np.log(d_k)))))
    if len(curve) < 3:
        raise ValueError("series too short: divergence curve has fewer than 3 points")

    if fit_range is None:
        stop = max(3, len(curve) // 10)
        fit_range = (0, min(stop, len(curve)))
    start, stop = fit_range
    if not (0 <= start < stop <= len(curve)):
        raise ValueError(f"fit_range {fit_range} outside divergence curve of {len(curve)} points")
    seg = curve[start:stop]
    t = np.array([p[0] for p in seg], dtype=float)
    y = np.array([p[1] for p in seg])
    lam = float(np.polyfit(t, y, 1)[0]) if len(seg) > 1 else 0.0
    return LyapunovEstimate(lam, tuple(curve), (start, stop))


def basic_features(signal: Signal) -> BasicFeatures:
    """Five-number amplitude summary (population standard deviation)."""
    x = signal.samples
    return BasicFeatures(
        minimum=float(x.min()),
        maximum=float(x.max()),
        mean=float(x.mean()),
        median=float(np.median(x)),
        stdev=float(x.std()),
    )
