"""Treatment classification from pre/post session pairs.

Three independent routes, in increasing order of information used:

* correlation — post-phase HIP-NAc Pearson r; separates FOOD from
  NOT-FOOD only (elevated inter-site coupling is a food signature).
* kld1d — per-channel change score: sum over 5 s window pairs of the
  Jensen-Shannon divergence (bits) between pre and post amplitude
  histograms; HIP change means FOOD, NAc change means MORPHINE.
* kld2d — closed-form KL divergence (nats) between bivariate Gaussian
  fits of (hip, nac) in pre vs post; banded thresholds.

Shipped threshold defaults are calibrations from a particular recording
set; they are configuration, not constants.  Use calibrate_thresholds
(or the CLI `calibrate` subcommand) to refit on a labeled cohort.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import SessionRecord, Signal, TreatmentLabel, window
from .density import fit_gauss1d, fit_gauss_nd, hist_pdf, jsd_discrete, kld_gauss_nd, shared_edges

__all__ = [
    "Method",
    "VarianceDirection",
    "Thresholds",
    "ClassificationResult",
    "pearson",
    "classify_by_correlation",
    "kld1d_score",
    "kld1d_decision",
    "classify_by_kld1d",
    "kld2d_decision",
    "classify_by_kld2d",
    "compare_variance",
    "calibrate_thresholds",
]


class Method(Enum):
    CORR = "corr"
    KLD1D = "kld1d"
    KLD2D = "kld2d"


class VarianceDirection(Enum):
    INCREASED = "increased"
    DECREASED = "decreased"
    UNCHANGED = "unchanged"


@dataclass(frozen=True)
class Thresholds:
    hip_kld_t: float = 1000.0
    nac_kld_t: float = 900.0
    food_2d: float = 0.3050
    morphine_2d: float = 0.1341
    corr_band: float = 0.1

    def __post_init__(self):
        vals = (self.hip_kld_t, self.nac_kld_t, self.food_2d, self.morphine_2d, self.corr_band)
        if any(v <= 0 for v in vals):
            raise ValueError("thresholds must all be positive")
        if not self.morphine_2d < self.food_2d:
            raise ValueError(
                f"morphine_2d ({self.morphine_2d}) must be below food_2d ({self.food_2d})"
            )


@dataclass(frozen=True)
class ClassificationResult:
    predicted: TreatmentLabel
    scores: dict
    method: Method
    ambiguous: bool = False
    # labels the method cannot tell apart; (predicted,) when unambiguous
    candidates: tuple = ()

    def __post_init__(self):
        if not self.scores:
            raise ValueError("scores must be non-empty")
        if not self.candidates:
            object.__setattr__(self, "candidates", (self.predicted,))


def pearson(x: Signal, y: Signal) -> float:
    """Pearson correlation of two equal-length signals."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    a = x.samples - x.samples.mean()
    b = y.samples - y.samples.mean()
    na = float(np.dot(a, a))
    nb = float(np.dot(b, b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero variance: correlation undefined for a constant signal")
    return float(np.dot(a, b) / np.sqrt(na * nb))


def _check_same_subject(pre: SessionRecord, post: SessionRecord) -> None:
    if pre.subject_id != post.subject_id:
        raise ValueError(
            f"records belong to different subjects: {pre.subject_id!r} vs {post.subject_id!r}"
        )


def classify_by_correlation(
    pre: SessionRecord, post: SessionRecord, th: Thresholds = Thresholds()
) -> ClassificationResult:
    """FOOD when post-phase HIP-NAc correlation exceeds the band.

    The rule uses only the post phase (pre-phase coupling is absent in
    all groups).  A below-band r cannot split saline from morphine, so
    the result lists both as candidates with SALINE as the reported
    default.
    """
    _check_same_subject(pre, post)
    r_post = pearson(post.hip, post.nac)
    r_pre = pearson(pre.hip, pre.nac)
    scores = {"r_post": r_post, "r_pre": r_pre}
    if r_post > th.corr_band:
        return ClassificationResult(TreatmentLabel.FOOD, scores, Method.CORR)
    return ClassificationResult(
        TreatmentLabel.SALINE,
        scores,
        Method.CORR,
        candidates=(TreatmentLabel.SALINE, TreatmentLabel.MORPHINE),
    )


def kld1d_score(pre: Signal, post: Signal, bins: int = 256, window_seconds: float = 5.0) -> float:
    """Summed per-window JSD (bits) between pre and post amplitude PDFs.

    Histogram edges are shared across all windows, taken from the pooled
    pre+post samples, so every window pair is compared in one domain.
    Summing over windows (rather than averaging) makes longer recordings
    accumulate evidence, which is what the legacy >1000-style thresholds
    were calibrated against.
    """
    edges = shared_edges(np.concatenate([pre.samples, post.samples]), bins=bins)
    pre_w = window(pre, window_seconds)
    post_w = window(post, window_seconds)
    total = 0.0
    for wp, wq in zip(pre_w, post_w):
        total += jsd_discrete(hist_pdf(wp.samples, edges), hist_pdf(wq.samples, edges))
    return total


def kld1d_decision(k_hip: float, k_nac: float, th: Thresholds) -> tuple[TreatmentLabel, bool]:
    """Threshold rule on the two channel scores; returns (label, ambiguous).

    HIP is tested first.  When both channels exceed their thresholds the
    label goes to the larger threshold-relative excess and the result is
    flagged ambiguous.
    """
    hip_hit = k_hip > th.hip_kld_t
    nac_hit = k_nac > th.nac_kld_t
    if hip_hit and nac_hit:
        label = (
            TreatmentLabel.FOOD
            if k_hip / th.hip_kld_t >= k_nac / th.nac_kld_t
            else TreatmentLabel.MORPHINE
        )
        return label, True
    if hip_hit:
        return TreatmentLabel.FOOD, False
    if nac_hit:
        return TreatmentLabel.MORPHINE, False
    return TreatmentLabel.SALINE, False


def classify_by_kld1d(
    session_pre: SessionRecord,
    session_post: SessionRecord,
    th: Thresholds = Thresholds(),
    bins: int = 256,
    window_seconds: float = 5.0,
) -> ClassificationResult:
    _check_same_subject(session_pre, session_post)
    k_hip = kld1d_score(session_pre.hip, session_post.hip, bins, window_seconds)
    k_nac = kld1d_score(session_pre.nac, session_post.nac, bins, window_seconds)
    label, ambiguous = kld1d_decision(k_hip, k_nac, th)
    return ClassificationResult(
        label,
        {"hip_kld1d_bits": k_hip, "nac_kld1d_bits": k_nac},
        Method.KLD1D,
        ambiguous=ambiguous,
    )


def kld2d_decision(k: float, th: Thresholds) -> TreatmentLabel:
    if k > th.food_2d:
        return TreatmentLabel.FOOD
    if k > th.morphine_2d:
        return TreatmentLabel.MORPHINE
    return TreatmentLabel.SALINE


def classify_by_kld2d(
    session_pre: SessionRecord, session_post: SessionRecord, th: Thresholds = Thresholds()
) -> ClassificationResult:
    """Banded rule on the pre-to-post divergence of the joint (hip, nac) fit."""
    _check_same_subject(session_pre, session_post)
    pre_fit = fit_gauss_nd([session_pre.hip.samples, session_pre.nac.samples])
    post_fit = fit_gauss_nd([session_post.hip.samples, session_post.nac.samples])
    k = kld_gauss_nd(pre_fit, post_fit)
    return ClassificationResult(kld2d_decision(k, th), {"kld2d_nats": k}, Method.KLD2D)


def compare_variance(
    pre: Signal, post: Signal, window_seconds: float = 5.0
) -> tuple[VarianceDirection, float]:
    """Did amplitude spread change from pre to post?

    Per-window sigma estimates feed a one-sided Welch t-test; the side is
    the sign of the observed mean difference.  Returns UNCHANGED when the
    one-sided p is not below 0.05.
    """
    sig_pre = np.array([fit_gauss1d(w.samples).sigma for w in window(pre, window_seconds)])
    sig_post = np.array([fit_gauss1d(w.samples).sigma for w in window(post, window_seconds)])
    if sig_pre.size < 3 or sig_post.size < 3:
        raise ValueError("need at least 3 windows per phase")
    from .stats import t_test  # local import to avoid a cycle at module load

    diff = float(np.mean(sig_post)) - float(np.mean(sig_pre))
    if diff == 0.0:
        return VarianceDirection.UNCHANGED, 1.0
    res = t_test(sig_post, sig_pre, paired=False, sided="one")
    if res.p_value >= 0.05:
        return VarianceDirection.UNCHANGED, res.p_value
    return (
        VarianceDirection.INCREASED if diff > 0 else VarianceDirection.DECREASED,
        res.p_value,
    )


# -- calibration -------------------------------------------------------------

def _midpoint_between(lower_group: list, upper_group: list, name: str) -> float:
    lo = max(lower_group)
    hi = min(upper_group)
    if hi <= lo:
        raise ValueError(f"groups not separable on {name}: max(low)={lo:.4g} >= min(high)={hi:.4g}")
    return 0.5 * (lo + hi)


def calibrate_thresholds(scored: list[tuple[TreatmentLabel, dict]]) -> Thresholds:
    """Max-margin midpoint thresholds from labeled per-subject scores.

    scored holds (true label, scores dict) pairs with keys hip_kld1d_bits,
    nac_kld1d_bits, kld2d_nats, r_post.  Each threshold is placed halfway
    between the adjacent group score ranges; overlapping ranges raise.
    """
    by_label: dict[TreatmentLabel, list[dict]] = {t: [] for t in TreatmentLabel}
    for label, scores in scored:
        by_label[label].append(scores)
    for label, rows in by_label.items():
        if not rows:
            raise ValueError(f"calibration cohort has no {label.value} subjects")

    def col(label, key):
        return [row[key] for row in by_label[label]]

    not_food_hip = col(TreatmentLabel.SALINE, "hip_kld1d_bits") + col(
        TreatmentLabel.MORPHINE, "hip_kld1d_bits"
    )
    hip_t = _midpoint_between(not_food_hip, col(TreatmentLabel.FOOD, "hip_kld1d_bits"), "hip kld1d")
    nac_t = _midpoint_between(
        col(TreatmentLabel.SALINE, "nac_kld1d_bits"),
        col(TreatmentLabel.MORPHINE, "nac_kld1d_bits"),
        "nac kld1d",
    )
    not_food_2d = col(TreatmentLabel.SALINE, "kld2d_nats") + col(TreatmentLabel.MORPHINE, "kld2d_nats")
    food_2d = _midpoint_between(not_food_2d, col(TreatmentLabel.FOOD, "kld2d_nats"), "2d food band")
    morphine_2d = _midpoint_between(
        col(TreatmentLabel.SALINE, "kld2d_nats"),
        col(TreatmentLabel.MORPHINE, "kld2d_nats"),
        "2d morphine band",
    )
    not_food_r = col(TreatmentLabel.SALINE, "r_post") + col(TreatmentLabel.MORPHINE, "r_post")
    corr_band = _midpoint_between(
        [abs(r) for r in not_food_r], col(TreatmentLabel.FOOD, "r_post"), "post correlation"
    )
    return Thresholds(hip_t, nac_t, food_2d, morphine_2d, corr_band)


def score_pair(pre: SessionRecord, post: SessionRecord, bins: int = 256,
               window_seconds: float = 5.0) -> dict:
    """All per-subject scores the classifiers and calibration consume."""
    _check_same_subject(pre, post)
    pre_fit = fit_gauss_nd([pre.hip.samples, pre.nac.samples])
    post_fit = fit_gauss_nd([post.hip.samples, post.nac.samples])
    return {
        "hip_kld1d_bits": kld1d_score(pre.hip, post.hip, bins, window_seconds),
        "nac_kld1d_bits": kld1d_score(pre.nac, post.nac, bins, window_seconds),
        "kld2d_nats": kld_gauss_nd(pre_fit, post_fit),
        "r_post": pearson(post.hip, post.nac),
        "r_pre": pearson(pre.hip, pre.nac),
    }
