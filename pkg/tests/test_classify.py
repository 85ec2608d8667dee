import dataclasses

import numpy as np
import pytest
from scipy import stats as sst

from lfptime.classify import (
    ClassificationResult,
    Method,
    Thresholds,
    VarianceDirection,
    calibrate_thresholds,
    classify_by_correlation,
    classify_by_kld1d,
    classify_by_kld2d,
    compare_variance,
    kld1d_decision,
    kld1d_score,
    pearson,
    score_pair,
)
from lfptime.core import PhaseLabel, SessionRecord, Signal, TreatmentLabel
from lfptime.preprocess import bandpass, clamp_outliers
from lfptime.synth import gen_cohort, gen_white


def _prep(rec: SessionRecord) -> SessionRecord:
    return dataclasses.replace(
        rec,
        hip=clamp_outliers(bandpass(rec.hip)),
        nac=clamp_outliers(bandpass(rec.nac)),
    )


def _session(subject, phase, hip, nac, treatment=None):
    return SessionRecord(subject_id=subject, phase=phase, hip=hip, nac=nac, treatment=treatment)


# -- containers ---------------------------------------------------------------

def test_thresholds_validation():
    with pytest.raises(ValueError, match="positive"):
        Thresholds(hip_kld_t=-1.0)
    with pytest.raises(ValueError, match="below"):
        Thresholds(food_2d=0.1, morphine_2d=0.2)


def test_classification_result_defaults():
    res = ClassificationResult(TreatmentLabel.FOOD, {"x": 1.0}, Method.CORR)
    assert res.candidates == (TreatmentLabel.FOOD,)
    assert not res.ambiguous
    with pytest.raises(ValueError, match="non-empty"):
        ClassificationResult(TreatmentLabel.FOOD, {}, Method.CORR)


# -- correlation --------------------------------------------------------------

def test_pearson_hand_values():
    up = Signal(np.array([1.0, 2.0, 3.0, 4.0]), fs=1.0)
    down = Signal(np.array([4.0, 3.0, 2.0, 1.0]), fs=1.0)
    assert pearson(up, up) == pytest.approx(1.0)
    assert pearson(up, down) == pytest.approx(-1.0)


def test_pearson_matches_reference():
    rng = np.random.default_rng(0)
    x = rng.normal(size=500)
    y = 0.5 * x + rng.normal(size=500)
    ref = sst.pearsonr(x, y).statistic
    assert pearson(Signal(x, 1.0), Signal(y, 1.0)) == pytest.approx(ref, abs=1e-12)


def test_pearson_preconditions():
    a = Signal(np.arange(5.0), fs=1.0)
    with pytest.raises(ValueError, match="length mismatch"):
        pearson(a, Signal(np.arange(4.0), fs=1.0))
    with pytest.raises(ValueError, match="zero variance"):
        pearson(a, Signal(np.ones(5), fs=1.0))


# -- kld1d score and decision -------------------------------------------------

def test_kld1d_score_zero_for_identical():
    sig = gen_white(20_000, seed=1)
    assert kld1d_score(sig, sig) == 0.0


def test_kld1d_score_counts_disjoint_windows():
    # a 10-sigma shift makes every 5 s window pair fully disjoint in the
    # shared histogram, so each contributes exactly 1 bit
    pre = gen_white(20_000, seed=2)
    post = Signal(pre.samples + 10.0, pre.fs)
    assert kld1d_score(pre, post) == pytest.approx(4.0, abs=1e-9)


def test_kld1d_score_grows_with_duration():
    pre = gen_white(40_000, seed=3)
    post = Signal(pre.samples + 10.0, pre.fs)
    assert kld1d_score(pre, post) == pytest.approx(8.0, abs=1e-9)


def test_kld1d_decision_table():
    th = Thresholds(hip_kld_t=10.0, nac_kld_t=8.0, food_2d=1.0, morphine_2d=0.5)
    assert kld1d_decision(12.0, 3.0, th) == (TreatmentLabel.FOOD, False)
    assert kld1d_decision(4.0, 9.0, th) == (TreatmentLabel.MORPHINE, False)
    assert kld1d_decision(4.0, 5.0, th) == (TreatmentLabel.SALINE, False)
    # both over: larger threshold-relative excess wins and the call is flagged
    assert kld1d_decision(30.0, 9.0, th) == (TreatmentLabel.FOOD, True)
    assert kld1d_decision(11.0, 80.0, th) == (TreatmentLabel.MORPHINE, True)


# -- end-to-end on synthetic subjects ------------------------------------------

@pytest.fixture(scope="module")
def calibrated():
    pairs = [
        (_prep(a), _prep(b))
        for a, b in gen_cohort(subjects_per_group=2, seed=60, duration_s=30.0)
    ]
    scored = [(pre.treatment, score_pair(pre, post)) for pre, post in pairs]
    th = calibrate_thresholds(scored)
    held_out = [
        (_prep(a), _prep(b))
        for a, b in gen_cohort(subjects_per_group=2, seed=61, duration_s=30.0)
    ]
    return th, held_out


def test_classify_held_out_cohort(calibrated):
    th, held_out = calibrated
    for pre, post in held_out:
        truth = pre.treatment
        corr = classify_by_correlation(pre, post, th)
        k1d = classify_by_kld1d(pre, post, th)
        k2d = classify_by_kld2d(pre, post, th)
        assert k1d.predicted is truth
        assert not k1d.ambiguous
        assert k2d.predicted is truth
        if truth is TreatmentLabel.FOOD:
            assert corr.predicted is TreatmentLabel.FOOD
            assert corr.candidates == (TreatmentLabel.FOOD,)
        else:
            # the correlation route cannot split saline from morphine
            assert corr.predicted is TreatmentLabel.SALINE
            assert set(corr.candidates) == {TreatmentLabel.SALINE, TreatmentLabel.MORPHINE}


def test_classify_score_dicts(calibrated):
    th, held_out = calibrated
    pre, post = held_out[0]
    corr = classify_by_correlation(pre, post, th)
    assert set(corr.scores) == {"r_post", "r_pre"}
    k1d = classify_by_kld1d(pre, post, th)
    assert set(k1d.scores) == {"hip_kld1d_bits", "nac_kld1d_bits"}
    k2d = classify_by_kld2d(pre, post, th)
    assert set(k2d.scores) == {"kld2d_nats"}
    assert k2d.scores["kld2d_nats"] >= 0.0


def test_classify_rejects_mismatched_subjects(calibrated):
    _, held_out = calibrated
    pre, _ = held_out[0]
    _, post = held_out[1]
    with pytest.raises(ValueError, match="different subjects"):
        classify_by_kld2d(pre, post)


def test_score_pair_keys(calibrated):
    _, held_out = calibrated
    pre, post = held_out[0]
    scores = score_pair(pre, post)
    assert set(scores) == {"hip_kld1d_bits", "nac_kld1d_bits", "kld2d_nats", "r_post", "r_pre"}
    assert scores["r_post"] == pearson(post.hip, post.nac)


# -- variance comparison ------------------------------------------------------

def test_compare_variance_directions():
    pre = gen_white(20_000, sigma=1.0, seed=2)
    post = gen_white(20_000, sigma=0.6, seed=3)
    direction, p = compare_variance(pre, post)
    assert direction is VarianceDirection.DECREASED
    assert p < 0.05

    direction, p = compare_variance(gen_white(20_000, sigma=1.0, seed=4),
                                    gen_white(20_000, sigma=1.5, seed=5))
    assert direction is VarianceDirection.INCREASED
    assert p < 0.05


def test_compare_variance_unchanged():
    direction, p = compare_variance(gen_white(20_000, sigma=1.0, seed=0),
                                    gen_white(20_000, sigma=1.0, seed=1))
    assert direction is VarianceDirection.UNCHANGED
    assert p >= 0.05


def test_compare_variance_needs_windows():
    with pytest.raises(ValueError, match="at least 3 windows"):
        compare_variance(gen_white(8000, seed=0), gen_white(20_000, seed=1))


# -- calibration --------------------------------------------------------------

def _fake_scores(hip, nac, k2, r):
    return {"hip_kld1d_bits": hip, "nac_kld1d_bits": nac, "kld2d_nats": k2, "r_post": r}


def test_calibrate_thresholds_midpoints():
    scored = [
        (TreatmentLabel.SALINE, _fake_scores(1.0, 1.0, 0.01, 0.02)),
        (TreatmentLabel.SALINE, _fake_scores(1.2, 1.1, 0.02, -0.04)),
        (TreatmentLabel.MORPHINE, _fake_scores(1.1, 5.0, 0.30, 0.03)),
        (TreatmentLabel.MORPHINE, _fake_scores(0.9, 6.0, 0.40, -0.01)),
        (TreatmentLabel.FOOD, _fake_scores(4.0, 1.2, 0.60, 0.70)),
        (TreatmentLabel.FOOD, _fake_scores(5.0, 0.8, 0.70, 0.80)),
    ]
    th = calibrate_thresholds(scored)
    assert th.hip_kld_t == pytest.approx((1.2 + 4.0) / 2)
    assert th.nac_kld_t == pytest.approx((1.1 + 5.0) / 2)
    assert th.food_2d == pytest.approx((0.40 + 0.60) / 2)
    assert th.morphine_2d == pytest.approx((0.02 + 0.30) / 2)
    assert th.corr_band == pytest.approx((0.04 + 0.70) / 2)


def test_calibrate_thresholds_rejects_overlap():
    scored = [
        (TreatmentLabel.SALINE, _fake_scores(1.0, 1.0, 0.01, 0.02)),
        (TreatmentLabel.MORPHINE, _fake_scores(1.1, 5.0, 0.30, 0.03)),
        (TreatmentLabel.FOOD, _fake_scores(0.9, 1.2, 0.60, 0.70)),  # hip below saline
    ]
    with pytest.raises(ValueError, match="not separable on hip"):
        calibrate_thresholds(scored)


def test_calibrate_thresholds_requires_every_group():
    scored = [
        (TreatmentLabel.SALINE, _fake_scores(1.0, 1.0, 0.01, 0.02)),
        (TreatmentLabel.MORPHINE, _fake_scores(1.1, 5.0, 0.30, 0.03)),
    ]
    with pytest.raises(ValueError, match="no food subjects"):
        calibrate_thresholds(scored)
