import itertools
import math

import numpy as np
import pytest
from scipy import stats as sst

from lfptime import stats
from lfptime.stats import (
    anova_tukey,
    ks_normality,
    mann_whitney_u,
    t_test,
    wilcoxon_signed,
)


def test_result_validation():
    with pytest.raises(ValueError, match="outside"):
        stats.TestResult(0.0, 1.5, "x", "two")
    with pytest.raises(ValueError, match="sided"):
        stats.TestResult(0.0, 0.5, "x", "both")


# -- Kolmogorov-Smirnov -------------------------------------------------------

def test_ks_accepts_gaussian_known_params():
    x = np.random.default_rng(6).normal(2.0, 3.0, 200)
    res = ks_normality(x, mu=2.0, sigma=3.0)
    assert res.p_value > 0.05
    ref = sst.kstest(x, "norm", args=(2.0, 3.0), mode="asymp")
    assert res.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-9)


def test_ks_rejects_uniform():
    # estimated parameters make the test lenient, so give it a long sample
    x = np.random.default_rng(0).uniform(-1.0, 1.0, 5000)
    assert ks_normality(x).p_value < 1e-6


def test_ks_preconditions():
    with pytest.raises(ValueError, match="at least 5"):
        ks_normality([1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="zero variance"):
        ks_normality(np.ones(10))


# -- t tests ------------------------------------------------------------------

def test_t_test_matches_reference():
    rng = np.random.default_rng(1)
    a = rng.normal(0.0, 1.0, 12)
    b = rng.normal(0.4, 1.3, 10)
    welch = t_test(a, b)
    ref = sst.ttest_ind(a, b, equal_var=False)
    assert welch.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert welch.p_value == pytest.approx(ref.pvalue, abs=1e-12)
    assert welch.test_name == "t_test_welch"

    student = t_test(a, b, equal_var=True)
    ref = sst.ttest_ind(a, b, equal_var=True)
    assert student.p_value == pytest.approx(ref.pvalue, abs=1e-12)
    assert student.test_name == "t_test_student"


def test_t_test_paired_matches_reference():
    rng = np.random.default_rng(2)
    a = rng.normal(0.0, 1.0, 14)
    b = a + rng.normal(0.2, 0.6, 14)
    res = t_test(a, b, paired=True)
    ref = sst.ttest_rel(a, b)
    assert res.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-12)
    assert res.test_name == "t_test_paired"


def test_t_test_one_sided_halves_p():
    rng = np.random.default_rng(3)
    a = rng.normal(0.5, 1.0, 20)
    b = rng.normal(0.0, 1.0, 20)
    two = t_test(a, b, sided="two")
    one = t_test(a, b, sided="one")
    assert one.p_value == pytest.approx(two.p_value / 2)
    assert one.sided == "one"


def test_t_test_identical_pairs_report_no_evidence():
    a = np.array([1.0, 2.0, 3.0])
    res = t_test(a, a.copy(), paired=True)
    assert res.statistic == 0.0
    assert res.p_value == 1.0


def test_t_test_degenerate_branches():
    with pytest.raises(ValueError, match="equal lengths"):
        t_test([1.0, 2.0], [1.0, 2.0, 3.0], paired=True)
    with pytest.raises(ValueError, match="constant nonzero paired"):
        t_test([2.0, 3.0, 4.0], [1.0, 2.0, 3.0], paired=True)
    with pytest.raises(ValueError, match="both groups constant"):
        t_test([1.0, 1.0], [2.0, 2.0])


# -- Mann-Whitney -------------------------------------------------------------

def _brute_force_u_p(a, b, sided):
    """Exhaustive rank-sum enumeration; valid only without ties."""
    n1 = len(a)
    ranks = sst.rankdata(np.concatenate([a, b]))
    u_obs = ranks[:n1].sum() - n1 * (n1 + 1) / 2
    total = len(a) + len(b)
    us = np.array([
        sum(c) - n1 * (n1 + 1) / 2
        for c in itertools.combinations(range(1, total + 1), n1)
    ])
    lower = np.mean(us <= u_obs)
    upper = np.mean(us >= u_obs)
    if sided == "two":
        return min(1.0, 2 * min(lower, upper))
    return min(lower, upper)


def test_mann_whitney_exact_against_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(15):
        a = rng.normal(0.0, 1.0, rng.integers(3, 9))
        b = rng.normal(0.5, 1.0, rng.integers(3, 9))
        for sided in ("two", "one"):
            res = mann_whitney_u(a, b, sided=sided)
            assert res.test_name == "mann_whitney_exact"
            assert res.p_value == pytest.approx(_brute_force_u_p(a, b, sided), abs=1e-12)


def test_mann_whitney_u_zero_hand_case():
    # complete separation of 3 vs 3: one of C(6,3)=20 arrangements, doubled
    res = mann_whitney_u([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    assert res.statistic == 0.0
    assert res.p_value == pytest.approx(0.1)


def test_mann_whitney_ties_take_normal_branch():
    a = [1.0, 2.0, 2.0, 3.0]
    b = [2.0, 4.0, 5.0]
    res = mann_whitney_u(a, b)
    assert res.test_name == "mann_whitney_normal"
    ref = sst.mannwhitneyu(a, b, method="asymptotic")
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-9)


def test_mann_whitney_large_matches_exact_closely():
    rng = np.random.default_rng(4)
    a = rng.normal(0.0, 1.0, 21)  # past the exact cutoff
    b = rng.normal(0.6, 1.0, 21)
    res = mann_whitney_u(a, b)
    assert res.test_name == "mann_whitney_normal"
    ref = sst.mannwhitneyu(a, b, method="exact")
    assert abs(res.p_value - ref.pvalue) < 0.02


def test_mann_whitney_preconditions():
    with pytest.raises(ValueError, match="at least 3"):
        mann_whitney_u([1.0, 2.0], [3.0, 4.0, 5.0])


# -- Wilcoxon signed rank -----------------------------------------------------

def _brute_force_w_p(a, b, sided):
    d = np.asarray(a) - np.asarray(b)
    d = d[d != 0]
    ranks = sst.rankdata(np.abs(d))
    w_obs = ranks[d > 0].sum()
    ws = np.array([
        sum(r for s, r in zip(signs, ranks) if s)
        for signs in itertools.product([0, 1], repeat=len(d))
    ])
    lower = np.mean(ws <= w_obs)
    upper = np.mean(ws >= w_obs)
    if sided == "two":
        return min(1.0, 2 * min(lower, upper))
    return min(lower, upper)


def test_wilcoxon_exact_against_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(12):
        n = rng.integers(5, 13)
        a = rng.normal(0.0, 1.0, n)
        b = a + rng.normal(0.3, 0.5, n)
        for sided in ("two", "one"):
            res = wilcoxon_signed(a, b, sided=sided)
            assert res.test_name == "wilcoxon_exact"
            assert res.p_value == pytest.approx(_brute_force_w_p(a, b, sided), abs=1e-12)


def test_wilcoxon_one_sided_hand_case():
    # five positive differences: W+ = 15, the most extreme of 2^5 outcomes
    a = [2.0, 3.0, 4.0, 5.0, 6.0]
    b = [1.0, 1.5, 2.0, 2.5, 3.0]
    res = wilcoxon_signed(a, b)
    assert res.statistic == 15.0
    assert res.p_value == pytest.approx(2 / 32)


def test_wilcoxon_large_normal_branch():
    rng = np.random.default_rng(5)
    a = rng.normal(0.0, 1.0, 30)
    b = a + rng.normal(0.25, 0.7, 30)
    res = wilcoxon_signed(a, b)
    assert res.test_name == "wilcoxon_normal"
    ref = sst.wilcoxon(a, b, correction=True, method="approx")
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-9)


def test_wilcoxon_preconditions():
    with pytest.raises(ValueError, match="equal lengths"):
        wilcoxon_signed([1.0, 2.0, 3.0], [1.0, 2.0])
    with pytest.raises(ValueError, match="all differences zero"):
        wilcoxon_signed([1.0, 2.0], [1.0, 2.0])


# -- ANOVA / Tukey ------------------------------------------------------------

def test_anova_two_groups_is_squared_t():
    rng = np.random.default_rng(7)
    g1 = rng.normal(0.0, 1.0, 15)
    g2 = rng.normal(0.7, 1.0, 18)
    omnibus, pairwise = anova_tukey([g1, g2])
    tt = t_test(g1, g2, equal_var=True)
    assert omnibus.statistic == pytest.approx(tt.statistic**2, abs=1e-9)
    assert omnibus.p_value == pytest.approx(tt.p_value, abs=1e-9)
    # with two groups Tukey reduces to the same t-test: q = sqrt(2)|t|
    hsd = pairwise[(0, 1)]
    assert hsd.statistic == pytest.approx(math.sqrt(2) * abs(tt.statistic), abs=1e-9)
    assert hsd.p_value == pytest.approx(tt.p_value, abs=1e-9)


def test_anova_matches_reference_three_groups():
    rng = np.random.default_rng(8)
    groups = [
        rng.normal(0.0, 1.0, 15),
        rng.normal(0.7, 1.0, 18),
        rng.normal(0.3, 1.0, 12),
    ]
    omnibus, pairwise = anova_tukey(groups)
    ref = sst.f_oneway(*groups)
    assert omnibus.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert omnibus.p_value == pytest.approx(ref.pvalue, abs=1e-12)
    hsd = sst.tukey_hsd(*groups)
    for i in range(3):
        for j in range(i + 1, 3):
            assert pairwise[(i, j)].p_value == pytest.approx(hsd.pvalue[i, j], abs=1e-9)


def test_anova_detects_separated_means():
    rng = np.random.default_rng(9)
    groups = [rng.normal(m, 0.5, 20) for m in (0.0, 2.0, 4.0)]
    omnibus, pairwise = anova_tukey(groups)
    assert omnibus.p_value < 1e-6
    assert all(r.p_value < 0.01 for r in pairwise.values())


def test_anova_preconditions():
    with pytest.raises(ValueError, match="at least 2 groups"):
        anova_tukey([[1.0, 2.0]])
    with pytest.raises(ValueError, match="no within-group spread"):
        anova_tukey([[1.0, 1.0], [2.0, 2.0]])
