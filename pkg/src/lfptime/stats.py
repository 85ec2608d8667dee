"""Hypothesis-test battery for group comparisons.

Small samples get exact enumeration (rank-sum counting for Mann-Whitney,
sign-flip counting for the signed-rank test); larger samples fall back to
tie-corrected normal approximations with continuity correction.  Reference
distributions (t, F, normal, studentized range, Kolmogorov) come from
scipy; statistics and branch logic are computed here.

One-sided p-values are taken in the direction of the observed effect, so
one_sided_p <= two_sided_p always holds for the same data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy import stats as _sst

__all__ = [
    "TestResult",
    "ks_normality",
    "t_test",
    "mann_whitney_u",
    "wilcoxon_signed",
    "anova_tukey",
]


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    test_name: str
    sided: str  # "one" or "two"

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value {self.p_value} outside [0,1]")
        if self.sided not in ("one", "two"):
            raise ValueError(f"sided must be 'one' or 'two', got {self.sided!r}")


def _as_array(x, name: str, min_len: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size < min_len:
        raise ValueError(f"{name} needs at least {min_len} values, got {arr.size}")
    return arr


def ks_normality(sample, mu: float | None = None, sigma: float | None = None) -> TestResult:
    """One-sample Kolmogorov-Smirnov test against a Gaussian.

    By default mu/sigma are estimated from the sample itself and the
    p-value comes from the asymptotic KS distribution.  Note this plain-KS
    usage (no Lilliefors correction) makes the p-value too large when
    parameters are estimated, i.e. the test is too lenient in certifying
    normality.  Pass known mu/sigma for a calibrated test.
    """
    x = np.sort(_as_array(sample, "sample", 5))
    n = x.size
    if mu is None:
        mu = float(np.mean(x))
    if sigma is None:
        sigma = float(np.std(x))
    if sigma == 0.0:
        raise ValueError("zero variance: constant sample")
    cdf = _sst.norm.cdf((x - mu) / sigma)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    d = float(max(d_plus, d_minus))
    p = float(min(1.0, max(0.0, special.kolmogorov(math.sqrt(n) * d))))
    return TestResult(d, p, "ks_normality", "two")


def t_test(a, b, paired: bool = False, sided: str = "two", equal_var: bool = False) -> TestResult:
    """Two-group t-test: paired one-sample-on-differences, or unpaired.

    Unpaired uses the Welch correction by default; equal_var=True gives
    the pooled-variance Student test (whose square is the two-group ANOVA
    F).  sided="one" halves the p in the direction of the observed mean
    difference.
    """
    a = _as_array(a, "a", 2)
    b = _as_array(b, "b", 2)
    if paired:
        if a.size != b.size:
            raise ValueError("paired test needs equal lengths")
        d = a - b
        sd = float(np.std(d, ddof=1))
        if sd == 0.0:
            if float(np.mean(d)) == 0.0:
                # identical pairs: no evidence either way
                return TestResult(0.0, 1.0, "t_test_paired", sided)
            raise ValueError("zero variance: constant nonzero paired difference")
        t = float(np.mean(d)) / (sd / math.sqrt(d.size))
        df = d.size - 1
        name = "t_test_paired"
    else:
        va = float(np.var(a, ddof=1))
        vb = float(np.var(b, ddof=1))
        if va == 0.0 and vb == 0.0:
            raise ValueError("zero variance: both groups constant")
        if equal_var:
            df = a.size + b.size - 2
            sp2 = ((a.size - 1) * va + (b.size - 1) * vb) / df
            se = math.sqrt(sp2 * (1 / a.size + 1 / b.size))
            name = "t_test_student"
        else:
            sea = va / a.size
            seb = vb / b.size
            se = math.sqrt(sea + seb)
            df = (sea + seb) ** 2 / (
                sea**2 / (a.size - 1) + seb**2 / (b.size - 1)
            )
            name = "t_test_welch"
        t = (float(np.mean(a)) - float(np.mean(b))) / se
    p_two = float(min(1.0, 2.0 * _sst.t.sf(abs(t), df)))
    if sided == "two":
        return TestResult(t, p_two, name, "two")
    return TestResult(t, float(_sst.t.sf(abs(t), df)), name, "one")


# -- Mann-Whitney -----------------------------------------------------------

def _rank_sum_counts(n1: int, n_total: int) -> np.ndarray:
    """counts[s] = number of n1-subsets of ranks 1..n_total with rank sum s."""
    max_sum = n_total * (n_total + 1) // 2
    ways = np.zeros((n1 + 1, max_sum + 1), dtype=np.int64)
    ways[0, 0] = 1
    for rank in range(1, n_total + 1):
        for j in range(min(rank, n1), 0, -1):
            ways[j, rank:] += ways[j - 1, : max_sum + 1 - rank]
    return ways[n1]


def _tail_p(pmf: np.ndarray, stat: float, sided: str) -> float:
    """Tail probabilities over an integer-indexed pmf (counts or masses)."""
    total = pmf.sum()
    k = int(round(stat))
    lower = pmf[: k + 1].sum() / total
    upper = pmf[k:].sum() / total
    if sided == "two":
        return float(min(1.0, 2.0 * min(lower, upper)))
    return float(min(lower, upper))


def mann_whitney_u(a, b, sided: str = "two") -> TestResult:
    """Mann-Whitney U test.

    Exact null distribution (rank-sum counting over all assignments) when
    both groups have at most 20 values and there are no ties; otherwise a
    tie-corrected normal approximation with continuity correction.  The
    reported statistic is U of the first sample.
    """
    a = _as_array(a, "a", 3)
    b = _as_array(b, "b", 3)
    n1, n2 = a.size, b.size
    combined = np.concatenate([a, b])
    ranks = _sst.rankdata(combined)
    r1 = float(np.sum(ranks[:n1]))
    u1 = r1 - n1 * (n1 + 1) / 2.0
    has_ties = np.unique(combined).size < combined.size

    if not has_ties and max(n1, n2) <= 20:
        counts = _rank_sum_counts(n1, n1 + n2)
        offset = n1 * (n1 + 1) // 2
        pmf_u = counts[offset : offset + n1 * n2 + 1]  # U = R1 - offset
        p = _tail_p(pmf_u, u1, sided)
        return TestResult(u1, p, "mann_whitney_exact", sided)

    n = n1 + n2
    mu = n1 * n2 / 2.0
    _, tie_counts = np.unique(combined, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return TestResult(u1, 1.0, "mann_whitney_normal", sided)
    cc = 0.5 * np.sign(u1 - mu)
    z = (u1 - mu - cc) / math.sqrt(var)
    if sided == "two":
        p = float(min(1.0, 2.0 * _sst.norm.sf(abs(z))))
    else:
        p = float(_sst.norm.sf(abs(z)))
    return TestResult(u1, p, "mann_whitney_normal", sided)


# -- Wilcoxon signed rank ---------------------------------------------------

def _signed_rank_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """counts[w] = number of sign assignments with doubled positive-rank sum w."""
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks:
        r = int(r)
        nxt = counts.copy()
        nxt[r:] += counts[: total + 1 - r]
        counts = nxt
    return counts


def wilcoxon_signed(a, b, sided: str = "two") -> TestResult:
    """Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped; absolute differences are midranked.  The
    statistic is the positive-rank sum W+.  Exact sign-flip enumeration
    for n <= 25 remaining pairs, normal approximation (variance from the
    actual midranks, continuity-corrected) beyond.
    """
    a = _as_array(a, "a", 2)
    b = _as_array(b, "b", 2)
    if a.size != b.size:
        raise ValueError("paired test needs equal lengths")
    d = a - b
    d = d[d != 0]
    if d.size == 0:
        raise ValueError("all differences zero")
    ranks = _sst.rankdata(np.abs(d))
    w_plus = float(np.sum(ranks[d > 0]))
    n = d.size

    if n <= 25:
        doubled = np.round(2 * ranks).astype(np.int64)
        counts = _signed_rank_counts(doubled)
        p = _tail_p(counts, 2 * w_plus, sided)
        return TestResult(w_plus, p, "wilcoxon_exact", sided)

    mu = float(np.sum(ranks)) / 2.0
    var = float(np.sum(ranks**2)) / 4.0
    cc = 0.5 * np.sign(w_plus - mu)
    z = (w_plus - mu - cc) / math.sqrt(var)
    if sided == "two":
        p = float(min(1.0, 2.0 * _sst.norm.sf(abs(z))))
    else:
        p = float(_sst.norm.sf(abs(z)))
    return TestResult(w_plus, p, "wilcoxon_normal", sided)


# -- One-way ANOVA with Tukey HSD -------------------------------------------

def anova_tukey(groups) -> tuple[TestResult, dict]:
    """One-way ANOVA omnibus F plus Tukey HSD on every group pair.

    Pairwise p-values use the studentized-range distribution (numerically
    integrated by scipy), with the Tukey-Kramer standard error for unequal
    group sizes.  Pairs are keyed (i, j) by group position.
    """
    arrays = [_as_array(g, f"group {i}", 2) for i, g in enumerate(groups)]
    k = len(arrays)
    if k < 2:
        raise ValueError("need at least 2 groups")
    n_total = sum(g.size for g in arrays)
    grand = sum(float(np.sum(g)) for g in arrays) / n_total
    means = [float(np.mean(g)) for g in arrays]
    ss_between = sum(g.size * (m - grand) ** 2 for g, m in zip(arrays, means))
    ss_within = sum(float(np.sum((g - m) ** 2)) for g, m in zip(arrays, means))
    df_b = k - 1
    df_w = n_total - k
    if ss_within == 0.0:
        raise ValueError("zero variance: no within-group spread")
    f = (ss_between / df_b) / (ss_within / df_w)
    p = float(_sst.f.sf(f, df_b, df_w))
    omnibus = TestResult(float(f), p, "anova_oneway", "two")

    msw = ss_within / df_w
    pairwise = {}
    for i in range(k):
        for j in range(i + 1, k):
            se = math.sqrt(msw / 2.0 * (1.0 / arrays[i].size + 1.0 / arrays[j].size))
            q = abs(means[i] - means[j]) / se
            p_ij = float(np.clip(_sst.studentized_range.sf(q, k, df_w), 0.0, 1.0))
            pairwise[(i, j)] = TestResult(float(q), p_ij, "tukey_hsd", "two")
    return omnibus, pairwise
