"""Amplitude densities and divergences between them.

Discrete divergences operate on histograms sharing one set of bin edges
and are reported in bits (log base 2).  The closed-form divergence between
multivariate Gaussian fits is reported in nats (natural log); every report
that carries one of these numbers states its unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from .core import Signal

__all__ = [
    "Family",
    "Gauss1D",
    "GaussND",
    "DiscretePdf",
    "ModelSelection",
    "fit_gauss1d",
    "fit_gauss_nd",
    "select_model",
    "hist_pdf",
    "shared_edges",
    "kld_discrete",
    "jsd_discrete",
    "jsd_samples",
    "kld_gauss_nd",
]

_LOG2 = math.log(2.0)


class Family(Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    LOGISTIC = "logistic"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class Gauss1D:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def logpdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True, eq=False)
class GaussND:
    mu_vec: np.ndarray = field(repr=False)
    sigma_mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        mu = np.atleast_1d(np.array(self.mu_vec, dtype=float))
        sig = np.atleast_2d(np.array(self.sigma_mat, dtype=float))
        if sig.shape != (mu.size, mu.size):
            raise ValueError(f"sigma_mat shape {sig.shape} does not match mu of size {mu.size}")
        if not np.allclose(sig, sig.T, rtol=1e-10, atol=1e-12):
            raise ValueError("sigma_mat must be symmetric")
        eig = np.linalg.eigvalsh(sig)
        if eig.min() <= 0:
            raise ValueError("sigma_mat must be positive definite")
        object.__setattr__(self, "mu_vec", mu)
        object.__setattr__(self, "sigma_mat", sig)

    @property
    def dim(self) -> int:
        return self.mu_vec.size


@dataclass(frozen=True, eq=False)
class DiscretePdf:
    """Probability masses over contiguous bins (shared-edge histogram PDF)."""

    bin_edges: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        edges = np.array(self.bin_edges, dtype=float)
        probs = np.array(self.probs, dtype=float)
        if edges.size != probs.size + 1:
            raise ValueError("bin_edges must have exactly one more entry than probs")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(probs < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()}, not 1")
        probs.flags.writeable = False
        edges.flags.writeable = False
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class ModelSelection:
    log_likelihoods: dict
    winner: Family
    params: dict


def fit_gauss1d(samples) -> Gauss1D:
    """Maximum-likelihood Gaussian: mean and population deviation."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    sigma = float(np.std(x))
    if sigma == 0.0:
        raise ValueError("degenerate density: zero variance")
    return Gauss1D(float(np.mean(x)), sigma)


def fit_gauss_nd(columns) -> GaussND:
    """Maximum-likelihood multivariate Gaussian from variables given as columns.

    columns is a sequence of equal-length 1-d arrays, one per variable.
    The covariance is the divide-by-N estimate.  Linearly dependent
    columns give a singular covariance and are rejected.
    """
    data = np.array([np.asarray(c, dtype=float) for c in columns])
    if data.ndim != 2:
        raise ValueError("columns must be equal-length 1-d sequences")
    dim, n = data.shape
    if n < dim + 1:
        raise ValueError(f"need at least {dim + 1} samples for {dim} variables, got {n}")
    mu = data.mean(axis=1)
    centered = data - mu[:, None]
    cov = centered @ centered.T / n
    eig = np.linalg.eigvalsh(cov)
    if eig.min() <= max(1e-12 * max(eig.max(), 0.0), 0.0):
        raise ValueError("degenerate covariance: columns are linearly dependent or constant")
    return GaussND(mu, cov)


def _loglik_gaussian(x: np.ndarray) -> tuple[float, dict]:
    mu = float(np.mean(x))
    sigma = float(np.std(x))
    n = x.size
    ll = -0.5 * n * math.log(2 * math.pi * sigma * sigma) - 0.5 * n
    return ll, {"mu": mu, "sigma": sigma}


def _loglik_laplace(x: np.ndarray) -> tuple[float, dict]:
    loc = float(np.median(x))
    b = float(np.mean(np.abs(x - loc)))
    n = x.size
    ll = -n * math.log(2 * b) - n
    return ll, {"loc": loc, "scale": b}


def _loglik_logistic(x: np.ndarray) -> tuple[float, dict]:
    # no closed form; Nelder-Mead from moment estimates
    def nll(theta):
        mu, log_s = theta
        s = math.exp(log_s)
        z = (x - mu) / s
        return float(np.sum(np.abs(z) + 2 * np.logaddexp(0.0, -np.abs(z)) + log_s))

    mu0 = float(np.mean(x))
    s0 = float(np.std(x)) * math.sqrt(3.0) / math.pi
    res = optimize.minimize(nll, [mu0, math.log(s0)], method="Nelder-Mead",
                            options={"xatol": 1e-8, "fatol": 1e-8, "maxiter": 400})
    mu, log_s = res.x
    return -float(res.fun), {"loc": float(mu), "scale": float(math.exp(log_s))}


def _loglik_uniform(x: np.ndarray) -> tuple[float, dict]:
    lo = float(x.min())
    hi = float(x.max())
    ll = -x.size * math.log(hi - lo)
    return ll, {"low": lo, "high": hi}


_FITTERS = {
    Family.GAUSSIAN: _loglik_gaussian,
    Family.LAPLACE: _loglik_laplace,
    Family.LOGISTIC: _loglik_logistic,
    Family.UNIFORM: _loglik_uniform,
}


def select_model(samples) -> ModelSelection:
    """Fit four location-scale families by maximum likelihood, keep the best.

    All candidates have two parameters, so comparing raw log-likelihoods
    is equivalent to AIC/BIC comparison.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 100:
        raise ValueError(f"need at least 100 samples to compare families, got {x.size}")
    if float(np.std(x)) == 0.0:
        raise ValueError("degenerate density: zero variance")
    lls = {}
    params = {}
    for family, fitter in _FITTERS.items():
        ll, p = fitter(x)
        lls[family] = ll
        params[family] = p
    winner = max(lls, key=lambda fam: lls[fam])
    return ModelSelection(lls, winner, params)


def shared_edges(samples, bins: int = 256, span_sigma: float = 6.0) -> np.ndarray:
    """Histogram edges centered on the pooled mean, spanning +-span_sigma deviations."""
    x = np.asarray(samples, dtype=float)
    sd = float(np.std(x))
    if sd == 0.0:
        raise ValueError("degenerate density: zero variance")
    center = float(np.mean(x))
    return np.linspace(center - span_sigma * sd, center + span_sigma * sd, bins + 1)


def hist_pdf(samples, bin_edges) -> DiscretePdf:
    """Empirical PDF on given edges; samples outside land in the edge bins."""
    edges = np.asarray(bin_edges, dtype=float)
    x = np.clip(np.asarray(samples, dtype=float), edges[0], edges[-1])
    counts, _ = np.histogram(x, bins=edges)
    total = counts.sum()
    if total == 0:
        raise ValueError("no samples to histogram")
    return DiscretePdf(edges, counts / total)


def _check_shared(p: DiscretePdf, q: DiscretePdf) -> None:
    if p.bin_edges.size != q.bin_edges.size or not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("PDFs must share identical bin edges")


def kld_discrete(p: DiscretePdf, q: DiscretePdf) -> float:
    """KL divergence sum(p * log2(p/q)) in bits; +inf where q is 0 under p."""
    _check_shared(p, q)
    pp = p.probs
    qq = q.probs
    support = pp > 0
    if np.any(qq[support] == 0):
        return math.inf
    return float(np.sum(pp[support] * np.log2(pp[support] / qq[support])))


def jsd_discrete(p: DiscretePdf, q: DiscretePdf) -> float:
    """Jensen-Shannon divergence in bits: symmetric, finite, bounded by 1."""
    _check_shared(p, q)
    m = DiscretePdf(p.bin_edges, 0.5 * (p.probs + q.probs))
    val = 0.5 * kld_discrete(p, m) + 0.5 * kld_discrete(q, m)
    # guard rounding just outside [0, 1]
    return float(min(max(val, 0.0), 1.0))


def jsd_samples(a, b, bins: int = 256, span_sigma: float = 6.0) -> float:
    """Whole-sample JSD in bits on edges shared from the pooled samples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    edges = shared_edges(np.concatenate([a, b]), bins=bins, span_sigma=span_sigma)
    return jsd_discrete(hist_pdf(a, edges), hist_pdf(b, edges))


def kld_gauss_nd(p1: GaussND, p2: GaussND) -> float:
    """Closed-form KL divergence between multivariate Gaussians, in nats.

    0.5 * (log(det S2 / det S1) - n + tr(S2^-1 S1) + (m2-m1)' S2^-1 (m2-m1))
    """
    if p1.dim != p2.dim:
        raise ValueError(f"dimension mismatch: {p1.dim} vs {p2.dim}")
    n = p1.dim
    s1 = p1.sigma_mat
    s2 = p2.sigma_mat
    _, logdet1 = np.linalg.slogdet(s1)
    _, logdet2 = np.linalg.slogdet(s2)
    s2_inv_s1 = np.linalg.solve(s2, s1)
    dmu = p2.mu_vec - p1.mu_vec
    quad = float(dmu @ np.linalg.solve(s2, dmu))
    return 0.5 * float(logdet2 - logdet1 - n + np.trace(s2_inv_s1) + quad)


def signal_gauss1d(signal: Signal) -> Gauss1D:
    return fit_gauss1d(signal.samples)
