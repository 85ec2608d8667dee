"""Synthetic signals and cohorts.

Three roles: exact oracles for the estimators (fractional Gaussian noise
with known H, the logistic map with known Lyapunov exponent), a white
noise baseline, and whole synthetic cohorts encoding the treatment effect
directions (morphine narrows NAc amplitude spread, food widens HIP spread
and couples the two sites) so the classification chain can be exercised
end to end without animal recordings.

All generators draw from numpy's seeded PCG64 via default_rng, so every
output is reproducible from (parameters, seed) alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhaseLabel, SessionRecord, Signal, TreatmentLabel

__all__ = [
    "EffectProfile",
    "profile_for",
    "gen_white",
    "gen_fgn",
    "gen_logistic",
    "gen_session",
    "gen_cohort",
]


@dataclass(frozen=True)
class EffectProfile:
    """Per-treatment effect directions applied in the POST phase.

    Scale factors multiply the POST-phase channel sigmas; post_coupling c
    mixes the NAc stream as sqrt(1-c^2)*nac + c*hip, which keeps unit
    variance while setting the HIP-NAc correlation to c.  Magnitudes are
    synthetic choices; only the directions are physiologically motivated.
    """

    treatment: TreatmentLabel
    nac_sigma_post_scale: float = 1.0
    hip_sigma_post_scale: float = 1.0
    post_coupling: float = 0.0
    hurst_target: float = 0.85

    def __post_init__(self):
        if self.nac_sigma_post_scale <= 0 or self.hip_sigma_post_scale <= 0:
            raise ValueError("sigma scales must be positive")
        if not 0.0 <= self.post_coupling < 1.0:
            raise ValueError(f"post_coupling must be in [0, 1), got {self.post_coupling}")
        if not 0.0 < self.hurst_target < 1.0:
            raise ValueError(f"hurst_target must be in (0, 1), got {self.hurst_target}")


def profile_for(treatment: TreatmentLabel) -> EffectProfile:
    """Default effect profile per treatment.

    Morphine: NAc sigma shrinks to 0.6x.  Food: HIP sigma grows to 1.6x
    and the sites couple at c=0.75.  The coupling is set high enough that
    the pre-to-post divergence of the joint (hip, nac) fit ranks food
    above morphine (0.65 vs 0.38 nats in expectation), which the banded
    2D rule requires; at c=0.6 the ranking inverts.
    """
    if treatment is TreatmentLabel.MORPHINE:
        return EffectProfile(treatment, nac_sigma_post_scale=0.6)
    if treatment is TreatmentLabel.FOOD:
        return EffectProfile(treatment, hip_sigma_post_scale=1.6, post_coupling=0.75)
    return EffectProfile(treatment)


def gen_white(n: int, sigma: float = 1.0, seed: int = 0, fs: float = 1000.0) -> Signal:
    """i.i.d. Gaussian samples."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    rng = np.random.default_rng(seed)
    return Signal(rng.normal(0.0, sigma, n), fs, "white")


def _fgn_autocov(n_lags: int, hurst: float) -> np.ndarray:
    k = np.arange(n_lags + 1, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k - 1) ** h2 - 2.0 * k**h2 + (k + 1) ** h2)


def _fgn_draw(n_pow2: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    """Exact fGn of length n_pow2 by circulant embedding of the autocovariance."""
    n = n_pow2
    gamma = _fgn_autocov(n, hurst)
    row = np.concatenate([gamma[:n], gamma[n:0:-1]])  # length 2n, symmetric
    eig = np.fft.fft(row).real
    # the fGn embedding is positive semidefinite for H in (0,1); tiny negative
    # values are rounding noise
    if eig.min() < -1e-8 * eig.max():
        raise AssertionError(f"circulant embedding not PSD: min eigenvalue {eig.min()}")
    eig = np.clip(eig, 0.0, None)
    m = 2 * n
    v0 = rng.standard_normal()
    vn = rng.standard_normal()
    v1 = rng.standard_normal(n - 1)
    v2 = rng.standard_normal(n - 1)
    w = np.empty(m, dtype=complex)
    w[0] = math.sqrt(eig[0] / m) * v0
    w[1:n] = np.sqrt(eig[1:n] / (2 * m)) * (v1 + 1j * v2)
    w[n] = math.sqrt(eig[n] / m) * vn
    w[n + 1 :] = np.conj(w[1:n][::-1])
    z = np.fft.fft(w)
    return z[:n].real


def gen_fgn(n: int, hurst: float, seed: int = 0, fs: float = 1000.0) -> Signal:
    """Exact unit-variance fractional Gaussian noise, n a power of two."""
    if n < 4 or n & (n - 1) != 0:
        raise ValueError(f"n must be a power of 2 >= 4, got {n}")
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must be in (0, 1), got {hurst}")
    rng = np.random.default_rng(seed)
    return Signal(_fgn_draw(n, hurst, rng), fs, f"fgn_h{hurst:g}")


def gen_logistic(n: int, r: float = 4.0, x0: float = 0.3, fs: float = 1000.0) -> Signal:
    """Logistic-map iterates x_{t+1} = r x_t (1 - x_t), transient dropped."""
    if not 0.0 < r <= 4.0:
        raise ValueError(f"r must be in (0, 4], got {r}")
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must be in (0, 1), got {x0}")
    if n < 100:
        raise ValueError(f"n must be >= 100, got {n}")
    x = x0
    for _ in range(1000):
        x = r * x * (1.0 - x)
    out = np.empty(n)
    for i in range(n):
        out[i] = x
        x = r * x * (1.0 - x)
    return Signal(out, fs, f"logistic_r{r:g}")


def _fgn_arbitrary_length(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    """fGn of any length: draw the next power of two and truncate (stationary)."""
    n_pow2 = 1 << max(2, (n - 1).bit_length())
    return _fgn_draw(n_pow2, hurst, rng)[:n]


def gen_session(
    profile: EffectProfile,
    phase: PhaseLabel,
    duration_s: float = 600.0,
    fs: float = 1000.0,
    seed: int = 0,
    subject_id: str = "subject",
    sigma_base: float = 1.0,
) -> SessionRecord:
    """One synthetic subject-phase recording pair.

    Both channels are independent fGn(hurst_target) streams scaled to
    sigma_base; the POST phase applies the profile's sigma scales and
    cross-site coupling.  Deterministic per (profile, phase, seed).
    """
    n = int(round(duration_s * fs))
    if n < 2**14:
        raise ValueError(f"duration too short: need >= 2^14 samples, got {n}")
    hip_rng, nac_rng = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2)]
    hip_raw = _fgn_arbitrary_length(n, profile.hurst_target, hip_rng)
    nac_raw = _fgn_arbitrary_length(n, profile.hurst_target, nac_rng)
    if phase is PhaseLabel.POST:
        c = profile.post_coupling
        nac_mixed = math.sqrt(1.0 - c * c) * nac_raw + c * hip_raw
        hip = sigma_base * profile.hip_sigma_post_scale * hip_raw
        nac = sigma_base * profile.nac_sigma_post_scale * nac_mixed
    else:
        hip = sigma_base * hip_raw
        nac = sigma_base * nac_raw
    return SessionRecord(
        subject_id=subject_id,
        phase=phase,
        hip=Signal(hip, fs, f"{subject_id}:{phase.value}:hip"),
        nac=Signal(nac, fs, f"{subject_id}:{phase.value}:nac"),
        treatment=profile.treatment,
    )


def _subject_seed(cohort_seed: int, treatment: TreatmentLabel, subject: int, phase: PhaseLabel) -> int:
    """Deterministic per-(subject, phase) seed, independent of which other
    treatments are generated alongside, so single-profile runs compose
    into the same cohort as an all-profile run."""
    t_idx = list(TreatmentLabel).index(treatment)
    p_idx = list(PhaseLabel).index(phase)
    seq = np.random.SeedSequence(entropy=(int(cohort_seed), t_idx, subject, p_idx))
    return int(seq.generate_state(1)[0])


def gen_cohort(
    subjects_per_group: int = 5,
    seed: int = 0,
    duration_s: float = 600.0,
    fs: float = 1000.0,
    profiles: dict[TreatmentLabel, EffectProfile] | None = None,
) -> list[tuple[SessionRecord, SessionRecord]]:
    """A full labeled cohort: (pre, post) session pairs for every subject.

    Per-subject seeds are derived from (cohort seed, treatment, subject,
    phase), so different cohort seeds share nothing and the same seed
    reproduces the cohort exactly.
    """
    if profiles is None:
        profiles = {t: profile_for(t) for t in TreatmentLabel}
    pairs = []
    for treatment in TreatmentLabel:
        if treatment not in profiles:
            continue
        profile = profiles[treatment]
        for s in range(subjects_per_group):
            subject_id = f"{treatment.value}{s + 1:02d}"
            pre = gen_session(
                profile, PhaseLabel.PRE, duration_s, fs,
                _subject_seed(seed, treatment, s, PhaseLabel.PRE), subject_id,
            )
            post = gen_session(
                profile, PhaseLabel.POST, duration_s, fs,
                _subject_seed(seed, treatment, s, PhaseLabel.POST), subject_id,
            )
            pairs.append((pre, post))
    return pairs
