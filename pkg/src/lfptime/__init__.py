"""Time-domain analysis of paired-site LFP recordings.

The package covers the full chain from raw two-channel session CSVs to a
classification report: band-pass filtering and outlier clamping, fractal
and chaos sanity checks (rescaled-range Hurst, maximal Lyapunov), density
fitting and divergence scoring (discrete KLD/JSD in bits, closed-form
Gaussian KLD in nats), three treatment classifiers, symmetrized dot
patterns, a synthetic cohort generator, and the hypothesis tests used to
compare groups.
"""
from .classify import (
    ClassificationResult,
    Method,
    Thresholds,
    VarianceDirection,
    calibrate_thresholds,
    classify_by_correlation,
    classify_by_kld1d,
    classify_by_kld2d,
    compare_variance,
    kld1d_score,
    pearson,
    score_pair,
)
from .core import (
    PhaseLabel,
    SessionRecord,
    Signal,
    SiteLabel,
    TreatmentLabel,
    load_session,
    save_session,
    window,
)
from .density import (
    DiscretePdf,
    Family,
    Gauss1D,
    GaussND,
    ModelSelection,
    fit_gauss1d,
    fit_gauss_nd,
    hist_pdf,
    jsd_discrete,
    jsd_samples,
    kld_discrete,
    kld_gauss_nd,
    select_model,
    shared_edges,
)
from .pipeline import GateSpec, PipelineConfig, run_pipeline, validate_gate
from .preprocess import FilterSpec, bandpass, clamp_outliers, condition_session
from .sdp import SdpConfig, SdpDotSet, decimate_for_render, sdp_compare, sdp_render, sdp_transform
from .stats import TestResult, anova_tukey, ks_normality, mann_whitney_u, t_test, wilcoxon_signed
from .synth import (
    EffectProfile,
    gen_cohort,
    gen_fgn,
    gen_logistic,
    gen_session,
    gen_white,
    profile_for,
)
from .validate import (
    AutocorrSeries,
    BasicFeatures,
    HurstFit,
    LyapunovEstimate,
    autocorrelation,
    basic_features,
    hurst_rs,
    lyapunov_max,
    shuffle_surrogate,
)

__version__ = "0.1.0"

__all__ = [
    "AutocorrSeries",
    "BasicFeatures",
    "ClassificationResult",
    "DiscretePdf",
    "EffectProfile",
    "Family",
    "FilterSpec",
    "GateSpec",
    "Gauss1D",
    "GaussND",
    "HurstFit",
    "LyapunovEstimate",
    "Method",
    "ModelSelection",
    "PhaseLabel",
    "PipelineConfig",
    "SdpConfig",
    "SdpDotSet",
    "SessionRecord",
    "Signal",
    "SiteLabel",
    "TestResult",
    "Thresholds",
    "TreatmentLabel",
    "VarianceDirection",
    "anova_tukey",
    "autocorrelation",
    "bandpass",
    "basic_features",
    "calibrate_thresholds",
    "clamp_outliers",
    "condition_session",
    "classify_by_correlation",
    "classify_by_kld1d",
    "classify_by_kld2d",
    "compare_variance",
    "decimate_for_render",
    "fit_gauss1d",
    "fit_gauss_nd",
    "gen_cohort",
    "gen_fgn",
    "gen_logistic",
    "gen_session",
    "gen_white",
    "hist_pdf",
    "hurst_rs",
    "jsd_discrete",
    "jsd_samples",
    "kld1d_score",
    "kld_discrete",
    "kld_gauss_nd",
    "load_session",
    "lyapunov_max",
    "mann_whitney_u",
    "pearson",
    "profile_for",
    "run_pipeline",
    "save_session",
    "score_pair",
    "sdp_compare",
    "sdp_render",
    "sdp_transform",
    "select_model",
    "shared_edges",
    "shuffle_surrogate",
    "t_test",
    "validate_gate",
    "wilcoxon_signed",
    "window",
]
