"""Cohort batch pipeline: preprocess, validate, fit, score, classify, render.

Each subject is processed independently (optionally by a process pool);
the report is assembled in sorted subject order, so output is identical
regardless of worker count.  Reports are JSON with sorted keys and no
timestamps: the same cohort, config, and seed produce the same bytes.
"""
from __future__ import annotations

import json
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import (
    ClassificationResult,
    Method,
    Thresholds,
    classify_by_correlation,
    kld1d_decision,
    kld2d_decision,
    score_pair,
)
from .core import PhaseLabel, SiteLabel, load_session, window
from .density import fit_gauss1d, select_model
from .preprocess import FilterSpec, condition_session
from .sdp import SdpConfig, decimate_for_render, sdp_render, sdp_transform
from .validate import autocorrelation, hurst_rs, lyapunov_max, shuffle_surrogate

__all__ = ["GateSpec", "PipelineConfig", "validate_gate", "run_pipeline"]


@dataclass(frozen=True)
class GateSpec:
    """Session meaningfulness cutoffs (tunable; defaults suit slow LFP)."""

    h_min: float = 0.5
    r1_min: float = 0.2
    lambda_max: float = 0.1


def validate_gate(
    h: float,
    lam: float,
    r1: float,
    h_min: float = 0.5,
    r1_min: float = 0.2,
    lambda_max: float = 0.1,
) -> bool:
    """Pass iff persistent (H), autocorrelated (r1), and at most weakly chaotic."""
    for v in (h, lam, r1):
        if not np.isfinite(v):
            raise ValueError(f"gate fields must be finite, got {(h, lam, r1)}")
    return h > h_min and r1 > r1_min and lam < lambda_max


@dataclass(frozen=True)
class PipelineConfig:
    filter: FilterSpec = FilterSpec()
    window_seconds: float = 5.0
    bins: int = 256
    thresholds: Thresholds = Thresholds()
    sdp: SdpConfig = SdpConfig()
    seed: int = 0
    gate: GateSpec = GateSpec()
    # exponent estimation is the slow validation step; cap how many windows
    # feed it per channel (0 = all windows)
    lyapunov_windows: int = 4
    # dot-cloud decimation target for the report's SVGs
    sdp_max_points: int = 750
    jobs: int = 1

    def to_dict(self) -> dict:
        return {
            "filter": {"low_hz": self.filter.low_hz, "high_hz": self.filter.high_hz,
                       "order": self.filter.order},
            "window_seconds": self.window_seconds,
            "bins": self.bins,
            "thresholds": {
                "hip_kld_t": self.thresholds.hip_kld_t,
                "nac_kld_t": self.thresholds.nac_kld_t,
                "food_2d": self.thresholds.food_2d,
                "morphine_2d": self.thresholds.morphine_2d,
                "corr_band": self.thresholds.corr_band,
            },
            "sdp": {"lag": self.sdp.lag, "theta_deg": self.sdp.theta_deg,
                    "zeta_deg": self.sdp.zeta_deg},
            "seed": self.seed,
            "gate": {"h_min": self.gate.h_min, "r1_min": self.gate.r1_min,
                     "lambda_max": self.gate.lambda_max},
            "lyapunov_windows": self.lyapunov_windows,
            "sdp_max_points": self.sdp_max_points,
        }


def _channel_validation(sig, window_seconds: float, lyap_cap: int, shuffle_seed: int) -> dict:
    wins = window(sig, window_seconds)
    h_vals = [hurst_rs(w).exponent for w in wins]
    r1_vals = [autocorrelation(w, 1).at(1) for w in wins]
    lyap_wins = wins if lyap_cap <= 0 else wins[:lyap_cap]
    lam_vals = [lyapunov_max(w).lam for w in lyap_wins]
    h_mean = float(np.mean(h_vals))
    shuffled = shuffle_surrogate(sig, shuffle_seed)
    h_shuffled = hurst_rs(shuffled).exponent
    return {
        "h_mean": h_mean,
        "h_warning_high": bool(h_mean > 0.95),
        "h_shuffled": h_shuffled,
        "r1_mean": float(np.mean(r1_vals)),
        "lambda_mean": float(np.mean(lam_vals)),
        "n_windows": len(wins),
        "n_lyapunov_windows": len(lyap_wins),
    }


def _density_summary(sig) -> dict:
    g = fit_gauss1d(sig.samples)
    sel = select_model(sig.samples)
    return {
        "mu": g.mu,
        "sigma": g.sigma,
        "best_family": sel.winner.value,
    }


def _process_subject(args: tuple) -> tuple[str, dict, dict]:
    """Worker body: everything for one subject.  Returns
    (subject_id, report entry, {relative svg path: svg text})."""
    subject_id, pre_path, post_path, config = args
    entry: dict = {"error": None}
    svgs: dict[str, str] = {}
    try:
        pre = condition_session(load_session(pre_path), config.filter)
        post = condition_session(load_session(post_path), config.filter)

        shuffle_base = zlib.crc32(subject_id.encode()) ^ (config.seed & 0xFFFFFFFF)
        validation = {}
        gate_ok = True
        for rec in (pre, post):
            for site in SiteLabel:
                ch = rec.channel(site)
                v = _channel_validation(
                    ch, config.window_seconds, config.lyapunov_windows,
                    shuffle_seed=shuffle_base + 2 * list(PhaseLabel).index(rec.phase)
                    + list(SiteLabel).index(site),
                )
                v["gate_pass"] = validate_gate(
                    v["h_mean"], v["lambda_mean"], v["r1_mean"],
                    config.gate.h_min, config.gate.r1_min, config.gate.lambda_max,
                )
                gate_ok = gate_ok and v["gate_pass"]
                validation[f"{rec.phase.value}_{site.value}"] = v
        entry["validation"] = validation
        entry["gate_pass"] = gate_ok
        entry["truth"] = pre.treatment.value if pre.treatment else None

        entry["density"] = {
            f"{rec.phase.value}_{site.value}": _density_summary(rec.channel(site))
            for rec in (pre, post)
            for site in SiteLabel
        }

        for rec in (pre, post):
            for site in SiteLabel:
                dots = sdp_transform(
                    decimate_for_render(rec.channel(site), config.sdp_max_points), config.sdp
                )
                rel = f"sdp/{subject_id}_{rec.phase.value}_{site.value}.svg"
                svgs[rel] = sdp_render(dots, width_px=480)
        entry["svg_paths"] = sorted(svgs)

        if not gate_ok:
            entry["scores"] = None
            entry["classification"] = None
            return subject_id, entry, svgs

        scores = score_pair(pre, post, config.bins, config.window_seconds)
        entry["scores"] = scores

        th = config.thresholds
        corr = classify_by_correlation(pre, post, th)
        label_1d, ambiguous = kld1d_decision(
            scores["hip_kld1d_bits"], scores["nac_kld1d_bits"], th
        )
        label_2d = kld2d_decision(scores["kld2d_nats"], th)
        entry["classification"] = {
            "corr": {
                "predicted": corr.predicted.value,
                "candidates": [c.value for c in corr.candidates],
            },
            "kld1d": {"predicted": label_1d.value, "ambiguous": ambiguous},
            "kld2d": {"predicted": label_2d.value},
        }
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        entry = {"error": str(exc)}
    return subject_id, entry, svgs


def _discover_pairs(cohort_dir: Path) -> tuple[dict, list]:
    """Group session CSVs by subject via their sidecars.

    Returns ({subject: {phase: csv path}}, [(subject-or-file, error)]).
    """
    by_subject: dict[str, dict[str, Path]] = {}
    problems = []
    for csv_path in sorted(cohort_dir.glob("*.csv")):
        sidecar = csv_path.with_suffix(".json")
        try:
            with open(sidecar) as fh:
                meta = json.load(fh)
            subject = str(meta["subject_id"])
            phase = str(meta["phase"])
            if phase not in ("pre", "post"):
                raise ValueError(f"sidecar {sidecar.name}: bad phase {phase!r}")
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            problems.append((csv_path.stem, f"unreadable sidecar: {exc}"))
            continue
        by_subject.setdefault(subject, {})[phase] = csv_path
    return by_subject, problems


def run_pipeline(cohort_dir, config: PipelineConfig = PipelineConfig(), out_dir=None) -> dict:
    """Process every subject in cohort_dir; optionally write report + SVGs.

    Subjects with a missing phase or an unreadable file get an error entry
    and the run continues.  When out_dir is given, writes out_dir/report.json
    and out_dir/sdp/*.svg deterministically.
    """
    cohort_dir = Path(cohort_dir)
    if not cohort_dir.is_dir():
        raise ValueError(f"cohort_dir {cohort_dir} is not a directory")
    by_subject, problems = _discover_pairs(cohort_dir)

    tasks = []
    entries: dict[str, dict] = {subj: {"error": msg} for subj, msg in problems}
    for subject in sorted(by_subject):
        phases = by_subject[subject]
        if "pre" not in phases or "post" not in phases:
            have = ", ".join(sorted(phases)) or "none"
            entries[subject] = {"error": f"missing phase pair: have {have}"}
            continue
        tasks.append((subject, str(phases["pre"]), str(phases["post"]), config))

    all_svgs: dict[str, str] = {}
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_process_subject, tasks))
    else:
        results = [_process_subject(t) for t in tasks]
    for subject_id, entry, svgs in results:
        entries[subject_id] = entry
        all_svgs.update(svgs)

    # cohort-level accuracy where ground truth is present
    def _accuracy(method: str) -> float | None:
        hits = 0
        total = 0
        for entry in entries.values():
            cls = entry.get("classification")
            truth = entry.get("truth")
            if not cls or truth is None:
                continue
            total += 1
            pred = cls[method]["predicted"]
            if method == "corr":
                hits += (pred == "food") == (truth == "food")
            else:
                hits += pred == truth
        return hits / total if total else None

    report = {
        "config": config.to_dict(),
        "subjects": {s: entries[s] for s in sorted(entries)},
        "n_subjects": len(entries),
        "n_errors": sum(1 for e in entries.values() if e.get("error")),
        "n_gate_rejected": sum(
            1 for e in entries.values() if not e.get("error") and not e.get("gate_pass")
        ),
        "accuracy": {m: _accuracy(m) for m in ("corr", "kld1d", "kld2d")},
    }

    if out_dir is not None:
        out_dir = Path(out_dir)
        (out_dir / "sdp").mkdir(parents=True, exist_ok=True)
        with open(out_dir / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        for rel, text in sorted(all_svgs.items()):
            with open(out_dir / rel, "w") as fh:
                fh.write(text)
    return report
