"""Command-line entry points.

One executable, ten subcommands covering the whole chain: preprocess,
validate, fit, kld, classify, calibrate, sdp, synth, pipeline, stats.
Global flags: --config (TOML or JSON pipeline configuration), --seed,
--jobs.  Exit codes: 0 success, 1 data/processing error, 2 usage error.

Analysis commands condition their inputs (band-pass + outlier clamp,
using the --config filter settings) before computing anything, so their
numbers live on the same scale as pipeline reports and calibrated
thresholds.  Pass --raw when the input files are already conditioned,
e.g. written by the preprocess subcommand.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .classify import (
    Method,
    Thresholds,
    calibrate_thresholds,
    classify_by_correlation,
    classify_by_kld1d,
    classify_by_kld2d,
    kld1d_score,
    score_pair,
)
from .core import SiteLabel, TreatmentLabel, load_session, save_session
from .density import fit_gauss1d, fit_gauss_nd, jsd_samples, kld_gauss_nd, select_model
from .pipeline import GateSpec, PipelineConfig, run_pipeline
from .preprocess import FilterSpec, condition_session
from .sdp import SdpConfig, decimate_for_render, sdp_render, sdp_transform
from .stats import anova_tukey, ks_normality, mann_whitney_u, t_test, wilcoxon_signed
from .synth import gen_cohort, profile_for
from .validate import autocorrelation, hurst_rs, lyapunov_max


def _load_config_file(path: str) -> dict:
    text = Path(path).read_bytes()
    if path.endswith(".toml"):
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text.decode())
    return json.loads(text)


def _config_from_args(args) -> PipelineConfig:
    raw = _load_config_file(args.config) if getattr(args, "config", None) else {}
    try:
        filt = FilterSpec(**raw.get("filter", {}))
        th = Thresholds(**raw.get("thresholds", {}))
        sdp_cfg = SdpConfig(**raw.get("sdp", {}))
        gate = GateSpec(**raw.get("gate", {}))
        seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
        jobs = args.jobs if args.jobs is not None else int(raw.get("jobs", 1))
        return PipelineConfig(
            filter=filt,
            window_seconds=float(raw.get("window_seconds", 5.0)),
            bins=int(raw.get("bins", 256)),
            thresholds=th,
            sdp=sdp_cfg,
            seed=seed,
            gate=gate,
            lyapunov_windows=int(raw.get("lyapunov_windows", 4)),
            sdp_max_points=int(raw.get("sdp_max_points", 750)),
            jobs=jobs,
        )
    except TypeError as exc:
        raise ValueError(f"bad config {args.config}: {exc}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _thresholds_from(path: str | None) -> Thresholds:
    if not path:
        return Thresholds()
    with open(path) as fh:
        return Thresholds(**json.load(fh))


def _read_group(path: str) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.strip().rstrip(",")
            if not line or line.startswith("#"):
                continue
            vals.append(float(line.split(",")[0]))
    if not vals:
        raise ValueError(f"{path}: no numeric values")
    return np.array(vals)


# -- subcommand bodies -------------------------------------------------------

def _cmd_preprocess(args) -> int:
    spec = FilterSpec(args.low, args.high, args.order)
    out = condition_session(load_session(args.infile), spec, args.n_sigma)
    out_path = Path(args.outfile)
    written = save_session(out, out_path.parent if out_path.suffix else out_path)
    # save_session names files <subject>_<phase>; honor an explicit filename
    if out_path.suffix and written != out_path:
        written.replace(out_path)
        written.with_suffix(".json").replace(out_path.with_suffix(".json"))
    return 0


def _cmd_validate(args) -> int:
    rec = load_session(args.infile)
    if not args.raw:
        rec = condition_session(rec, _config_from_args(args).filter)
    report: dict = {"subject_id": rec.subject_id, "phase": rec.phase.value}
    from .core import window as _window

    for site in SiteLabel:
        ch = rec.channel(site)
        wins = _window(ch, args.window)
        lam_wins = wins if args.lyapunov_windows <= 0 else wins[: args.lyapunov_windows]
        per_window = []
        for i, w in enumerate(wins):
            h = hurst_rs(w).exponent
            r1 = autocorrelation(w, 1).at(1)
            lam = lyapunov_max(w).lam if i < len(lam_wins) else None
            per_window.append({"h": h, "r1": r1, "lambda": lam})
        h_mean = float(np.mean([p["h"] for p in per_window]))
        lam_vals = [p["lambda"] for p in per_window if p["lambda"] is not None]
        report[site.value] = {
            "windows": per_window,
            "h_mean": h_mean,
            "h_warning_high": bool(h_mean > 0.95),
            "r1_mean": float(np.mean([p["r1"] for p in per_window])),
            "lambda_mean": float(np.mean(lam_vals)),
        }
    _emit(report, args.report)
    return 0


def _cmd_fit(args) -> int:
    rec = load_session(args.infile)
    if not args.raw:
        rec = condition_session(rec, _config_from_args(args).filter)
    ch = rec.channel(SiteLabel(args.column))
    g = fit_gauss1d(ch.samples)
    sel = select_model(ch.samples)
    joint = fit_gauss_nd([rec.hip.samples, rec.nac.samples])
    _emit(
        {
            "column": args.column,
            "gauss1d": {"mu": g.mu, "sigma": g.sigma},
            "model_selection": {
                "winner": sel.winner.value,
                "log_likelihoods": {f.value: ll for f, ll in sel.log_likelihoods.items()},
            },
            "gauss2d": {
                "mu": joint.mu_vec.tolist(),
                "sigma": joint.sigma_mat.tolist(),
            },
        },
        args.out,
    )
    return 0


def _cmd_kld(args) -> int:
    pre = load_session(args.pre)
    post = load_session(args.post)
    if not args.raw:
        spec = _config_from_args(args).filter
        pre = condition_session(pre, spec)
        post = condition_session(post, spec)
    if args.mode == "discrete1d":
        payload = {
            "mode": "discrete1d",
            "units": "bits",
            "hip_kld1d_bits": kld1d_score(pre.hip, post.hip, args.bins, args.window),
            "nac_kld1d_bits": kld1d_score(pre.nac, post.nac, args.bins, args.window),
            "hip_whole_jsd_bits": jsd_samples(pre.hip.samples, post.hip.samples, args.bins),
            "nac_whole_jsd_bits": jsd_samples(pre.nac.samples, post.nac.samples, args.bins),
        }
    else:
        k = kld_gauss_nd(
            fit_gauss_nd([pre.hip.samples, pre.nac.samples]),
            fit_gauss_nd([post.hip.samples, post.nac.samples]),
        )
        payload = {"mode": "gauss2d", "units": "nats", "kld2d_nats": k}
    _emit(payload, args.out)
    return 0


def _cmd_classify(args) -> int:
    pre = load_session(args.pre)
    post = load_session(args.post)
    if not args.raw:
        spec = _config_from_args(args).filter
        pre = condition_session(pre, spec)
        post = condition_session(post, spec)
    th = _thresholds_from(args.thresholds)
    fn = {
        "corr": classify_by_correlation,
        "kld1d": classify_by_kld1d,
        "kld2d": classify_by_kld2d,
    }[args.method]
    res = fn(pre, post, th)
    _emit(
        {
            "subject_id": pre.subject_id,
            "method": res.method.value,
            "predicted": res.predicted.value,
            "candidates": [c.value for c in res.candidates],
            "ambiguous": res.ambiguous,
            "scores": res.scores,
        },
        args.out,
    )
    return 0


def _cmd_calibrate(args) -> int:
    cohort = Path(args.cohort)
    spec = None if args.raw else _config_from_args(args).filter
    by_subject: dict[str, dict] = {}
    for csv_path in sorted(cohort.glob("*.csv")):
        rec = load_session(csv_path)
        by_subject.setdefault(rec.subject_id, {})[rec.phase.value] = rec
    scored = []
    for subject in sorted(by_subject):
        phases = by_subject[subject]
        if "pre" not in phases or "post" not in phases:
            print(f"skipping {subject}: missing phase pair", file=sys.stderr)
            continue
        pre, post = phases["pre"], phases["post"]
        if pre.treatment is None:
            raise ValueError(f"{subject}: calibration needs labeled sessions")
        if spec is not None:
            pre = condition_session(pre, spec)
            post = condition_session(post, spec)
        scored.append((pre.treatment, score_pair(pre, post)))
    th = calibrate_thresholds(scored)
    _emit(
        {
            "hip_kld_t": th.hip_kld_t,
            "nac_kld_t": th.nac_kld_t,
            "food_2d": th.food_2d,
            "morphine_2d": th.morphine_2d,
            "corr_band": th.corr_band,
        },
        args.out,
    )
    return 0


def _cmd_sdp(args) -> int:
    rec = load_session(args.infile)
    if not args.raw:
        rec = condition_session(rec, _config_from_args(args).filter)
    ch = rec.channel(SiteLabel(args.column))
    cfg = SdpConfig(args.lag, args.theta, args.zeta)
    dots = sdp_transform(decimate_for_render(ch, args.max_points), cfg)
    Path(args.out).write_text(sdp_render(dots, width_px=args.width))
    if args.out_csv:
        with open(args.out_csv, "w") as fh:
            fh.write("radius,angle_deg\n")
            for r, a in dots.dots:
                fh.write(f"{r:.6f},{a:.6f}\n")
    return 0


def _cmd_synth(args) -> int:
    if args.profile == "all":
        profiles = {t: profile_for(t) for t in TreatmentLabel}
    else:
        t = TreatmentLabel(args.profile)
        profiles = {t: profile_for(t)}
    pairs = gen_cohort(
        subjects_per_group=args.subjects,
        seed=args.seed if args.seed is not None else 0,
        duration_s=args.duration,
        fs=args.fs,
        profiles=profiles,
    )
    for pre, post in pairs:
        save_session(pre, args.out)
        save_session(post, args.out)
    print(f"wrote {2 * len(pairs)} session files to {args.out}")
    return 0


def _cmd_pipeline(args) -> int:
    config = _config_from_args(args)
    report = run_pipeline(args.cohort, config, out_dir=args.out)
    if not args.out:
        _emit(report, None)
    errs = report["n_errors"]
    if errs:
        print(f"{errs} subject(s) failed", file=sys.stderr)
        return 1
    return 0


def _cmd_stats(args) -> int:
    groups = [_read_group(p) for p in args.groups]

    def as_dict(r):
        return {
            "statistic": r.statistic,
            "p_value": r.p_value,
            "test_name": r.test_name,
            "sided": r.sided,
        }

    if args.test == "ks":
        payload = {"results": [as_dict(ks_normality(g)) for g in groups]}
    elif args.test == "anova":
        omnibus, pairwise = anova_tukey(groups)
        payload = {
            "omnibus": as_dict(omnibus),
            "pairwise": {f"{i}-{j}": as_dict(r) for (i, j), r in sorted(pairwise.items())},
        }
    else:
        if len(groups) != 2:
            raise ValueError(f"--test {args.test} needs exactly 2 groups")
        a, b = groups
        if args.test == "t":
            res = t_test(a, b, paired=args.paired, sided=args.sided)
        elif args.test == "mwu":
            res = mann_whitney_u(a, b, sided=args.sided)
        else:
            res = wilcoxon_signed(a, b, sided=args.sided)
        payload = as_dict(res)
    _emit(payload, args.out)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfptime",
        description="Time-domain LFP analysis: preprocessing, validation, "
        "density divergence scoring, classification, dot patterns.",
    )
    parser.add_argument("--config", help="pipeline config file (.toml or .json)")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (pipeline)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_raw_flag(sp):
        sp.add_argument(
            "--raw",
            action="store_true",
            help="input is already conditioned; skip band-pass + clamp",
        )

    p = sub.add_parser("preprocess", help="band-pass + outlier clamp a session CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--low", type=float, default=0.5)
    p.add_argument("--high", type=float, default=300.0)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--n-sigma", type=float, default=3.0)
    p.set_defaults(fn=_cmd_preprocess)

    p = sub.add_parser("validate", help="per-window H, lambda, r(1) report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--window", type=float, default=5.0)
    p.add_argument("--lyapunov-windows", type=int, default=0, help="0 = every window")
    p.add_argument("--report", default=None, help="output JSON path (default stdout)")
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("fit", help="Gaussian fit + family selection for one channel")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--column", choices=["hip", "nac"], required=True)
    p.add_argument("--out", default=None)
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_fit)

    p = sub.add_parser("kld", help="pre/post divergence scores")
    p.add_argument("--pre", required=True)
    p.add_argument("--post", required=True)
    p.add_argument("--mode", choices=["discrete1d", "gauss2d"], default="discrete1d")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--window", type=float, default=5.0)
    p.add_argument("--out", default=None)
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_kld)

    p = sub.add_parser("classify", help="classify one subject from a pre/post pair")
    p.add_argument("--method", choices=["corr", "kld1d", "kld2d"], required=True)
    p.add_argument("--pre", required=True)
    p.add_argument("--post", required=True)
    p.add_argument("--thresholds", default=None, help="thresholds JSON (default: built-ins)")
    p.add_argument("--out", default=None)
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("calibrate", help="fit thresholds on a labeled cohort")
    p.add_argument("--cohort", required=True)
    p.add_argument("--out", default=None)
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_calibrate)

    p = sub.add_parser("sdp", help="symmetrized dot pattern SVG for one channel")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--column", choices=["hip", "nac"], required=True)
    p.add_argument("--L", dest="lag", type=int, default=1)
    p.add_argument("--theta", type=float, default=45.0)
    p.add_argument("--zeta", type=float, default=90.0)
    p.add_argument("--out", required=True)
    p.add_argument("--out-csv", default=None, help="also dump radius,angle_deg rows")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--max-points", type=int, default=100_000)
    add_raw_flag(p)
    p.set_defaults(fn=_cmd_sdp)

    p = sub.add_parser("synth", help="generate a synthetic labeled cohort")
    p.add_argument("--profile", choices=["saline", "morphine", "food", "all"], default="all")
    p.add_argument("--subjects", type=int, default=5)
    p.add_argument("--duration", type=float, default=600.0)
    p.add_argument("--fs", type=float, default=1000.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("pipeline", help="run the full chain over a cohort directory")
    p.add_argument("--cohort", required=True)
    p.add_argument("--out", default=None, help="output dir for report.json + SVGs")
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("stats", help="hypothesis tests on single-column group files")
    p.add_argument("--test", choices=["ks", "t", "mwu", "wilcoxon", "anova"], required=True)
    p.add_argument("--groups", nargs="+", required=True)
    p.add_argument("--paired", action="store_true")
    p.add_argument("--sided", choices=["one", "two"], default="two")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
