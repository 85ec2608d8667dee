import dataclasses
import json
import math

import numpy as np
import pytest

from lfptime.classify import calibrate_thresholds, score_pair
from lfptime.core import PhaseLabel, TreatmentLabel, save_session
from lfptime.pipeline import GateSpec, PipelineConfig, run_pipeline, validate_gate
from lfptime.preprocess import bandpass, clamp_outliers
from lfptime.synth import gen_cohort, gen_session, profile_for


# -- gate ---------------------------------------------------------------------

def test_validate_gate_truth_table():
    assert validate_gate(h=0.8, lam=0.05, r1=0.5)
    assert not validate_gate(h=0.4, lam=0.05, r1=0.5)   # not persistent
    assert not validate_gate(h=0.8, lam=0.05, r1=0.1)   # no short-lag memory
    assert not validate_gate(h=0.8, lam=0.5, r1=0.5)    # too chaotic
    assert validate_gate(h=0.8, lam=0.3, r1=0.5, lambda_max=0.4)


def test_validate_gate_rejects_nonfinite():
    with pytest.raises(ValueError, match="finite"):
        validate_gate(h=math.nan, lam=0.0, r1=0.5)


def test_pipeline_config_to_dict():
    cfg = PipelineConfig(jobs=4, seed=3)
    d = cfg.to_dict()
    assert d["seed"] == 3
    assert "jobs" not in d  # execution detail, not part of the result identity
    assert set(d["thresholds"]) == {"hip_kld_t", "nac_kld_t", "food_2d", "morphine_2d", "corr_band"}
    assert set(d["gate"]) == {"h_min", "r1_min", "lambda_max"}
    assert d["filter"]["low_hz"] == cfg.filter.low_hz


# -- full cohort run ----------------------------------------------------------

def _prep(rec):
    return dataclasses.replace(
        rec, hip=clamp_outliers(bandpass(rec.hip)), nac=clamp_outliers(bandpass(rec.nac))
    )


@pytest.fixture(scope="module")
def cohort_run(tmp_path_factory):
    """Calibrate on one synthetic cohort, run the pipeline on another."""
    cal = [(_prep(a), _prep(b)) for a, b in gen_cohort(2, seed=50, duration_s=30.0)]
    th = calibrate_thresholds([(p.treatment, score_pair(p, q)) for p, q in cal])

    cohort_dir = tmp_path_factory.mktemp("cohort")
    for pre, post in gen_cohort(2, seed=51, duration_s=30.0):
        save_session(pre, cohort_dir)
        save_session(post, cohort_dir)

    config = PipelineConfig(
        thresholds=th, gate=GateSpec(lambda_max=0.5), lyapunov_windows=2, seed=9
    )
    out_dir = tmp_path_factory.mktemp("out")
    report = run_pipeline(cohort_dir, config, out_dir=out_dir)
    return th, config, cohort_dir, out_dir, report


def test_report_totals(cohort_run):
    *_, report = cohort_run
    assert report["n_subjects"] == 6
    assert report["n_errors"] == 0
    assert report["n_gate_rejected"] == 0
    assert report["accuracy"] == {"corr": 1.0, "kld1d": 1.0, "kld2d": 1.0}


def test_report_subject_entries(cohort_run):
    *_, report = cohort_run
    assert sorted(report["subjects"]) == [
        "food01", "food02", "morphine01", "morphine02", "saline01", "saline02",
    ]
    for subject, entry in report["subjects"].items():
        assert entry["error"] is None
        assert entry["gate_pass"] is True
        assert sorted(entry["validation"]) == ["post_hip", "post_nac", "pre_hip", "pre_nac"]
        for v in entry["validation"].values():
            assert v["gate_pass"] is True
            assert v["n_windows"] == 6
            assert v["n_lyapunov_windows"] == 2
            # shuffling kills the long memory the raw channel shows
            assert v["h_shuffled"] < v["h_mean"]
        assert set(entry["scores"]) == {
            "hip_kld1d_bits", "nac_kld1d_bits", "kld2d_nats", "r_post", "r_pre",
        }
        assert len(entry["svg_paths"]) == 4
        truth = entry["truth"]
        assert entry["classification"]["kld1d"]["predicted"] == truth
        assert entry["classification"]["kld2d"]["predicted"] == truth
        corr = entry["classification"]["corr"]
        if truth == "food":
            assert corr["predicted"] == "food"
        else:
            assert corr["predicted"] == "saline"
            assert set(corr["candidates"]) == {"saline", "morphine"}
        for site in ("hip", "nac"):
            assert entry["density"][f"pre_{site}"]["sigma"] > 0


def test_report_files_written(cohort_run):
    *_, out_dir, report = cohort_run
    on_disk = json.loads((out_dir / "report.json").read_text())
    assert on_disk == json.loads(json.dumps(report))  # same content, json types
    svgs = sorted(p.name for p in (out_dir / "sdp").glob("*.svg"))
    assert len(svgs) == 24  # 6 subjects x 2 phases x 2 sites
    text = (out_dir / "sdp" / svgs[0]).read_text()
    assert text.startswith("<svg ")


def test_parallel_run_is_byte_identical(cohort_run, tmp_path):
    th, config, cohort_dir, out_dir, _ = cohort_run
    parallel = dataclasses.replace(config, jobs=2)
    out2 = tmp_path / "out2"
    run_pipeline(cohort_dir, parallel, out_dir=out2)
    assert (out2 / "report.json").read_bytes() == (out_dir / "report.json").read_bytes()
    for svg in sorted((out_dir / "sdp").glob("*.svg")):
        assert (out2 / "sdp" / svg.name).read_bytes() == svg.read_bytes()


def test_default_gate_rejects_synthetic_cohort(cohort_run):
    th, _, cohort_dir, _, _ = cohort_run
    # synthetic windows sit near lambda 0.2, above the default 0.1 ceiling
    report = run_pipeline(
        cohort_dir, PipelineConfig(thresholds=th, lyapunov_windows=2, seed=9)
    )
    assert report["n_gate_rejected"] == 6
    assert report["accuracy"] == {"corr": None, "kld1d": None, "kld2d": None}
    for entry in report["subjects"].values():
        assert entry["gate_pass"] is False
        assert entry["scores"] is None
        assert entry["classification"] is None
        assert len(entry["svg_paths"]) == 4  # portraits are still rendered


# -- error handling -----------------------------------------------------------

def test_corrupt_csv_reports_line(tmp_path):
    prof = profile_for(TreatmentLabel.SALINE)
    pre = gen_session(prof, PhaseLabel.PRE, duration_s=17.0, seed=1, subject_id="solo")
    post = gen_session(prof, PhaseLabel.POST, duration_s=17.0, seed=1, subject_id="solo")
    save_session(pre, tmp_path)
    save_session(post, tmp_path)
    csv = tmp_path / "solo_pre.csv"
    lines = csv.read_text().splitlines()
    lines[3] = "oops"
    csv.write_text("\n".join(lines) + "\n")

    report = run_pipeline(tmp_path)
    assert report["n_subjects"] == 1
    assert report["n_errors"] == 1
    assert "line 4" in report["subjects"]["solo"]["error"]


def test_missing_phase_pair(tmp_path):
    prof = profile_for(TreatmentLabel.SALINE)
    pre = gen_session(prof, PhaseLabel.PRE, duration_s=17.0, seed=2, subject_id="half")
    save_session(pre, tmp_path)
    report = run_pipeline(tmp_path)
    assert report["subjects"]["half"]["error"] == "missing phase pair: have pre"
    assert report["n_errors"] == 1


def test_unreadable_sidecar(tmp_path):
    (tmp_path / "x_pre.csv").write_text("t,hip,nac\n0.0,1.0,2.0\n")
    (tmp_path / "x_pre.json").write_text("{not json")
    report = run_pipeline(tmp_path)
    assert report["subjects"]["x_pre"]["error"].startswith("unreadable sidecar")
    assert report["n_errors"] == 1


def test_run_pipeline_needs_directory(tmp_path):
    with pytest.raises(ValueError, match="not a directory"):
        run_pipeline(tmp_path / "absent")
