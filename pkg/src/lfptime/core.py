"""Core record types for two-site LFP sessions and windowing.

A session is one subject in one phase (pre or post conditioning) with two
simultaneously recorded channels, hippocampus (hip) and nucleus accumbens
(nac).  Signals are immutable after construction; every downstream stage
returns new arrays instead of mutating inputs.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "SiteLabel",
    "PhaseLabel",
    "TreatmentLabel",
    "Signal",
    "SessionRecord",
    "window",
    "load_session",
    "save_session",
]


class SiteLabel(Enum):
    HIP = "hip"
    NAC = "nac"


class PhaseLabel(Enum):
    PRE = "pre"
    POST = "post"


class TreatmentLabel(Enum):
    SALINE = "saline"
    MORPHINE = "morphine"
    FOOD = "food"


@dataclass(frozen=True, eq=False)
class Signal:
    """A uniformly sampled single-channel recording.

    samples are copied and marked read-only so a Signal can be shared
    across worker processes without defensive copies.
    """

    samples: np.ndarray = field(repr=False)
    fs: float
    channel_id: str = ""

    def __post_init__(self):
        x = np.array(self.samples, dtype=float)  # always copy
        if x.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if x.size < 2:
            raise ValueError("signal too short: need at least 2 samples")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite samples (NaN/Inf) are not allowed")
        if not self.fs > 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.fs


@dataclass(frozen=True, eq=False)
class SessionRecord:
    """One subject-phase recording pair.  treatment may be None when the
    label is withheld (blind classification)."""

    subject_id: str
    phase: PhaseLabel
    hip: Signal
    nac: Signal
    treatment: TreatmentLabel | None = None

    def __post_init__(self):
        if not self.subject_id:
            raise ValueError("subject_id must be non-empty")
        if self.hip.fs != self.nac.fs:
            raise ValueError(
                f"channel rate mismatch: hip fs={self.hip.fs}, nac fs={self.nac.fs}"
            )
        if len(self.hip) != len(self.nac):
            raise ValueError(
                f"channel length mismatch: hip {len(self.hip)}, nac {len(self.nac)}"
            )

    @property
    def fs(self) -> float:
        return self.hip.fs

    def channel(self, site: SiteLabel) -> Signal:
        return self.hip if site is SiteLabel.HIP else self.nac


def window(signal: Signal, window_seconds: float, overlap_fraction: float = 0.0) -> list[Signal]:
    """Cut a signal into fixed-length windows.

    Window length is window_seconds * fs rounded to the nearest sample.
    Consecutive windows advance by (1 - overlap_fraction) of a window,
    so overlap_fraction=0 tiles the signal without gaps and the
    concatenation of those windows reproduces the signal prefix exactly.
    """
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    n_win = int(round(window_seconds * signal.fs))
    if n_win < 2:
        raise ValueError("window too short: needs at least 2 samples")
    n = signal.samples.size
    if n_win > n:
        raise ValueError(
            f"signal too short: {n} samples < one window of {n_win}"
        )
    step = max(1, int(round(n_win * (1.0 - overlap_fraction))))
    out = []
    for start in range(0, n - n_win + 1, step):
        out.append(
            Signal(signal.samples[start : start + n_win], signal.fs, signal.channel_id)
        )
    return out


# ---------------------------------------------------------------------------
# Session files: one CSV per session with header t,hip,nac plus a JSON
# sidecar {subject_id, phase, treatment, fs}.  The sidecar carries the
# metadata; the t column exists for humans and plotting tools.

CSV_HEADER = ["t", "hip", "nac"]


def _sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def save_session(record: SessionRecord, out_dir) -> Path:
    """Write <subject>_<phase>.csv plus sidecar; returns the CSV path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{record.subject_id}_{record.phase.value}.csv"
    fs = record.fs
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        hip = record.hip.samples
        nac = record.nac.samples
        for i in range(hip.size):
            w.writerow([f"{i / fs:.4f}", f"{hip[i]:.6f}", f"{nac[i]:.6f}"])
    meta = {
        "subject_id": record.subject_id,
        "phase": record.phase.value,
        "treatment": record.treatment.value if record.treatment else None,
        "fs": fs,
    }
    with open(_sidecar_path(csv_path), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path


def load_session(csv_path, sidecar_path=None) -> SessionRecord:
    """Read a session CSV and its JSON sidecar.

    Malformed numeric rows raise ValueError naming the offending line so a
    cohort run can report exactly which file/line broke.
    """
    csv_path = Path(csv_path)
    sidecar_path = Path(sidecar_path) if sidecar_path else _sidecar_path(csv_path)
    if not sidecar_path.exists():
        raise ValueError(f"missing sidecar {sidecar_path.name} for {csv_path.name}")
    with open(sidecar_path) as fh:
        meta = json.load(fh)
    for key in ("subject_id", "phase", "fs"):
        if key not in meta:
            raise ValueError(f"sidecar {sidecar_path.name}: missing field '{key}'")
    hip_vals: list[float] = []
    nac_vals: list[float] = []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_HEADER:
            raise ValueError(f"{csv_path.name} line 1: expected header {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{csv_path.name} line {lineno}: expected 3 columns, got {len(row)}")
            try:
                hip_vals.append(float(row[1]))
                nac_vals.append(float(row[2]))
            except ValueError:
                raise ValueError(
                    f"{csv_path.name} line {lineno}: non-numeric value {row[1]!r},{row[2]!r}"
                ) from None
    fs = float(meta["fs"])
    phase = PhaseLabel(meta["phase"])
    treatment = TreatmentLabel(meta["treatment"]) if meta.get("treatment") else None
    subject = str(meta["subject_id"])
    return SessionRecord(
        subject_id=subject,
        phase=phase,
        hip=Signal(np.array(hip_vals), fs, f"{subject}:{phase.value}:hip"),
        nac=Signal(np.array(nac_vals), fs, f"{subject}:{phase.value}:nac"),
        treatment=treatment,
    )
