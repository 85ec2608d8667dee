"""Symmetrized dot patterns: polar scatter portraits of a signal.

Each sample maps to a radius (its min-max normalized amplitude) and a
mirror pair of angles driven by the normalized amplitude one lag ahead.
The mirror pair is replicated around all symmetry sectors, which is what
gives the characteristic snowflake look and makes site differences (vane
vs polygon shapes) visible at a glance.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import Signal
from .density import DiscretePdf, jsd_discrete

__all__ = [
    "SdpConfig",
    "SdpDotSet",
    "sdp_transform",
    "sdp_render",
    "sdp_compare",
    "decimate_for_render",
]


@dataclass(frozen=True)
class SdpConfig:
    lag: int = 1
    theta_deg: float = 45.0
    zeta_deg: float = 90.0

    def __post_init__(self):
        if self.lag < 1:
            raise ValueError(f"lag must be a positive integer, got {self.lag}")
        sectors = 360.0 / self.theta_deg
        if abs(sectors - round(sectors)) > 1e-9:
            raise ValueError(
                f"theta_deg must divide 360 into whole sectors, got {self.theta_deg}"
            )
        if self.zeta_deg > 2 * self.theta_deg:
            warnings.warn(
                f"zeta_deg={self.zeta_deg} exceeds 2*theta_deg={2 * self.theta_deg}: "
                "sectors will overlap",
                stacklevel=2,
            )

    @property
    def sectors(self) -> int:
        return int(round(360.0 / self.theta_deg))


@dataclass(frozen=True, eq=False)
class SdpDotSet:
    """Dots as an (N, 2) array of (radius, angle_deg), after replication."""

    dots: np.ndarray = field(repr=False)
    base_count: int
    config: SdpConfig

    def __post_init__(self):
        d = np.asarray(self.dots, dtype=float)
        if d.ndim != 2 or d.shape[1] != 2:
            raise ValueError("dots must be an (N, 2) array of (radius, angle_deg)")
        if d.size and (d[:, 0].min() < 0 or d[:, 0].max() > 1):
            raise ValueError("radii must lie in [0, 1]")
        expected = self.base_count * 2 * self.config.sectors
        if d.shape[0] != expected:
            raise ValueError(f"dot count {d.shape[0]} != base_count*2*sectors = {expected}")
        d.flags.writeable = False
        object.__setattr__(self, "dots", d)

    @property
    def radii(self) -> np.ndarray:
        return self.dots[:, 0]

    @property
    def angles_deg(self) -> np.ndarray:
        return self.dots[:, 1]


def _normalize(x: np.ndarray) -> np.ndarray:
    lo = x.min()
    hi = x.max()
    if hi == lo:
        raise ValueError("zero dynamic range: constant signal has no dot pattern")
    return (x - lo) / (hi - lo)


def _base_pairs(signal: Signal, cfg: SdpConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(radius, plus-angle, minus-angle) for the un-replicated mirror pair."""
    x = signal.samples
    if x.size <= cfg.lag:
        raise ValueError(f"signal too short: need more than lag={cfg.lag} samples")
    a = _normalize(x)
    radius = a[: -cfg.lag]
    gain = a[cfg.lag :]
    plus = cfg.theta_deg + gain * cfg.zeta_deg
    minus = cfg.theta_deg - gain * cfg.zeta_deg
    return radius, plus, minus


def sdp_transform(signal: Signal, cfg: SdpConfig = SdpConfig()) -> SdpDotSet:
    """Full symmetrized dot set: mirror pair replicated around every sector.

    Angles are reported canonically in [0, 360).  Dot count is
    (length - lag) * 2 * sectors by construction.
    """
    radius, plus, minus = _base_pairs(signal, cfg)
    n_base = radius.size
    sectors = cfg.sectors
    radii = np.tile(radius, 2 * sectors)
    angles = np.empty(2 * sectors * n_base)
    for k in range(sectors):
        rot = k * cfg.theta_deg
        angles[2 * k * n_base : (2 * k + 1) * n_base] = plus + rot
        angles[(2 * k + 1) * n_base : (2 * k + 2) * n_base] = minus + rot
    angles = np.mod(angles, 360.0)
    return SdpDotSet(np.column_stack([radii, angles]), n_base, cfg)


def sdp_render(
    dots: SdpDotSet,
    width_px: int = 640,
    dot_radius_px: float = 1.5,
    color: str = "#1f77b4",
) -> str:
    """Render a dot set as standalone SVG text.

    Polar coordinates map onto a square canvas with unit radius at 45% of
    the width; output is byte-deterministic for identical inputs.
    """
    if width_px < 64:
        raise ValueError(f"width_px must be >= 64, got {width_px}")
    c = width_px / 2.0
    scale = 0.45 * width_px
    rad = np.deg2rad(dots.angles_deg)
    cx = c + scale * dots.radii * np.cos(rad)
    cy = c - scale * dots.radii * np.sin(rad)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{width_px}" '
        f'viewBox="0 0 {width_px} {width_px}">',
        f"<style>circle{{r:{dot_radius_px:g}px;fill:{color};fill-opacity:0.6}}</style>",
        f'<rect width="{width_px}" height="{width_px}" fill="white"/>',
    ]
    for x, y in zip(cx, cy):
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def sdp_compare(
    hip: Signal, nac: Signal, cfg: SdpConfig = SdpConfig(), grid: int = 32
) -> tuple[SdpDotSet, SdpDotSet, float]:
    """Transform both signals and quantify how different the patterns are.

    Dissimilarity is the JSD (bits) between 2D histograms of the two base
    mirror-pair clouds over a (radius x angle) grid; replication adds no
    information, so only base dots enter the histograms.
    """
    hip_dots = sdp_transform(hip, cfg)
    nac_dots = sdp_transform(nac, cfg)
    r_edges = np.linspace(0.0, 1.0, grid + 1)
    a_edges = np.linspace(0.0, 360.0, grid + 1)

    def base_hist(sig: Signal) -> np.ndarray:
        radius, plus, minus = _base_pairs(sig, cfg)
        r = np.concatenate([radius, radius])
        a = np.mod(np.concatenate([plus, minus]), 360.0)
        h, _, _ = np.histogram2d(r, a, bins=[r_edges, a_edges])
        return h.ravel() / h.sum()

    idx_edges = np.arange(grid * grid + 1, dtype=float)
    p = DiscretePdf(idx_edges, base_hist(hip))
    q = DiscretePdf(idx_edges, base_hist(nac))
    return hip_dots, nac_dots, jsd_discrete(p, q)


def decimate_for_render(signal: Signal, max_points: int = 100_000) -> Signal:
    """Stride-decimate long signals for plotting only (analysis keeps all samples)."""
    n = len(signal)
    if n <= max_points:
        return signal
    stride = math.ceil(n / max_points)
    return Signal(signal.samples[::stride], signal.fs / stride, signal.channel_id)
