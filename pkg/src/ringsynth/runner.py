"""Full pipeline driver: config in, weights + cuts + metrics + report out.

Output files are deterministic: the same resolved config always produces
byte-identical text.  Wall time is therefore reported on the console and on
the in-memory report object, never inside the emitted files.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .analysis import (
    PatternCut,
    PatternMetrics,
    SurfaceGrid,
    cut_rows,
    evaluate_cut,
    evaluate_surface,
    measure_metrics,
    metrics_rows,
    surface_rows,
)
from .config import ResolvedConfig
from .geometry import Weights
from .sampling import SampleSet, build_sample_set, effective_total_count
from .solver import SolverState, synthesize
from .targets import TargetPattern

WEIGHTS_FILE = "weights.csv"
CUT_FILE = "cut.csv"
SURFACE_FILE = "surface.csv"
REPORT_FILE = "report.txt"


@dataclass(frozen=True)
class SynthesisReport:
    """Everything a run produced, ready for serialization."""

    weights: Weights
    state: SolverState
    cut: PatternCut
    metrics: PatternMetrics
    surface: SurfaceGrid | None
    samples: SampleSet
    target: TargetPattern
    config_echo: dict[str, Any]
    warnings: tuple[str, ...]
    wall_time_s: float


def run_synthesis(cfg: ResolvedConfig, warnings: list[str] | None = None) -> SynthesisReport:
    """Execute the two-stage synthesis a resolved config describes."""
    started = time.perf_counter()
    samples = build_sample_set(
        cfg.geometry,
        cfg.target,
        total_count=effective_total_count(cfg.geometry, cfg.oversample),
    )
    weights, state = synthesize(
        cfg.geometry,
        cfg.target,
        max_passes=cfg.max_passes,
        tolerance=cfg.tolerance,
        samples=samples,
    )
    cut = evaluate_cut(cfg.geometry, weights, grid_points=cfg.grid_points)
    metrics = measure_metrics(cut, cfg.target)
    surface = None
    if cfg.surface:
        surface = evaluate_surface(
            cfg.geometry, weights, theta_points=cfg.theta_points, phi_points=cfg.phi_points
        )
    elapsed = time.perf_counter() - started
    run_warnings = tuple(warnings or [])
    if state.converged is False:
        run_warnings += (
            f"estimate had not settled to tolerance {cfg.tolerance:g} "
            f"after {state.passes_completed} passes",
        )
    return SynthesisReport(
        weights=weights,
        state=state,
        cut=cut,
        metrics=metrics,
        surface=surface,
        samples=samples,
        target=cfg.target,
        config_echo=cfg.echo,
        warnings=run_warnings,
        wall_time_s=elapsed,
    )


def weights_rows(report: SynthesisReport) -> list[str]:
    """Comma-separated weight table, one row per ring plus the center."""
    echo_geom = report.config_echo["geometry"]
    radii = echo_geom["radii"]
    counts = echo_geom["counts"]
    w = report.weights
    magnitudes = [abs(w.center)] + [abs(v) for v in w.rings]
    peak = max(magnitudes) if magnitudes else 1.0
    peak = peak if peak > 0.0 else 1.0

    rows = ["ring_index,radius,count,re,im,magnitude,normalized_magnitude"]

    def fmt(index: int, radius: float, count: int, value: complex) -> str:
        mag = abs(value)
        return (
            f"{index},{radius:.9g},{count},{value.real:.12e},{value.imag:.12e},"
            f"{mag:.12e},{mag / peak:.12e}"
        )

    if echo_geom["center_element"]:
        rows.append(fmt(0, 0.0, 1, w.center))
    for n, (radius, count, value) in enumerate(zip(radii, counts, w.rings), start=1):
        rows.append(fmt(n, radius, count, value))
    return rows


def report_rows(report: SynthesisReport) -> list[str]:
    """Flat key = value report, config echo included as one canonical line."""
    state = report.state
    rows = [
        f"batch_samples = {report.samples.batch_count}",
        f"total_samples = {report.samples.total_count}",
        f"passes_completed = {state.passes_completed}",
        f"samples_absorbed = {state.samples_absorbed}",
        f"converged = {str(bool(state.converged)).lower()}",
        "residual_trace = " + ",".join(f"{r:.12e}" for r in state.residual_trace),
    ]
    rows.extend(metrics_rows(report.metrics))
    values = _weight_list(report)
    peak = max((abs(v) for v in values), default=1.0) or 1.0
    rows.append(
        "weights_raw = "
        + ",".join(f"{v.real:.12e}{v.imag:+.12e}j" for v in values)
    )
    rows.append(
        "weights_normalized_magnitude = "
        + ",".join(f"{abs(v) / peak:.12e}" for v in values)
    )
    for warning in report.warnings:
        rows.append(f"warning = {warning}")
    echo = json.dumps(report.config_echo, sort_keys=True, separators=(",", ":"))
    rows.append(f"config = {echo}")
    return rows


def _weight_list(report: SynthesisReport) -> list[complex]:
    values = list(report.weights.rings)
    if report.config_echo["geometry"]["center_element"]:
        values = [report.weights.center] + values
    return values


def write_outputs(report: SynthesisReport, out_dir: str | Path) -> list[Path]:
    """Emit weights.csv, cut.csv, report.txt and optionally surface.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, rows: list[str]) -> None:
        path = out / name
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        written.append(path)

    emit(WEIGHTS_FILE, weights_rows(report))
    emit(CUT_FILE, cut_rows(report.cut, report.target))
    if report.surface is not None:
        emit(SURFACE_FILE, surface_rows(report.surface))
    emit(REPORT_FILE, report_rows(report))
    return written


def summary_lines(report: SynthesisReport) -> list[str]:
    """Console summary for non-quiet runs."""
    m = report.metrics
    lines = [
        f"samples: {report.samples.batch_count} batch + "
        f"{report.samples.total_count - report.samples.batch_count} incremental",
        f"passes: {report.state.passes_completed} "
        f"(converged: {str(bool(report.state.converged)).lower()})",
        f"wall time: {report.wall_time_s:.3f} s",
    ]
    if m.sll_db is not None:
        lines.append(f"sidelobe level: {m.sll_db:.2f} dB")
    if m.passband_ripple_db is not None:
        lines.append(f"passband ripple: {m.passband_ripple_db:.2f} dB")
    for center, depth in m.null_depths_db:
        lines.append(f"null at u={center:g}: {depth:.2f} dB")
    lines.append(f"rms error vs target: {m.rms_error_vs_target_db:.2f} dB")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return lines
