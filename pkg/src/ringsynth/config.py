"""Declarative synthesis configs: JSON schema, validation, and resolution.

A config document is a single JSON object with ``geometry`` and ``target``
sections plus optional ``solver`` and ``output`` knobs.  Validation collects
every problem with a field-path message instead of stopping at the first,
and resolution produces the concrete geometry/target objects together with a
canonical echo of the resolved settings for auditable reproduction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from . import targets
from .errors import ConfigError, DomainError, TableFormatError
from .geometry import RingGeometry, elements_for_spacing
from .targets import TargetPattern

_GENERATED_KINDS = ("flat_top", "equi_ripple", "difference")
_DEFAULT_GRID = 2001
_MIN_GRID = 801


@dataclass(frozen=True)
class ResolvedConfig:
    """A validated config with concrete geometry and target objects."""

    geometry: RingGeometry
    target: TargetPattern
    max_passes: int
    tolerance: float
    oversample: float
    grid_points: int
    surface: bool
    theta_points: int
    phi_points: int
    out_dir: str
    echo: dict[str, Any]


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read and JSON-parse a config document."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: not valid JSON: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError([f"{path}: top level must be a JSON object"])
    return raw


def _get_number(
    section: Mapping[str, Any],
    field: str,
    prefix: str,
    problems: list[str],
    default: float | None = None,
    minimum: float | None = None,
    maximum: float | None = None,
    strict_min: bool = False,
) -> float | None:
    if field not in section:
        return default
    value = section[field]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{prefix}.{field}: expected a number, got {value!r}")
        return None
    value = float(value)
    if not math.isfinite(value):
        problems.append(f"{prefix}.{field}: must be finite")
        return None
    if minimum is not None and (value <= minimum if strict_min else value < minimum):
        op = ">" if strict_min else ">="
        problems.append(f"{prefix}.{field}: must be {op} {minimum:g}, got {value:g}")
        return None
    if maximum is not None and value > maximum:
        problems.append(f"{prefix}.{field}: must be <= {maximum:g}, got {value:g}")
        return None
    return value


def _get_int(
    section: Mapping[str, Any],
    field: str,
    prefix: str,
    problems: list[str],
    default: int | None = None,
    minimum: int | None = None,
) -> int | None:
    if field not in section:
        return default
    value = section[field]
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{prefix}.{field}: expected an integer, got {value!r}")
        return None
    if minimum is not None and value < minimum:
        problems.append(f"{prefix}.{field}: must be >= {minimum}, got {value}")
        return None
    return value


def _resolve_geometry(raw: Mapping[str, Any], problems: list[str]) -> RingGeometry | None:
    section = raw.get("geometry")
    if not isinstance(section, dict):
        problems.append("geometry: section missing or not an object")
        return None
    known = {"wavelength", "rings", "radii", "counts", "spacing", "center_element"}
    for key in section:
        if key not in known:
            problems.append(f"geometry.{key}: unknown field")
    wavelength = _get_number(section, "wavelength", "geometry", problems, default=1.0,
                             minimum=0.0, strict_min=True)
    center = section.get("center_element", True)
    if not isinstance(center, bool):
        problems.append(f"geometry.center_element: expected true/false, got {center!r}")
        center = True

    has_rings = "rings" in section
    has_radii = "radii" in section
    if has_rings == has_radii:
        problems.append("geometry: give exactly one of 'rings' or 'radii'")
        return None
    if wavelength is None:
        return None

    spacing = _get_number(section, "spacing", "geometry", problems,
                          default=wavelength / 2.0, minimum=0.0, strict_min=True)
    if spacing is None:
        return None

    if has_rings:
        n_rings = _get_int(section, "rings", "geometry", problems, minimum=1)
        if n_rings is None:
            return None
        radii = tuple(n * wavelength / 2.0 for n in range(1, n_rings + 1))
        counts = tuple(elements_for_spacing(r, spacing) for r in radii)
    else:
        raw_radii = section["radii"]
        if not isinstance(raw_radii, list) or not all(
            isinstance(r, (int, float)) and not isinstance(r, bool) for r in raw_radii
        ):
            problems.append("geometry.radii: expected a list of numbers")
            return None
        radii = tuple(float(r) for r in raw_radii)
        if "counts" in section:
            raw_counts = section["counts"]
            if (
                not isinstance(raw_counts, list)
                or len(raw_counts) != len(radii)
                or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw_counts)
            ):
                problems.append(
                    "geometry.counts: expected a list of integers matching radii"
                )
                return None
            counts = tuple(int(c) for c in raw_counts)
        else:
            try:
                counts = tuple(elements_for_spacing(r, spacing) for r in radii)
            except DomainError as exc:
                problems.append(f"geometry.radii: {exc}")
                return None

    if len(radii) == 0 and not center:
        problems.append("geometry: needs at least one ring or a center element")
        return None
    try:
        return RingGeometry(
            wavelength=wavelength,
            radii=radii,
            elements_per_ring=counts,
            has_center_element=center,
        )
    except DomainError as exc:
        problems.append(f"geometry: {exc}")
        return None


def _resolve_nulls(
    section: Mapping[str, Any], problems: list[str]
) -> list[dict[str, float]] | None:
    raw_nulls = section.get("nulls")
    if raw_nulls is None:
        return []
    if not isinstance(raw_nulls, list):
        problems.append("target.nulls: expected a list of objects")
        return None
    nulls = []
    for i, entry in enumerate(raw_nulls):
        if not isinstance(entry, dict):
            problems.append(f"target.nulls[{i}]: expected an object")
            return None
        center = _get_number(entry, "center", f"target.nulls[{i}]", problems)
        depth = _get_number(entry, "depth_db", f"target.nulls[{i}]", problems)
        width = _get_number(entry, "width", f"target.nulls[{i}]", problems,
                            minimum=0.0, strict_min=True)
        if center is None or depth is None or width is None:
            problems.append(f"target.nulls[{i}]: needs center, depth_db and width")
            return None
        nulls.append({"center": center, "depth_db": depth, "width": width})
    depths = {n["depth_db"] for n in nulls}
    widths = {n["width"] for n in nulls}
    if len(depths) > 1 or len(widths) > 1:
        problems.append("target.nulls: all notches must share one depth_db and one width")
        return None
    return nulls


def _resolve_target(
    raw: Mapping[str, Any],
    geometry: RingGeometry | None,
    base_dir: Path,
    problems: list[str],
) -> TargetPattern | None:
    section = raw.get("target")
    if not isinstance(section, dict):
        problems.append("target: section missing or not an object")
        return None
    known = {"kind", "passband_edge", "transition_width", "sll_db", "nulls", "path", "points"}
    for key in section:
        if key not in known:
            problems.append(f"target.{key}: unknown field")
    kind = section.get("kind")
    if kind not in _GENERATED_KINDS + ("table",):
        problems.append(
            f"target.kind: expected one of {_GENERATED_KINDS + ('table',)}, got {kind!r}"
        )
        return None

    if kind == "table":
        has_path = "path" in section
        has_points = "points" in section
        if has_path == has_points:
            problems.append("target: a table needs exactly one of 'path' or 'points'")
            return None
        try:
            if has_path:
                path = Path(str(section["path"]))
                if not path.is_absolute():
                    path = base_dir / path
                return targets.load_table(path)
            points = section["points"]
            if not isinstance(points, list):
                problems.append("target.points: expected a list of [u, value] pairs")
                return None
            return targets.from_table([(p[0], p[1]) for p in points])
        except (TableFormatError, DomainError, TypeError, IndexError) as exc:
            problems.append(f"target: {exc}")
            return None

    nulls = _resolve_nulls(section, problems)
    if nulls is None:
        return None

    try:
        if kind == "flat_top":
            edge = _get_number(section, "passband_edge", "target", problems)
            width = _get_number(section, "transition_width", "target", problems, default=0.0)
            if edge is None:
                problems.append("target.passband_edge: required for flat_top")
                return None
            base = targets.flat_top(edge, width if width is not None else 0.0)
        else:
            sll = _get_number(section, "sll_db", "target", problems)
            if sll is None:
                problems.append("target.sll_db: required for this target kind")
                return None
            if geometry is None:
                return None
            if kind == "equi_ripple":
                base = targets.equi_ripple(sll, geometry.n_rings)
            else:
                base = targets.difference(sll, geometry.n_rings)
        if nulls:
            base = targets.with_nulls(
                base,
                [n["center"] for n in nulls],
                nulls[0]["depth_db"],
                nulls[0]["width"],
            )
        return base
    except DomainError as exc:
        problems.append(f"target: {exc}")
        return None


def _target_echo(section: Mapping[str, Any], target: TargetPattern) -> dict[str, Any]:
    if target.kind == targets.TABULATED:
        return {
            "kind": "table",
            "points": [[u, v] for u, v in target.params["points"]],  # type: ignore[index]
        }
    echo: dict[str, Any] = {}
    base_kind = target.params.get("base_kind", target.kind)
    echo["kind"] = base_kind
    if base_kind == "flat_top":
        echo["passband_edge"] = target.params["passband_edge"]
        echo["transition_width"] = target.params["transition_width"]
    else:
        echo["sll_db"] = target.params["sll_db"]
    centers = target.params.get("null_centers")
    if centers:
        echo["nulls"] = [
            {
                "center": c,
                "depth_db": target.params["null_depth_db"],
                "width": target.params["null_width"],
            }
            for c in centers  # type: ignore[union-attr]
        ]
    return echo


def resolve_config(
    raw: Mapping[str, Any], base_dir: str | Path = "."
) -> tuple[ResolvedConfig, list[str]]:
    """Validate a raw config mapping and build the concrete run plan.

    Raises :class:`ConfigError` carrying every field problem found; returns
    the resolved config plus non-fatal feasibility warnings otherwise.
    """
    problems: list[str] = []
    base_dir = Path(base_dir)

    known = {"geometry", "target", "solver", "output"}
    for key in raw:
        if key not in known:
            problems.append(f"{key}: unknown section")

    geometry = _resolve_geometry(raw, problems)
    target = _resolve_target(raw, geometry, base_dir, problems)

    solver_raw = raw.get("solver", {})
    if not isinstance(solver_raw, dict):
        problems.append("solver: section must be an object")
        solver_raw = {}
    max_passes = _get_int(solver_raw, "max_passes", "solver", problems, default=3, minimum=0)
    tolerance = _get_number(solver_raw, "tolerance", "solver", problems,
                            default=1e-6, minimum=0.0)
    oversample = _get_number(solver_raw, "oversample", "solver", problems,
                             default=1.0, minimum=1.0)
    for key in solver_raw:
        if key not in {"max_passes", "tolerance", "oversample"}:
            problems.append(f"solver.{key}: unknown field")

    output_raw = raw.get("output", {})
    if not isinstance(output_raw, dict):
        problems.append("output: section must be an object")
        output_raw = {}
    grid_points = _get_int(output_raw, "grid_points", "output", problems,
                           default=_DEFAULT_GRID, minimum=_MIN_GRID)
    surface = output_raw.get("surface", False)
    if not isinstance(surface, bool):
        problems.append(f"output.surface: expected true/false, got {surface!r}")
        surface = False
    theta_points = _get_int(output_raw, "theta_points", "output", problems,
                            default=181, minimum=2)
    phi_points = _get_int(output_raw, "phi_points", "output", problems,
                          default=73, minimum=2)
    out_dir = output_raw.get("directory", ".")
    if not isinstance(out_dir, str):
        problems.append(f"output.directory: expected a string, got {out_dir!r}")
        out_dir = "."
    for key in output_raw:
        if key not in {"grid_points", "surface", "theta_points", "phi_points", "directory"}:
            problems.append(f"output.{key}: unknown field")

    if problems or geometry is None or target is None:
        raise ConfigError(problems or ["config could not be resolved"])
    assert max_passes is not None and tolerance is not None and oversample is not None
    assert grid_points is not None and theta_points is not None and phi_points is not None

    echo = {
        "geometry": {
            "wavelength": geometry.wavelength,
            "radii": list(geometry.radii),
            "counts": list(geometry.elements_per_ring),
            "center_element": geometry.has_center_element,
        },
        "target": _target_echo(raw.get("target", {}), target),
        "solver": {
            "max_passes": max_passes,
            "tolerance": tolerance,
            "oversample": oversample,
        },
        "output": {
            "grid_points": grid_points,
            "surface": surface,
            "theta_points": theta_points,
            "phi_points": phi_points,
        },
    }

    resolved = ResolvedConfig(
        geometry=geometry,
        target=target,
        max_passes=max_passes,
        tolerance=tolerance,
        oversample=oversample,
        grid_points=grid_points,
        surface=surface,
        theta_points=theta_points,
        phi_points=phi_points,
        out_dir=out_dir,
        echo=echo,
    )
    return resolved, feasibility_warnings(resolved)


def feasibility_warnings(cfg: ResolvedConfig) -> list[str]:
    """Heuristic checks that the target is resolvable by the aperture.

    The smallest pattern feature an aperture of outer radius r_max can steer
    is about wavelength / (2 * r_max) wide in u; targets asking for detail
    finer than that synthesize with large residuals.
    """
    warnings: list[str] = []
    geom = cfg.geometry
    if geom.n_rings == 0:
        return ["geometry has no rings; only a constant pattern is representable"]
    resolution = geom.wavelength / (2.0 * geom.radii[-1])
    params = cfg.target.params

    edge = params.get("passband_edge")
    if edge is not None:
        width = float(params.get("transition_width", 0.0))  # type: ignore[arg-type]
        if float(edge) < resolution:  # type: ignore[arg-type]
            warnings.append(
                f"passband half-width {float(edge):g} is below the aperture "
                f"resolution {resolution:g}; expect a poor fit"
            )
        stop_margin = 1.0 - (float(edge) + width)  # type: ignore[arg-type]
        if stop_margin < resolution:
            warnings.append(
                f"stopband span {stop_margin:g} beyond the transition is below the "
                f"aperture resolution {resolution:g}; expect a poor fit"
            )
    centers = params.get("null_centers")
    if centers:
        null_width = float(params.get("null_width", 0.0))  # type: ignore[arg-type]
        if null_width < resolution / 2.0:
            warnings.append(
                f"null half-width {null_width:g} is below half the aperture "
                f"resolution {resolution:g}; nulls may not reach depth"
            )
        for c in centers:  # type: ignore[union-attr]
            if abs(float(c)) + null_width > 1.0:
                warnings.append(f"null at u={float(c):g} extends beyond visible space")
    return warnings
