"""Sample placement, minimum sample counts, and pattern reconstruction.

The pattern is even in u, so samples live on [0, 1] only: mirroring them
would duplicate equations without adding information.  Abscissas sit at
midpoints u_m = (m - 1/2) / M0, which avoids the degenerate u = 0 row and
interleaves the recursive stage's samples halfway between the batch ones.
The batch portion is the 1st, 3rd, 5th, ... midpoint (even indices, counted
from zero); the remaining interleaved points feed the recursive refinement.

Angles map as psi = pi * u, so the sampling kernel's 2*pi period spans the
full u in [-1, 1] range and uniform u-midpoints become uniform kernel nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError
from .geometry import RingGeometry
from .specialfn import sampling_kernel
from .targets import TargetPattern


@dataclass(frozen=True)
class SampleSet:
    """Ordered target samples split into batch and incremental portions."""

    abscissas: tuple[float, ...]
    values: tuple[float, ...]
    batch_count: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "abscissas", tuple(float(u) for u in self.abscissas))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.abscissas) != len(self.values):
            raise DomainError(
                f"{len(self.abscissas)} abscissas but {len(self.values)} values"
            )
        if not 0 <= self.batch_count <= len(self.abscissas):
            raise DomainError(
                f"batch count {self.batch_count} outside 0..{len(self.abscissas)}"
            )
        prev = -math.inf
        for u in self.abscissas:
            if not math.isfinite(u) or u <= prev:
                raise DomainError("abscissas must be finite and strictly increasing")
            prev = u
        for v in self.values:
            if not math.isfinite(v):
                raise DomainError("sample values must be finite")

    @property
    def total_count(self) -> int:
        return len(self.abscissas)

    @property
    def batch_abscissas(self) -> tuple[float, ...]:
        return self.abscissas[0::2]

    @property
    def batch_values(self) -> tuple[float, ...]:
        return self.values[0::2]

    @property
    def incremental_abscissas(self) -> tuple[float, ...]:
        return self.abscissas[1::2]

    @property
    def incremental_values(self) -> tuple[float, ...]:
        return self.values[1::2]


def min_batch_samples(geom: RingGeometry) -> int:
    """Smallest first-stage sample count for a geometry.

    ceil(4 * (N_r - 1) * max adjacent ring spacing / wavelength), floored at
    N_r + 1 so the linear system cannot be underdetermined.  Single-ring
    layouts have no ring spacing and use the floor alone.
    """
    floor = geom.n_rings + 1
    if geom.n_rings < 2:
        return floor
    spacing = max(b - a for a, b in zip(geom.radii, geom.radii[1:]))
    raw = math.ceil(4.0 * (geom.n_rings - 1) * spacing / geom.wavelength)
    return max(raw, floor)


def min_total_samples(geom: RingGeometry) -> int:
    """Total sample count for both stages: twice the batch minimum."""
    return 2 * min_batch_samples(geom)


def midpoint_abscissas(count: int) -> tuple[float, ...]:
    """Midpoint grid u_m = (m - 1/2) / count for m = 1..count."""
    if count < 1:
        raise DomainError(f"need at least one sample, got {count}")
    return tuple((m + 0.5) / count for m in range(count))


def effective_total_count(geom: RingGeometry, oversample: float = 1.0) -> int:
    """Total sample count the solver will actually use.

    The doubled minimum scaled by ``oversample`` (rounded up to even), except
    when that would leave the batch stage square or underdetermined, in which
    case the batch is grown two rows past the weight count.
    """
    if not (math.isfinite(oversample) and oversample >= 1.0):
        raise DomainError(f"oversample factor must be >= 1, got {oversample!r}")
    total = math.ceil(min_total_samples(geom) * oversample)
    total += total % 2
    if total // 2 <= geom.column_count:
        total = 2 * (geom.column_count + 2)
    return total


def build_sample_set(
    geom: RingGeometry,
    target: TargetPattern,
    oversample: float = 1.0,
    total_count: int | None = None,
) -> SampleSet:
    """Sample a target on the midpoint grid sized for the geometry.

    ``oversample`` scales the minimum total count (rounded up to an even
    number so the two stages stay equal); ``total_count`` overrides the
    sizing entirely and must be even.
    """
    if total_count is None:
        if not (math.isfinite(oversample) and oversample >= 1.0):
            raise DomainError(f"oversample factor must be >= 1, got {oversample!r}")
        total = math.ceil(min_total_samples(geom) * oversample)
        total += total % 2
    else:
        total = int(total_count)
        if total < 2 or total % 2:
            raise DomainError(f"total_count must be even and >= 2, got {total_count}")
    abscissas = midpoint_abscissas(total)
    values = tuple(target.sample_value(u) for u in abscissas)
    return SampleSet(abscissas=abscissas, values=values, batch_count=total - total // 2)


def _interpolation_kernel(psi: float, points: int) -> float:
    """Cardinal kernel for an even number of nodes per period.

    For an even node count the plain periodic kernel is antiperiodic rather
    than periodic; the mean of the two adjacent odd-order kernels restores
    periodicity, keeps the cardinal property on the node grid, and
    reproduces constants exactly.
    """
    if points % 2:
        return sampling_kernel(psi, points)
    hi = (points + 1) * sampling_kernel(psi, points + 1)
    lo = (points - 1) * sampling_kernel(psi, points - 1)
    return (hi + lo) / (2.0 * points)


def reconstruct(samples: SampleSet, u: float) -> float:
    """Interpolate the sampled pattern at u from its kernel expansion.

    The stored samples describe an even pattern on half the period, so each
    sample contributes together with its mirror image at -u_m; the node grid
    underlying the kernel therefore has twice the stored count.
    """
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"reconstruction point must be finite, got {u!r}")
    points = 2 * samples.total_count
    total = 0.0
    for u_m, value in zip(samples.abscissas, samples.values):
        direct = _interpolation_kernel(math.pi * (u - u_m), points)
        mirror = _interpolation_kernel(math.pi * (u + u_m), points)
        total += value * (direct + mirror)
    return total


def sample_rows(samples: SampleSet) -> list[str]:
    """Comma-separated (u, value, stage) debug rows, header included."""
    rows = ["u,value,stage"]
    for index, (u, v) in enumerate(zip(samples.abscissas, samples.values)):
        stage = "batch" if index % 2 == 0 else "incremental"
        rows.append(f"{u:.12g},{v:.12g},{stage}")
    return rows


def export_samples(samples: SampleSet, path: str | Path) -> None:
    """Write the debug CSV rows to a file."""
    Path(path).write_text("\n".join(sample_rows(samples)) + "\n", encoding="utf-8")
