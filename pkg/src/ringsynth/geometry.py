"""Concentric ring array geometry and forward pattern evaluation.

A ring array is described by its wavelength, the ring radii, the number of
elements on each ring, and an optional center element.  All elements of a
ring share one excitation weight, so the far-field interference pattern in
the direction cosine u = sin(theta) reduces to

    F(u) = I0 + sum_n I_n * N_n * J0(k * r_n * u),      k = 2*pi / wavelength

which is azimuth independent and even in u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specialfn import bessel_j0


@dataclass(frozen=True)
class RingGeometry:
    """Immutable description of a concentric ring array.

    ``radii`` must be strictly increasing and positive; ``elements_per_ring``
    pairs with it one to one.  The wavenumber is always derived from the
    wavelength so the two can never disagree.
    """

    wavelength: float
    radii: tuple[float, ...]
    elements_per_ring: tuple[int, ...]
    has_center_element: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(
            self, "elements_per_ring", tuple(int(n) for n in self.elements_per_ring)
        )
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise DomainError(f"wavelength must be positive, got {self.wavelength!r}")
        if len(self.radii) != len(self.elements_per_ring):
            raise DomainError(
                f"{len(self.radii)} radii but {len(self.elements_per_ring)} element counts"
            )
        prev = 0.0
        for r in self.radii:
            if not (math.isfinite(r) and r > prev):
                raise DomainError(f"radii must be strictly increasing and positive, got {self.radii}")
            prev = r
        for n in self.elements_per_ring:
            if n < 1:
                raise DomainError(f"each ring needs at least one element, got {n}")

    @property
    def n_rings(self) -> int:
        return len(self.radii)

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def column_count(self) -> int:
        """Number of independent weights (rings plus optional center)."""
        return self.n_rings + (1 if self.has_center_element else 0)


@dataclass(frozen=True)
class Weights:
    """Per-ring excitation coefficients plus the center-element coefficient."""

    center: complex
    rings: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "rings", tuple(complex(w) for w in self.rings))

    def matches(self, geom: RingGeometry) -> bool:
        return len(self.rings) == geom.n_rings


def elements_for_spacing(radius: float, target_spacing: float) -> int:
    """Element count that realizes roughly the requested arc spacing.

    Rounds the circumference over the spacing to the nearest integer,
    never returning less than one element.
    """
    if not (math.isfinite(radius) and radius > 0):
        raise DomainError(f"radius must be positive, got {radius!r}")
    if not (math.isfinite(target_spacing) and target_spacing > 0):
        raise DomainError(f"target spacing must be positive, got {target_spacing!r}")
    count = int(math.floor(2.0 * math.pi * radius / target_spacing + 0.5))
    return max(count, 1)


def chord_spacing(radius: float, count: int) -> float:
    """Realized chord distance 2*r*sin(pi/N) between adjacent ring elements."""
    if not (math.isfinite(radius) and radius > 0):
        raise DomainError(f"radius must be positive, got {radius!r}")
    if count < 2:
        raise DomainError(f"chord spacing needs at least 2 elements, got {count}")
    return 2.0 * radius * math.sin(math.pi / count)


def array_factor(geom: RingGeometry, w: Weights, u: float) -> complex:
    """Far-field array factor at direction cosine u in [-1, 1]."""
    if not w.matches(geom):
        raise DomainError(
            f"weights carry {len(w.rings)} rings but geometry has {geom.n_rings}"
        )
    u = float(u)
    if not math.isfinite(u) or abs(u) > 1.0:
        raise DomainError(f"u must lie in [-1, 1], got {u!r}")
    k = geom.wavenumber
    total = w.center if geom.has_center_element else 0j
    for radius, count, weight in zip(geom.radii, geom.elements_per_ring, w.rings):
        total += weight * count * bessel_j0(k * radius * u)
    return total


def uniform_half_wavelength_geometry(n_rings: int, wavelength: float = 1.0) -> RingGeometry:
    """Ring layout with radii n*lambda/2 and half-wavelength arc spacing.

    The element counts follow the spacing rule, which for these radii is
    round(2*pi*n), and a center element is included.
    """
    if n_rings < 1:
        raise DomainError(f"need at least one ring, got {n_rings}")
    if not (math.isfinite(wavelength) and wavelength > 0):
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    radii = tuple(n * wavelength / 2.0 for n in range(1, n_rings + 1))
    spacing = wavelength / 2.0
    counts = tuple(elements_for_spacing(r, spacing) for r in radii)
    return RingGeometry(
        wavelength=wavelength,
        radii=radii,
        elements_per_ring=counts,
        has_center_element=True,
    )
