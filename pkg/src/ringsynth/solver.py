"""Linear system assembly, batch least squares, and the recursive refinement.

The pattern model is linear in the weights, so sampling the target at M0
points yields an overdetermined system A I = B.  The batch stage solves the
first M rows by orthogonal factorization and seeds the inverse Gramian
P = (A^T A)^{-1}; the recursive stage then absorbs the remaining rows one at
a time through rank-one gain updates.  Absorbing a row set this way is
algebraically identical to batch least squares over the same rows, which is
the correctness property the test suite leans on.

Targets here are real valued and the basis is real, so the solver works in
real arithmetic; weights stay complex-capable at the boundary for forward
pattern evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, SingularSystemError
from .geometry import RingGeometry, Weights
from .sampling import SampleSet, build_sample_set, effective_total_count
from .specialfn import bessel_j0_grid
from .targets import TargetPattern

_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class DesignMatrix:
    """Dense sample-by-weight coefficient matrix with labeled columns.

    Ring columns hold N_n * J0(k * r_n * u_m); a trailing all-ones column
    represents the center element when the geometry has one.
    """

    entries: NDArray[np.float64]
    column_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2:
            raise DomainError(f"design matrix must be 2-D, got shape {entries.shape}")
        if entries.shape[1] != len(self.column_labels):
            raise DomainError(
                f"{entries.shape[1]} columns but {len(self.column_labels)} labels"
            )

    @property
    def row_count(self) -> int:
        return int(self.entries.shape[0])

    @property
    def column_count(self) -> int:
        return int(self.entries.shape[1])


@dataclass(frozen=True)
class SolverState:
    """Estimate, inverse Gramian, and bookkeeping for the recursive stage."""

    estimate: Weights
    inv_gramian: NDArray[np.float64]
    samples_absorbed: int
    passes_completed: int
    residual_trace: tuple[float, ...]
    converged: bool | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "inv_gramian", np.asarray(self.inv_gramian, dtype=float))


def _column_labels(geom: RingGeometry) -> tuple[str, ...]:
    labels = tuple(f"ring {n}" for n in range(1, geom.n_rings + 1))
    if geom.has_center_element:
        labels += ("center",)
    return labels


def build_design_matrix(geom: RingGeometry, abscissas: Sequence[float]) -> DesignMatrix:
    """Coefficient matrix for the given sample directions."""
    if len(abscissas) == 0:
        raise DomainError("design matrix needs at least one sample abscissa")
    u = np.asarray(abscissas, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("sample abscissas must be finite")
    counts = np.asarray(geom.elements_per_ring, dtype=float)
    radii = np.asarray(geom.radii, dtype=float)
    ring_block = counts[None, :] * bessel_j0_grid(geom.wavenumber * np.outer(u, radii))
    if geom.has_center_element:
        entries = np.hstack([ring_block, np.ones((len(u), 1))])
    else:
        entries = ring_block
    return DesignMatrix(entries=entries, column_labels=_column_labels(geom))


def _weights_from_vector(x: NDArray[np.float64], labels: tuple[str, ...]) -> Weights:
    has_center = labels and labels[-1] == "center"
    if has_center:
        return Weights(center=complex(x[-1]), rings=tuple(complex(v) for v in x[:-1]))
    return Weights(center=0j, rings=tuple(complex(v) for v in x))


def _vector_from_weights(w: Weights, n_columns: int) -> NDArray[np.float64]:
    if n_columns == len(w.rings) + 1:
        parts = list(w.rings) + [w.center]
    elif n_columns == len(w.rings):
        parts = list(w.rings)
    else:
        raise DomainError(
            f"row of length {n_columns} does not fit weights with {len(w.rings)} rings"
        )
    return np.array([float(p.real) for p in parts])


def solve_batch(
    matrix: DesignMatrix, rhs: Sequence[float]
) -> tuple[Weights, NDArray[np.float64]]:
    """Least-squares weights and inverse Gramian for a sample block.

    Solves via QR, and forms P = (A^T A)^{-1} from the inverse triangular
    factor rather than the squared normal matrix.  A condition estimate
    above 1e12 raises :class:`SingularSystemError` naming the offending
    column.
    """
    a = matrix.entries
    b = np.asarray(rhs, dtype=float)
    if a.shape[0] < a.shape[1]:
        raise DomainError(
            f"system with {a.shape[0]} rows and {a.shape[1]} columns is underdetermined"
        )
    if b.shape != (a.shape[0],):
        raise DomainError(f"rhs length {b.shape} does not match {a.shape[0]} rows")
    if not np.all(np.isfinite(b)):
        raise DomainError("rhs must be finite")

    q, r = np.linalg.qr(a)
    diag = np.abs(np.diag(r))
    worst = int(np.argmin(diag))
    if diag[worst] == 0.0 or diag.max() / diag[worst] > _CONDITION_LIMIT:
        label = matrix.column_labels[worst]
        raise SingularSystemError(
            f"design matrix is numerically rank deficient at column {worst} ({label})",
            column_index=worst,
            column_label=label,
        )
    x = np.linalg.solve(r, q.T @ b)
    r_inv = np.linalg.solve(r, np.eye(r.shape[0]))
    p = r_inv @ r_inv.T
    p = 0.5 * (p + p.T)
    return _weights_from_vector(x, matrix.column_labels), p


def rls_absorb(state: SolverState, row: Sequence[float], rhs_value: float) -> SolverState:
    """Absorb one sample row into the estimate via the rank-one gain update.

    gain K = P a / (a^T P a + 1); the estimate moves by K times the
    innovation (rhs minus prediction) and P contracts by K a^T P, with an
    explicit re-symmetrization to stop round-off drift.
    """
    a = np.asarray(row, dtype=float)
    rhs_value = float(rhs_value)
    if a.ndim != 1:
        raise DomainError(f"row must be 1-D, got shape {a.shape}")
    if not (np.all(np.isfinite(a)) and math.isfinite(rhs_value)):
        raise DomainError("row and rhs value must be finite")
    p = state.inv_gramian
    if a.shape[0] != p.shape[0]:
        raise DomainError(f"row length {a.shape[0]} does not match state size {p.shape[0]}")

    x = _vector_from_weights(state.estimate, a.shape[0])
    pa = p @ a
    gain = pa / (a @ pa + 1.0)
    innovation = rhs_value - a @ x
    x_new = x + gain * innovation
    p_new = p - np.outer(gain, pa)
    p_new = 0.5 * (p_new + p_new.T)

    has_center = a.shape[0] == len(state.estimate.rings) + 1
    if has_center:
        weights = Weights(center=complex(x_new[-1]), rings=tuple(complex(v) for v in x_new[:-1]))
    else:
        weights = Weights(center=0j, rings=tuple(complex(v) for v in x_new))
    return replace(
        state,
        estimate=weights,
        inv_gramian=p_new,
        samples_absorbed=state.samples_absorbed + 1,
    )


def _residual_norm(
    matrix: DesignMatrix, rhs: NDArray[np.float64], w: Weights
) -> float:
    x = _vector_from_weights(w, matrix.column_count)
    return float(np.linalg.norm(matrix.entries @ x - rhs))


def synthesize(
    geom: RingGeometry,
    target: TargetPattern,
    max_passes: int = 3,
    tolerance: float = 1e-6,
    oversample: float = 1.0,
    samples: SampleSet | None = None,
) -> tuple[Weights, SolverState]:
    """Run the two-stage synthesis pipeline for a geometry and target.

    The batch stage solves the batch half of the sample set and seeds the
    recursive state.  Each pass then replays the incremental samples through
    :func:`rls_absorb` from that seed; passes stop early once the estimate
    change across a pass drops to ``tolerance``.  In exact arithmetic one
    pass already reproduces the full least-squares solution, so later passes
    exist to confirm the state is numerically settled.  If the tolerance is
    never met the returned state is flagged unconverged rather than raising.
    """
    if max_passes < 0:
        raise DomainError(f"max_passes must be >= 0, got {max_passes}")
    if not (math.isfinite(tolerance) and tolerance >= 0.0):
        raise DomainError(f"tolerance must be >= 0, got {tolerance!r}")
    n_columns = geom.column_count
    if samples is None:
        samples = build_sample_set(
            geom, target, total_count=effective_total_count(geom, oversample)
        )
    elif samples.batch_count <= n_columns:
        # A square (or smaller) batch system has no residual to average out;
        # grow the sample set until the batch stage is strictly overdetermined.
        samples = build_sample_set(geom, target, total_count=2 * (n_columns + 2))

    batch_matrix = build_design_matrix(geom, samples.batch_abscissas)
    batch_weights, p_seed = solve_batch(batch_matrix, samples.batch_values)
    x_seed = _vector_from_weights(batch_weights, n_columns)

    full_matrix = build_design_matrix(geom, samples.abscissas)
    full_rhs = np.asarray(samples.values, dtype=float)
    residuals = [_residual_norm(full_matrix, full_rhs, batch_weights)]

    incremental_matrix = (
        build_design_matrix(geom, samples.incremental_abscissas)
        if samples.incremental_abscissas
        else None
    )

    state = SolverState(
        estimate=batch_weights,
        inv_gramian=p_seed,
        samples_absorbed=samples.batch_count,
        passes_completed=0,
        residual_trace=tuple(residuals),
        converged=True if max_passes == 0 else None,
    )
    if max_passes == 0 or incremental_matrix is None:
        return state.estimate, replace(state, converged=True)

    converged = False
    absorbed_total = samples.batch_count
    x_prev = x_seed
    final = state
    for sweep in range(1, max_passes + 1):
        working = SolverState(
            estimate=batch_weights,
            inv_gramian=p_seed,
            samples_absorbed=absorbed_total,
            passes_completed=sweep - 1,
            residual_trace=tuple(residuals),
        )
        for row, value in zip(incremental_matrix.entries, samples.incremental_values):
            working = rls_absorb(working, row, value)
        absorbed_total = working.samples_absorbed
        x_now = _vector_from_weights(working.estimate, n_columns)
        residuals.append(_residual_norm(full_matrix, full_rhs, working.estimate))
        change = float(np.linalg.norm(x_now - x_prev))
        scale = float(np.linalg.norm(x_prev))
        relative = change / scale if scale > 0.0 else change
        final = replace(
            working,
            passes_completed=sweep,
            residual_trace=tuple(residuals),
        )
        if relative <= tolerance:
            converged = True
            break
        x_prev = x_now

    final = replace(final, converged=converged)
    return final.estimate, final
