"""
Principal component analysis of one pair's solution set.

Each configuration is a point in R^n. The pipeline is: subtract the empirical
mean, form the population covariance (1/N) * V~^T V~, diagonalize it with a
cyclic Jacobi scheme, and project onto the top-k eigenvectors.

Sign convention: every eigenvector is flipped so its largest-magnitude entry
is positive (first such entry on ties). Inside a degenerate eigenspace the
basis depends on rotation order; only the spectrum and the projected cloud up
to rotation within the eigenspace are stable.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from magic.constants import MagicPair
from magic.errors import InvalidPermutationError, NumericalError, UsageError

logger = logging.getLogger(__name__)

# CONSTANTS
JACOBI_TOLERANCE = 1e-12  # relative to the initial Frobenius norm
MAX_SWEEPS = 100
SYMMETRY_TOLERANCE = 1e-9
SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True, eq=False)
class SolutionMatrix:
    rows: np.ndarray  # N x n integer labels
    pair: MagicPair

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows.shape


class Eigensystem(NamedTuple):
    values: np.ndarray  # descending
    vectors: np.ndarray  # columns are eigenvectors
    sweeps: int


@dataclass(eq=False)
class ProjectionResult:
    pair: MagicPair
    mean: np.ndarray
    eigenvalues: np.ndarray
    components: np.ndarray
    coordinates: np.ndarray  # N x k
    sweeps: int = 0

    @property
    def k(self) -> int:
        return self.coordinates.shape[1]

    @property
    def explained_variance_ratio(self) -> np.ndarray:
        trace = float(self.eigenvalues.sum()) if self.eigenvalues.size else 0.0
        if trace <= 0:
            return np.zeros_like(self.eigenvalues)
        return self.eigenvalues / trace


class SpectrumReport(BaseModel):
    pair: MagicPair
    N: int
    n: int
    k: int
    eigenvalues: List[float]
    explained_variance_ratio: List[float]
    mean: List[float]
    sweeps: int


def _sig(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


# ============================================================================
# MATRIX ASSEMBLY
# ============================================================================

def solution_matrix(solutions: Sequence[Sequence[int]], pair: MagicPair, n: int) -> SolutionMatrix:
    """Stacks configurations as rows; every row must be a permutation of 1..n."""
    rows = np.array(solutions, dtype=np.int64).reshape(len(solutions), n)
    if len(solutions):
        expected = np.arange(1, n + 1)
        bad = np.nonzero(~(np.sort(rows, axis=1) == expected).all(axis=1))[0]
        if bad.size:
            raise InvalidPermutationError(f"row {int(bad[0]) + 1} is not a permutation of 1..{n}")
    return SolutionMatrix(rows=rows, pair=pair)


def center(m: SolutionMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Returns (V - 1 mu^T, mu)."""
    if m.rows.shape[0] == 0:
        raise NumericalError("cannot center an empty solution matrix")
    data = m.rows.astype(np.float64)
    mean = data.mean(axis=0)
    return data - mean, mean


def covariance(centered: np.ndarray) -> np.ndarray:
    """(1/N) V~^T V~, population normalization."""
    n_rows = centered.shape[0]
    if n_rows == 0:
        return np.zeros((centered.shape[1], centered.shape[1]))
    sigma = centered.T @ centered / n_rows
    return (sigma + sigma.T) / 2


def integer_covariance(m: SolutionMatrix) -> np.ndarray:
    """
    Same matrix computed from integer sums: (N * V^T V - s s^T) / N^2 with s the
    column sums. Exact up to the final division, so it does not depend on row
    order and complement classes give bit-identical matrices.
    """
    rows = m.rows
    n_rows = rows.shape[0]
    if n_rows == 0:
        raise NumericalError("cannot form the covariance of an empty solution matrix")
    sums = rows.sum(axis=0)
    scatter = n_rows * (rows.T @ rows) - np.outer(sums, sums)
    return scatter.astype(np.float64) / float(n_rows * n_rows)


# ============================================================================
# EIGENSOLVER
# ============================================================================

def _off_norm(a: np.ndarray) -> float:
    return math.sqrt(max(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)), 0.0))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One Jacobi rotation annihilating a[p, q]."""
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def eigendecompose(matrix: np.ndarray, tolerance: float = JACOBI_TOLERANCE,
                   max_sweeps: int = MAX_SWEEPS) -> Eigensystem:
    """
    Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Converged when the off-diagonal Frobenius norm drops below tolerance times
    the initial Frobenius norm.

    Raises:
        NumericalError: input not square/symmetric, or no convergence within max_sweeps
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericalError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    if a.size and float(np.abs(a - a.T).max()) > SYMMETRY_TOLERANCE * scale:
        raise NumericalError("matrix is not symmetric")
    a = (a + a.T) / 2
    size = a.shape[0]
    v = np.eye(size)
    initial = float(np.linalg.norm(a))
    threshold = tolerance * initial

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps == max_sweeps:
            raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(size - 1):
            for q in range(p + 1, size):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    v = v[:, order]
    for j in range(size):
        lead = int(np.argmax(np.abs(v[:, j])))
        if v[lead, j] < 0:
            v[:, j] = -v[:, j]
    logger.debug(f"[PCA] Jacobi converged in {sweeps} sweeps")
    return Eigensystem(values=values, vectors=v, sweeps=sweeps)


# ============================================================================
# PROJECTION
# ============================================================================

def project(centered: np.ndarray, components: np.ndarray, k: int) -> np.ndarray:
    """Z = V~ W with W the first k columns of components."""
    if not 1 <= k <= components.shape[1]:
        raise UsageError(f"k={k} out of range 1..{components.shape[1]}")
    return centered @ components[:, :k]


def run_pca(m: SolutionMatrix, k: int = 2) -> ProjectionResult:
    n = m.rows.shape[1]
    if not 1 <= k <= n:
        raise UsageError(f"k={k} out of range 1..{n}")
    if m.rows.shape[0] == 0:
        return ProjectionResult(pair=m.pair, mean=np.zeros(0), eigenvalues=np.zeros(0),
                                components=np.zeros((n, 0)), coordinates=np.zeros((0, k)))
    centered, mean = center(m)
    system = eigendecompose(integer_covariance(m))
    coordinates = project(centered, system.vectors, k)
    logger.info(f"[PCA] {m.pair}: N={m.rows.shape[0]}, top eigenvalues "
                f"{', '.join(f'{x:.6g}' for x in system.values[:k])}")
    return ProjectionResult(pair=m.pair, mean=mean, eigenvalues=system.values,
                            components=system.vectors, coordinates=coordinates,
                            sweeps=system.sweeps)


def _column_names(k: int) -> List[str]:
    return ["x", "y", "z"][:k] if k <= 3 else [f"pc{i}" for i in range(1, k + 1)]


def export_projection(result: ProjectionResult, destination: str | Path,
                      n: Optional[int] = None) -> Tuple[Path, Path]:
    """
    Writes the coordinates CSV at destination and a '<stem>.spectrum.json'
    sidecar with eigenvalues and explained-variance ratios.
    """
    csv_path = Path(destination)
    json_path = csv_path.with_name(f"{csv_path.stem}.spectrum.json")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_column_names(result.k))
        for point in result.coordinates:
            writer.writerow([f"{x:.{SIGNIFICANT_DIGITS}g}" for x in point])

    report = SpectrumReport(
        pair=result.pair,
        N=result.coordinates.shape[0],
        n=n if n is not None else result.components.shape[0],
        k=result.k,
        eigenvalues=[_sig(x) for x in result.eigenvalues],
        explained_variance_ratio=[_sig(x) for x in result.explained_variance_ratio],
        mean=[_sig(x) for x in result.mean],
        sweeps=result.sweeps,
    )
    json_path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"[PCA] wrote {csv_path} and {json_path}")
    return csv_path, json_path
