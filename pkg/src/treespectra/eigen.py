"""Dense symmetric eigensolving and spectrum multiset utilities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .levelrep import MAX_DENSE_DIM, WeightedOperator

#: Default absolute threshold below which nearby eigenvalues merge into one
#: entry; the exact spectra here contain high-multiplicity points that
#: floating solvers split by a few ulps.
DEFAULT_CLUSTER = 1e-7


@dataclass(frozen=True)
class SpectrumApprox:
    """Distinct eigenvalues in ascending order with multiplicities."""

    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    tol: float

    def __post_init__(self) -> None:
        if len(self.eigenvalues) != len(self.multiplicities):
            raise ValueError("eigenvalues and multiplicities must align")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if any(b <= a for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise ValueError("eigenvalues must be strictly ascending")

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    def flatten(self) -> list[float]:
        """Eigenvalues repeated with multiplicity, ascending."""
        out: list[float] = []
        for value, mult in zip(self.eigenvalues, self.multiplicities):
            out.extend([value] * mult)
        return out

    @property
    def max_eigenvalue(self) -> float:
        return self.eigenvalues[-1]


def cluster_eigenvalues(values: Sequence[float], cluster: float) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Chain-merge ascending values whose consecutive gaps are <= cluster."""
    distinct: list[float] = []
    mults: list[int] = []
    run_sum = 0.0
    run_len = 0
    prev = None
    for v in values:
        if prev is not None and v - prev > cluster:
            distinct.append(run_sum / run_len)
            mults.append(run_len)
            run_sum, run_len = 0.0, 0
        run_sum += v
        run_len += 1
        prev = v
    if run_len:
        distinct.append(run_sum / run_len)
        mults.append(run_len)
    return tuple(distinct), tuple(mults)


def symmetric_eigenvalues(
    op: WeightedOperator,
    tol: float = 1e-10,
    cluster: float = DEFAULT_CLUSTER,
) -> SpectrumApprox:
    """All eigenvalues of a symmetric operator, merged into multiplicity classes.

    tol is the requested accuracy relative to the operator norm; the dense
    solvers deliver a few units of dim * eps, and tol below that is rejected.
    """
    if not op.symmetric:
        raise ValueError("operator is not symmetric")
    if op.dimension > MAX_DENSE_DIM:
        raise ValueError(f"dimension {op.dimension} exceeds the dense bound {MAX_DENSE_DIM}")
    achievable = 4 * max(op.dimension, 1) * np.finfo(float).eps
    if tol < achievable:
        raise ValueError(f"tolerance {tol} below achievable accuracy {achievable:.2e}")
    values = np.sort(_kernels.eigvalsh(op.to_dense()))
    distinct, mults = cluster_eigenvalues(values.tolist(), cluster)
    return SpectrumApprox(distinct, mults, tol)


def multiset_contained(a: SpectrumApprox, b: SpectrumApprox, tol: float) -> bool:
    """Greedy matching of every eigenvalue of a (with multiplicity) into b."""
    xs = a.flatten()
    ys = b.flatten()
    j = 0
    for x in xs:
        while j < len(ys) and ys[j] < x - tol:
            j += 1
        if j == len(ys) or abs(ys[j] - x) > tol:
            return False
        j += 1
    return True


def hausdorff_distance(a: Iterable[float], b: Iterable[float]) -> float:
    """Hausdorff distance between two nonempty finite sets of reals."""
    xs = np.sort(np.asarray(list(a), dtype=float))
    ys = np.sort(np.asarray(list(b), dtype=float))
    if xs.size == 0 or ys.size == 0:
        raise ValueError("hausdorff_distance needs nonempty sets")

    def directed(p: np.ndarray, q: np.ndarray) -> float:
        pos = np.searchsorted(q, p)
        left = np.where(pos > 0, np.abs(p - q[np.maximum(pos - 1, 0)]), np.inf)
        right = np.where(pos < q.size, np.abs(q[np.minimum(pos, q.size - 1)] - p), np.inf)
        return float(np.max(np.minimum(left, right)))

    return max(directed(xs, ys), directed(ys, xs))
