"""Closed-form limit spectra and backward-orbit approximations of real Julia sets.

For real lam >= 2 the Julia set of z -> z^2 - lam is a subset of the reals
(an interval for lam = 2, a Cantor set for lam > 2).  Backward iteration
seeded at the repelling fixed point beta = (1 + sqrt(1 + 4 lam)) / 2
approximates the Julia set itself (backward orbits of a Julia point are
dense in it, and the depth-k point sets are nested increasing).  Backward
iteration seeded at 0 enumerates the terminating nested radicals
sqrt(lam +- sqrt(lam +- ... +- sqrt(lam))); these escape under forward
iteration, so they are isolated points of the closure accumulating on the
Julia set, and they carry the finite-level eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

#: Absolute threshold for merging duplicate backward-orbit points.
DUPLICATE_TOL = 1e-13


def fixed_point(lam: float) -> float:
    """The repelling fixed point beta of z -> z^2 - lam, for lam >= -1/4."""
    return (1.0 + math.sqrt(1.0 + 4.0 * lam)) / 2.0


@dataclass(frozen=True)
class JuliaApprox:
    """Backward-orbit approximation of the real Julia set of z^2 - lam.

    points is the depth-k preimage set of the seed, or the union over all
    depths up to k when the approximation is cumulative.
    """

    lam: float
    depth: int
    points: tuple[float, ...]
    seed: float
    cumulative: bool = False

    @property
    def max_gap(self) -> float:
        """Largest gap between consecutive points (0 for a single point)."""
        if len(self.points) < 2:
            return 0.0
        arr = np.asarray(self.points)
        return float(np.max(np.diff(arr)))


def _dedupe_sorted(points: np.ndarray) -> np.ndarray:
    if points.size == 0:
        return points
    keep = np.empty(points.size, dtype=bool)
    keep[0] = True
    np.greater(np.diff(points), DUPLICATE_TOL, out=keep[1:])
    return points[keep]


def julia_backward(
    lam: float, depth: int, seed: float | None = None, cumulative: bool = False
) -> JuliaApprox:
    """Backward iteration: depth-k set is { +-sqrt(lam + q) : q in depth-(k-1) set }.

    Requires lam >= 2 so the construction stays inside the reals.  The
    default seed is the repelling fixed point beta; with cumulative=True the
    points of all depths up to the requested one are merged (needed for
    seeds, such as 0, whose depth sets are not nested).
    """
    if lam < 2:
        raise ValueError(f"lam = {lam} < 2: the real backward orbit does not capture the Julia set")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    beta = fixed_point(lam)
    if seed is None:
        seed = beta
    if abs(seed) > beta or lam + seed < 0:
        raise ValueError(f"seed {seed} outside the invariant interval [-beta, beta]")
    points = np.array([float(seed)])
    accumulated = points
    for _ in range(depth):
        shifted = lam + points
        shifted = shifted[shifted >= 0.0]
        roots = np.sqrt(shifted)
        points = _dedupe_sorted(np.sort(np.concatenate([-roots, roots])))
        if cumulative:
            accumulated = _dedupe_sorted(np.sort(np.concatenate([accumulated, points])))
    final = accumulated if cumulative else points
    return JuliaApprox(lam, depth, tuple(final.tolist()), float(seed), cumulative)


def depth_for_gap(lam: float, target_gap: float, max_depth: int = 22) -> int:
    """Smallest depth whose measured maximal gap is <= target_gap (capped)."""
    for depth in range(max_depth + 1):
        if julia_backward(lam, depth).max_gap <= target_gap:
            return depth
    return max_depth


@dataclass(frozen=True)
class JuliaTransform:
    """x -> offset + scale * x, or x -> offset + scale * sqrt(rad_offset + rad_scale * x).

    Radical transforms drop points with a negative radicand.
    """

    offset: float
    scale: float
    rad_offset: float | None = None
    rad_scale: float | None = None

    def apply(self, points: np.ndarray) -> np.ndarray:
        if self.rad_offset is None:
            return self.offset + self.scale * points
        radicand = self.rad_offset + self.rad_scale * points
        return self.offset + self.scale * np.sqrt(radicand[radicand >= 0.0])


@dataclass(frozen=True)
class JuliaPart:
    """One backward-orbit approximation together with the maps applied to it."""

    approx: JuliaApprox
    transforms: tuple[JuliaTransform, ...]

    def realized(self) -> np.ndarray:
        base = np.asarray(self.approx.points)
        if not self.transforms:
            return base
        return np.concatenate([t.apply(base) for t in self.transforms])


@dataclass(frozen=True)
class SpectralSet:
    """A predicted spectrum: intervals, isolated points, and Julia-set images."""

    intervals: tuple[tuple[float, float], ...]
    points: tuple[float, ...]
    julia_parts: tuple[JuliaPart, ...] = ()

    def __post_init__(self) -> None:
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if any(b[0] <= a[1] for a, b in zip(self.intervals, self.intervals[1:])):
            raise ValueError("intervals must be disjoint and ascending")

    @cached_property
    def realized_points(self) -> np.ndarray:
        """Isolated points plus all transformed Julia approximation points, sorted."""
        parts = [np.asarray(self.points, dtype=float)]
        parts.extend(part.realized() for part in self.julia_parts)
        return np.sort(np.concatenate(parts))

    def is_empty(self) -> bool:
        return not self.intervals and self.realized_points.size == 0


def predicted_spectrum(name: str, depth: int = 14) -> SpectralSet:
    """The closed-form limit spectrum of the averaged operator for a built-in group.

    grigorchuk:        [-1/2, 0] u [1/2, 1]
    grigorchuk-tilde:  [0, 1]
    gamma:             {1, 1/4} u (1 +- J(6)) / 4
    gamma-bar(-barbar): {1, -1/2, 1/4} u (1 +- sqrt(9/2 +- 2 J(45/16))) / 4

    J(lam) is realized as the closure of the nested radicals
    sqrt(lam +- sqrt(lam +- ...)): the fixed-point-seeded backward orbit
    (dense in the Julia set proper) together, for gamma, with the
    0-seeded terminating radicals, which are isolated points of the
    closure and carry the finite-level eigenvalues.
    """
    if name == "grigorchuk":
        return SpectralSet(((-0.5, 0.0), (0.5, 1.0)), ())
    if name == "grigorchuk-tilde":
        return SpectralSet(((0.0, 1.0),), ())
    if name == "gamma":
        transforms = (JuliaTransform(0.25, 0.25), JuliaTransform(0.25, -0.25))
        parts = (
            JuliaPart(julia_backward(6.0, depth), transforms),
            JuliaPart(julia_backward(6.0, depth, seed=0.0, cumulative=True), transforms),
        )
        return SpectralSet((), (0.25, 1.0), parts)
    if name in ("gamma-bar", "gamma-barbar"):
        transforms = tuple(
            JuliaTransform(0.25, 0.25 * outer, 4.5, 2.0 * inner)
            for outer in (1.0, -1.0)
            for inner in (1.0, -1.0)
        )
        part = JuliaPart(julia_backward(45.0 / 16.0, depth), transforms)
        return SpectralSet((), (-0.5, 0.25, 1.0), (part,))
    raise ValueError(f"no predicted spectrum for group {name!r}")


def set_distance(sset: SpectralSet, x: float) -> float:
    """Distance from x to the nearest interval, point, or transformed Julia point."""
    if sset.is_empty():
        raise ValueError("spectral set is empty at this approximation depth")
    best = math.inf
    for lo, hi in sset.intervals:
        if lo <= x <= hi:
            return 0.0
        best = min(best, abs(x - lo), abs(x - hi))
    pts = sset.realized_points
    if pts.size:
        pos = int(np.searchsorted(pts, x))
        if pos > 0:
            best = min(best, abs(x - pts[pos - 1]))
        if pos < pts.size:
            best = min(best, abs(pts[pos] - x))
    return float(best)


def _sup_distance_to_points(lo: float, hi: float, values: np.ndarray) -> float:
    """sup over x in [lo, hi] of the distance from x to a finite value set."""
    candidates = [lo, hi]
    inside = values[(values > lo) & (values < hi)]
    mids = (inside[:-1] + inside[1:]) / 2.0
    candidates.extend(mids.tolist())
    pos = np.searchsorted(values, candidates)
    best = 0.0
    for x, p in zip(candidates, pos):
        dist = math.inf
        if p > 0:
            dist = min(dist, abs(x - values[p - 1]))
        if p < values.size:
            dist = min(dist, abs(values[p] - x))
        best = max(best, dist)
    return best


def hausdorff_to_set(sset: SpectralSet, values: np.ndarray) -> float:
    """Two-sided Hausdorff distance between a finite value set and a spectral set.

    The direction from the set toward the values takes the supremum over each
    interval exactly (attained at endpoints or midpoints between values).
    """
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        raise ValueError("empty value set")
    forward = max(set_distance(sset, float(x)) for x in values)
    backward = 0.0
    pts = sset.realized_points
    if pts.size:
        pos = np.searchsorted(values, pts)
        for x, p in zip(pts.tolist(), pos.tolist()):
            dist = math.inf
            if p > 0:
                dist = min(dist, abs(x - values[p - 1]))
            if p < values.size:
                dist = min(dist, abs(values[p] - x))
            backward = max(backward, dist)
    for lo, hi in sset.intervals:
        backward = max(backward, _sup_distance_to_points(lo, hi, values))
    return max(forward, backward)
