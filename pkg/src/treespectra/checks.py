"""Verification suite: every gating invariant as a named, reportable check.

The same checks back the `verify` CLI command and the acceptance test
module; results carry machine-readable details for the JSON report.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import charpoly, eigen, levelrep, schreier, spectra, substitution
from .automata import BUILTIN_NAMES, SelfSimilarGroup, builtin_group

TERNARY = ("gamma", "gamma-bar", "gamma-barbar")
DEFAULT_SEED = 7121
DEFAULT_JULIA_DEPTH = 14


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict
    elapsed: float = 0.0


class SpectrumCache:
    """Memoizes groups, operators and spectra across checks."""

    def __init__(self) -> None:
        self._groups: dict[str, SelfSimilarGroup] = {}
        self._spectra: dict[tuple[str, int], eigen.SpectrumApprox] = {}

    def group(self, name: str) -> SelfSimilarGroup:
        if name not in self._groups:
            self._groups[name] = builtin_group(name)
        return self._groups[name]

    def spectrum(self, name: str, n: int) -> eigen.SpectrumApprox:
        key = (name, n)
        if key not in self._spectra:
            op = levelrep.uniform_hecke_operator(self.group(name), n)
            self._spectra[key] = eigen.symmetric_eigenvalues(op)
        return self._spectra[key]


def _membership_details(
    cache: SpectrumCache, name: str, levels: range, sset: spectra.SpectralSet, tol: float
) -> tuple[bool, dict]:
    worst = 0.0
    per_level = {}
    for n in levels:
        sp = cache.spectrum(name, n)
        dist = max(spectra.set_distance(sset, x) for x in sp.eigenvalues)
        per_level[n] = dist
        worst = max(worst, dist)
    return worst <= tol, {"worst_distance": worst, "tolerance": tol, "per_level": per_level}


def check_membership_grigorchuk(cache: SpectrumCache, **_: object) -> CheckResult:
    """Uniform-operator eigenvalues in [-1/2, 0] u [1/2, 1] for n = 1..10."""
    ok, details = _membership_details(
        cache, "grigorchuk", range(1, 11), spectra.predicted_spectrum("grigorchuk"), 1e-9
    )
    return CheckResult("membership-grigorchuk", ok, details)


def check_membership_grigorchuk_tilde(cache: SpectrumCache, **_: object) -> CheckResult:
    """Uniform-operator eigenvalues in [0, 1] for n = 1..10."""
    ok, details = _membership_details(
        cache, "grigorchuk-tilde", range(1, 11), spectra.predicted_spectrum("grigorchuk-tilde"), 1e-9
    )
    return CheckResult("membership-grigorchuk-tilde", ok, details)


def check_membership_gamma(cache: SpectrumCache, julia_depth: int = DEFAULT_JULIA_DEPTH, **_: object) -> CheckResult:
    """Eigenvalues within 1e-5 of the gamma set for n = 1..7; 1 and 1/4 present at 1e-9."""
    sset = spectra.predicted_spectrum("gamma", depth=julia_depth)
    ok, details = _membership_details(cache, "gamma", range(1, 8), sset, 1e-5)
    anchor_worst = 0.0
    for n in range(1, 8):
        values = np.asarray(cache.spectrum("gamma", n).eigenvalues)
        for anchor in (1.0, 0.25):
            anchor_worst = max(anchor_worst, float(np.min(np.abs(values - anchor))))
    details["anchor_worst"] = anchor_worst
    details["julia_depth"] = julia_depth
    details["max_gap"] = sset.julia_parts[0].approx.max_gap
    return CheckResult("membership-gamma", ok and anchor_worst <= 1e-9, details)


def check_membership_gamma_bar(cache: SpectrumCache, julia_depth: int = DEFAULT_JULIA_DEPTH, **_: object) -> CheckResult:
    """Eigenvalues of gamma-bar and gamma-barbar within 1e-5 of the shared set, n = 1..7.

    The Hausdorff distance between the two level-7 spectra is reported
    against a soft threshold of 0.1 but does not gate.
    """
    sset = spectra.predicted_spectrum("gamma-bar", depth=julia_depth)
    ok1, d1 = _membership_details(cache, "gamma-bar", range(1, 8), sset, 1e-5)
    ok2, d2 = _membership_details(cache, "gamma-barbar", range(1, 8), sset, 1e-5)
    cross = eigen.hausdorff_distance(
        cache.spectrum("gamma-bar", 7).flatten(), cache.spectrum("gamma-barbar", 7).flatten()
    )
    details = {
        "gamma-bar": d1,
        "gamma-barbar": d2,
        "level7_hausdorff": cross,
        "level7_hausdorff_soft_threshold": 0.1,
        "julia_depth": julia_depth,
    }
    return CheckResult("membership-gamma-bar", ok1 and ok2, details)


def check_nesting(cache: SpectrumCache, max_level: int = 8, **_: object) -> CheckResult:
    """Level-(n-1) eigenvalue multiset contained in the level-n multiset, all groups."""
    tol = 1e-8
    failures = []
    for name in BUILTIN_NAMES:
        for n in range(1, max_level + 1):
            if not eigen.multiset_contained(cache.spectrum(name, n - 1), cache.spectrum(name, n), tol):
                failures.append((name, n))
    return CheckResult(
        "nesting", not failures, {"tolerance": tol, "max_level": max_level, "failures": failures}
    )


def check_markov_hecke(cache: SpectrumCache, max_level: int = 8, **_: object) -> CheckResult:
    """Entrywise equality of the walk operator and the uniform averaged operator."""
    failures = []
    for name in BUILTIN_NAMES:
        group = cache.group(name)
        for n in range(0, max_level + 1):
            graph = schreier.action_graph(group, n)
            if graph.vertex_count != group.d**n:
                failures.append((name, n, "orbit is not the whole level"))
                continue
            m = schreier.markov_operator(graph)
            h = levelrep.uniform_hecke_operator(group, n)
            same = (
                np.array_equal(m.rows, h.rows)
                and np.array_equal(m.cols, h.cols)
                and np.array_equal(m.weights, h.weights)
            )
            if not same:
                failures.append((name, n, "operators differ"))
    return CheckResult("markov-hecke", not failures, {"max_level": max_level, "failures": failures})


def check_top_eigenvalue(cache: SpectrumCache, max_level: int = 8, **_: object) -> CheckResult:
    """Largest eigenvalue equals 1 within 1e-10 with multiplicity 1, n = 1..max."""
    tol = 1e-10
    worst = 0.0
    failures = []
    for name in BUILTIN_NAMES:
        for n in range(1, max_level + 1):
            sp = cache.spectrum(name, n)
            gap = abs(sp.max_eigenvalue - 1.0)
            worst = max(worst, gap)
            if gap > tol or sp.multiplicities[-1] != 1:
                failures.append((name, n, sp.max_eigenvalue, sp.multiplicities[-1]))
    return CheckResult(
        "top-eigenvalue", not failures, {"tolerance": tol, "worst": worst, "failures": failures}
    )


def check_block_identities(cache: SpectrumCache, max_level: int = 8, **_: object) -> CheckResult:
    """Wreath-recursion block assembly equals the direct level permutation."""
    failures = []
    for name in BUILTIN_NAMES:
        group = cache.group(name)
        for n in range(1, max_level + 1):
            if not levelrep.verify_block_identities(group, n):
                failures.append((name, n))
    return CheckResult("block-identities", not failures, {"max_level": max_level, "failures": failures})


def check_factor_product(cache: SpectrumCache, seed: int = DEFAULT_SEED, **_: object) -> CheckResult:
    """Determinant equals the factor product: rel err <= 1e-6 at 100 points per level.

    Levels 7 and 8 compare sign and log magnitude.  Hand anchors: value 4 at
    level 0 and 8 at level 1 for (alpha, beta, lam) = (1, 1, 0).
    """
    group = cache.group("grigorchuk")
    tol = 1e-6
    per_level = {}
    worst = 0.0
    for n in range(0, 9):
        count = 100 if n <= 6 else 40
        rep = charpoly.check_product_identity(group, n, sample_count=count, seed=seed + n)
        per_level[n] = rep.max_rel_error
        worst = max(worst, rep.max_rel_error)
    anchors = (
        charpoly.charpoly_product(charpoly.FactorParams(1.0, 1.0, 0.0, 0)),
        charpoly.charpoly_product(charpoly.FactorParams(1.0, 1.0, 0.0, 1)),
    )
    anchors_ok = anchors == (4.0, 8.0)
    return CheckResult(
        "factor-product",
        worst <= tol and anchors_ok,
        {"tolerance": tol, "worst": worst, "per_level": per_level, "anchors": anchors},
    )


def check_scaled_spectrum(cache: SpectrumCache, max_level: int = 8, **_: object) -> CheckResult:
    """Zeros of the (1,1) factor product, divided by 4, match the level spectra."""
    tol = 1e-7
    worst = 0.0
    for n in range(1, max_level + 1):
        zeros = charpoly.product_zeros(n) / 4.0
        sp = cache.spectrum("grigorchuk", n)
        dist = eigen.hausdorff_distance(zeros, sp.flatten())
        worst = max(worst, dist)
    return CheckResult("scaled-spectrum", worst <= tol, {"tolerance": tol, "worst": worst})


def check_growth(cache: SpectrumCache, **_: object) -> CheckResult:
    """Ball-growth exponents: binary group level 12 near 1, gamma level 9 near log2(3)."""
    window = (8, 200)
    g12 = schreier.action_graph(cache.group("grigorchuk"), 12)
    e1 = schreier.growth_exponent(schreier.ball_growth(g12, window[1]), window)
    g9 = schreier.action_graph(cache.group("gamma"), 9)
    e2 = schreier.growth_exponent(schreier.ball_growth(g9, window[1]), window)
    ok = 0.85 <= e1 <= 1.15 and 1.45 <= e2 <= 1.75
    return CheckResult(
        "growth",
        ok,
        {
            "grigorchuk_level12_exponent": e1,
            "grigorchuk_bounds": (0.85, 1.15),
            "gamma_level9_exponent": e2,
            "gamma_bounds": (1.45, 1.75),
            "window": window,
        },
    )


def check_substitution(cache: SpectrumCache, max_steps: int = 5, **_: object) -> CheckResult:
    """Rewriting expansions are rooted-labeled-isomorphic to the action graphs.

    The level offset is determined once at one expansion step (candidates
    0, 1, 2) and must stay fixed for all further steps.
    """
    system = substitution.gamma_substitution_system()
    group = cache.group("gamma")
    first = substitution.expand(system, 1)
    offset = None
    for cand in (0, 1, 2):
        candidate_graph = schreier.action_graph(group, 1 + cand)
        if first.vertex_count == candidate_graph.vertex_count and schreier.rooted_labeled_isomorphic(
            first, candidate_graph
        ):
            offset = cand
            break
    if offset is None:
        return CheckResult("substitution", False, {"error": "no offset in {0,1,2} matches at step 1"})
    failures = []
    graph = system.axiom
    step = 0
    while step < max_steps:
        step += 1
        graph = substitution.expand_once(system, graph)
        if not schreier.rooted_labeled_isomorphic(graph, schreier.action_graph(group, step + offset)):
            failures.append(step)
    return CheckResult(
        "substitution", not failures, {"offset": offset, "max_steps": max_steps, "failures": failures}
    )


def check_julia_invariance(cache: SpectrumCache, **_: object) -> CheckResult:
    """Backward-orbit construction identities: p^2 - lam lands in the previous set.

    Checked for lam in {6, 45/16, 2}; also |p| <= beta for every point.
    """
    rel_tol = 1e-12
    worst = 0.0
    bound_ok = True
    cases = ((6.0, 14), (45.0 / 16.0, 14), (2.0, 10))
    for lam, depth in cases:
        beta = spectra.fixed_point(lam)
        prev = spectra.julia_backward(lam, 0)
        for k in range(1, depth + 1):
            cur = spectra.julia_backward(lam, k)
            prev_pts = np.asarray(prev.points)
            pts = np.asarray(cur.points)
            if np.max(np.abs(pts)) > beta * (1 + 1e-12):
                bound_ok = False
            images = pts * pts - lam
            pos = np.searchsorted(prev_pts, images)
            dist = np.full(images.shape, np.inf)
            left = pos > 0
            dist[left] = np.abs(images[left] - prev_pts[pos[left] - 1])
            right = pos < prev_pts.size
            dist[right] = np.minimum(dist[right], np.abs(prev_pts[pos[right]] - images[right]))
            rel = np.max(dist / np.maximum(1.0, np.abs(images)))
            worst = max(worst, float(rel))
            prev = cur
    return CheckResult(
        "julia-invariance",
        worst <= rel_tol and bound_ok,
        {"tolerance": rel_tol, "worst_relative": worst, "bound_respected": bound_ok},
    )


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "membership-grigorchuk": check_membership_grigorchuk,
    "membership-grigorchuk-tilde": check_membership_grigorchuk_tilde,
    "membership-gamma": check_membership_gamma,
    "membership-gamma-bar": check_membership_gamma_bar,
    "nesting": check_nesting,
    "markov-hecke": check_markov_hecke,
    "top-eigenvalue": check_top_eigenvalue,
    "block-identities": check_block_identities,
    "factor-product": check_factor_product,
    "scaled-spectrum": check_scaled_spectrum,
    "growth": check_growth,
    "substitution": check_substitution,
    "julia-invariance": check_julia_invariance,
}


@dataclass
class VerificationReport:
    results: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "elapsed_seconds": self.elapsed,
            "checks": [
                {"name": r.name, "passed": r.passed, "elapsed_seconds": r.elapsed, "details": r.details}
                for r in self.results
            ],
        }


def run_verification(
    only: list[str] | None = None,
    max_level: int | None = None,
    julia_depth: int = DEFAULT_JULIA_DEPTH,
    seed: int = DEFAULT_SEED,
    progress: Callable[[str], None] | None = None,
) -> VerificationReport:
    """Run the named checks (all by default) against a shared spectrum cache."""
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}; valid: {', '.join(CHECKS)}")
    cache = SpectrumCache()
    report = VerificationReport()
    start = time.time()
    kwargs: dict[str, object] = {"julia_depth": julia_depth, "seed": seed}
    if max_level is not None:
        kwargs["max_level"] = max_level
    for name in names:
        t0 = time.time()
        result = CHECKS[name](cache, **kwargs)
        result.elapsed = time.time() - t0
        report.results.append(result)
        if progress is not None:
            progress(f"{'PASS' if result.passed else 'FAIL'} {name} ({result.elapsed:.1f}s)")
    report.elapsed = time.time() - start
    return report
