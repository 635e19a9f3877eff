"""Characteristic-polynomial values of weighted level operators.

For the binary-tree group with weights (alpha on a, beta on b, c, d) the
determinant det(sum_s X_s P_n(s) - lam) factors as a product of
polynomials built by a quadratic recursion; values of both sides are
compared numerically, using a (mantissa, exponent) representation where
doubles would overflow.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .automata import SelfSimilarGroup
from .levelrep import MAX_DENSE_DIM, build_level_rep, hecke_operator

Scaled = tuple[float, int]  # value = mantissa * 2**exponent, mantissa in [1, 2) or 0


def _scaled(x: float) -> Scaled:
    m, e = math.frexp(x)
    return (m * 2.0, e - 1) if m else (0.0, 0)


def _scaled_mul(a: Scaled, b: Scaled) -> Scaled:
    m, e = _scaled(a[0] * b[0])
    return (m, e + a[1] + b[1])


def _scaled_sub(a: Scaled, b: Scaled) -> Scaled:
    if a[0] == 0.0:
        return (-b[0], b[1])
    if b[0] == 0.0:
        return a
    shift = b[1] - a[1]
    if shift < -60:
        return a
    if shift > 60:
        return (-b[0], b[1])
    m, e = _scaled(a[0] - b[0] * 2.0**shift)
    return (m, e + a[1])


def _scaled_pow(a: Scaled, k: int) -> Scaled:
    out: Scaled = (1.0, 0)
    base = a
    while k:
        if k & 1:
            out = _scaled_mul(out, base)
        base = _scaled_mul(base, base)
        k >>= 1
    return out


def _scaled_float(a: Scaled) -> float:
    try:
        return math.ldexp(a[0], a[1])
    except OverflowError:
        return math.copysign(math.inf, a[0])


def _scaled_log_abs(a: Scaled) -> tuple[float, float]:
    """(sign, natural log of |value|); log is -inf at zero."""
    if a[0] == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, a[0]), math.log(abs(a[0])) + a[1] * math.log(2.0)


@dataclass(frozen=True)
class FactorParams:
    """Weights (alpha on the rotation, beta on the others), spectral variable, level."""

    alpha: float
    beta: float
    lam: float
    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be nonnegative")


def factor_sequence(p: FactorParams) -> list[Scaled]:
    """The quadratic-recursion factors F_0..F_level in scaled form.

    F_0 = alpha + 3 beta - lam
    F_1 = -alpha + 3 beta - lam
    F_2 = -alpha^2 - 3 beta^2 - 2 beta lam + lam^2
    F_k = F_{k-1}^2 - 2 (2 alpha beta)^(2^(k-2))   for k >= 3

    The subtracted constant carries alpha*beta: an exact polynomial fit of
    det(...) / (F_0 F_1 F_2) at level 3 gives F_2^2 - 8 alpha^2 beta^2, and
    the recursion then matches the determinants at machine precision through
    level 8 (at beta = 1 the beta factor is invisible).
    """
    a, b, lam = p.alpha, p.beta, p.lam
    factors = [_scaled(a + 3 * b - lam)]
    if p.level >= 1:
        factors.append(_scaled(-a + 3 * b - lam))
    if p.level >= 2:
        factors.append(_scaled(-a * a - 3 * b * b - 2 * b * lam + lam * lam))
    for k in range(3, p.level + 1):
        power = _scaled_pow(_scaled(2 * a * b), 2 ** (k - 2))
        factors.append(_scaled_sub(_scaled_mul(factors[-1], factors[-1]), _scaled_mul(_scaled(2.0), power)))
    return factors


def charpoly_product_scaled(p: FactorParams) -> tuple[float, float]:
    """(sign, natural log of |product of factors|)."""
    product: Scaled = (1.0, 0)
    for f in factor_sequence(p):
        product = _scaled_mul(product, f)
    return _scaled_log_abs(product)


def charpoly_product(p: FactorParams) -> float:
    """Product of the recursion factors as a double; raises on overflow."""
    product: Scaled = (1.0, 0)
    for f in factor_sequence(p):
        product = _scaled_mul(product, f)
    value = _scaled_float(product)
    if math.isinf(value):
        raise OverflowError(f"factor product overflows a double at level {p.level}; use charpoly_product_scaled")
    return value


def product_zeros(n: int, alpha: float = 1.0, beta: float = 1.0) -> np.ndarray:
    """All real zeros (with repetition) of lam -> product of factors up to level n.

    Zeros of each factor are found by exact backward substitution through the
    quadratic recursion, so no polynomial root-finding is involved.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    zeros: list[float] = [alpha + 3 * beta]
    if n >= 1:
        zeros.append(3 * beta - alpha)

    def quadratic_roots(target: float) -> list[float]:
        # lam^2 - 2 beta lam - (alpha^2 + 3 beta^2) = target
        radicand = beta * beta + alpha * alpha + 3 * beta * beta + target
        if radicand < 0:
            return []
        return [beta - math.sqrt(radicand), beta + math.sqrt(radicand)]

    def solve(level: int, target: float) -> list[float]:
        """lam values with F_level(lam) = target."""
        if level == 2:
            return quadratic_roots(target)
        c = 2.0 * (2.0 * alpha * beta) ** (2 ** (level - 2))
        radicand = target + c
        if radicand < 0:
            return []
        root = math.sqrt(radicand)
        out = solve(level - 1, root)
        if root > 0:
            out += solve(level - 1, -root)
        return out

    if n >= 2:
        zeros.extend(quadratic_roots(0.0))
    for k in range(3, n + 1):
        zeros.extend(solve(k, 0.0))
    return np.sort(np.array(zeros))


def _weighted_matrix(
    group: SelfSimilarGroup, n: int, weights: Mapping[str, float | Fraction], lam: float
) -> np.ndarray:
    if group.d**n > MAX_DENSE_DIM:
        raise ValueError(f"dimension {group.d ** n} exceeds the dense bound {MAX_DENSE_DIM}")
    op = hecke_operator(build_level_rep(group, n), weights)
    dense = op.to_dense()
    dense[np.diag_indices_from(dense)] -= lam
    return dense


def charpoly_logvalue(
    group: SelfSimilarGroup, n: int, weights: Mapping[str, float | Fraction], lam: float
) -> tuple[float, float, float]:
    """(sign, log|det|, min |pivot|) of sum_s X_s P_n(s) - lam via pivoted LU."""
    return _kernels.slogdet_minpivot(_weighted_matrix(group, n, weights, lam))


def charpoly_value(
    group: SelfSimilarGroup, n: int, weights: Mapping[str, float | Fraction], lam: float
) -> float:
    """Determinant of the weighted level operator minus lam.

    Relative accuracy is that of partial-pivot elimination in doubles;
    magnitudes beyond the double range come back as signed infinity.
    """
    sign, logabs, _ = charpoly_logvalue(group, n, weights, lam)
    if logabs == -math.inf:
        return 0.0
    if logabs > 709.0:  # exp overflow
        return math.copysign(math.inf, sign)
    return sign * math.exp(logabs)


def _binary_group_weights(alpha: float, beta: float) -> dict[str, float]:
    return {"a": alpha, "b": beta, "c": beta, "d": beta}


@dataclass(frozen=True)
class IdentityReport:
    """Sampled comparison of determinant values against the factor product."""

    level: int
    sample_count: int
    max_rel_error: float
    compared_in_log: bool


def check_product_identity(
    group: SelfSimilarGroup,
    n: int,
    sample_count: int = 100,
    seed: int = 7121,
    pivot_floor: float = 1e-10,
) -> IdentityReport:
    """Compare det(alpha P(a) + beta (P(b)+P(c)+P(d)) - lam) with the factor product.

    Points are drawn uniformly from [-2, 2]^3, rejecting draws whose LU runs
    into a pivot below pivot_floor.  For n <= 6 the relative error of the
    values is reported; for larger n the signs and natural-log magnitudes are
    compared instead (the values overflow doubles).
    """
    rng = random.Random(seed)
    in_log = n >= 7
    max_err = 0.0
    accepted = 0
    attempts = 0
    while accepted < sample_count:
        attempts += 1
        if attempts > 50 * sample_count:
            raise RuntimeError("rejection sampling failed to find well-pivoted points")
        alpha, beta, lam = (rng.uniform(-2.0, 2.0) for _ in range(3))
        sign_q, log_q, min_pivot = charpoly_logvalue(group, n, _binary_group_weights(alpha, beta), lam)
        if min_pivot < pivot_floor:
            continue
        accepted += 1
        params = FactorParams(alpha, beta, lam, n)
        if in_log:
            sign_p, log_p = charpoly_product_scaled(params)
            err = abs(log_q - log_p) / max(1.0, abs(log_p))
            if sign_q != sign_p:
                err = max(err, 1.0)
        else:
            q = 0.0 if log_q == -math.inf else sign_q * math.exp(log_q)
            prod = charpoly_product(params)
            err = abs(q - prod) / max(1.0, abs(prod))
        max_err = max(max_err, err)
    return IdentityReport(n, sample_count, max_err, in_log)


@dataclass(frozen=True)
class RecursionReport:
    """Diagnostic comparison of the one-level rational recursion (never gating)."""

    level: int
    deviations: tuple[float, ...]
    skipped: int

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0


def check_rational_recursion(
    group: SelfSimilarGroup,
    n: int,
    sample_count: int = 50,
    seed: int = 7121,
    pole_floor: float = 1e-6,
) -> RecursionReport:
    """Evaluate both sides of the printed one-level recursion at random points.

    RHS = (3 b^2 + 2 lam b - lam^2)^(2^(n-2))
          * Q_{n-1}(2 a^2 / (2 b^2 lam - lam^2), b,
                    lam - b + (lam - b) a^2 / (3 b^2 + 2 b lam - lam^2)),
    with the second argument of Q_{n-1} read as the unchanged beta.  Points
    near a denominator zero are skipped.  Deviations are reported, not
    asserted: this check is diagnostic only.
    """
    if n < 2:
        raise ValueError("the recursion applies from level 2 on")
    rng = random.Random(seed)
    deviations: list[float] = []
    skipped = 0
    for _ in range(sample_count):
        alpha, beta, lam = (rng.uniform(-2.0, 2.0) for _ in range(3))
        den1 = 2 * beta * beta * lam - lam * lam
        den2 = 3 * beta * beta + 2 * beta * lam - lam * lam
        if abs(den1) < pole_floor or abs(den2) < pole_floor:
            skipped += 1
            continue
        lhs = charpoly_value(group, n, _binary_group_weights(alpha, beta), lam)
        alpha2 = 2 * alpha * alpha / den1
        lam2 = lam - beta + (lam - beta) * alpha * alpha / den2
        prefactor = (3 * beta * beta + 2 * lam * beta - lam * lam) ** (2 ** (n - 2))
        rhs = prefactor * charpoly_value(group, n - 1, _binary_group_weights(alpha2, beta), lam2)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            skipped += 1
            continue
        deviations.append(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return RecursionReport(n, tuple(deviations), skipped)


def spectral_correspondence(
    group: SelfSimilarGroup, n: int, alphas: Iterable[float]
) -> list[tuple[float, np.ndarray]]:
    """Eigenvalues of alpha (A + A^t) + (X + X^t) at level n, per grid alpha.

    A and X are the permutation matrices of the rotation generator and the
    recursively defined generator of a ternary built-in; at alpha = 1 the
    eigenvalues are |S| times the averaged-operator spectrum.
    """
    if group.d != 3 or len(group.generators) != 2:
        raise ValueError("spectral correspondence is defined for the ternary two-generator groups")
    rep = build_level_rep(group, n)
    rot, rec = group.generators[0].symbol, group.generators[1].symbol
    dim = rep.dimension
    a_part = np.zeros((dim, dim))
    x_part = np.zeros((dim, dim))
    idx = np.arange(dim)
    for sym, dense in ((rot, a_part), (rec, x_part)):
        for entry in (sym, f"{sym}^-1"):
            dense[rep.perms[entry], idx] += 1.0
    out = []
    for alpha in alphas:
        values = np.sort(_kernels.eigvalsh(alpha * a_part + x_part))
        out.append((float(alpha), values))
    return out
