"""Level-n permutation representations and weighted generator-sum operators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .automata import (
    SelfSimilarGroup,
    Vertex,
    Word,
    act_vertex,
    all_vertices,
    parse_word,
)

#: Largest matrix dimension the dense pipeline accepts (supports d=3, n=8).
MAX_DENSE_DIM = 8192


def vertex_index(v: Vertex, d: int) -> int:
    """Most-significant-digit-first encoding: index = sum (digit_i - 1) d^(n-i)."""
    idx = 0
    for digit in v:
        if not 1 <= digit <= d:
            raise ValueError(f"vertex digit {digit} outside 1..{d}")
        idx = idx * d + (digit - 1)
    return idx


def vertex_from_index(idx: int, d: int, n: int) -> Vertex:
    if not 0 <= idx < d**n:
        raise ValueError(f"index {idx} out of range for level {n}")
    digits = []
    for _ in range(n):
        digits.append(idx % d + 1)
        idx //= d
    return tuple(reversed(digits))


def level_permutation(group: SelfSimilarGroup, word: Word | str, n: int) -> np.ndarray:
    """Index array of the level-n action of a word: entry i is the image of vertex i."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    if isinstance(word, str):
        word = parse_word(word)
    d = group.d
    perm = np.empty(d**n, dtype=np.int64)
    for i, v in enumerate(all_vertices(d, n)):
        perm[i] = vertex_index(act_vertex(group, word, v), d)
    perm.setflags(write=False)
    return perm


@dataclass(frozen=True)
class LevelRep:
    """Permutations of the level-n vertices for every symmetric-set element."""

    group: SelfSimilarGroup
    level: int
    perms: Mapping[str, np.ndarray]

    @property
    def dimension(self) -> int:
        return self.group.d**self.level

    def vertex_index(self, v: Vertex) -> int:
        if len(v) != self.level:
            raise ValueError(f"vertex has level {len(v)}, representation has level {self.level}")
        return vertex_index(v, self.group.d)


def build_level_rep(group: SelfSimilarGroup, n: int) -> LevelRep:
    """Build the level-n representation on all symmetric-set elements.

    Inverse entries are obtained by inverting the forward permutation, which
    keeps the inverse-pair invariant exact.
    """
    perms: dict[str, np.ndarray] = {}
    for entry in group.symmetric_set:
        if entry.endswith("^-1") and entry[:-3] in perms:
            forward = perms[entry[:-3]]
            inverse = np.empty_like(forward)
            inverse[forward] = np.arange(len(forward))
            inverse.setflags(write=False)
            perms[entry] = inverse
        else:
            perms[entry] = level_permutation(group, parse_word(entry), n)
    return LevelRep(group, n, perms)


def _assembled_permutation(group: SelfSimilarGroup, symbol: str, n: int) -> np.ndarray:
    """Level-n permutation assembled blockwise from the wreath recursion."""
    gen = group.generator(symbol)
    d = group.d
    size = d ** (n - 1)
    out = np.empty(d * size, dtype=np.int64)
    base = np.arange(size, dtype=np.int64)
    for i in range(1, d + 1):
        block = level_permutation(group, gen.sections[i - 1], n - 1) if n > 1 else base[:1]
        target = gen.root[i - 1] - 1
        out[(i - 1) * size : i * size] = target * size + block
    return out


def verify_block_identities(group: SelfSimilarGroup, n: int) -> bool:
    """Check that each level-n generator permutation equals its block assembly.

    The root permutation moves the d blocks of size d^(n-1) and block i
    carries the level-(n-1) permutation of section i.
    """
    if n < 1:
        raise ValueError("level must be at least 1")
    for gen in group.generators:
        direct = level_permutation(group, ((gen.symbol, 1),), n)
        if not np.array_equal(direct, _assembled_permutation(group, gen.symbol, n)):
            return False
    return True


@dataclass(frozen=True)
class WeightedOperator:
    """Sparse triplet form of sum_s weight(s) P(s), duplicates aggregated."""

    dimension: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    symmetric: bool

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dimension, self.dimension))
        dense[self.rows, self.cols] = self.weights
        return dense

    def norm_inf(self) -> float:
        row_sums = np.zeros(self.dimension)
        np.add.at(row_sums, self.rows, np.abs(self.weights))
        return float(row_sums.max()) if self.dimension else 0.0


def _as_fraction(x: float | int | Fraction) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def hecke_operator(rep: LevelRep, weights: Mapping[str, float | Fraction]) -> WeightedOperator:
    """Weighted sum of symmetric-set permutation matrices.

    Entries are aggregated as exact fractions before conversion to float, so
    inversion-symmetric weights give a bit-exact symmetric matrix.
    """
    group = rep.group
    for entry in group.symmetric_set:
        if entry not in weights:
            raise ValueError(f"missing weight for symmetric-set element {entry!r}")
    cells: dict[tuple[int, int], Fraction] = {}
    col = np.arange(rep.dimension, dtype=np.int64)
    for entry in group.symmetric_set:
        w = _as_fraction(weights[entry])
        perm = rep.perms[entry]
        for c, r in zip(col.tolist(), perm.tolist()):
            key = (r, c)
            cells[key] = cells.get(key, Fraction(0)) + w
    items = sorted(cells.items())
    rows = np.array([r for (r, _), _ in items], dtype=np.int64)
    cols = np.array([c for (_, c), _ in items], dtype=np.int64)
    vals = np.array([float(v) for _, v in items])
    symmetric = all(
        _as_fraction(weights[entry]) == _as_fraction(weights[_inverse_entry(group, entry)])
        for entry in group.symmetric_set
    )
    for arr in (rows, cols, vals):
        arr.setflags(write=False)
    return WeightedOperator(rep.dimension, rows, cols, vals, symmetric)


def _inverse_entry(group: SelfSimilarGroup, entry: str) -> str:
    base = entry[:-3] if entry.endswith("^-1") else entry
    if group.generator(base).involutive:
        return entry
    return base if entry.endswith("^-1") else entry + "^-1"


def uniform_weights(group: SelfSimilarGroup) -> dict[str, Fraction]:
    """The averaging weights 1/|S| on the symmetric set."""
    size = len(group.symmetric_set)
    return {entry: Fraction(1, size) for entry in group.symmetric_set}


def uniform_hecke_operator(group: SelfSimilarGroup, n: int) -> WeightedOperator:
    return hecke_operator(build_level_rep(group, n), uniform_weights(group))
