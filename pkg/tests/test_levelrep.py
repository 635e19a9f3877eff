"""Level permutations, block identities, and weighted operators."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from treespectra.automata import BUILTIN_NAMES, builtin_group
from treespectra.levelrep import (
    build_level_rep,
    hecke_operator,
    level_permutation,
    uniform_hecke_operator,
    uniform_weights,
    verify_block_identities,
    vertex_from_index,
    vertex_index,
)


def test_vertex_index_examples():
    assert vertex_index((1, 1), 2) == 0
    assert vertex_index((2, 2), 2) == 3
    # (1-1)*3 + (3-1) = 2
    assert vertex_index((1, 3), 3) == 2


def test_vertex_index_round_trip():
    for d, n in ((2, 5), (3, 4)):
        for i in range(d**n):
            assert vertex_index(vertex_from_index(i, d, n), d) == i


def test_level_permutation_examples():
    g = builtin_group("grigorchuk")
    assert np.array_equal(level_permutation(g, "a", 1), [1, 0])
    assert np.array_equal(level_permutation(g, "d", 1), [0, 1])
    gamma = builtin_group("gamma")
    perm = level_permutation(gamma, "r", 2)
    assert perm[vertex_index((1, 3), 3)] == vertex_index((1, 1), 3)
    # vertices with first digit 2 or 3 are fixed at level 2
    for first in (2, 3):
        for second in (1, 2, 3):
            idx = vertex_index((first, second), 3)
            assert perm[idx] == idx


def test_inverse_permutations_match_action():
    gamma = builtin_group("gamma")
    for n in range(0, 5):
        rep = build_level_rep(gamma, n)
        for sym in ("a", "r"):
            direct = level_permutation(gamma, f"{sym}^-1", n)
            assert np.array_equal(rep.perms[f"{sym}^-1"], direct)
            composed = rep.perms[sym][rep.perms[f"{sym}^-1"]]
            assert np.array_equal(composed, np.arange(3**n))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_block_identities(name):
    g = builtin_group(name)
    for n in range(1, 6):
        assert verify_block_identities(g, n)


def test_block_identities_level_one_trivial_sections():
    # level-0 sections are 1x1, so the assembly is just the root permutation
    for name in BUILTIN_NAMES:
        assert verify_block_identities(builtin_group(name), 1)


def test_hecke_level_one_binary():
    g = builtin_group("grigorchuk")
    op = uniform_hecke_operator(g, 1)
    assert np.array_equal(op.to_dense(), np.array([[0.75, 0.25], [0.25, 0.75]]))


def test_hecke_level_zero_is_total_weight():
    for name in BUILTIN_NAMES:
        op = uniform_hecke_operator(builtin_group(name), 0)
        assert np.array_equal(op.to_dense(), np.array([[1.0]]))


def test_hecke_level_one_ternary():
    g = builtin_group("gamma")
    cycle = np.zeros((3, 3))
    for i in range(3):
        cycle[(i + 1) % 3, i] = 1.0
    expected = (cycle + cycle @ cycle + 2 * np.eye(3)) / 4.0
    assert np.array_equal(uniform_hecke_operator(g, 1).to_dense(), expected)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_hecke_row_sums_and_symmetry(name):
    g = builtin_group(name)
    for n in range(0, 4):
        dense = uniform_hecke_operator(g, n).to_dense()
        assert np.array_equal(dense, dense.T)  # bit-exact
        assert np.allclose(dense.sum(axis=1), 1.0, atol=0)


def test_constant_vector_eigenvalue_is_total_weight():
    g = builtin_group("gamma-bar")
    rep = build_level_rep(g, 3)
    weights = {"a": 0.3, "a^-1": 0.3, "s": 0.1, "s^-1": 0.1}
    dense = hecke_operator(rep, weights).to_dense()
    ones = np.ones(rep.dimension)
    assert np.allclose(dense @ ones, 0.8 * ones, atol=1e-15)


def test_asymmetric_weights_not_flagged_symmetric():
    g = builtin_group("gamma")
    rep = build_level_rep(g, 2)
    op = hecke_operator(rep, {"a": 0.5, "a^-1": 0.1, "r": 0.2, "r^-1": 0.2})
    assert not op.symmetric


def test_missing_weight_error():
    g = builtin_group("gamma")
    rep = build_level_rep(g, 1)
    with pytest.raises(ValueError, match="missing weight"):
        hecke_operator(rep, {"a": 0.25, "a^-1": 0.25, "r": 0.25})


def test_uniform_weights_are_quarter_fractions():
    for name in BUILTIN_NAMES:
        weights = uniform_weights(builtin_group(name))
        assert set(weights.values()) == {Fraction(1, 4)}


def test_rep_vertex_index_level_guard():
    rep = build_level_rep(builtin_group("grigorchuk"), 3)
    assert rep.vertex_index((2, 1, 1)) == 4
    with pytest.raises(ValueError, match="level"):
        rep.vertex_index((1, 1))
