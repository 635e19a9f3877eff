"""Group definitions and tree actions."""
from __future__ import annotations

import random

import pytest

from treespectra.automata import (
    BUILTIN_NAMES,
    act_vertex,
    all_vertices,
    builtin_group,
    ggs_group,
    invert_word,
    parse_group,
    parse_word,
    vertex_str,
    word_str,
)


def test_builtin_names_complete():
    for name in BUILTIN_NAMES:
        g = builtin_group(name)
        assert g.name == name
    with pytest.raises(ValueError, match="unknown group"):
        builtin_group("heisenberg")


def test_grigorchuk_definition():
    g = builtin_group("grigorchuk")
    assert g.d == 2
    assert [gen.symbol for gen in g.generators] == ["a", "b", "c", "d"]
    assert g.symmetric_set == ("a", "b", "c", "d")
    assert all(gen.involutive for gen in g.generators)
    # a swaps the two branches, b = (a, c)
    assert act_vertex(g, "a", "1") == (2,)
    assert act_vertex(g, "b", "11") == (1, 2)
    assert act_vertex(g, "b", "21") == (2, 1)  # section c acts trivially at level 1


def test_gamma_definition():
    g = builtin_group("gamma")
    assert g.d == 3
    assert g.symmetric_set == ("a", "a^-1", "r", "r^-1")
    assert act_vertex(g, "a", "1") == (2,)
    assert act_vertex(g, "a", "3") == (1,)
    # r acts on subtree 1 by a: a(3) = 1
    assert act_vertex(g, "r", "13") == (1, 1)
    assert act_vertex(g, "r", "2222") == (2, 2, 2, 2)


def test_grigorchuk_tilde_definition():
    g = builtin_group("grigorchuk-tilde")
    # c = (1, d): trivial on the subtree below 1
    assert act_vertex(g, "c", "11") == (1, 1)
    assert act_vertex(g, "b", "11") == (1, 2)


def test_empty_word_is_identity():
    g = builtin_group("gamma")
    for v in all_vertices(3, 3):
        assert act_vertex(g, "", v) == v


def test_word_evaluation_right_to_left():
    g = builtin_group("gamma")
    # w = a r acts as a(r(v))
    v = (1, 3)
    assert act_vertex(g, "a r", v) == act_vertex(g, "a", act_vertex(g, "r", v))


def test_inverse_letters():
    g = builtin_group("gamma")
    for v in all_vertices(3, 4):
        assert act_vertex(g, "a^-1", act_vertex(g, "a", v)) == v
        assert act_vertex(g, "r^-1", act_vertex(g, "r", v)) == v


def test_word_parsing_round_trip():
    w = parse_word("a r^-1 a")
    assert w == (("a", 1), ("r", -1), ("a", 1))
    assert word_str(w) == "a r^-1 a"
    assert parse_word("1") == ()
    assert word_str(()) == "1"
    assert invert_word(w) == (("a", -1), ("r", 1), ("a", -1))


def test_action_errors():
    g = builtin_group("gamma")
    with pytest.raises(ValueError, match="unknown generator"):
        act_vertex(g, "z", "11")
    with pytest.raises(ValueError, match="outside"):
        act_vertex(g, "a", (4,))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_generators_are_bijections(name):
    g = builtin_group(name)
    levels = range(1, 9) if g.d == 2 else range(1, 7)
    for n in levels:
        everything = list(all_vertices(g.d, n))
        for gen in g.generators:
            images = {act_vertex(g, gen.symbol, v) for v in everything}
            assert len(images) == g.d**n


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_prefix_compatibility(name):
    g = builtin_group(name)
    rng = random.Random(99)
    symbols = [entry for entry in g.symmetric_set]
    for _ in range(40):
        n = rng.randint(1, 6)
        v = tuple(rng.randint(1, g.d) for _ in range(n))
        word = " ".join(rng.choice(symbols) for _ in range(rng.randint(0, 5)))
        image = act_vertex(g, word, v)
        for k in range(n + 1):
            assert act_vertex(g, word, v[:k]) == image[:k]


def test_involutions_square_to_identity():
    for name in ("grigorchuk", "grigorchuk-tilde"):
        g = builtin_group(name)
        for n in range(1, 9):
            for gen in g.generators:
                word = f"{gen.symbol} {gen.symbol}"
                assert all(act_vertex(g, word, v) == v for v in all_vertices(2, n))


def test_ggs_matches_builtins():
    pairs = [((1, 0), "gamma"), ((1, 1), "gamma-bar"), ((1, 2), "gamma-barbar")]
    for eps, name in pairs:
        custom = ggs_group(3, eps)
        ref = builtin_group(name)
        ref_symbol = ref.generators[1].symbol
        for n in range(1, 5):
            for v in all_vertices(3, n):
                assert act_vertex(custom, "a", v) == act_vertex(ref, "a", v)
                assert act_vertex(custom, "t", v) == act_vertex(ref, ref_symbol, v)


def test_ggs_zero_vector_acts_trivially():
    g = ggs_group(3, (0, 0))
    for n in range(0, 6):
        assert all(act_vertex(g, "t", v) == v for v in all_vertices(3, n))


def test_ggs_rotation_has_order_d():
    for d in (2, 3, 5):
        g = ggs_group(d, (1,) * (d - 1))
        for n in range(1, 4):
            word = " ".join(["a"] * d)
            assert all(act_vertex(g, word, v) == v for v in all_vertices(d, n))
            if d > 1:
                v = (1,) * n
                assert act_vertex(g, "a", v) != v


def test_ggs_validation():
    with pytest.raises(ValueError, match="not prime"):
        ggs_group(4, (1, 1, 1))
    with pytest.raises(ValueError, match="length"):
        ggs_group(3, (1,))


def test_ggs_binary_case_involutive():
    g = ggs_group(2, (1,))
    assert g.symmetric_set == ("a", "t")
    assert all(gen.involutive for gen in g.generators)


GAMMA_FILE = """
# ternary example
alphabet = 3
gen a = 2 3 1 | 1, 1, 1
gen r = id | a, 1, r
"""


def test_parse_group_matches_builtin():
    custom = parse_group(GAMMA_FILE)
    ref = builtin_group("gamma")
    assert custom.symmetric_set == ("a", "a^-1", "r", "r^-1")
    for v in all_vertices(3, 4):
        assert act_vertex(custom, "r", v) == act_vertex(ref, "r", v)
        assert act_vertex(custom, "a^-1", v) == act_vertex(ref, "a^-1", v)


def test_parse_group_involution_line():
    text = "alphabet = 2\ngen a = 2 1 | 1, 1\ngen b = id | a, b\ninvolution = a b\n"
    g = parse_group(text)
    assert g.symmetric_set == ("a", "b")


def test_parse_group_errors():
    with pytest.raises(ValueError, match="alphabet"):
        parse_group("gen a = 2 1 | 1, 1")
    with pytest.raises(ValueError, match="not a permutation"):
        parse_group("alphabet = 2\ngen a = 2 2 | 1, 1")
    with pytest.raises(ValueError, match="unknown symbol"):
        parse_group("alphabet = 2\ngen a = 2 1 | z, 1")
    with pytest.raises(ValueError, match="sections"):
        parse_group("alphabet = 3\ngen a = 2 3 1 | 1, 1")
    with pytest.raises(ValueError, match="unknown key"):
        parse_group("alphabet = 2\nfoo = bar")


def test_load_group(tmp_path):
    path = tmp_path / "ternary.group"
    path.write_text(GAMMA_FILE, encoding="utf-8")
    from treespectra.automata import load_group

    g = load_group(str(path))
    assert g.name == "ternary"
    assert g.d == 3


def test_vertex_str():
    assert vertex_str((1, 3)) == "13"
    assert vertex_str(()) == "e"
