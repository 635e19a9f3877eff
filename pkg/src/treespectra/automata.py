"""Self-similar groups acting on rooted trees, defined by wreath recursion.

A tree automorphism is given by a permutation of the d subtrees at the
root together with one automorphism (a word in the generators) per
subtree.  Vertices of the tree are tuples of digits in 1..d; the action
of a word on a vertex is evaluated recursively.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

Letter = tuple[str, int]  # (generator symbol, exponent +1 or -1)
Word = tuple[Letter, ...]
Vertex = tuple[int, ...]

BUILTIN_NAMES = (
    "grigorchuk",
    "grigorchuk-tilde",
    "gamma",
    "gamma-bar",
    "gamma-barbar",
)


def parse_word(text: str) -> Word:
    """Parse a whitespace-separated word such as ``"a r^-1 a"``.

    ``"1"`` and the empty string denote the identity.
    """
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for tok in text.split():
        if tok.endswith("^-1"):
            letters.append((tok[:-3], -1))
        else:
            letters.append((tok, 1))
    return tuple(letters)


def word_str(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(s if e == 1 else f"{s}^-1" for s, e in word)


def invert_word(word: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(word))


def parse_vertex(v: Vertex | str, d: int) -> Vertex:
    """Normalize a vertex given as a digit tuple or (for d <= 9) a digit string."""
    if isinstance(v, str):
        if d > 9:
            raise ValueError("string vertices only supported for d <= 9")
        v = tuple(int(ch) for ch in v)
    v = tuple(v)
    for digit in v:
        if not 1 <= digit <= d:
            raise ValueError(f"vertex digit {digit} outside 1..{d}")
    return v


def vertex_str(v: Vertex) -> str:
    """Digit-string form of a vertex; the root (empty word) prints as 'e'."""
    return "".join(str(digit) for digit in v) if v else "e"


@dataclass(frozen=True)
class Generator:
    """One generator: root permutation plus a section word per subtree."""

    symbol: str
    root: tuple[int, ...]  # image of digit i is root[i-1]
    sections: tuple[Word, ...]
    involutive: bool

    @cached_property
    def root_inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.root)
        for i, j in enumerate(self.root, start=1):
            inv[j - 1] = i
        return tuple(inv)


def _symbol_inverse(symbol: str) -> str:
    return symbol[:-3] if symbol.endswith("^-1") else symbol + "^-1"


@dataclass(frozen=True)
class SelfSimilarGroup:
    name: str
    d: int
    generators: tuple[Generator, ...]
    symmetric_set: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError("alphabet size must be at least 2")
        symbols = {g.symbol for g in self.generators}
        if len(symbols) != len(self.generators):
            raise ValueError("duplicate generator symbols")
        for g in self.generators:
            if sorted(g.root) != list(range(1, self.d + 1)):
                raise ValueError(f"root of {g.symbol} is not a permutation of 1..{self.d}")
            if len(g.sections) != self.d:
                raise ValueError(f"generator {g.symbol} needs {self.d} sections")
            for sec in g.sections:
                for sym, _ in sec:
                    if sym not in symbols:
                        raise ValueError(f"section of {g.symbol} references unknown symbol {sym!r}")
            if g.involutive and g.root != g.root_inverse:
                raise ValueError(f"root permutation of involutive generator {g.symbol} is not an involution")
        for entry in self.symmetric_set:
            base = entry[:-3] if entry.endswith("^-1") else entry
            if base not in symbols:
                raise ValueError(f"symmetric set references unknown generator {entry!r}")
            gen = next(g for g in self.generators if g.symbol == base)
            if not gen.involutive and _symbol_inverse(entry) not in self.symmetric_set:
                raise ValueError(f"symmetric set not closed under inversion: missing {_symbol_inverse(entry)!r}")

    @cached_property
    def by_symbol(self) -> dict[str, Generator]:
        return {g.symbol: g for g in self.generators}

    def generator(self, symbol: str) -> Generator:
        try:
            return self.by_symbol[symbol]
        except KeyError:
            raise ValueError(f"group {self.name!r} has no generator {symbol!r}") from None

    def letter(self, entry: str) -> Letter:
        """Symmetric-set entry string -> (symbol, exponent)."""
        if entry.endswith("^-1"):
            return (entry[:-3], -1)
        return (entry, 1)


def _act_word(group: SelfSimilarGroup, word: Word, v: Vertex) -> Vertex:
    # w = s1 ... sk acts as s1 applied last
    for sym, exp in reversed(word):
        v = _act_letter(group, group.generator(sym), exp, v)
    return v


def _act_letter(group: SelfSimilarGroup, gen: Generator, exp: int, v: Vertex) -> Vertex:
    if not v:
        return v
    first, rest = v[0], v[1:]
    if exp == 1 or gen.involutive:
        section = gen.sections[first - 1]
        return (gen.root[first - 1],) + _act_word(group, section, rest)
    source = gen.root_inverse[first - 1]
    section = invert_word(gen.sections[source - 1])
    return (source,) + _act_word(group, section, rest)


def act_vertex(group: SelfSimilarGroup, word: Word | str, v: Vertex | str) -> Vertex:
    """Apply a word in the generators to a tree vertex.

    The action preserves the level and is prefix compatible: the image of
    a prefix is the prefix of the image.
    """
    if isinstance(word, str):
        word = parse_word(word)
    v = parse_vertex(v, group.d)
    for sym, exp in word:
        if sym not in group.by_symbol:
            raise ValueError(f"word references unknown generator {sym!r}")
        if exp not in (1, -1):
            raise ValueError("letter exponents must be +1 or -1")
    return _act_word(group, tuple(word), v)


def all_vertices(d: int, n: int) -> Iterator[Vertex]:
    """Level-n vertices in digit-lexicographic order."""
    if n == 0:
        yield ()
        return
    for prefix in all_vertices(d, n - 1):
        for digit in range(1, d + 1):
            yield prefix + (digit,)


def _w(text: str) -> Word:
    return parse_word(text)


def builtin_group(name: str) -> SelfSimilarGroup:
    """One of the five built-in groups.

    grigorchuk        d=2, generators a,b,c,d; b=(a,c), c=(a,d), d=(1,b)
    grigorchuk-tilde  d=2, generators a,b,c,d; b=(a,c), c=(1,d), d=(1,b)
    gamma             d=3, generators a,r;  r=(a,1,r)
    gamma-bar         d=3, generators a,s;  s=(a,a,s)
    gamma-barbar      d=3, generators a,t;  t=(a,a^-1,t)
    """
    if name == "grigorchuk":
        swap = (2, 1)
        gens = (
            Generator("a", swap, ((), ()), True),
            Generator("b", (1, 2), (_w("a"), _w("c")), True),
            Generator("c", (1, 2), (_w("a"), _w("d")), True),
            Generator("d", (1, 2), ((), _w("b")), True),
        )
        return SelfSimilarGroup(name, 2, gens, ("a", "b", "c", "d"))
    if name == "grigorchuk-tilde":
        swap = (2, 1)
        gens = (
            Generator("a", swap, ((), ()), True),
            Generator("b", (1, 2), (_w("a"), _w("c")), True),
            Generator("c", (1, 2), ((), _w("d")), True),
            Generator("d", (1, 2), ((), _w("b")), True),
        )
        return SelfSimilarGroup(name, 2, gens, ("a", "b", "c", "d"))
    if name in ("gamma", "gamma-bar", "gamma-barbar"):
        cycle = (2, 3, 1)  # i -> i+1 with wraparound
        ident = (1, 2, 3)
        if name == "gamma":
            second = Generator("r", ident, (_w("a"), (), _w("r")), False)
        elif name == "gamma-bar":
            second = Generator("s", ident, (_w("a"), _w("a"), _w("s")), False)
        else:
            second = Generator("t", ident, (_w("a"), _w("a^-1"), _w("t")), False)
        gens = (Generator("a", cycle, ((), (), ()), False), second)
        sym = second.symbol
        return SelfSimilarGroup(name, 3, gens, ("a", "a^-1", sym, f"{sym}^-1"))
    raise ValueError(f"unknown group {name!r}; valid names: {', '.join(BUILTIN_NAMES)}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def ggs_group(d: int, epsilon: Iterable[int]) -> SelfSimilarGroup:
    """Group generated by the d-cycle a and t with sections (a^e1, ..., a^e(d-1), t).

    d must be prime and epsilon have length d-1; exponents are reduced mod d.
    """
    epsilon = tuple(int(e) % d for e in epsilon)
    if not _is_prime(d):
        raise ValueError(f"alphabet size {d} is not prime")
    if len(epsilon) != d - 1:
        raise ValueError(f"epsilon must have length {d - 1}, got {len(epsilon)}")
    cycle = tuple(i % d + 1 for i in range(1, d + 1))
    ident = tuple(range(1, d + 1))
    sections = tuple((("a", 1),) * e for e in epsilon) + ((("t", 1),),)
    involutive = d == 2  # squares vanish mod 2
    gens = (
        Generator("a", cycle, ((),) * d, involutive),
        Generator("t", ident, sections, involutive),
    )
    sym_set = ("a", "t") if involutive else ("a", "a^-1", "t", "t^-1")
    name = f"ggs-{d}-" + "".join(str(e) for e in epsilon)
    return SelfSimilarGroup(name, d, gens, sym_set)


def parse_group(text: str, name: str = "custom") -> SelfSimilarGroup:
    """Parse a group definition from its line-oriented text form.

    Syntax (one statement per line, ``#`` comments)::

        alphabet = 3
        gen a = 2 3 1 | 1, 1, 1
        gen r = id | a, 1, r
        involution = a b        # optional: declares involutive generators

    The permutation is the list of images of 1..d (``id`` for identity);
    each section is a word over generator names or ``1``.  Declared
    involutions are trusted beyond the root-permutation check; wrong
    declarations surface when level permutations are built.
    """
    d: int | None = None
    raw_gens: list[tuple[str, tuple[int, ...] | None, tuple[Word, ...]]] = []
    involutions: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "alphabet":
            d = int(value)
        elif key == "involution":
            involutions.update(value.split())
        elif key.startswith("gen "):
            sym = key[4:].strip()
            if "|" not in value:
                raise ValueError(f"line {lineno}: generator needs 'PERM | W1,...,Wd'")
            perm_part, words_part = value.split("|", 1)
            perm_part = perm_part.strip()
            perm = None if perm_part == "id" else tuple(int(tok) for tok in perm_part.split())
            words = tuple(parse_word(w) for w in words_part.split(","))
            raw_gens.append((sym, perm, words))
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if d is None:
        raise ValueError("missing 'alphabet = d' line")
    gens = []
    for sym, perm, words in raw_gens:
        root = perm if perm is not None else tuple(range(1, d + 1))
        gens.append(Generator(sym, root, words, sym in involutions))
    sym_set: list[str] = []
    for g in gens:
        sym_set.append(g.symbol)
        if not g.involutive:
            sym_set.append(g.symbol + "^-1")
    return SelfSimilarGroup(name, d, tuple(gens), tuple(sym_set))


def load_group(path: str) -> SelfSimilarGroup:
    """Load a group definition file (see parse_group for the syntax)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    import os

    return parse_group(text, name=os.path.splitext(os.path.basename(path))[0])
