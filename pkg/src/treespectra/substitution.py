"""Substitutional graph rewriting: axiom plus pattern -> replacement rules.

Each rewriting step finds all embeddings of the rule patterns (their images
must be pairwise vertex-disjoint), removes the matched vertices and matched
edges, splices in a fresh copy of the replacement per embedding, and
re-attaches every unmatched edge at a removed vertex x to the inclusion
image of x.  The basepoint follows its inclusion image.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .schreier import EdgeRecord, LabeledGraph, from_dot

MAX_PATTERN_VERTICES = 16


class DisjointnessError(ValueError):
    """Pattern embeddings overlap, contradicting the disjointness premise."""


@dataclass(frozen=True)
class SubstitutionRule:
    pattern: LabeledGraph
    replacement: LabeledGraph
    inclusion: tuple[int, ...]  # pattern vertex -> replacement vertex


@dataclass(frozen=True)
class SubstitutionSystem:
    axiom: LabeledGraph
    rules: tuple[SubstitutionRule, ...]

    def __post_init__(self) -> None:
        degree = self.axiom.regular_degree
        if degree is None:
            raise ValueError("axiom must be a regular graph")
        seen_symbols: set[str] = set()
        for rule in self.rules:
            pattern, replacement = rule.pattern, rule.replacement
            if len(rule.inclusion) != pattern.vertex_count:
                raise ValueError("inclusion must map every pattern vertex")
            if len(set(rule.inclusion)) != len(rule.inclusion):
                raise ValueError("inclusion must be injective")
            overlap = seen_symbols.intersection(pattern.symbols)
            if overlap:
                raise ValueError(f"patterns share labels: {sorted(overlap)}")
            seen_symbols.update(pattern.symbols)
            images = set(rule.inclusion)
            for x, ix in enumerate(rule.inclusion):
                if replacement.degree(ix) != pattern.degree(x):
                    raise ValueError(
                        f"inclusion image {replacement.names[ix]} has degree "
                        f"{replacement.degree(ix)}, pattern vertex {pattern.names[x]} has {pattern.degree(x)}"
                    )
            for v in range(replacement.vertex_count):
                if v not in images and replacement.degree(v) != degree:
                    raise ValueError(
                        f"replacement vertex {replacement.names[v]} outside the inclusion "
                        f"image must have full degree {degree}"
                    )

    @property
    def degree(self) -> int:
        return self.axiom.regular_degree  # type: ignore[return-value]


def _pattern_order(pattern: LabeledGraph) -> list[tuple[int, tuple[int, str, bool, bool] | None]]:
    """BFS placement order; each later vertex carries one anchor constraint.

    The anchor (other, symbol, inverted, outgoing) is an edge linking the new
    vertex to a vertex placed strictly earlier, used to enumerate candidates.
    """
    adjacency: list[list[tuple[int, str, bool, bool]]] = [[] for _ in range(pattern.vertex_count)]
    for u, records in enumerate(pattern.out_edges):
        for v, sym, inv in records:
            adjacency[u].append((v, sym, inv, True))
            adjacency[v].append((u, sym, inv, False))
    order: list[tuple[int, tuple[int, str, bool, bool] | None]] = []
    finished: set[int] = set()
    enqueued = {0}
    queue = [0]
    while queue:
        u = queue.pop(0)
        anchor = next(((v, sym, inv, out) for v, sym, inv, out in adjacency[u] if v in finished), None)
        order.append((u, anchor))
        finished.add(u)
        for v, _, _, _ in adjacency[u]:
            if v not in enqueued:
                enqueued.add(v)
                queue.append(v)
    if len(order) != pattern.vertex_count:
        raise ValueError("pattern must be connected")
    return order


def _edge_multiset(records) -> dict[tuple[int, str, bool], int]:
    out: dict[tuple[int, str, bool], int] = {}
    for rec in records:
        out[rec] = out.get(rec, 0) + 1
    return out


def find_embeddings(graph: LabeledGraph, pattern: LabeledGraph) -> list[tuple[int, ...]]:
    """All label-preserving injective embeddings, one canonical per image.

    Embeddings sharing the same image subgraph (vertex set and matched edges)
    are collapsed to the lexicographically least assignment.  The retained
    images must be pairwise vertex-disjoint; overlap raises DisjointnessError.
    """
    if pattern.vertex_count > MAX_PATTERN_VERTICES:
        raise ValueError(f"pattern has more than {MAX_PATTERN_VERTICES} vertices")
    order = _pattern_order(pattern)
    successors: list[dict[tuple[str, bool], list[int]]] = []
    for records in graph.out_edges:
        table: dict[tuple[str, bool], list[int]] = {}
        for v, sym, inv in records:
            table.setdefault((sym, inv), []).append(v)
        successors.append(table)

    def reversed_label(sym: str, inv: bool) -> tuple[str, bool]:
        return (sym, False) if sym in graph.involutive else (sym, not inv)

    pattern_out = [_edge_multiset(records) for records in pattern.out_edges]
    found: list[tuple[int, ...]] = []
    assignment = [-1] * pattern.vertex_count
    used: set[int] = set()

    def satisfied(u: int, img: int) -> bool:
        """Every pattern edge between u and an assigned vertex exists at img."""
        graph_out_u = _edge_multiset(graph.out_edges[img])
        for (v, sym, inv), cnt in pattern_out[u].items():
            target = img if v == u else assignment[v]
            if target == -1:
                continue
            if graph_out_u.get((target, sym, inv), 0) < cnt:
                return False
        for w in range(pattern.vertex_count):
            if w == u or assignment[w] == -1:
                continue
            for (v, sym, inv), cnt in pattern_out[w].items():
                if v == u and _edge_multiset(graph.out_edges[assignment[w]]).get((img, sym, inv), 0) < cnt:
                    return False
        return True

    def extend(pos: int) -> None:
        if pos == len(order):
            found.append(tuple(assignment))
            return
        u, anchor = order[pos]
        if anchor is None:
            candidates: list[int] | range = range(graph.vertex_count)
        else:
            v, sym, inv, outgoing = anchor
            img_v = assignment[v]
            if outgoing:  # pattern edge u -> v: candidates are label-preimages of img_v
                candidates = successors[img_v].get(reversed_label(sym, inv), [])
            else:  # pattern edge v -> u
                candidates = successors[img_v].get((sym, inv), [])
        for img in candidates:
            if img in used:
                continue
            assignment[u] = img
            if satisfied(u, img):
                used.add(img)
                extend(pos + 1)
                used.discard(img)
            assignment[u] = -1

    extend(0)
    by_image: dict[frozenset[int], tuple[int, ...]] = {}
    for emb in sorted(found):
        key = frozenset(emb)
        by_image.setdefault(key, emb)
    embeddings = sorted(by_image.values())
    for i, e1 in enumerate(embeddings):
        s1 = set(e1)
        for e2 in embeddings[i + 1 :]:
            shared = s1.intersection(e2)
            if shared:
                names = sorted(graph.names[v] for v in shared)
                raise DisjointnessError(f"embeddings overlap at vertices {names}")
    return embeddings


def _matched_edges(pattern: LabeledGraph, embedding: tuple[int, ...]) -> dict[tuple[int, int, str, bool], int]:
    matched: dict[tuple[int, int, str, bool], int] = {}
    for u, records in enumerate(pattern.out_edges):
        for v, sym, inv in records:
            key = (embedding[u], embedding[v], sym, inv)
            matched[key] = matched.get(key, 0) + 1
    return matched


def expand_once(system: SubstitutionSystem, graph: LabeledGraph) -> LabeledGraph:
    all_embeddings: list[tuple[SubstitutionRule, tuple[int, ...]]] = []
    for rule in system.rules:
        for emb in find_embeddings(graph, rule.pattern):
            all_embeddings.append((rule, emb))
    removed: dict[int, tuple[int, int]] = {}  # old vertex -> (embedding idx, pattern vertex)
    for k, (rule, emb) in enumerate(all_embeddings):
        for x, img in enumerate(emb):
            if img in removed:
                raise DisjointnessError(f"vertex {graph.names[img]} matched by two rules")
            removed[img] = (k, x)

    matched: dict[tuple[int, int, str, bool], int] = {}
    for (rule, emb) in all_embeddings:
        for key, cnt in _matched_edges(rule.pattern, emb).items():
            matched[key] = matched.get(key, 0) + cnt

    names: list[str] = []
    new_index: dict[int, int] = {}
    for v in range(graph.vertex_count):
        if v not in removed:
            new_index[v] = len(names)
            names.append(graph.names[v])
    fresh_base: list[int] = []
    for k, (rule, emb) in enumerate(all_embeddings):
        fresh_base.append(len(names))
        for rname in rule.replacement.names:
            names.append(f"{rname}.{k}")

    def landing(v: int) -> int:
        """New index of an old vertex, following the inclusion if it was removed."""
        if v in new_index:
            return new_index[v]
        k, x = removed[v]
        rule = all_embeddings[k][0]
        return fresh_base[k] + rule.inclusion[x]

    out: list[list[EdgeRecord]] = [[] for _ in names]
    for u, records in enumerate(graph.out_edges):
        for v, sym, inv in records:
            key = (u, v, sym, inv)
            if matched.get(key, 0) > 0:
                matched[key] -= 1
                continue
            out[landing(u)].append((landing(v), sym, inv))
    for k, (rule, emb) in enumerate(all_embeddings):
        base = fresh_base[k]
        for u, records in enumerate(rule.replacement.out_edges):
            for v, sym, inv in records:
                out[base + u].append((base + v, sym, inv))

    basepoint = landing(graph.basepoint)
    result = LabeledGraph(
        tuple(names),
        tuple(tuple(sorted(recs, key=lambda r: (r[1], r[2], r[0]))) for recs in out),
        basepoint,
        graph.involutive | frozenset().union(*(r.replacement.involutive for r in system.rules)),
    )
    degree = system.degree
    for v in range(result.vertex_count):
        if result.degree(v) != degree:
            raise ValueError(
                f"expansion broke regularity at {result.names[v]}: degree {result.degree(v)} != {degree}"
            )
    return result


def expand(system: SubstitutionSystem, steps: int) -> LabeledGraph:
    """Apply the rewriting rules steps times starting from the axiom."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    graph = system.axiom
    for _ in range(steps):
        graph = expand_once(system, graph)
    return graph


def _triangle(names: tuple[str, str, str], symbol: str, loops: tuple[str, ...] = ()) -> LabeledGraph:
    """Directed 3-cycle n0 -> n1 -> n2 -> n0 with optional extra loop symbols."""
    out: list[list[EdgeRecord]] = [[] for _ in names]
    for i in range(3):
        out[i].append(((i + 1) % 3, symbol, False))
        out[i].append(((i - 1) % 3, symbol, True))
    for sym in loops:
        for i in range(3):
            out[i].append((i, sym, False))
            out[i].append((i, sym, True))
    return LabeledGraph(names, tuple(tuple(r) for r in out), 2, frozenset())


def gamma_substitution_system() -> SubstitutionSystem:
    """The triangle rewriting system whose expansions match the gamma action graphs.

    Axiom: directed a-triangle on vertices 1,2,3 with an r-loop at each
    vertex, basepoint 3 (the level-1 action graph).  The rule replaces a bare
    a-triangle x1 -> x2 -> x3 by three a-triangles (one per xj, corners
    1xj, 2xj, 3xj), joins the 1-corners by an r-cycle that follows the
    pattern's a-orientation, puts an r-loop on each 2-corner, and includes
    xj at its 3-corner, where re-attached outer edges land.
    """
    axiom = _triangle(("1", "2", "3"), "a", loops=("r",))
    pattern = _triangle(("x1", "x2", "x3"), "a")
    rnames = tuple(f"{i}x{j}" for j in (1, 2, 3) for i in (1, 2, 3))
    index = {name: i for i, name in enumerate(rnames)}
    out: list[list[EdgeRecord]] = [[] for _ in rnames]
    for j in (1, 2, 3):
        for i in (1, 2, 3):
            target = index[f"{i % 3 + 1}x{j}"]
            out[index[f"{i}x{j}"]].append((target, "a", False))
            out[target].append((index[f"{i}x{j}"], "a", True))
    for j in (1, 2, 3):
        nxt = j % 3 + 1
        out[index[f"1x{j}"]].append((index[f"1x{nxt}"], "r", False))
        out[index[f"1x{nxt}"]].append((index[f"1x{j}"], "r", True))
        out[index[f"2x{j}"]].append((index[f"2x{j}"], "r", False))
        out[index[f"2x{j}"]].append((index[f"2x{j}"], "r", True))
    replacement = LabeledGraph(rnames, tuple(tuple(r) for r in out), index["3x3"], frozenset())
    inclusion = tuple(index[f"3x{j}"] for j in (1, 2, 3))
    return SubstitutionSystem(axiom, (SubstitutionRule(pattern, replacement, inclusion),))


def load_substitution_system(manifest_path: str) -> SubstitutionSystem:
    """Load a system from a manifest referencing DOT files.

    Manifest syntax (paths relative to the manifest, ``#`` comments)::

        axiom = axiom.dot
        rule = pattern.dot -> replacement.dot
        iota x1 = 3x1
        iota x2 = 3x2
        iota x3 = 3x3

    Each ``rule`` line starts a rule; following ``iota`` lines map pattern
    vertex names to replacement vertex names.
    """
    base = os.path.dirname(os.path.abspath(manifest_path))

    def read_graph(rel: str) -> LabeledGraph:
        with open(os.path.join(base, rel), encoding="utf-8") as fh:
            return from_dot(fh.read())

    axiom: LabeledGraph | None = None
    rules: list[tuple[LabeledGraph, LabeledGraph, dict[str, str]]] = []
    with open(manifest_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "axiom":
                axiom = read_graph(value)
            elif key == "rule":
                if "->" not in value:
                    raise ValueError(f"line {lineno}: rule needs 'pattern.dot -> replacement.dot'")
                ppath, rpath = (part.strip() for part in value.split("->", 1))
                rules.append((read_graph(ppath), read_graph(rpath), {}))
            elif key.startswith("iota "):
                if not rules:
                    raise ValueError(f"line {lineno}: iota before any rule")
                rules[-1][2][key[5:].strip()] = value
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
    if axiom is None:
        raise ValueError("manifest declares no axiom")
    built = []
    for pattern, replacement, iota in rules:
        rindex = {name: i for i, name in enumerate(replacement.names)}
        inclusion = []
        for pname in pattern.names:
            if pname not in iota:
                raise ValueError(f"missing iota mapping for pattern vertex {pname!r}")
            inclusion.append(rindex[iota[pname]])
        built.append(SubstitutionRule(pattern, replacement, tuple(inclusion)))
    return SubstitutionSystem(axiom, tuple(built))
