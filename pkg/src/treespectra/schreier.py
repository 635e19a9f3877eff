"""Basepointed edge-labeled action graphs, their Markov operators, and growth.

Edges are stored as directed records (target, symbol, inverted) per start
vertex, closed under the reversal pairing: the record (u, v, s, False)
pairs with (v, u, s, True) for a non-involutive symbol s and with
(v, u, s, False) when s is an involution (a loop of an involutive symbol
is a single self-paired record).  Out-degree counts one per record.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .automata import SelfSimilarGroup, act_vertex, vertex_str
from .levelrep import WeightedOperator

EdgeRecord = tuple[int, str, bool]  # (target, base symbol, inverted flag)


def _label_str(symbol: str, inverted: bool) -> str:
    return f"{symbol}^-1" if inverted else symbol


@dataclass(frozen=True)
class LabeledGraph:
    names: tuple[str, ...]
    out_edges: tuple[tuple[EdgeRecord, ...], ...]
    basepoint: int
    involutive: frozenset[str]

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(self.out_edges) != n:
            raise ValueError("out_edges must have one tuple per vertex")
        if not 0 <= self.basepoint < n:
            raise ValueError("basepoint out of range")
        counts: dict[tuple[int, int, str, bool], int] = {}
        for u, records in enumerate(self.out_edges):
            for v, sym, inv in records:
                if not 0 <= v < n:
                    raise ValueError(f"edge target {v} out of range")
                key = (u, v, sym, inv)
                counts[key] = counts.get(key, 0) + 1
        for (u, v, sym, inv), cnt in counts.items():
            if sym in self.involutive:
                partner = (v, u, sym, False)
                if u == v:
                    continue  # self-paired loop record
            else:
                partner = (v, u, sym, not inv)
            if counts.get(partner, 0) != cnt:
                raise ValueError(f"edge {self.names[u]} -{_label_str(sym, inv)}-> {self.names[v]} lacks its reversal")

    @property
    def vertex_count(self) -> int:
        return len(self.names)

    def degree(self, v: int) -> int:
        return len(self.out_edges[v])

    @cached_property
    def regular_degree(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        degrees = {self.degree(v) for v in range(self.vertex_count)}
        return degrees.pop() if len(degrees) == 1 else None

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for records in self.out_edges:
            for _, sym, _ in records:
                seen.setdefault(sym)
        return tuple(sorted(seen))

    def label_map(self, v: int) -> dict[tuple[str, bool], int]:
        """Label -> target for vertex v; raises if any label repeats."""
        out: dict[tuple[str, bool], int] = {}
        for target, sym, inv in self.out_edges[v]:
            key = (sym, inv)
            if key in out:
                raise ValueError(f"vertex {self.names[v]} has multiple {_label_str(sym, inv)} edges")
            out[key] = target
        return out


def action_graph(group: SelfSimilarGroup, n: int) -> LabeledGraph:
    """Orbit graph of the level-n basepoint d^n under the symmetric set.

    The vertex set is the orbit computed by closure (not assumed to be the
    whole level), listed in digit-lexicographic order; each symmetric-set
    element contributes one out-edge per vertex.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    base = (group.d,) * n
    letters = [(entry, group.letter(entry)) for entry in group.symmetric_set]
    seen = {base}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for _, (sym, exp) in letters:
            w = act_vertex(group, ((sym, exp),), v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    ordered = sorted(seen)
    index = {v: i for i, v in enumerate(ordered)}
    involutive = frozenset(g.symbol for g in group.generators if g.involutive)
    out_edges = []
    for v in ordered:
        records = []
        for entry, (sym, exp) in letters:
            w = act_vertex(group, ((sym, exp),), v)
            records.append((index[w], sym, exp == -1))
        out_edges.append(tuple(records))
    return LabeledGraph(
        tuple(vertex_str(v) for v in ordered),
        tuple(out_edges),
        index[base],
        involutive,
    )


def is_level_transitive(group: SelfSimilarGroup, n: int) -> bool:
    """Whether the basepoint orbit at level n is the whole level."""
    return action_graph(group, n).vertex_count == group.d**n


def markov_operator(graph: LabeledGraph) -> WeightedOperator:
    """Transition operator of the simple random walk: entry (u,v) = #edges(u->v)/deg."""
    deg = graph.regular_degree
    if deg is None:
        raise ValueError("markov operator requires a regular graph")
    cells: dict[tuple[int, int], int] = {}
    for u, records in enumerate(graph.out_edges):
        for v, _, _ in records:
            cells[(u, v)] = cells.get((u, v), 0) + 1
    items = sorted(cells.items())
    rows = np.array([r for (r, _), _ in items], dtype=np.int64)
    cols = np.array([c for (_, c), _ in items], dtype=np.int64)
    vals = np.array([float(Fraction(k, deg)) for _, k in items])
    return WeightedOperator(graph.vertex_count, rows, cols, vals, True)


@dataclass(frozen=True)
class GrowthSeries:
    """Ball sizes gamma(0..rmax) around the basepoint, with the total vertex count."""

    values: tuple[int, ...]
    total_vertices: int

    def __post_init__(self) -> None:
        if not self.values or self.values[0] != 1:
            raise ValueError("growth series must start with gamma(0) = 1")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("growth series must be non-decreasing")
        if self.values[-1] > self.total_vertices:
            raise ValueError("growth exceeds vertex count")


def ball_growth(graph: LabeledGraph, rmax: int) -> GrowthSeries:
    """gamma(r) = number of vertices within graph distance r of the basepoint."""
    if rmax < 0:
        raise ValueError("rmax must be nonnegative")
    dist = {graph.basepoint: 0}
    queue = deque([graph.basepoint])
    values = [1]
    frontier_done = 0
    while queue and frontier_done < rmax:
        next_queue: deque[int] = deque()
        while queue:
            u = queue.popleft()
            for v, _, _ in graph.out_edges[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    next_queue.append(v)
        frontier_done += 1
        values.append(len(dist))
        queue = next_queue
    while len(values) <= rmax:
        values.append(values[-1])
    return GrowthSeries(tuple(values), graph.vertex_count)


def growth_exponent(series: GrowthSeries, window: tuple[int, int]) -> float:
    """Least-squares slope of log gamma(r) against log r over [rlo, rhi].

    The window must end before saturation: gamma(rhi) < half the vertex count.
    """
    rlo, rhi = window
    if rlo < 1 or rhi <= rlo or rhi >= len(series.values):
        raise ValueError(f"window {window} outside the series range 1..{len(series.values) - 1}")
    if series.values[rhi] >= 0.5 * series.total_vertices:
        raise ValueError(f"window end {rhi} is inside the saturation regime")
    rs = np.arange(rlo, rhi + 1, dtype=float)
    gs = np.asarray(series.values[rlo : rhi + 1], dtype=float)
    x = np.log(rs)
    y = np.log(gs)
    x -= x.mean()
    return float(np.dot(x, y) / np.dot(x, x))


def is_connected(graph: LabeledGraph) -> bool:
    return ball_growth(graph, graph.vertex_count).values[-1] == graph.vertex_count


def _parallel_bfs(g1: LabeledGraph, g2: LabeledGraph, rmax: int | None) -> bool:
    """Grow the label-respecting bijection from the basepoints; False on conflict.

    With rmax None the traversal must cover both graphs entirely.
    """
    for g in (g1, g2):
        for v in range(g.vertex_count):
            g.label_map(v)  # determinism check, raises if violated
    fwd: dict[int, int] = {g1.basepoint: g2.basepoint}
    bwd: dict[int, int] = {g2.basepoint: g1.basepoint}
    queue = deque([(g1.basepoint, 0)])
    while queue:
        u, depth = queue.popleft()
        if rmax is not None and depth >= rmax:
            continue
        m1 = g1.label_map(u)
        m2 = g2.label_map(fwd[u])
        if set(m1) != set(m2):
            return False
        for key, v1 in m1.items():
            v2 = m2[key]
            if v1 in fwd or v2 in bwd:
                if fwd.get(v1) != v2 or bwd.get(v2) != v1:
                    return False
                continue
            fwd[v1] = v2
            bwd[v2] = v1
            queue.append((v1, depth + 1))
    if rmax is None:
        return len(fwd) == g1.vertex_count == g2.vertex_count
    return True


def rooted_labeled_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Basepoint-preserving label-respecting isomorphism test.

    Both graphs must be deterministic per label (one out-edge per label at
    every vertex); otherwise a ValueError is raised rather than attempting a
    general isomorphism search.
    """
    if g1.vertex_count != g2.vertex_count:
        return False
    return _parallel_bfs(g1, g2, None)


def ball_agreement_radius(g1: LabeledGraph, g2: LabeledGraph, rmax: int) -> int:
    """Largest r <= rmax such that the radius-r basepoint balls agree."""
    lo = 0
    for r in range(1, rmax + 1):
        if not _parallel_bfs(g1, g2, r):
            return lo
        lo = r
    return lo


def _canonical_records(graph: LabeledGraph):
    """One record per reversal pair, ordered (start, symbol, target)."""
    out = []
    for u, records in enumerate(graph.out_edges):
        for v, sym, inv in records:
            if inv:
                continue  # emitted from the non-inverted side
            if sym in graph.involutive and v < u:
                continue  # the involutive pair is emitted from min(u, v)
            out.append((u, v, sym))
    out.sort(key=lambda rec: (rec[0], rec[2], rec[1]))
    return out


def to_dot(graph: LabeledGraph, name: str = "g") -> str:
    """DOT text: one edge per reversal pair in its canonical direction."""
    lines = [f'digraph "{name}" {{']
    lines.append(f'  graph [symbols="{",".join(graph.symbols)}", involutive="{",".join(sorted(graph.involutive))}"];')
    for i, vname in enumerate(graph.names):
        attr = " [basepoint=true]" if i == graph.basepoint else ""
        lines.append(f'  "{vname}"{attr};')
    for u, v, sym in _canonical_records(graph):
        lines.append(f'  "{graph.names[u]}" -> "{graph.names[v]}" [label="{sym}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(graph: LabeledGraph) -> str:
    """Edge-list CSV (canonical directions): start,end,label."""
    lines = ["start,end,label"]
    for u, v, sym in _canonical_records(graph):
        lines.append(f"{graph.names[u]},{graph.names[v]},{sym}")
    return "\n".join(lines) + "\n"


_DOT_GRAPH_RE = re.compile(r'graph\s*\[symbols="(?P<symbols>[^"]*)",\s*involutive="(?P<inv>[^"]*)"\]')
_DOT_NODE_RE = re.compile(r'^"(?P<name>[^"]*)"(?:\s*\[(?P<attrs>[^\]]*)\])?$')
_DOT_EDGE_RE = re.compile(r'^"(?P<u>[^"]*)"\s*->\s*"(?P<v>[^"]*)"\s*\[label="(?P<label>[^"]*)"\]$')


def from_dot(text: str) -> LabeledGraph:
    """Parse the DOT subset produced by to_dot."""
    involutive: frozenset[str] = frozenset()
    names: list[str] = []
    index: dict[str, int] = {}
    basepoint: int | None = None
    edges: list[tuple[str, str, str]] = []
    for raw in text.splitlines():
        line = raw.strip().rstrip(";")
        if not line or line.startswith(("digraph", "}")):
            continue
        m = _DOT_GRAPH_RE.search(line)
        if m:
            involutive = frozenset(s for s in m.group("inv").split(",") if s)
            continue
        m = _DOT_EDGE_RE.match(line)
        if m:
            edges.append((m.group("u"), m.group("v"), m.group("label")))
            continue
        m = _DOT_NODE_RE.match(line)
        if m:
            vname = m.group("name")
            if vname not in index:
                index[vname] = len(names)
                names.append(vname)
            if m.group("attrs") and "basepoint=true" in m.group("attrs"):
                basepoint = index[vname]
            continue
        raise ValueError(f"unparseable DOT line: {raw!r}")
    if basepoint is None:
        raise ValueError("no basepoint marked in DOT input")
    out: list[list[EdgeRecord]] = [[] for _ in names]
    for uname, vname, sym in edges:
        if uname not in index or vname not in index:
            raise ValueError(f"edge references undeclared vertex {uname!r} or {vname!r}")
        u, v = index[uname], index[vname]
        if sym in involutive:
            out[u].append((v, sym, False))
            if u != v:
                out[v].append((u, sym, False))
        else:
            out[u].append((v, sym, False))
            out[v].append((u, sym, True))
    ordered = [tuple(sorted(records, key=lambda r: (r[1], r[2], r[0]))) for records in out]
    return LabeledGraph(tuple(names), tuple(ordered), basepoint, involutive)
