"""Path-space structure: periods, residue classes, eventual thresholds,
condition (K), cofinality, hereditary and saturated closures, deep paths.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .graph import (
    GraphError,
    MultiGraph,
    ReducedWalk,
    SignedEdge,
    distances,
    is_nontrivial_class,
    is_strongly_connected,
    nontrivial_sccs,
    reachable,
    scc_partition,
)


class NotStronglyConnectedError(GraphError):
    pass


def sinks(g: MultiGraph) -> frozenset[str]:
    return frozenset(v for v in g.vertices if not g.out_edges(v))


def sources(g: MultiGraph) -> frozenset[str]:
    return frozenset(v for v in g.vertices if not g.in_edges(v))


def is_row_finite(g: MultiGraph) -> bool:
    return g.is_row_finite


def infinite_emitters(g: MultiGraph) -> frozenset[str]:
    return frozenset(e.src for e in g.edges if e.infinite)


def _sorted(g: MultiGraph, vs: Iterable[str]) -> list[str]:
    return sorted(vs, key=g.index)


def _class_of(g: MultiGraph, v: str) -> tuple[str, ...]:
    g.index(v)
    return next(c for c in scc_partition(g) if v in c)


def _require_strongly_connected(g: MultiGraph) -> None:
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("not strongly connected")


# -- period and residues -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class PeriodReport:
    base: str
    period: int
    residues: dict[str, int] = field(default_factory=dict)
    witnesses: tuple[ReducedWalk, ...] = ()

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "period": self.period,
            "residues": dict(self.residues),
            "witnesses": [list(w.edge_ids) for w in self.witnesses],
        }


def _bfs_tree(g: MultiGraph, v: str, allowed: set[str], reverse: bool = False):
    """Directed BFS inside ``allowed``; returns (distance, edge to parent)."""
    dist, via = {v: 0}, {}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for e in g.in_edges(u) if reverse else g.out_edges(u):
            w = e.src if reverse else e.dst
            if w in allowed and w not in dist:
                dist[w] = dist[u] + 1
                via[w] = e.id
                queue.append(w)
    return dist, via


def period(g: MultiGraph, v: str) -> PeriodReport:
    """Period of ``v`` and residue classes of its strongly connected class.

    Uses BFS levels inside the class: the period is the gcd, over internal
    edges ``u -> w``, of ``level(u) + 1 - level(w)``.  Returns period 0 when no
    loop passes through ``v``.
    """
    cls = _class_of(g, v)
    if not is_nontrivial_class(g, cls):
        return PeriodReport(v, 0)
    inside = set(cls)
    level, down = _bfs_tree(g, v, inside)
    back, up = _bfs_tree(g, v, inside, reverse=True)
    internal = [e for e in g.edges if e.src in inside and e.dst in inside]
    d = 0
    for e in internal:
        d = math.gcd(d, level[e.src] + 1 - level[e.dst])
    residues = {w: level[w] % d for w in _sorted(g, inside)}

    def path_from_v(w):
        steps = []
        while w != v:
            eid = down[w]
            steps.append(eid)
            w = g.edge(eid).src
        return steps[::-1]

    def path_to_v(w):
        steps = []
        while w != v:
            eid = up[w]
            steps.append(eid)
            w = g.edge(eid).dst
        return steps

    # loops v -> s(e) -> r(e) -> v; their lengths have gcd d, keep those that lower it
    witnesses, running = [], 0
    for e in internal:
        ids = path_from_v(e.src) + [e.id] + path_to_v(e.dst)
        new = math.gcd(running, len(ids))
        if new != running:
            running = new
            witnesses.append(ReducedWalk(v, v, tuple(SignedEdge(x) for x in ids)))
        if running == d:
            break
    return PeriodReport(v, d, residues, tuple(witnesses))


def _length_hits(g: MultiGraph, v: str, w: str, max_len: int) -> np.ndarray:
    """``hits[n]`` is True iff some path of length ``n`` runs from ``v`` to ``w``."""
    a = (g.adjacency_matrix() > 0).astype(np.int64)
    x = np.zeros(len(g.vertices), dtype=np.int64)
    x[g.index(v)] = 1
    iw = g.index(w)
    hits = np.zeros(max_len + 1, dtype=bool)
    for n in range(max_len + 1):
        hits[n] = x[iw] > 0
        x = np.minimum(x @ a, 1)
    return hits


def _first_window(ok: np.ndarray, start: int, window: int) -> int:
    run = 0
    for k in range(start, len(ok)):
        run = run + 1 if ok[k] else 0
        if run == window:
            return k - window + 1
    raise RuntimeError("no stable window found below the search cap")


def _k_cap(n: int) -> int:
    return n * n + 2 * n + 2


def eventual_loop_threshold(g: MultiGraph, v: str) -> int:
    """Least ``N >= 1`` with a loop of length ``k d`` at ``v`` for every ``k >= N``.

    Certified by ``|E^0| d + 1`` consecutive successes: realisable lengths are
    closed under addition and the shortest loop at ``v`` has at most
    ``|E^0|`` edges, so such a run propagates to every later multiple.
    """
    _require_strongly_connected(g)
    d = period(g, v).period
    n = len(g.vertices)
    window = n * d + 1
    kmax = _k_cap(n) + window
    hits = _length_hits(g, v, v, kmax * d)
    ok = hits[:: d][: kmax + 1]
    return _first_window(ok, 1, window)


class PathThreshold(NamedTuple):
    residue: int
    threshold: int


def path_threshold(g: MultiGraph, v: str, w: str) -> PathThreshold:
    """Residue ``r`` of ``w`` relative to ``v`` and least ``N >= 0`` such that
    paths ``v -> w`` of length ``k d + r`` exist for all ``k >= N``.

    Length-0 paths count, so ``path_threshold(g, v, v)`` starts at ``k = 0``.
    """
    _require_strongly_connected(g)
    rep = period(g, v)
    d, r = rep.period, rep.residues[w]
    n = len(g.vertices)
    window = n * d + 1
    kmax = _k_cap(n) + window
    hits = _length_hits(g, v, w, kmax * d + r)
    ok = hits[r:: d][: kmax + 1]
    return PathThreshold(r, _first_window(ok, 0, window))


def aperiodic_power(g: MultiGraph) -> int | None:
    """Least ``k <= (n-1)^2 + 1`` with every entry of ``A_E^k`` positive, else None."""
    n = len(g.vertices)
    if n == 0:
        return None
    a = (g.adjacency_matrix() > 0).astype(np.int64)
    p = a.copy()
    for k in range(1, (n - 1) ** 2 + 2):
        if p.all():
            return k
        p = np.minimum(p @ a, 1)
    return None


# -- condition (K) -----------------------------------------------------------


@dataclass(frozen=True)
class ConditionK:
    holds: bool
    vertex: str | None = None
    loop: ReducedWalk | None = None

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "vertex": self.vertex,
            "loop": list(self.loop.edge_ids) if self.loop else None,
        }


def condition_K(g: MultiGraph) -> ConditionK:
    """Decide whether no vertex is the base of exactly one simple loop.

    A simple loop at ``v`` returns to ``v`` only at its end.  A vertex on a
    loop has exactly one such loop iff its strongly connected class is a bare
    cycle (every member emits exactly one edge inside the class); any extra
    internal edge yields a second simple loop at every member.  The witness is
    the first vertex of the first bare cycle with that loop.
    """
    for cls in nontrivial_sccs(g):
        inside = set(cls)
        out = {}
        for u in cls:
            internal = [e for e in g.out_edges(u) if e.dst in inside]
            if len(internal) != 1 or internal[0].infinite:
                break
            out[u] = internal[0]
        else:
            v = cls[0]
            steps, u = [], v
            while True:
                steps.append(SignedEdge(out[u].id))
                u = out[u].dst
                if u == v:
                    break
            return ConditionK(False, v, ReducedWalk(v, v, tuple(steps)))
    return ConditionK(True)


# -- cofinality --------------------------------------------------------------


@dataclass(frozen=True)
class Cofinality:
    cofinal: bool
    vertex: str | None = None
    component: tuple[str, ...] | None = None

    def __bool__(self):
        return self.cofinal

    def to_dict(self) -> dict:
        return {
            "cofinal": self.cofinal,
            "vertex": self.vertex,
            "component": list(self.component) if self.component else None,
        }


def is_cofinal(g: MultiGraph) -> Cofinality:
    """Every vertex reaches every strongly connected class that carries a loop.

    On a finite vertex set an infinite path is eventually trapped in such a
    class, and every such class carries one, so this is exactly cofinality.
    The witness is a vertex together with a class it cannot reach.
    """
    for cls in nontrivial_sccs(g):
        into = reachable(g, cls, reverse=True)
        if len(into) < len(g.vertices):
            bad = next(u for u in g.vertices if u not in into)
            return Cofinality(False, bad, cls)
    return Cofinality(True)


def cofinal_sc_subgraph(g: MultiGraph) -> MultiGraph | None:
    """Strongly connected cofinal subgraph of a cofinal graph, else None.

    ``F^0`` is the unique class containing every vertex on a loop and ``F^1``
    every edge leaving it; returned only when ``r(F^1)`` stays in ``F^0`` and
    every vertex reaches ``F^0``.
    """
    loops = nontrivial_sccs(g)
    if len(loops) != 1:
        return None
    inside = set(loops[0])
    f1 = [e for e in g.edges if e.src in inside]
    if any(e.dst not in inside for e in f1):
        return None
    if len(reachable(g, inside, reverse=True)) != len(g.vertices):
        return None
    return MultiGraph(tuple(loops[0]), tuple(f1))


# -- hereditary and saturated sets -------------------------------------------


def _check_vertices(g: MultiGraph, xs: Iterable[str]) -> set[str]:
    out = set()
    for x in xs:
        if not g.has_vertex(x):
            raise GraphError(f"unknown vertex {x}")
        out.add(x)
    return out


def hereditary_closure(g: MultiGraph, xs: Iterable[str]) -> frozenset[str]:
    """All vertices reached from ``xs`` by paths of length >= 0."""
    return frozenset(reachable(g, _check_vertices(g, xs)))


def is_hereditary(g: MultiGraph, hs: Iterable[str]) -> bool:
    hs = set(hs)
    return all(e.dst in hs for e in g.edges if e.src in hs)


def is_saturated(g: MultiGraph, hs: Iterable[str]) -> bool:
    hs = set(hs)
    return not _saturation_step(g, hs)


def _saturation_step(g: MultiGraph, hs: set[str]) -> list[str]:
    out = []
    for v in g.vertices:
        if v in hs:
            continue
        es = g.out_edges(v)
        if es and not any(e.infinite for e in es) and all(e.dst in hs for e in es):
            out.append(v)
    return out


@dataclass(frozen=True)
class SaturatedClosure:
    input: frozenset[str]
    hereditary: frozenset[str]
    saturated: frozenset[str]
    steps: tuple[tuple[str, ...], ...] = ()

    def to_dict(self, g: MultiGraph | None = None) -> dict:
        key = g.index if g is not None else None
        return {
            "input": sorted(self.input, key=key),
            "hereditary": sorted(self.hereditary, key=key),
            "saturated": sorted(self.saturated, key=key),
            "steps": [list(s) for s in self.steps],
        }


def saturated_closure(g: MultiGraph, xs: Iterable[str]) -> SaturatedClosure:
    """Smallest saturated hereditary set containing ``xs``, with its audit trail.

    Each round adds every vertex that emits a finite nonzero number of edges,
    all landing in the current set; sinks and infinite emitters never join.
    """
    xs = frozenset(_check_vertices(g, xs))
    lx = hereditary_closure(g, xs)
    hs = set(lx)
    steps = []
    while True:
        new = _saturation_step(g, hs)
        if not new:
            break
        steps.append(tuple(new))
        hs.update(new)
    return SaturatedClosure(xs, lx, frozenset(hs), tuple(steps))


# -- deep paths --------------------------------------------------------------


def deep_paths(g: MultiGraph, v: str, n: int) -> list[ReducedWalk]:
    """Paths of length ``n`` from ``v`` whose ``i``-th vertex is at distance ``i``.

    ``V(i)`` is read as the set of vertices within distance ``i`` of ``v``, so
    the ranges of these paths are exactly ``V(n) \\ V(n-1)``.
    """
    if n < 1:
        raise GraphError("depth must be at least 1")
    dist = distances(g, v)
    out: list[ReducedWalk] = []

    def grow(u: str, steps: list[str]) -> None:
        i = len(steps)
        if i == n:
            out.append(ReducedWalk(v, u, tuple(SignedEdge(e) for e in steps)))
            return
        for e in g.out_edges(u):
            if dist.get(e.dst) == i + 1:
                steps.append(e.id)
                grow(e.dst, steps)
                steps.pop()

    grow(v, [])
    return out


def distance_layer(g: MultiGraph, v: str, n: int) -> frozenset[str]:
    """``V(n) \\ V(n-1)``: vertices whose shortest path from ``v`` has length ``n``."""
    return frozenset(w for w, k in distances(g, v).items() if k == n)
