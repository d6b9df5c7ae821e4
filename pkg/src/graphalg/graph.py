"""Directed multigraphs, their text format, and the reduced-walk groupoid.

A graph file holds one statement per line::

    vertex <id>
    edge <id> <src> <dst> [<multiplicity>|inf]

A token starting with ``#`` begins a comment.  An edge with multiplicity
``k > 1`` is expanded into the records ``<id>#1 .. <id>#k``; ``inf`` keeps a
single record flagged as standing for infinitely many parallel edges.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

INF = "inf"


class GraphError(ValueError):
    """Malformed graph data, or an operation used outside its domain."""


class ParseError(GraphError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class NotConnectedError(GraphError):
    pass


class NotRowFiniteError(GraphError):
    pass


def _check_id(kind: str, ident: str) -> None:
    if not isinstance(ident, str) or not ident or any(c.isspace() for c in ident):
        raise GraphError(f"invalid {kind} id {ident!r}")


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    infinite: bool = False


@dataclass(frozen=True)
class MultiGraph:
    """A finite directed multigraph.

    Vertices and edges keep their declaration order; every derived listing
    (stars, components, reports) follows it, which keeps output deterministic.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        declared = set()
        for v in self.vertices:
            _check_id("vertex", v)
            if v in declared:
                raise GraphError(f"duplicate vertex {v}")
            declared.add(v)
        ids = set()
        for e in self.edges:
            _check_id("edge", e.id)
            if e.id in ids:
                raise GraphError(f"duplicate edge {e.id}")
            ids.add(e.id)
            for end in (e.src, e.dst):
                if end not in declared:
                    raise GraphError(f"undeclared vertex {end}")

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable[str] | None = None) -> "MultiGraph":
        """Build from ``(id, src, dst)`` or ``(id, src, dst, infinite)`` tuples.

        Without ``vertices`` the vertex set is the set of endpoints, in order of
        first appearance.
        """
        recs = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        if vertices is None:
            vertices = list(dict.fromkeys(v for e in recs for v in (e.src, e.dst)))
        return cls(tuple(vertices), tuple(recs))

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _stars(self):
        out = {v: [] for v in self.vertices}
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
            inc[e.dst].append(e)
        return ({v: tuple(es) for v, es in out.items()}, {v: tuple(es) for v, es in inc.items()})

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_index

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_index

    def index(self, v: str) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        self.index(v)
        return self._stars[0][v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        self.index(v)
        return self._stars[1][v]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def is_row_finite(self) -> bool:
        return not any(e.infinite for e in self.edges)

    def require_row_finite(self) -> None:
        if not self.is_row_finite:
            bad = next(e.id for e in self.edges if e.infinite)
            raise NotRowFiniteError(f"not row-finite (edge {bad} has infinite multiplicity)")

    def adjacency_matrix(self) -> np.ndarray:
        """Vertex incidence matrix; an infinite record counts once."""
        n = len(self.vertices)
        a = np.zeros((n, n), dtype=np.int64)
        for e in self.edges:
            a[self._vertex_index[e.src], self._vertex_index[e.dst]] += 1
        return a

    @cached_property
    def _sparse(self):
        n = len(self.vertices)
        rows = [self._vertex_index[e.src] for e in self.edges]
        cols = [self._vertex_index[e.dst] for e in self.edges]
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))

    def subgraph(self, vertices: Iterable[str], edge_ids: Iterable[str] | None = None) -> "MultiGraph":
        """Induced-order subgraph; by default keeps every edge inside ``vertices``."""
        keep = set(vertices)
        vs = tuple(v for v in self.vertices if v in keep)
        if edge_ids is None:
            es = tuple(e for e in self.edges if e.src in keep and e.dst in keep)
        else:
            wanted = set(edge_ids)
            es = tuple(e for e in self.edges if e.id in wanted)
        return MultiGraph(vs, es)

    # -- signed edges ----------------------------------------------------

    def step_source(self, a: "SignedEdge") -> str:
        e = self.edge(a.edge)
        return e.dst if a.reverse else e.src

    def step_target(self, a: "SignedEdge") -> str:
        e = self.edge(a.edge)
        return e.src if a.reverse else e.dst

    def __repr__(self):
        return f"MultiGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


# -- text format -------------------------------------------------------------


def _tokens(line: str) -> list[str]:
    out = []
    for tok in line.split():
        if tok.startswith("#"):
            break
        out.append(tok)
    return out


def parse_graph(text: str) -> MultiGraph:
    vertices: list[str] = []
    seen_v: set[str] = set()
    edges: list[Edge] = []
    edge_lines: dict[str, int] = {}
    pending: list[tuple[int, Edge]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        kw, args = toks[0], toks[1:]
        if kw == "vertex":
            if len(args) != 1:
                raise ParseError("expected 'vertex <id>'", lineno)
            v = args[0]
            if v in seen_v:
                raise ParseError(f"duplicate vertex {v}", lineno)
            seen_v.add(v)
            vertices.append(v)
        elif kw == "edge":
            if len(args) not in (3, 4):
                raise ParseError("expected 'edge <id> <src> <dst> [<multiplicity>|inf]'", lineno)
            eid, src, dst = args[:3]
            mult: int | str = 1
            if len(args) == 4:
                tok = args[3]
                if tok.lower() == INF:
                    mult = INF
                else:
                    try:
                        mult = int(tok)
                    except ValueError:
                        raise ParseError(f"bad multiplicity {tok!r}", lineno) from None
                    if mult < 1:
                        raise ParseError(f"multiplicity must be positive, got {mult}", lineno)
            if mult == INF:
                recs = [Edge(eid, src, dst, True)]
            elif mult == 1:
                recs = [Edge(eid, src, dst)]
            else:
                recs = [Edge(f"{eid}#{k}", src, dst) for k in range(1, mult + 1)]
            for rec in recs:
                if rec.id in edge_lines:
                    raise ParseError(f"duplicate edge {rec.id}", lineno)
                edge_lines[rec.id] = lineno
                pending.append((lineno, rec))
        else:
            raise ParseError(f"unknown statement {kw!r}", lineno)

    for lineno, rec in pending:
        for end in (rec.src, rec.dst):
            if end not in seen_v:
                raise ParseError(f"undeclared vertex {end}", lineno)
        edges.append(rec)
    try:
        return MultiGraph(tuple(vertices), tuple(edges))
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def serialize_graph(g: MultiGraph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    for e in g.edges:
        lines.append(f"edge {e.id} {e.src} {e.dst}" + (" inf" if e.infinite else ""))
    return "\n".join(lines) + "\n"


def to_dot(g: MultiGraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f'  "{v}";' for v in g.vertices]
    for e in g.edges:
        style = ", style=bold" if e.infinite else ""
        lines.append(f'  "{e.src}" -> "{e.dst}" [label="{e.id}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- walks -------------------------------------------------------------------


@dataclass(frozen=True)
class SignedEdge:
    edge: str
    reverse: bool = False

    def inverse(self) -> "SignedEdge":
        return SignedEdge(self.edge, not self.reverse)

    def __str__(self):
        return f"{self.edge}^-1" if self.reverse else self.edge


def _as_step(a) -> SignedEdge:
    return a if isinstance(a, SignedEdge) else SignedEdge(a)


@dataclass(frozen=True)
class ReducedWalk:
    """An element of the fundamental groupoid: a walk with no ``a a^-1``.

    The empty walk carries its base vertex in ``start`` (== ``end``).
    """

    start: str
    end: str
    steps: tuple[SignedEdge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps and self.start != self.end:
            raise GraphError("empty walk must start and end at the same vertex")
        for a, b in zip(self.steps, self.steps[1:]):
            if b == a.inverse():
                raise GraphError(f"walk is not reduced at {a} {b}")

    @classmethod
    def unit(cls, v: str) -> "ReducedWalk":
        return cls(v, v, ())

    def __len__(self):
        return len(self.steps)

    @property
    def is_path(self) -> bool:
        return not any(a.reverse for a in self.steps)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(a.edge for a in self.steps)

    def inverse(self) -> "ReducedWalk":
        return ReducedWalk(self.end, self.start, tuple(a.inverse() for a in reversed(self.steps)))

    def __mul__(self, other: "ReducedWalk") -> "ReducedWalk":
        return concat(self, other)

    def __str__(self):
        if not self.steps:
            return f"[{self.start}]"
        return "[" + " ".join(map(str, self.steps)) + "]"


def reduce_walk(g: MultiGraph, steps: Sequence, start: str | None = None) -> ReducedWalk:
    """Cancel every ``a a^-1`` in a composable sequence of signed edges.

    Plain strings are read as forward edges.  ``start`` is required for the
    empty sequence and checked otherwise.
    """
    seq = [_as_step(a) for a in steps]
    if not seq:
        if start is None:
            raise GraphError("empty walk needs a base vertex")
        g.index(start)
        return ReducedWalk.unit(start)
    first = g.step_source(seq[0])
    if start is not None and start != first:
        raise GraphError(f"walk starts at {first}, not {start}")
    for a, b in zip(seq, seq[1:]):
        if g.step_target(a) != g.step_source(b):
            raise GraphError(f"steps {a} and {b} do not compose")
    stack: list[SignedEdge] = []
    for a in seq:
        if stack and stack[-1] == a.inverse():
            stack.pop()
        else:
            stack.append(a)
    return ReducedWalk(first, g.step_target(seq[-1]), tuple(stack))


def concat(a: ReducedWalk, b: ReducedWalk) -> ReducedWalk:
    if a.end != b.start:
        raise GraphError(f"walks do not compose: {a.end} != {b.start}")
    left = list(a.steps)
    i = 0
    while left and i < len(b.steps) and left[-1] == b.steps[i].inverse():
        left.pop()
        i += 1
    return ReducedWalk(a.start, b.end, tuple(left) + b.steps[i:])


def inverse(a: ReducedWalk) -> ReducedWalk:
    return a.inverse()


def path(g: MultiGraph, edge_ids: Sequence[str], start: str | None = None) -> ReducedWalk:
    """A directed path given by its edges (already reduced)."""
    return reduce_walk(g, [SignedEdge(e) for e in edge_ids], start)


# -- spanning trees ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpanningTree:
    """A rooted tree with its tree walks ``walks[w]`` from the root to ``w``."""

    root: str
    edges: frozenset[str]
    walks: Mapping[str, ReducedWalk] = field(repr=False)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.walks)

    def walk_to(self, w: str) -> ReducedWalk:
        try:
            return self.walks[w]
        except KeyError:
            raise GraphError(f"{w} is not a vertex of the tree") from None


def spanning_tree(g: MultiGraph, root: str) -> SpanningTree:
    """Deterministic spanning tree of a connected graph.

    Vertices are settled in order of (reverse steps used, walk length, edge id,
    forward before reverse), so the tree walks are directed paths wherever the
    root reaches a vertex, and ties always break the same way.
    """
    g.index(root)
    walks = {root: ReducedWalk.unit(root)}
    cost = {root: (0, 0)}
    heap: list = []

    def push(u: str) -> None:
        nrev, depth = cost[u]
        for e in g.out_edges(u):
            if e.dst not in walks:
                heapq.heappush(heap, (nrev, depth + 1, e.id, 0))
        for e in g.in_edges(u):
            if e.src not in walks:
                heapq.heappush(heap, (nrev + 1, depth + 1, e.id, 1))

    push(root)
    tree: set[str] = set()
    while heap:
        nrev, depth, eid, rev = heapq.heappop(heap)
        e = g.edge(eid)
        parent, child = (e.dst, e.src) if rev else (e.src, e.dst)
        if child in walks:
            continue
        step = SignedEdge(eid, bool(rev))
        walks[child] = ReducedWalk(root, child, walks[parent].steps + (step,))
        cost[child] = (nrev, depth)
        tree.add(eid)
        push(child)
    if len(walks) != len(g.vertices):
        raise NotConnectedError("not connected")
    ordered = {v: walks[v] for v in g.vertices}
    return SpanningTree(root, frozenset(tree), ordered)


def tree_from_edges(g: MultiGraph, root: str, edge_ids: Iterable[str]) -> SpanningTree:
    """Wrap a given edge set as a spanning tree rooted at ``root``.

    Raises if the edges contain a cycle (as undirected connections) or do not
    reach every vertex.
    """
    ids = set(edge_ids)
    adj: dict[str, list[SignedEdge]] = {v: [] for v in g.vertices}
    for eid in sorted(ids):
        e = g.edge(eid)
        if e.src == e.dst:
            raise GraphError(f"tree edge {eid} is a loop")
        adj[e.src].append(SignedEdge(eid))
        adj[e.dst].append(SignedEdge(eid, True))
    g.index(root)
    walks = {root: ReducedWalk.unit(root)}
    queue = deque([root])
    used = set()
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            if a.edge in used:
                continue
            w = g.step_target(a)
            if w in walks:
                raise GraphError(f"tree edges contain a cycle through {a.edge}")
            used.add(a.edge)
            walks[w] = ReducedWalk(root, w, walks[u].steps + (a,))
            queue.append(w)
    if len(walks) != len(g.vertices):
        raise NotConnectedError("tree edges do not span the graph")
    if used != ids:
        raise GraphError("tree edges are not connected")
    return SpanningTree(root, frozenset(ids), {v: walks[v] for v in g.vertices})


# -- connectivity ------------------------------------------------------------


def _label_classes(g: MultiGraph, labels: np.ndarray) -> list[tuple[str, ...]]:
    classes: dict[int, list[str]] = {}
    for v, lab in zip(g.vertices, labels):
        classes.setdefault(int(lab), []).append(v)
    return [tuple(vs) for vs in classes.values()]


def weak_components(g: MultiGraph) -> list[tuple[str, ...]]:
    if not g.vertices:
        return []
    _, labels = connected_components(g._sparse, directed=True, connection="weak")
    return _label_classes(g, labels)


def is_connected(g: MultiGraph) -> bool:
    return len(weak_components(g)) <= 1


def scc_partition(g: MultiGraph) -> list[tuple[str, ...]]:
    """Classes of mutual reachability, ordered by their first vertex."""
    if not g.vertices:
        return []
    _, labels = connected_components(g._sparse, directed=True, connection="strong")
    return _label_classes(g, labels)


def is_nontrivial_class(g: MultiGraph, cls: Sequence[str]) -> bool:
    """True if the class carries a loop (more than one vertex, or a loop edge)."""
    if len(cls) > 1:
        return True
    v = cls[0]
    return any(e.dst == v for e in g.out_edges(v))


def nontrivial_sccs(g: MultiGraph) -> list[tuple[str, ...]]:
    return [c for c in scc_partition(g) if is_nontrivial_class(g, c)]


def is_strongly_connected(g: MultiGraph) -> bool:
    """Every ordered pair, including ``(v, v)``, is joined by a path of length >= 1."""
    parts = scc_partition(g)
    return len(parts) == 1 and is_nontrivial_class(g, parts[0])


def reachable(g: MultiGraph, sources: Iterable[str], reverse: bool = False) -> set[str]:
    """Vertices reached from ``sources`` by directed paths of length >= 0."""
    seen = set()
    queue = deque()
    for v in sources:
        g.index(v)
        if v not in seen:
            seen.add(v)
            queue.append(v)
    while queue:
        u = queue.popleft()
        nbrs = (e.src for e in g.in_edges(u)) if reverse else (e.dst for e in g.out_edges(u))
        for w in nbrs:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def distances(g: MultiGraph, v: str, within: Iterable[str] | None = None) -> dict[str, int]:
    """Directed BFS distances from ``v``, optionally restricted to a vertex set."""
    allowed = None if within is None else set(within)
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for e in g.out_edges(u):
            w = e.dst
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


# -- morphisms ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    """A pair of maps ``F^0 -> E^0``, ``F^1 -> E^1`` respecting source and range."""

    source: MultiGraph
    target: MultiGraph
    vertex_map: Mapping[str, str] = field(repr=False)
    edge_map: Mapping[str, str] = field(repr=False)

    def __post_init__(self):
        vm, em = dict(self.vertex_map), dict(self.edge_map)
        if set(vm) != set(self.source.vertices):
            raise GraphError("vertex map is not total on the source graph")
        if set(em) != set(self.source.edge_ids):
            raise GraphError("edge map is not total on the source graph")
        for v, x in vm.items():
            self.target.index(x)
        for f in self.source.edges:
            e = self.target.edge(em[f.id])
            if vm[f.src] != e.src or vm[f.dst] != e.dst:
                raise GraphError(f"edge {f.id} -> {e.id} does not respect source/range")
        object.__setattr__(self, "vertex_map", vm)
        object.__setattr__(self, "edge_map", em)

    @classmethod
    def identity(cls, g: MultiGraph) -> "GraphMorphism":
        return cls(g, g, {v: v for v in g.vertices}, {e: e for e in g.edge_ids})

    def map_walk(self, a: ReducedWalk) -> ReducedWalk:
        steps = tuple(SignedEdge(self.edge_map[s.edge], s.reverse) for s in a.steps)
        return reduce_walk(self.target, steps, self.vertex_map[a.start])

    def fiber(self, v: str) -> tuple[str, ...]:
        return tuple(u for u in self.source.vertices if self.vertex_map[u] == v)
