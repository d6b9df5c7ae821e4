"""Skew products of a labelled graph: relative products over a finite coset
space, finite windows of the integer skew product, and component structure.

Product vertices and edges are named ``<base-id>@<point>`` where the point is
a canonical coset representative (least element of ``H g``; an integer in
``[0, d)`` for ``Z / dZ``) or an integer level in a window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .graph import (
    Edge,
    GraphError,
    GraphMorphism,
    MultiGraph,
    NotConnectedError,
    SpanningTree,
    is_connected,
    is_strongly_connected,
    spanning_tree,
    weak_components,
)
from .groups import GroupError, Integers, Subgroup
from .structure import NotStronglyConnectedError, path_threshold, period
from .voltage import (
    LocalVoltageGroup,
    VoltageLabeling,
    local_voltage_group,
    t_voltage,
    walk_voltage,
)


def point_id(base_id: str, label: str) -> str:
    return f"{base_id}@{label}"


@dataclass(frozen=True, eq=False)
class SkewGraph:
    """``E x_c (H \\ G)`` as a concrete graph.

    ``points`` lists the fibre labels in order: canonical coset
    representatives, or the elements of a local voltage group when
    ``subgroup`` is None.  ``vertex_ids[(v, x)]`` and ``edge_ids[(e, x)]`` give
    the product ids.
    """

    base: MultiGraph
    labelling: VoltageLabeling = field(repr=False)
    subgroup: Subgroup | None
    points: tuple
    graph: MultiGraph = field(repr=False)
    projection: GraphMorphism = field(repr=False)
    vertex_ids: dict = field(repr=False)
    edge_ids: dict = field(repr=False)

    def covering(self):
        """The projection certified as a covering map."""
        from .covering import verify_covering

        return verify_covering(self.projection)

    def components(self) -> list[tuple[str, ...]]:
        return weak_components(self.graph)


def _product(base: MultiGraph, c: VoltageLabeling, points: Sequence, act: Callable, fmt: Callable):
    labels = {x: fmt(x) for x in points}
    if len(set(labels.values())) != len(labels):
        raise GraphError("fibre labels are not distinct")
    vids = {(v, x): point_id(v, labels[x]) for x in points for v in base.vertices}
    eids, edges = {}, []
    for x in points:
        for e in base.edges:
            y = act(x, c[e.id])
            if y not in labels:
                raise GroupError(f"edge {e.id} moves {labels[x]} outside the fibre")
            eid = point_id(e.id, labels[x])
            eids[(e.id, x)] = eid
            edges.append(Edge(eid, vids[(e.src, x)], vids[(e.dst, y)]))
    graph = MultiGraph(tuple(vids[(v, x)] for x in points for v in base.vertices), tuple(edges))
    proj = GraphMorphism(
        graph,
        base,
        {vid: v for (v, _), vid in vids.items()},
        {eid: e for (e, _), eid in eids.items()},
    )
    return graph, proj, vids, eids


def relative_skew(g: MultiGraph, c: VoltageLabeling, subgroup: Subgroup | None = None) -> SkewGraph:
    """Relative skew product ``E x_c (H \\ G)`` with ``H = subgroup``.

    Vertices ``(v, Hx)``; the edge ``(e, Hx)`` runs from ``(s(e), Hx)`` to
    ``(r(e), Hx c(e))``.  ``subgroup`` defaults to the trivial subgroup, which
    needs a finite group.
    """
    if c.graph != g:
        raise GraphError("labelling is for a different graph")
    g.require_row_finite()
    grp = c.group
    h = subgroup if subgroup is not None else Subgroup.trivial(grp)
    if h.group != grp:
        raise GroupError(f"subgroup of {h.group}, labelling into {grp}")
    if h.index() == math.inf:
        raise GroupError("infinite coset space")
    points = tuple(h.cosets())
    graph, proj, vids, eids = _product(
        g, c, points, lambda x, y: h.coset_rep(grp.mul(x, y)), grp.format_id
    )
    return SkewGraph(g, c, h, points, graph, proj, vids, eids)


# -- integer windows ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ZWindow:
    """Levels ``lo..hi`` of ``E x_c Z``; the edge ``(e, n)`` is kept when both
    ``n`` and ``n + c(e)`` lie in the window."""

    base: MultiGraph
    labelling: VoltageLabeling = field(repr=False)
    lo: int
    hi: int
    graph: MultiGraph = field(repr=False)
    level: dict = field(repr=False)
    projection: GraphMorphism = field(repr=False)

    def vertex(self, v: str, n: int) -> str:
        return point_id(v, str(n))

    def is_acyclic(self) -> bool:
        from .graph import nontrivial_sccs

        return not nontrivial_sccs(self.graph)

    def is_graded(self) -> bool:
        """Every edge raises the level by exactly one."""
        return all(self.level[e.dst] == self.level[e.src] + 1 for e in self.graph.edges)


def _z_window(g: MultiGraph, c: VoltageLabeling, lo: int, hi: int) -> ZWindow:
    if not isinstance(c.group, Integers):
        raise GroupError("integer windows need a labelling into Z")
    if c.graph != g:
        raise GraphError("labelling is for a different graph")
    g.require_row_finite()
    levels = range(lo, hi + 1)
    vertices, level = [], {}
    for n in levels:
        for v in g.vertices:
            vid = point_id(v, str(n))
            vertices.append(vid)
            level[vid] = n
    edges, vmap, emap = [], {}, {}
    for n in levels:
        for e in g.edges:
            m = n + c[e.id]
            if lo <= m <= hi:
                eid = point_id(e.id, str(n))
                edges.append(Edge(eid, point_id(e.src, str(n)), point_id(e.dst, str(m))))
                emap[eid] = e.id
    for vid in vertices:
        vmap[vid] = vid.rsplit("@", 1)[0]
    graph = MultiGraph(tuple(vertices), tuple(edges))
    return ZWindow(g, c, lo, hi, graph, level, GraphMorphism(graph, g, vmap, emap))


def z_window(g: MultiGraph, c: VoltageLabeling, lo: int, hi: int) -> ZWindow:
    """Levels ``lo..hi`` (``lo < hi``) of the integer skew product."""
    if not lo < hi:
        raise GraphError(f"empty window {lo}..{hi}")
    return _z_window(g, c, lo, hi)


# -- component structure -----------------------------------------------------


def _require_connected(g: MultiGraph) -> None:
    if not is_connected(g):
        raise NotConnectedError("not connected")


class _ComponentIndex:
    """Answers same-component queries from one local group and tree walks."""

    def __init__(self, c: VoltageLabeling, v: str | None = None):
        g = c.graph
        _require_connected(g)
        self.c = c
        self.base = v if v is not None else g.vertices[0]
        self.local = local_voltage_group(c, self.base)
        # c(b_w): voltage of the tree walk base -> w
        self.tree_voltage = {w: walk_voltage(c, self.local.tree.walk_to(w)) for w in g.vertices}
        self.grp = c.group

    def same(self, a: tuple[str, Any], b: tuple[str, Any]) -> bool:
        (w, x), (u, y) = a, b
        grp = self.grp
        # walk a: w -> u via the base; test x^-1 y c(a)^-1 in Gamma_w, moved to the base
        cw, cu = self.tree_voltage[w], self.tree_voltage[u]
        z = grp.mul(grp.mul(cw, grp.mul(grp.inv(x), y)), grp.inv(cu))
        return z in self.local.subgroup


def same_component(g: MultiGraph, c: VoltageLabeling, a: tuple[str, Any], b: tuple[str, Any]) -> bool:
    """Whether ``(v, x)`` and ``(u, y)`` lie in one component of ``E x_c G``.

    True iff ``x^-1 y c(a)^-1`` lies in the local voltage group at ``v`` for
    a walk ``a: v -> u``.
    """
    if c.graph != g:
        raise GraphError("labelling is for a different graph")
    _require_connected(g)
    grp = c.group
    for w, x in (a, b):
        g.index(w)
        grp.check(x)
    return _ComponentIndex(c, a[0]).same(a, b)


def component_count(g: MultiGraph, c: VoltageLabeling) -> int | float:
    """Number of components of ``E x_c G``: the index of the local voltage group
    (``math.inf`` when infinite)."""
    if c.graph != g:
        raise GraphError("labelling is for a different graph")
    _require_connected(g)
    if not g.vertices:
        return 0
    return local_voltage_group(c, g.vertices[0]).subgroup.index()


@dataclass(frozen=True, eq=False)
class ComponentSkew:
    """One component of ``E x_c G`` presented as ``E x_{c_{v,T}} Gamma_v``.

    ``skew`` is a SkewGraph over the elements of the local group for finite
    groups, or a ZWindow over ``Z`` (levels in units of the period ``d``) for
    the integers.  ``vertex_map`` and ``edge_map`` send its ids to the ids of
    the full product.
    """

    base: str
    labelling: VoltageLabeling = field(repr=False)
    local: LocalVoltageGroup
    skew: SkewGraph | ZWindow = field(repr=False)
    vertex_map: dict = field(repr=False)
    edge_map: dict = field(repr=False)
    scale: int | None = None

    def to_dict(self) -> dict:
        out = {
            "base": self.base,
            "local_group": self.local.to_dict(),
            "vertices": len(self.skew.graph.vertices),
            "edges": len(self.skew.graph.edges),
        }
        if self.scale is not None:
            out["period"] = self.scale
            out["window"] = [self.skew.lo, self.skew.hi]
        return out


def component_as_skew(
    g: MultiGraph,
    c: VoltageLabeling,
    tree: SpanningTree | None = None,
    v: str | None = None,
    window: tuple[int, int] | None = None,
) -> ComponentSkew:
    """The component of ``(v, 1)`` in ``E x_c G`` as a skew product by the
    T-voltage over the local voltage group, with the map
    ``(w, x) -> (w, x c(b_w))``, ``(e, x) -> (e, x c(b_{s(e)}))`` verified.

    For the integers the local group is ``dZ``; the T-voltage is divided by
    ``d`` and a window of ``E x_{c_{v,T}/d} Z`` is returned (default levels
    ``0..|E^0|``).
    """
    if c.graph != g:
        raise GraphError("labelling is for a different graph")
    _require_connected(g)
    g.require_row_finite()
    if v is None:
        v = tree.root if tree is not None else g.vertices[0]
    tree = tree or spanning_tree(g, v)
    local = local_voltage_group(c, v, tree)
    cvt = t_voltage(c, tree)
    grp = c.group
    bw = {w: walk_voltage(c, tree.walk_to(w)) for w in g.vertices}
    if isinstance(grp, Integers):
        return _integer_component(g, c, cvt, local, bw, window)

    members = tuple(local.subgroup.elements())
    mset = set(members)
    for e in g.edge_ids:
        if cvt[e] not in mset:
            raise GroupError(f"T-voltage of {e} escapes the local group")
    graph, proj, vids, eids = _product(g, cvt, members, grp.mul, grp.format_id)
    sk = SkewGraph(g, cvt, None, members, graph, proj, vids, eids)

    full = relative_skew(g, c)
    vmap = {vids[(w, x)]: full.vertex_ids[(w, grp.mul(x, bw[w]))] for (w, x) in vids}
    emap = {}
    for (eid, x), sid in eids.items():
        emap[sid] = full.edge_ids[(eid, grp.mul(x, bw[g.edge(eid).src]))]
    phi = GraphMorphism(graph, full.graph, vmap, emap)
    target = next(comp for comp in full.components() if full.vertex_ids[(v, grp.identity())] in comp)
    if sorted(vmap.values()) != sorted(target) or len(set(emap.values())) != len(emap):
        raise AssertionError("component map is not a bijection onto the component")
    comp_edges = {e.id for e in full.graph.edges if e.src in set(target)}
    if set(emap.values()) != comp_edges:
        raise AssertionError("component map misses edges of the component")
    return ComponentSkew(v, cvt, local, sk, phi.vertex_map, phi.edge_map)


def _integer_component(g, c, cvt, local, bw, window):
    d = local.subgroup.modulus
    if d == 0:
        scaled = VoltageLabeling(g, c.group, {e: 0 for e in g.edge_ids})
        lo, hi = 0, 0
    else:
        scaled = VoltageLabeling(g, c.group, {e: cvt[e] // d for e in g.edge_ids})
        lo, hi = window if window is not None else (0, len(g.vertices))
    win = _z_window(g, scaled, lo, hi)
    vmap, emap = {}, {}
    for w in g.vertices:
        for n in range(lo, hi + 1):
            vmap[point_id(w, str(n))] = point_id(w, str(n * d + bw[w]))
    for e in win.graph.edges:
        base = win.projection.edge_map[e.id]
        src, dst = g.edge(base).src, g.edge(base).dst
        n = win.level[e.src]
        full_src = n * d + bw[src]
        # the full-product edge (base, full_src) must land where phi sends r(e)
        if full_src + c[base] != win.level[e.dst] * d + bw[dst]:
            raise AssertionError(f"component map breaks at edge {e.id}")
        emap[e.id] = point_id(base, str(full_src))
    idx = _ComponentIndex(c, local.base)
    for vid, fid in vmap.items():
        w, lvl = fid.rsplit("@", 1)
        if not idx.same((local.base, 0), (w, int(lvl))):
            raise AssertionError(f"{fid} is not in the component of the base")
    return ComponentSkew(local.base, cvt, local, win, vmap, emap, scale=d)


# -- cofinality of integer components ------------------------------------------


@dataclass(frozen=True)
class ComponentCofinality:
    """Window certificate that each component of ``E x_1 Z`` is cofinal:
    from every start level in ``0..max(N,1) d`` each component vertex reaches
    every component vertex at least ``(N+1) d`` levels later."""

    holds: bool
    period: int
    threshold: int
    window: tuple[int, int]
    checked: int

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "period": self.period,
            "threshold": self.threshold,
            "window": list(self.window),
            "checked": self.checked,
        }


def z_component_cofinal(g: MultiGraph) -> ComponentCofinality:
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("not strongly connected")
    g.require_row_finite()
    from .graph import reachable
    from .voltage import ones

    v = g.vertices[0]
    rep = period(g, v)
    d, res = rep.period, rep.residues
    big_n = max(path_threshold(g, w, u).threshold for w in g.vertices for u in g.vertices)
    span = max(big_n, 1) * d
    hi = 2 * span + d
    win = _z_window(g, ones(g), 0, hi)
    checked, holds = 0, True
    for n in range(0, span + 1):
        for w in g.vertices:
            if (n - res[w]) % d:
                continue
            start = win.vertex(w, n)
            reach = reachable(win.graph, [start])
            for m in range(n + (big_n + 1) * d, hi + 1):
                for u in g.vertices:
                    if (m - res[u]) % d:
                        continue
                    checked += 1
                    if win.vertex(u, m) not in reach:
                        holds = False
    return ComponentCofinality(holds, d, big_n, (0, hi), checked)


def cohomologous_isomorphism(c1: VoltageLabeling, c2: VoltageLabeling, b: dict) -> GraphMorphism:
    """``(v, x) -> (v, x b(v))`` from ``E x_{c1} G`` to ``E x_{c2} G`` for a
    coboundary with ``c1(e) b(r(e)) = b(s(e)) c2(e)``; finite groups."""
    s1, s2 = relative_skew(c1.graph, c1), relative_skew(c2.graph, c2)
    grp = c1.group
    vmap = {vid: s2.vertex_ids[(w, grp.mul(x, b[w]))] for (w, x), vid in s1.vertex_ids.items()}
    emap = {}
    for (e, x), eid in s1.edge_ids.items():
        emap[eid] = s2.edge_ids[(e, grp.mul(x, b[c1.graph.edge(e).src]))]
    return GraphMorphism(s1.graph, s2.graph, vmap, emap)
