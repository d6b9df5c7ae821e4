"""Edge labellings by group elements: walk voltages, T-voltages, local voltage
groups, and cohomology of labellings.

Labelling files hold lines ``label <edge-id> <element>``; an element is an
integer, or cycle notation such as ``(1 2 3)(4 5)`` for permutation groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .graph import (
    GraphError,
    MultiGraph,
    NotConnectedError,
    ParseError,
    ReducedWalk,
    SignedEdge,
    SpanningTree,
    concat,
    is_connected,
    spanning_tree,
)
from .groups import Group, GroupError, Integers, Subgroup


@dataclass(frozen=True, eq=False)
class VoltageLabeling:
    graph: MultiGraph
    group: Group
    values: Mapping[str, Any] = field(repr=False)

    def __post_init__(self):
        self.graph.require_row_finite()
        vals = dict(self.values)
        missing = [e for e in self.graph.edge_ids if e not in vals]
        if missing:
            raise GraphError(f"no label for edge {missing[0]}")
        extra = [e for e in vals if not self.graph.has_edge(e)]
        if extra:
            raise GraphError(f"label for unknown edge {extra[0]}")
        object.__setattr__(self, "values", {e: self.group.check(vals[e]) for e in self.graph.edge_ids})

    @classmethod
    def constant(cls, graph: MultiGraph, group: Group, value) -> "VoltageLabeling":
        return cls(graph, group, {e: value for e in graph.edge_ids})

    def __getitem__(self, eid: str):
        return self.values[eid]

    def step(self, a: SignedEdge):
        x = self.values[a.edge]
        return self.group.inv(x) if a.reverse else x

    def __eq__(self, other):
        if not isinstance(other, VoltageLabeling):
            return NotImplemented
        return self.graph == other.graph and self.group == other.group and self.values == other.values

    __hash__ = None


def ones(graph: MultiGraph, group: Group | None = None) -> VoltageLabeling:
    """The labelling ``c(e) = 1`` into the integers."""
    return VoltageLabeling.constant(graph, group or Integers(), 1)


def parse_labels(text: str, graph: MultiGraph, group: Group) -> VoltageLabeling:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if parts[0] != "label" or len(parts) != 3:
            raise ParseError("expected 'label <edge-id> <element>'", lineno)
        eid, elem = parts[1], parts[2].strip()
        if eid in values:
            raise ParseError(f"duplicate label for {eid}", lineno)
        try:
            values[eid] = group.parse(elem)
        except GroupError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        return VoltageLabeling(graph, group, values)
    except (GraphError, GroupError) as exc:
        raise ParseError(str(exc)) from None


def serialize_labels(c: VoltageLabeling) -> str:
    return "".join(f"label {e} {c.group.format(x)}\n" for e, x in c.values.items())


def walk_voltage(c: VoltageLabeling, a: ReducedWalk):
    """Product of the signed edge labels along ``a`` (identity for the empty walk)."""
    for s in a.steps:
        if not c.graph.has_edge(s.edge):
            raise GraphError(f"walk not in graph: unknown edge {s.edge}")
    return c.group.prod(c.step(s) for s in a.steps)


def _require_connected(g: MultiGraph) -> None:
    if not is_connected(g):
        raise NotConnectedError("not connected")


def t_voltage(c: VoltageLabeling, tree: SpanningTree, v: str | None = None) -> VoltageLabeling:
    """``c_{v,T}(e) = c(b_{s(e)} e b_{r(e)}^-1)`` with ``b_w`` the tree walks from the root."""
    if v is not None and v != tree.root:
        raise GraphError(f"base vertex {v} is not the root {tree.root} of the tree")
    g = c.graph
    out = {}
    for e in g.edges:
        edge_walk = ReducedWalk(e.src, e.dst, (SignedEdge(e.id),))
        closed = concat(concat(tree.walk_to(e.src), edge_walk), tree.walk_to(e.dst).inverse())
        if e.id in tree.edges and closed.steps:
            raise GraphError(f"tree edge {e.id} does not cancel against the tree walks")
        out[e.id] = walk_voltage(c, closed)
    return VoltageLabeling(g, c.group, out)


@dataclass(frozen=True, eq=False)
class LocalVoltageGroup:
    base: str
    subgroup: Subgroup
    generators: dict[str, Any]
    tree: SpanningTree = field(repr=False)

    def to_dict(self) -> dict:
        grp = self.subgroup.group
        return {
            "base": self.base,
            "subgroup": self.subgroup.describe(),
            "index": _card(self.subgroup.index()),
            "generators": {e: grp.format(x) for e, x in self.generators.items()},
        }


def _card(x):
    return x if isinstance(x, int) else "infinite"


def local_voltage_group(c: VoltageLabeling, v: str, tree: SpanningTree | None = None) -> LocalVoltageGroup:
    """Subgroup generated by the T-voltages of the non-tree edges."""
    _require_connected(c.graph)
    tree = tree or spanning_tree(c.graph, v)
    if tree.root != v:
        raise GraphError(f"tree is rooted at {tree.root}, not {v}")
    tv = t_voltage(c, tree)
    gens = {e: tv[e] for e in c.graph.edge_ids if e not in tree.edges}
    return LocalVoltageGroup(v, Subgroup.generated(c.group, gens.values()), gens, tree)


def _same_setting(c1: VoltageLabeling, c2: VoltageLabeling) -> None:
    if c1.group != c2.group:
        raise GroupError(f"group mismatch: {c1.group} vs {c2.group}")
    if c1.graph != c2.graph:
        raise GraphError("labellings live on different graphs")


def _propagate(c1, c2, tree, root_value):
    grp = c1.group
    b = {}
    for w, walk in tree.walks.items():
        x = root_value
        for s in walk.steps:
            e = c1.graph.edge(s.edge)
            if s.reverse:
                # b(s(e)) = c1(e) b(r(e)) c2(e)^-1
                x = grp.mul(grp.mul(c1[e.id], x), grp.inv(c2[e.id]))
            else:
                # b(r(e)) = c1(e)^-1 b(s(e)) c2(e)
                x = grp.mul(grp.mul(grp.inv(c1[e.id]), x), c2[e.id])
        b[w] = x
    for e in c1.graph.edges:
        if grp.mul(c1[e.id], b[e.dst]) != grp.mul(b[e.src], c2[e.id]):
            return None
    return b


def coboundary(c1: VoltageLabeling, c2: VoltageLabeling) -> dict[str, Any] | None:
    """A vertex function ``b`` with ``c1(e) b(r(e)) = b(s(e)) c2(e)``, or None.

    ``b`` is propagated along a spanning tree from the identity at the root;
    for non-abelian finite groups every root value is tried in turn.
    """
    _same_setting(c1, c2)
    _require_connected(c1.graph)
    if not c1.graph.vertices:
        return {}
    tree = spanning_tree(c1.graph, c1.graph.vertices[0])
    grp = c1.group
    candidates = [grp.identity()]
    if grp.finite and not grp.abelian:
        candidates += [x for x in grp.elements() if x != grp.identity()]
    for x in candidates:
        b = _propagate(c1, c2, tree, x)
        if b is not None:
            return b
    return None


def are_cohomologous(c1: VoltageLabeling, c2: VoltageLabeling) -> bool:
    return coboundary(c1, c2) is not None


def conjugate_local_groups(c: VoltageLabeling, v: str, w: str):
    """An element ``g`` with ``g Γ_v g^-1 = Γ_w``, or None if none exists.

    The candidate ``c(a)^-1`` for a tree walk ``a`` from ``v`` to ``w`` is tried
    first; for permutation groups the whole group is then searched.
    """
    _require_connected(c.graph)
    grp = c.group
    gv = local_voltage_group(c, v)
    gw = local_voltage_group(c, w)
    if grp.abelian:
        return grp.identity() if gv.subgroup == gw.subgroup else None
    a = gv.tree.walk_to(w)
    guess = grp.inv(walk_voltage(c, a))
    if gv.subgroup.conjugate(guess) == gw.subgroup:
        return guess
    for g in grp.elements():
        if gv.subgroup.conjugate(g) == gw.subgroup:
            return g
    return None
