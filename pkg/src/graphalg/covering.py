"""Covering maps of graphs: star-bijection certificates, walk lifting, lifted
spanning forests, and decomposition of a finite connected covering as a
relative skew product over its monodromy group.

Fibre points stand in for cosets of the image of the fundamental group; the
group acting on them is generated by the permutations obtained by lifting
``b_{s(e)} e b_{r(e)}^-1`` from each fibre point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import (
    GraphError,
    GraphMorphism,
    MultiGraph,
    NotConnectedError,
    ParseError,
    ReducedWalk,
    SignedEdge,
    SpanningTree,
    _tokens,
    is_connected,
    spanning_tree,
    weak_components,
)
from .groups import PermutationGroup, Subgroup, format_cycles
from .skew import SkewGraph, relative_skew
from .voltage import VoltageLabeling


class NotACoveringError(GraphError):
    def __init__(self, vertex: str, side: str, detail: str = ""):
        self.vertex, self.side, self.detail = vertex, side, detail
        msg = f"not a covering: {side}-star at {vertex} is not mapped bijectively"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True, eq=False)
class CoveringMorphism:
    """A morphism ``p: F -> E`` with its star bijections.

    ``out_star[w][e]`` is the unique edge leaving ``w`` over ``e``;
    ``in_star[w][e]`` the unique edge entering ``w`` over ``e``.
    """

    morphism: GraphMorphism
    out_star: dict = field(repr=False)
    in_star: dict = field(repr=False)

    @property
    def cover(self) -> MultiGraph:
        return self.morphism.source

    @property
    def base(self) -> MultiGraph:
        return self.morphism.target

    def fiber(self, v: str) -> tuple[str, ...]:
        return self.morphism.fiber(v)


def _star_bijection(p: GraphMorphism, w: str, side: str) -> dict[str, str]:
    f_graph, e_graph = p.source, p.target
    x = p.vertex_map[w]
    if side == "out":
        up, down = f_graph.out_edges(w), e_graph.out_edges(x)
    else:
        up, down = f_graph.in_edges(w), e_graph.in_edges(x)
    lifts: dict[str, str] = {}
    for f in up:
        e = p.edge_map[f.id]
        if e in lifts:
            raise NotACoveringError(w, side, f"two edges over {e}")
        lifts[e] = f.id
    missing = [e.id for e in down if e.id not in lifts]
    if missing:
        raise NotACoveringError(w, side, f"no edge over {missing[0]}")
    return lifts


def _random_walk(g: MultiGraph, start: str, length: int, rng: random.Random) -> ReducedWalk:
    steps: list[SignedEdge] = []
    u = start
    for _ in range(length):
        options = [SignedEdge(e.id) for e in g.out_edges(u)]
        options += [SignedEdge(e.id, True) for e in g.in_edges(u)]
        if steps:
            options = [s for s in options if s != steps[-1].inverse()]
        if not options:
            break
        s = rng.choice(options)
        steps.append(s)
        u = g.step_target(s)
    return ReducedWalk(start, u, tuple(steps))


def count_lifts(p: GraphMorphism, a: ReducedWalk, u: str) -> int:
    """Number of step sequences in ``F`` from ``u`` lying over ``a`` (brute force)."""
    f_graph = p.source
    frontier = {u: 1}
    for s in a.steps:
        nxt: dict[str, int] = {}
        for w, k in frontier.items():
            cands = f_graph.in_edges(w) if s.reverse else f_graph.out_edges(w)
            for f in cands:
                if p.edge_map[f.id] == s.edge:
                    t = f.src if s.reverse else f.dst
                    nxt[t] = nxt.get(t, 0) + k
        frontier = nxt
    return sum(frontier.values())


def verify_covering(p: GraphMorphism, samples: int = 32, seed: int = 0) -> CoveringMorphism:
    """Certify ``p`` as a covering map, or raise NotACoveringError.

    After the star checks, ``samples`` random reduced walks of ``E`` are
    lifted by brute force from every fibre point over their start and must
    have exactly one lift each.
    """
    p.source.require_row_finite()
    p.target.require_row_finite()
    outs, ins = {}, {}
    for w in p.source.vertices:
        outs[w] = _star_bijection(p, w, "out")
        ins[w] = _star_bijection(p, w, "in")
    cov = CoveringMorphism(p, outs, ins)
    rng = random.Random(seed)
    covered = [v for v in p.target.vertices if p.fiber(v)]
    for _ in range(samples if covered else 0):
        a = _random_walk(p.target, rng.choice(covered), rng.randint(0, 6), rng)
        for u in p.fiber(a.start):
            if count_lifts(p, a, u) != 1:
                raise AssertionError(f"star certificate and sampled lifting disagree on {a}")
    return cov


def has_unique_walk_lifting(p: GraphMorphism, max_length: int = 2) -> bool:
    """Every reduced walk of length at most ``max_length`` in ``E`` has exactly
    one lift from each point over its start (exhaustive)."""
    e_graph = p.target

    def walks(v):
        out = [ReducedWalk.unit(v)]
        frontier = [out[0]]
        for _ in range(max_length):
            nxt = []
            for a in frontier:
                u = a.end
                opts = [SignedEdge(e.id) for e in e_graph.out_edges(u)]
                opts += [SignedEdge(e.id, True) for e in e_graph.in_edges(u)]
                for s in opts:
                    if a.steps and s == a.steps[-1].inverse():
                        continue
                    nxt.append(ReducedWalk(a.start, e_graph.step_target(s), a.steps + (s,)))
            out += nxt
            frontier = nxt
        return out

    for v in e_graph.vertices:
        fib = p.fiber(v)
        if not fib:
            continue
        for a in walks(v):
            if any(count_lifts(p, a, u) != 1 for u in fib):
                return False
    return True


def lift_walk(cov: CoveringMorphism, a: ReducedWalk, u: str) -> ReducedWalk:
    """The unique walk from ``u`` lying over ``a``."""
    if cov.morphism.vertex_map.get(u) != a.start:
        raise GraphError(f"{u} does not lie over {a.start}")
    steps, w = [], u
    for s in a.steps:
        if s.reverse:
            f = cov.in_star[w][s.edge]
            w = cov.cover.edge(f).src
        else:
            f = cov.out_star[w][s.edge]
            w = cov.cover.edge(f).dst
        steps.append(SignedEdge(f, s.reverse))
    return ReducedWalk(u, w, tuple(steps))


def _require_connected(*gs: MultiGraph) -> None:
    for g in gs:
        if not is_connected(g):
            raise NotConnectedError("not connected")


def lift_forest(cov: CoveringMorphism, tree: SpanningTree) -> dict[str, SpanningTree]:
    """For each point ``u`` over the root, the lift of ``tree`` through ``u``.

    The lifts are pairwise disjoint, jointly span ``F``, and each maps
    bijectively onto ``tree``; all three facts are checked.
    """
    _require_connected(cov.base, cov.cover)
    out = {}
    for u in cov.fiber(tree.root):
        walks = {}
        edges = set()
        for w, b in tree.walks.items():
            lifted = lift_walk(cov, b, u)
            walks[lifted.end] = lifted
            edges.update(lifted.edge_ids)
        out[u] = SpanningTree(u, frozenset(edges), walks)
    seen: set[str] = set()
    for t in out.values():
        if seen & set(t.walks):
            raise AssertionError("lifted trees overlap")
        seen |= set(t.walks)
        if len(t.walks) != len(tree.walks) or len(t.edges) != len(tree.edges):
            raise AssertionError("lifted tree is not a copy of the base tree")
    if len(seen) != len(cov.cover.vertices):
        raise AssertionError("lifted trees do not span the cover")
    return out


@dataclass(frozen=True, eq=False)
class MonodromyPresentation:
    """Fibre over ``base`` (``fiber[i]`` is point ``i``) with, for every base
    edge, the permutation of fibre indices got by lifting its tree loop."""

    base: str
    tree: SpanningTree = field(repr=False)
    fiber: tuple[str, ...]
    permutations: dict[str, tuple[int, ...]]
    base_index: int
    group: PermutationGroup
    stabilizer: Subgroup = field(repr=False)

    def labelling(self, g: MultiGraph) -> VoltageLabeling:
        return VoltageLabeling(g, self.group, self.permutations)

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "tree": sorted(self.tree.edges),
            "fiber": list(self.fiber),
            "base_point": self.fiber[self.base_index],
            "permutations": {e: format_cycles(p) for e, p in self.permutations.items()},
            "group_order": self.group.order(),
            "stabilizer_order": self.stabilizer.order(),
            "regular": is_regular(self),
        }


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A covering presented as a relative skew product, with the isomorphism
    ``F -> skew`` sending a vertex in the lifted tree of point ``i`` to
    ``(p(u), coset of i)``."""

    presentation: MonodromyPresentation
    skew: SkewGraph = field(repr=False)
    isomorphism: GraphMorphism = field(repr=False)

    def to_dict(self) -> dict:
        out = self.presentation.to_dict()
        out["vertex_map"] = dict(sorted(self.isomorphism.vertex_map.items()))
        out["edge_map"] = dict(sorted(self.isomorphism.edge_map.items()))
        return out


def is_regular(m: MonodromyPresentation) -> bool:
    """The stabilizer of the base point is normal in the monodromy group."""
    return m.stabilizer.is_normal()


def decompose(cov: CoveringMorphism | GraphMorphism, v: str | None = None, tree: SpanningTree | None = None) -> Decomposition:
    if isinstance(cov, GraphMorphism):
        cov = verify_covering(cov)
    e_graph, f_graph = cov.base, cov.cover
    _require_connected(e_graph, f_graph)
    if v is None:
        v = tree.root if tree is not None else e_graph.vertices[0]
    tree = tree or spanning_tree(e_graph, v)
    if tree.root != v:
        raise GraphError(f"tree is rooted at {tree.root}, not {v}")
    fiber = cov.fiber(v)
    if not fiber:
        raise GraphError(f"empty fibre over {v}")
    pos = {u: i for i, u in enumerate(fiber)}
    forest = lift_forest(cov, tree)
    tree_of = {w: pos[u] for u, t in forest.items() for w in t.walks}

    perms = {}
    for e in e_graph.edges:
        loop = tree.walk_to(e.src) * ReducedWalk(e.src, e.dst, (SignedEdge(e.id),)) * tree.walk_to(e.dst).inverse()
        perms[e.id] = tuple(pos[lift_walk(cov, loop, u).end] for u in fiber)
    k = len(fiber)
    ident = tuple(range(k))
    gens = tuple(sorted({p for p in perms.values() if p != ident}))
    group = PermutationGroup(k, gens)
    stab = Subgroup(group, members=frozenset(x for x in group.elements() if x[0] == 0))
    pres = MonodromyPresentation(v, tree, fiber, perms, 0, group, stab)

    skew = relative_skew(e_graph, pres.labelling(e_graph), stab)
    # coset H x corresponds to fibre point x[0]
    coset_of = {x[0]: x for x in skew.points}
    if len(coset_of) != k:
        raise AssertionError("monodromy action is not transitive")
    vmap = {u: skew.vertex_ids[(cov.morphism.vertex_map[u], coset_of[tree_of[u]])] for u in f_graph.vertices}
    emap = {}
    for f in f_graph.edges:
        e = cov.morphism.edge_map[f.id]
        i = tree_of[f.src]
        if perms[e][i] != tree_of[f.dst]:
            raise AssertionError(f"edge {f.id} disagrees with the monodromy of {e}")
        emap[f.id] = skew.edge_ids[(e, coset_of[i])]
    phi = GraphMorphism(f_graph, skew.graph, vmap, emap)
    if len(set(vmap.values())) != len(skew.graph.vertices) or len(set(emap.values())) != len(skew.graph.edges):
        raise AssertionError("decomposition map is not bijective")
    for u in f_graph.vertices:
        if skew.projection.vertex_map[vmap[u]] != cov.morphism.vertex_map[u]:
            raise AssertionError("decomposition map does not commute with projections")
    return Decomposition(pres, skew, phi)


def component_coverings(p: GraphMorphism) -> list[GraphMorphism]:
    """Restrictions of ``p`` to the connected components of its source."""
    out = []
    f_graph = p.source
    for comp in weak_components(f_graph):
        inside = set(comp)
        sub = f_graph.subgraph(comp, [e.id for e in f_graph.edges if e.src in inside])
        out.append(
            GraphMorphism(
                sub,
                p.target,
                {u: p.vertex_map[u] for u in sub.vertices},
                {f: p.edge_map[f] for f in sub.edge_ids},
            )
        )
    return out


def parse_covering_map(text: str, cover: MultiGraph, base: MultiGraph) -> GraphMorphism:
    """Read ``vmap <F-vertex> <E-vertex>`` and ``emap <F-edge> <E-edge>`` lines."""
    vmap, emap = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        if len(toks) != 3 or toks[0] not in ("vmap", "emap"):
            raise ParseError("expected 'vmap <F-vertex> <E-vertex>' or 'emap <F-edge> <E-edge>'", lineno)
        table = vmap if toks[0] == "vmap" else emap
        if toks[1] in table:
            raise ParseError(f"{toks[1]} mapped twice", lineno)
        table[toks[1]] = toks[2]
    try:
        return GraphMorphism(cover, base, vmap, emap)
    except GraphError as exc:
        raise ParseError(str(exc)) from None
