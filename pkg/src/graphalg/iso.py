"""Backtracking isomorphism search for small multigraphs."""

from __future__ import annotations

from collections import Counter, defaultdict, deque

from .graph import GraphMorphism, MultiGraph


def _colours(g: MultiGraph, over: GraphMorphism | None):
    if over is None:
        return {v: None for v in g.vertices}, {e: None for e in g.edge_ids}
    return dict(over.vertex_map), dict(over.edge_map)


def _profile(g, vcol, ecol):
    """Per vertex: colour plus multisets of out/in edge colours."""
    out = {}
    for v in g.vertices:
        outs = Counter((ecol[e.id], e.dst == v) for e in g.out_edges(v))
        ins = Counter(ecol[e.id] for e in g.in_edges(v))
        out[v] = (vcol[v], frozenset(outs.items()), frozenset(ins.items()))
    return out


def _pair_counts(g, ecol):
    counts = defaultdict(Counter)
    for e in g.edges:
        counts[(e.src, e.dst)][ecol[e.id]] += 1
    return counts


def find_isomorphism(
    a: MultiGraph,
    b: MultiGraph,
    over: tuple[GraphMorphism, GraphMorphism] | None = None,
) -> tuple[dict[str, str], dict[str, str]] | None:
    """Vertex and edge bijections ``a -> b`` forming a graph isomorphism, or None.

    With ``over=(pa, pb)`` (maps of ``a`` and ``b`` to a common graph) only
    isomorphisms commuting with them are considered.
    """
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return None
    pa, pb = over if over is not None else (None, None)
    va, ea = _colours(a, pa)
    vb, eb = _colours(b, pb)
    prof_a, prof_b = _profile(a, va, ea), _profile(b, vb, eb)
    if Counter(prof_a.values()) != Counter(prof_b.values()):
        return None
    cnt_a, cnt_b = _pair_counts(a, ea), _pair_counts(b, eb)
    by_profile = defaultdict(list)
    for v in b.vertices:
        by_profile[prof_b[v]].append(v)

    # visit order: BFS over undirected adjacency so each new vertex touches mapped ones
    nbrs = {v: set() for v in a.vertices}
    for e in a.edges:
        nbrs[e.src].add(e.dst)
        nbrs[e.dst].add(e.src)
    order, seen = [], set()
    for root in a.vertices:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(nbrs[u], key=a.index):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    vmap: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x, y):
        if cnt_a.get((x, x), Counter()) != cnt_b.get((y, y), Counter()):
            return False
        for z in nbrs[x]:
            if z in vmap:
                fz = vmap[z]
                if cnt_a.get((x, z), Counter()) != cnt_b.get((y, fz), Counter()):
                    return False
                if cnt_a.get((z, x), Counter()) != cnt_b.get((fz, y), Counter()):
                    return False
        return True

    def search(i):
        if i == len(order):
            return True
        x = order[i]
        for y in by_profile[prof_a[x]]:
            if y in used or not consistent(x, y):
                continue
            vmap[x] = y
            used.add(y)
            if search(i + 1):
                return True
            del vmap[x]
            used.discard(y)
        return False

    if not search(0):
        return None
    pool = defaultdict(list)
    for e in b.edges:
        pool[(e.src, e.dst, eb[e.id])].append(e.id)
    emap = {}
    for e in a.edges:
        emap[e.id] = pool[(vmap[e.src], vmap[e.dst], ea[e.id])].pop(0)
    return vmap, emap


def is_isomorphism(a: MultiGraph, b: MultiGraph, vmap: dict, emap: dict) -> bool:
    """Check that the maps are bijective and form a graph morphism."""
    if sorted(vmap.values()) != sorted(b.vertices) or sorted(emap.values()) != sorted(b.edge_ids):
        return False
    if set(vmap) != set(a.vertices) or set(emap) != set(a.edge_ids):
        return False
    for e in a.edges:
        f = b.edge(emap[e.id])
        if vmap[e.src] != f.src or vmap[e.dst] != f.dst:
            return False
    return True
