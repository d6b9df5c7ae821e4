# Every connected covering of a connected graph is a relative skew product.
# We peel a covering apart into its monodromy permutations and rebuild it.
#
#    python3 demos/coverings.py

from graphalg import GraphMorphism, decompose, is_regular, lift_walk, parse_graph, path, verify_covering
from graphalg.graph import serialize_graph

c3 = parse_graph("vertex v1\nvertex v2\nvertex v3\nedge e1 v1 v2\nedge e2 v2 v3\nedge e3 v3 v1\n")
c6 = parse_graph(
    "".join(f"vertex w{i}\n" for i in range(6)) + "".join(f"edge f{i} w{i} w{(i + 1) % 6}\n" for i in range(6))
)

# Wrap the 6-cycle twice around the 3-cycle.
p = GraphMorphism(
    c6, c3, {f"w{i}": f"v{i % 3 + 1}" for i in range(6)}, {f"f{i}": f"e{i % 3 + 1}" for i in range(6)}
)
cov = verify_covering(p)
print("fibre over v1:", cov.fiber("v1"))

# Walking once round C3 from w0 only gets halfway round C6.
loop = path(c3, ["e1", "e2", "e3"])
print("lift of the loop from w0 ends at", lift_walk(cov, loop, "w0").end)

# The decomposition records that as a transposition on the fibre.
dec = decompose(cov)
rep = dec.presentation.to_dict()
print("permutations:", rep["permutations"])
print("monodromy group order", rep["group_order"], "regular", rep["regular"])
print("w3 goes to", dec.isomorphism.vertex_map["w3"])

# A 3-sheeted cover of the figure eight with monodromy (1 2), (1 3): the
# group is all of S3 but the stabilizer of a point is not normal.
fig8 = parse_graph("vertex v\nedge e v v\nedge f v v\n")
perm = {"e": (1, 0, 2), "f": (2, 1, 0)}
lines = [f"vertex v.{i}" for i in range(3)]
lines += [f"edge {e}.{i} v.{i} v.{perm[e][i]}" for e in "ef" for i in range(3)]
cover = parse_graph("\n".join(lines))
q = GraphMorphism(cover, fig8, {x: "v" for x in cover.vertices}, {x: x[0] for x in cover.edge_ids})
dec = decompose(q)
print("S3 cover regular?", is_regular(dec.presentation))
print(serialize_graph(dec.skew.graph))
