# Edge labellings by group elements, the local voltage group at a vertex,
# and what it says about the skew product.
#
#    python3 demos/voltages.py

from graphalg import (
    Cyclic,
    PermutationGroup,
    VoltageLabeling,
    component_count,
    local_voltage_group,
    ones,
    parse_graph,
    relative_skew,
    same_component,
    spanning_tree,
    t_voltage,
    z_window,
)
from graphalg.groups import parse_cycles

c3 = parse_graph("vertex v1\nvertex v2\nvertex v3\nedge e1 v1 v2\nedge e2 v2 v3\nedge e3 v3 v1\n")

# Label every edge by 1 in Z.  Pushing labels onto the one edge outside a
# spanning tree leaves 0 on the tree and the whole loop voltage on e3.
c = ones(c3)
tree = spanning_tree(c3, "v1")
print("tree edges:", sorted(tree.edges))
print("T-voltage:", t_voltage(c, tree).values)

# The local group is generated by those pushed labels: here 3Z.
loc = local_voltage_group(c, "v1")
print("local group:", loc.subgroup.describe(), "index", loc.subgroup.index())

# Its index counts components of the skew product.  Over Z6 with the same
# labels there are three components of six vertices each.
z6 = VoltageLabeling.constant(c3, Cyclic(6), 1)
sk = relative_skew(c3, z6)
print("C3 x Z6:", len(sk.graph.vertices), "vertices,", len(sk.components()), "components")
print("component_count:", component_count(c3, z6))

# Over the integers the product is infinite; a window of levels is a finite,
# loop-free slice of it.
win = z_window(c3, c, 0, 4)
print("window 0..4:", len(win.graph.vertices), "vertices, acyclic", win.is_acyclic())
print("(v1,0) ~ (v1,3)?", same_component(c3, c, ("v1", 0), ("v1", 3)))
print("(v1,0) ~ (v1,1)?", same_component(c3, c, ("v1", 0), ("v1", 1)))

# Permutation labels: a non-abelian example.
s3 = PermutationGroup.symmetric(3)
cs = VoltageLabeling(c3, s3, {"e1": parse_cycles("(1 2)", 3), "e2": s3.identity(), "e3": parse_cycles("(1 3)", 3)})
print("S3 local group order:", local_voltage_group(cs, "v1").subgroup.order())
print("S3 skew components:", component_count(c3, cs))
