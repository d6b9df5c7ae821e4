# Which graphs give a simple algebra?  A tour of the three graph conditions
# and the verdict for the gauge-fixed core.
#
#    python3 demos/simplicity.py

from graphalg import af_core_simple, classify, csimple, parse_graph

fig8 = parse_graph("vertex v\nedge e v v\nedge f v v\n")
c3 = parse_graph("vertex v1\nvertex v2\nvertex v3\nedge e1 v1 v2\nedge e2 v2 v3\nedge e3 v3 v1\n")
two_scc = parse_graph("vertex u\nvertex w\nedge a u u\nedge b u w\nedge c w w\n")

# The figure eight passes everything: one vertex, two loops at it.
v = csimple(fig8)
print("fig8 simple:", v.simple)
print("  classification:", classify(fig8).kind.value)

# The 3-cycle is cofinal, but every vertex sees exactly one return loop,
# so condition (K) fails.  The witness names the vertex and the loop.
v = csimple(c3)
print("C3 simple:", v.simple)
print("  condition (K) fails at", v.condition_K.vertex, "with loop", v.condition_K.loop.edge_ids)

# Two loops joined by one edge: w never gets back to the loop at u.
v = csimple(two_scc)
print("u->w with loops simple:", v.simple)
print("  cofinality witness:", v.cofinal.vertex, "misses", v.cofinal.component)

# An infinite emitter has to be reachable from everywhere.
inf = parse_graph("vertex u\nvertex w\nedge e u w inf\n")
print("infinite emitter unreached:", csimple(inf).unreached)

# The core verdict runs its own checks in a fixed order and reports the
# route it took.
for name, g in [("fig8", fig8), ("C3", c3), ("two loops", two_scc), ("inf", inf)]:
    core = af_core_simple(g)
    print(f"core of {name:10s} simple={core.simple!s:5s} route={core.route:16s} witness={core.witness}")

# A loop with no exit: the algebra C(T) is not simple, but its core is.
loop = parse_graph("vertex v\nedge k v v\n")
print("single loop: algebra", csimple(loop).simple, "core", af_core_simple(loop).simple)
