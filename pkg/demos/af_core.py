# The gauge-fixed core of a strongly connected graph: period, summands and
# the Bratteli diagram read off the integer skew product.
#
#    python3 demos/af_core.py

import numpy as np

from graphalg import af_core_decomposition, aperiodic_power, bratteli, crossed_product_report, parse_graph, period

p23 = parse_graph(
    "vertex v\nvertex a\nvertex b\nvertex c\n"
    "edge x1 v a\nedge x2 a v\nedge y1 v b\nedge y2 b c\nedge y3 c v\n"
)
c6 = parse_graph(
    "".join(f"vertex w{i}\n" for i in range(6)) + "".join(f"edge f{i} w{i} w{(i + 1) % 6}\n" for i in range(6))
)

# Loops of length 2 and 3 through v: the gcd is 1.
rep = period(p23, "v")
print("period", rep.period, "witness loops", [w.edge_ids for w in rep.witnesses])

# Period 1 means some power of the adjacency matrix is positive everywhere.
k = aperiodic_power(p23)
a = p23.adjacency_matrix()
print("first positive power:", k)
print(np.linalg.matrix_power(a, k))

# The 6-cycle has period 6: its core splits into six summands.
dec = af_core_decomposition(c6)
print("C6 summands:", dec.period, "component cofinal:", dec.cofinal.holds)

# Bratteli diagram: vertices of residue 0, stacked every d levels; edge
# multiplicities count paths of length d.
b = bratteli(p23, 3)
print("levels:", b.levels)
print("multiplicities at level 0:")
print(np.array(b.multiplicities[0]))

print(crossed_product_report(p23)["statement"])
