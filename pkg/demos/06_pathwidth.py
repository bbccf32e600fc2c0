"""Extra automata bounded by the pathwidth of the interaction graph.

A path decomposition of width s gives s color classes; extra automaton l
keeps the sum mod q of h_j over class l, and each coordinate recovers its
missing input from that sum.
"""

import numpy as np

from anseq.core import AutomataNetwork, interaction_graph
from anseq.coloring import kappa_min
from anseq.pathwidth import derive_c_u, exact_pathwidth, pathwidth_certificate
from anseq.witnesses import gen_example1

ex = gen_example1()
pd = exact_pathwidth(interaction_graph(ex.h))
c, u = derive_c_u(pd)
print("bags:", [sorted(b) for b in pd.bags])
print("colors:", c, "order:", u)
_, cert = pathwidth_certificate(ex.h)
print(f"certificate with {cert.k} extra automaton, w = {cert.w}")

# sparse wiring keeps the width small: a line of XOR gates, then a ring
line = AutomataNetwork.from_function(5, 2, lambda x: [x[i] ^ x[i + 1] for i in range(4)] + [x[4]])
ring = AutomataNetwork.from_function(5, 2, lambda x: [x[i - 1] ^ x[i] for i in range(5)])
for name, h in [("line", line), ("ring", ring)]:
    pd, cert = pathwidth_certificate(h)
    print(f"{name}: pathwidth {pd.size}, certificate extra {cert.k}, kappa_min {kappa_min(h)[0]}")

# dense random networks usually have a complete interaction graph
h = AutomataNetwork.random(4, 2, np.random.default_rng(3))
print("random F(4,2): pathwidth", pathwidth_certificate(h)[0].size, "kappa_min", kappa_min(h)[0])
