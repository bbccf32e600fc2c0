"""From a coloring to a checked sequentialization, and back.

A proper coloring of the confusion graph with at most q^k colors yields a
network on n + k automata whose sequential run (extra registers first, then
u) reproduces h. Every certificate is verified exhaustively when built.
"""

import json

from anseq.coloring import exact_coloring
from anseq.confusion import build_confusion_graph
from anseq.synthesis import SequentializationCertificate, coloring_from_sequentialization, synthesize_from_coloring
from anseq.witnesses import gen_example1, gen_swap_network

h = gen_swap_network(2, 2)
u = (1, 2)
coloring = exact_coloring(build_confusion_graph(h, u))
cert = synthesize_from_coloring(h, u, coloring)
print(f"swap: k = {cert.k}, schedule w = {cert.w}")
print(json.dumps(cert.to_dict())[:120], "...")

# reading the extra register back gives a coloring again
back = coloring_from_sequentialization(h, u, cert)
print("read-back colors:", back.colors)

# the hand-built example certificates check out as well
ex = gen_example1()
for f, w, k in [(ex.f, ex.w, 3), (ex.g, ex.v, 1)]:
    c = SequentializationCertificate(ex.h, f, w, k)
    print(f"example: {f.n} automata, w = {w}, extra = {c.k}")
