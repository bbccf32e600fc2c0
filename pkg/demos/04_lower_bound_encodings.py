"""Networks that need many extra automata for every schedule.

A subset encoding gives each k-subset E of a 2k-block a base configuration
b(E) so that the sets "b(E) with E filled arbitrarily" never overlap. The
network that swaps E with its complement on those sets has a q^k clique in
every confusion graph.
"""

import itertools

from anseq.coloring import kappa
from anseq.core import omega
from anseq.witnesses import SubsetEncoding, build_h_from_encoding, clique_witness, encode_kms, kms_anchor, kms_trace

enc = SubsetEncoding.km2(1, 2)
h = build_h_from_encoding(enc)
print("km2, k = 1:", {E: enc.encode(E) for E in map(tuple, enc.subsets())})
ks = {u: kappa(h, u) for u in itertools.permutations(range(1, 4))}
print("kappa by order:", ks)
print("Omega =", omega(h), "so programs need at least", omega(h) + min(ks.values()), "steps")

for u in [(1, 2, 3), (2, 1, 3)]:
    print(f"clique for u = {u}:", clique_witness(h, u, enc))

# the compact family, on the 8-block with E = {2, 4, 5, 6}
E = {2, 4, 5, 6}
code = encode_kms(4, 4, E)
print("anchor:", kms_anchor(4, E), "code:", code)
for state in kms_trace(4, 4, code)[:4]:
    print("  scan", state)
