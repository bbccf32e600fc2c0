"""Word lengths in the update monoid, and t(n, q).

For every f, breadth-first search over compositions of the single updates
f^1..f^n gives the shortest word reaching each transformation. t(n, q) is
the worst case over targets of the best f, and is undefined if some
transformation is reached by no f at all.
"""

import numpy as np

from anseq.oracle import UNDEFINED, certify_unreachable, t_search
from anseq.repro import four_cycle_network

result = t_search(2, 2, symmetry=True)
print("t(2,2):", "undefined" if result.value is UNDEFINED else result.value)
print("unreachable transformations:", int(np.count_nonzero(result.best == 255)))
print("first witness:", result.witness, "from", result.representatives, "orbit representatives")

report = certify_unreachable(four_cycle_network())
print("4-cycle reachable?", not report["unreachable"], "| largest closure:", max(report["closure_sizes"]))

# a slice of the (3, 2) sweep; the full run lives behind `anseq t-search --n 3 --q 2`
part = t_search(3, 2, symmetry=True, stop_after=4096)
print("first 4096 networks of F(3,2):", part.representatives, "representatives searched")
