"""How many extra automata does a schedule need?

For an order u, two configurations are confused when some step of the
sequential run can no longer tell them apart while h still must. The extra
memory needed is ceil(log_q chi) for the chromatic number chi of that graph.
"""

from anseq.coloring import exact_coloring, kappa, kappa_min
from anseq.confusion import build_confusion_graph
from anseq.witnesses import gen_example1, gen_swap_network

h4 = gen_swap_network(4, 2)
for u in [(1, 2, 3, 4), (1, 3, 2, 4)]:
    g = build_confusion_graph(h4, u)
    c = exact_coloring(g)
    print(f"swap n=4, order {u}: {sum(1 for _ in g.edges())} edges, chi = {c.count}, kappa = {kappa(h4, u)}")

# three pair swaps: the natural order is expensive, a good one costs a single automaton
ex = gen_example1()
print("six-automaton example, identity order: kappa =", kappa(ex.h, tuple(range(1, 7))))
best, order = kappa_min(ex.h)
print(f"best over all 720 orders: kappa = {best} with u = {order}")

print(build_confusion_graph(gen_swap_network(2, 2), (1, 2)).to_dot())
