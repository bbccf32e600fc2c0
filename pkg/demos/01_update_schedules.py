"""Parallel versus sequential updates of a small network.

A network h on n automata over q symbols is stored as one table indexed by
configurations. Updating coordinates one at a time generally does not
reproduce the parallel map; this script shows where it breaks.
"""

from anseq.core import AutomataNetwork, apply, interaction_graph, omega, update_word
from anseq.witnesses import gen_swap_network

h = gen_swap_network(2, 2)
print("swap network on two bits")
for x in [(0, 0), (1, 0), (0, 1), (1, 1)]:
    print(f"  h{x} = {apply(h, x)}   h^(1,2){x} = {update_word(h, (1, 2), x)}")

# the sequential run loses x1 before x2 gets to read it
print("Omega(swap) =", omega(h))

# an XOR network does reach the swap, three single updates in a row
xor = AutomataNetwork.from_function(2, 2, lambda x: ((x[0] + x[1]) % 2,) * 2)
print("xor^(1,2,1) agrees with the swap:",
      all(update_word(xor, (1, 2, 1), x) == apply(h, x) for x in range(4)))

ig = interaction_graph(h)
print("interaction edges:", sorted(ig.edges))
print(ig.to_dot())
