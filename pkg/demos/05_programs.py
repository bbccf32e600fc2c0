"""Shortest programs of single-register instructions.

An instruction overwrites one register with any function of all registers.
With enough spare registers the shortest program for h has exactly
Omega(h) + kappa_min(h) instructions; the search below confirms it for
small networks.
"""

from anseq.core import AutomataNetwork, omega
from anseq.coloring import kappa_min
from anseq.procedural import coloring_from_program, procedural_complexity_star, shortest_program
from anseq.witnesses import gen_swap_network

h = gen_swap_network(2, 2)
p = shortest_program(h, 3, 6)
print(f"swap: {len(p)} instructions on registers {p.registers}")
order, coloring = coloring_from_program(h, p)
print("coloring read from it:", coloring.colors, "for order", order)

for table in [(0, 2, 1, 3), (3, 2, 1, 0), (1, 0, 3, 2)]:
    g = AutomataNetwork(2, 2, table)
    star = procedural_complexity_star(g)
    found = shortest_program(g, 2 + kappa_min(g)[0], star)
    print(f"table {table}: Omega = {omega(g)}, L* = {star}, search = {len(found)}")
