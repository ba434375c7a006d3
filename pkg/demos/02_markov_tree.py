"""
Markov triples
==============

The tree of solutions of x^2 + y^2 + z^2 = 3xyz, its descent, the growth of
Markov numbers, and the mod-p graphs.
"""

from lmspectra.markov import (
    descend, enumerate_triples, frobenius_report, mod_p_graph, spectrum_points, zagier_count,
)

triples = enumerate_triples(1000)
print("triples with z <= 1000:", [t.astuple() for t in triples])

# every solution walks down to (1,1,1)
path = descend((194, 2897, 1686049))
print("descent of (194, 2897, 1686049):", path.vieta_steps, "Vieta steps")
for t in path.triples:
    print("   ", t)

# the discrete part of the spectrum below 3
for z in spectrum_points(6):
    print(f"{str(z):>14} = {float(z):.10f}")

# Markov numbers are sparse: about c (log 3x)^2 of them below x
for x in (10 ** 4, 10 ** 8, 10 ** 12):
    zc = zagier_count(x)
    print(f"x = {x:.0e}: {zc.count} Markov numbers, predicted {zc.reference:.1f}")

rep = frobenius_report(10 ** 9)
print("uniqueness holds up to 1e9:", rep.unique)

# the graphs mod p are connected
for p in (3, 5, 7, 101):
    g = mod_p_graph(p)
    print(f"p = {p}: {g.num_vertices} vertices, {g.num_components} component(s)")
