"""
Gauss-Cantor sets: covers, bounds and sums
==========================================

Cylinder covers of C(2), covering bounds on its dimension, the sum
C(4) + C(4), and the two-child inequality over {1,2}.
"""

from lmspectra.gauss_cantor import (
    AffineCantor, GaussCantorSpec, WordSet, cover, gap_exponent_check, hull,
    palis_takens_bounds, sum_cover,
)

C2, C4 = GaussCantorSpec.C(2), GaussCantorSpec.C(4)

for c in cover(C2, 2):
    print(c.word, c.lo, c.hi, "length", c.length)

# covering bounds close in on the dimension from both sides
for m in (1, 2, 4, 6, 8, 10):
    b = palis_takens_bounds(C2, m)
    print(f"m = {m:2d}: {b.alpha:.6f} <= dim C(2) <= {b.beta:.6f}")
print("middle thirds:", palis_takens_bounds(AffineCantor(), 1))

# the same bounds for a set of blocks and its transpose
B = WordSet.parse("(1,1,2),(2,2,1)")
print(B, palis_takens_bounds(B, 6), B.transpose(), palis_takens_bounds(B.transpose(), 6))

# C(4) + C(4) is a whole interval, C(2) + C(2) is not
print("hull of C(4):", *map(str, hull(C4)))
s4 = sum_cover(C4, C4, 6)
print("C(4)+C(4):", len(s4.lo), "piece(s), hull", s4.hull)
s2 = sum_cover(C2, C2, 6)
print("C(2)+C(2):", len(s2.lo), "pieces, cover fills", round(s2.coverage, 3), "of its hull")

g = gap_exponent_check(0.174813, 12)
print("gap exponent 0.174813:", "passes" if g.passed else "fails", "critical", round(g.threshold, 7))
