"""
Dimension of C(2) from periodic orbits
======================================

Truncated Fredholm determinants built from periodic points converge
superexponentially to the Hausdorff dimension.
"""

import mpmath

from lmspectra.bowen import enumerate_periodic, solve_dimension
from lmspectra.gauss_cantor import AffineCantor, WordSet

C2 = WordSet.parse("1,2")

for orb in enumerate_periodic(C2, 2):
    print(orb.word, "x =", orb.x, " multiplier", float(orb.D))

r = solve_dimension(C2, 12, with_history=True)
with mpmath.workprec(256):
    for M, s in enumerate(r.history, start=2):
        print(f"M = {M:2d}: {mpmath.nstr(s, 32)}")
print(r.report())

# the middle-thirds set has exact dimension log 2 / log 3
a = solve_dimension(AffineCantor(), 10)
with mpmath.workprec(256):
    print("affine:", mpmath.nstr(a.s, 20), "vs", mpmath.nstr(mpmath.log(2) / mpmath.log(3), 20))
