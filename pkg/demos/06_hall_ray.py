"""
Hall's ray
==========

Every number from 6 on is c0 + x + y with x, y in C(4); the periodic word
(c0, a_1..a_n, b_n..b_1) then has Lagrange value close to it.
"""

from lmspectra.spectra import constants, hall_realize

for target in (6.0, 6.25, 6.5, 6.9):
    h = hall_realize(target, 1e-10)
    print(f"{target}: c0 = {h.c0}, x = [0;{','.join(map(str, h.a[:10]))},...], "
          f"y = [0;{','.join(map(str, h.b[:10]))},...], error {float(h.error):.1e}")
    print("    interleaved expansion starts", h.interleaved(3))

print("\n".join(constants().lines(20)))
