"""
Approximating the spectra
=========================

Certified outer covers of M, periodic inner points of L, and the gaps
around sqrt(12) and sqrt(13).  Writes ``spectra.svg`` to the working directory.
"""

from lmspectra.spectra import approximate_spectra, constants, detect_gaps, render_svg

# below 3 the spectrum is discrete
ap = approximate_spectra(2.2, 3.0, 1000, 2)
print("outer cover of M in [2.2, 3]:", [(round(a, 5), round(b, 5)) for a, b in ap.outer])
for p in ap.inner[:5]:
    print(f"   inner {float(p):.10f} from the word {p.word}")

# the first gaps above 3.4
c = constants()
ap = approximate_spectra(3.4, 3.7, 1e4, 3)
report = detect_gaps(ap)
for lo, hi in report.gaps:
    if hi - lo > 1e-3:
        print(f"gap ({lo:.6f}, {hi:.6f})")
print("sqrt12 =", float(c.sqrt12), " sqrt13 =", float(c.sqrt13), " (9 sqrt3 + 65)/22 =", float(c.perron))

# a picture of the approximation
out = "spectra.svg"
with open(out, "w") as fh:
    fh.write(render_svg(approximate_spectra(3.0, 3.7, 300, 3)))
print("wrote", out)
