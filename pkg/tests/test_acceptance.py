"""Acceptance suite: one check per criterion, each reporting a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary)
or ``python tests/test_acceptance.py``.
"""

import math
import random
import time
from itertools import product

import mpmath
import pytest
from mpmath import mpf

from lmspectra.bowen import solve_dimension
from lmspectra.cf import EventuallyPeriodicSeq, QuadraticSurd, hurwitz_sequence, markov_value
from lmspectra.gauss_cantor import (
    AffineCantor, GaussCantorSpec, dimension_upper_bound, euler_denominator_check,
    gap_exponent_check, palis_takens_bounds, sum_cover,
)
from lmspectra.markov import (
    ZAGIER_C, descend, enumerate_triples, is_prime, mod_p_graph, spectrum_points,
    zagier_count,
)
from lmspectra.spectra import approximate_spectra, constants, detect_gaps, hall_realize

REF = "0.531280506277205141624468647368"
C2, C4 = GaussCantorSpec.C(2), GaussCantorSpec.C(4)
S = QuadraticSurd
RESULTS = []
_bowen = {}


def c2_dimension():
    if "r" not in _bowen:
        t = time.perf_counter()
        _bowen["r"] = solve_dimension(C2, 10, bits=256)
        _bowen["t"] = time.perf_counter() - t
    return _bowen["r"], _bowen["t"]


def crit_1():
    r, t = c2_dimension()
    with mpmath.workprec(256):
        err = abs(r.s - mpf(REF))
        digits = int(-mpmath.log10(err)) if err else 77
    return digits >= 10 and t < 60, f"M=10, 256 bits: {digits} matching digits in {t:.2f}s"


def crit_2():
    target = math.log(2) / math.log(3)
    r = solve_dimension(AffineCantor(), 10)
    b = palis_takens_bounds(AffineCantor(), 1)
    with mpmath.workprec(256):
        err = abs(r.s - mpmath.log(2) / mpmath.log(3))
    ok = err < 1e-12 and b.alpha == b.beta and abs(b.alpha - target) < 1e-12
    return ok, f"determinant error {mpmath.nstr(err, 3)}, alpha_1 = beta_1 = {b.alpha!r}"


def crit_3():
    s = float(c2_dimension()[0].s)
    bounds = [palis_takens_bounds(C2, m) for m in range(2, 11)]
    widths = [b.width for b in bounds]
    ok = bounds[-1].alpha <= s <= bounds[-1].beta and all(y < x for x, y in zip(widths, widths[1:]))
    return ok, f"m=10 bracket [{bounds[-1].alpha:.7f}, {bounds[-1].beta:.7f}] contains {s:.10f}; widths decreasing"


def crit_4():
    got = [t.astuple() for t in enumerate_triples(30)]
    want = [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29)]
    pts = spectrum_points(5)
    exact = [S.sqrt(5), S.sqrt(8), S(0, 1, 221, 5), S(0, 1, 1517, 13), S(0, 1, 7565, 29)]
    return got == want and pts == exact, f"triples {got}; spectrum points exact"


def crit_5():
    t = time.perf_counter()
    triples = enumerate_triples(10 ** 8)
    ok = True
    for tr in triples:
        path = descend(tr)
        prev = max(path.source)
        for (kind, _), cur in zip(path.moves, path.triples):
            if kind == "vieta":
                ok &= max(cur) < prev
                prev = max(cur)
        ok &= path.replay() == (1, 1, 1)
    el = time.perf_counter() - t
    return ok and el < 30, f"{len(triples)} triples with z <= 1e8 descend strictly in {el:.2f}s"


def crit_6():
    zc = zagier_count(10 ** 12)
    return 0.8 <= zc.ratio <= 1.2, f"M(1e12) = {zc.count}, c(log 3x)^2 = {zc.reference:.1f}, ratio {zc.ratio:.4f} (c = {ZAGIER_C})"


def crit_7():
    primes = [p for p in range(3, 201) if is_prime(p)]
    bad = [p for p in primes if not mod_p_graph(p).connected]
    return not bad, f"{len(primes)} primes 3..199, disconnected: {bad or 'none'}"


def crit_8():
    sc = sum_cover(C4, C4, 8)
    r = math.sqrt(2) - 1
    lo, hi = sc.hull
    ok = abs(lo - r) < 1e-6 and abs(hi - 4 * r) < 1e-6 and sc.is_interval
    rng = random.Random(2024)
    worst = mpf(0)
    for _ in range(50):
        h = hall_realize(rng.uniform(6, 6.5), 1e-8)
        worst = max(worst, h.error)
    ok &= worst <= mpf("1e-8")
    return ok, f"hull [{lo:.12f}, {hi:.12f}] one interval; 50 Hall targets, worst error {mpmath.nstr(worst, 3)}"


def crit_9():
    g = gap_exponent_check(0.174813, 12)
    dim = round(float(c2_dimension()[0].s), 6)
    fig = dimension_upper_bound(dim, 0.174813)
    return g.passed and str(fig) == "0.706094", f"worst ratio {g.worst_ratio:.6f}; {dim} + 0.174813 = {fig}"


def crit_10():
    n = 0
    ok = True
    for k in range(1, 9):
        for beta in product((1, 2, 3), repeat=k):
            ok &= euler_denominator_check(beta).equal
            n += 1
    return ok, f"{n} words over {{1,2,3}} of length <= 8"


def crit_11():
    ones = markov_value(EventuallyPeriodicSeq.periodic((1,))).value.exact
    twos = markov_value(EventuallyPeriodicSeq.periodic((2,))).value.exact
    ap = approximate_spectra(3.46, 3.61, 1e4, 3)
    gap = next((g for g in detect_gaps(ap).gaps if g[0] < 3.4642 and 3.6055 < g[1]), None)
    ok = ones == S.sqrt(5) and twos == S.sqrt(8) and gap is not None
    return ok, f"m(1^Z) = sqrt5, m(2^Z) = sqrt8 exactly; uncovered ({gap[0]:.6f}, {gap[1]:.6f})" if gap else "gap missing"


def crit_12():
    v = float(hurwitz_sequence(20)[20])
    err = abs(v - 1 / math.sqrt(5))
    return err < 1e-6, f"q20|q20 phi - p20| = {v:.12f}, off by {err:.2e}"


def crit_13():
    c = constants()
    txt = mpmath.nstr(c.c_F.to_mpf(256), 20)
    return txt.startswith("4.527829566"), f"c_F = {txt}"


CRITERIA = [crit_1, crit_2, crit_3, crit_4, crit_5, crit_6, crit_7, crit_8, crit_9, crit_10,
            crit_11, crit_12, crit_13]


def run_criterion(n: int):
    try:
        ok, detail = CRITERIA[n - 1]()
    except Exception as e:  # report, then fail
        ok, detail = False, f"{type(e).__name__}: {e}"
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n):
    assert run_criterion(n)


if __name__ == "__main__":
    import sys
    sys.exit(0 if all([run_criterion(n) for n in range(1, len(CRITERIA) + 1)]) else 1)
