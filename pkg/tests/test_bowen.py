from collections import Counter

import mpmath
import pytest
from mpmath import mpf

from lmspectra.bowen import (
    TraceTable, determinant, enumerate_periodic, fredholm_coefficients, multiplier,
    solve_dimension, trace,
)
from lmspectra.cf import QuadraticSurd
from lmspectra.errors import BudgetExceeded, DimensionSolveError
from lmspectra.gauss_cantor import AffineCantor, WordSet, palis_takens_bounds

REF = "0.531280506277205141624468647368"
C2 = WordSet.parse("1,2")
S = QuadraticSurd


def floor_surd(x):
    n = int(float(x))
    while S(n + 1) <= x:
        n += 1
    while S(n) > x:
        n -= 1
    return n


def gauss_orbit(x, word):
    """Exact Gauss iterates x_0 = x, x_{i+1} = 1/x_i - a_i, checking each digit."""
    pts = [x]
    for a in word:
        inv = pts[-1].inverse()
        assert floor_surd(inv) == a
        pts.append(inv - a)
    return pts


def test_period_one_points():
    orbs = enumerate_periodic(C2, 1)
    assert {o.x for o in orbs} == {(S.sqrt(5) - 1) / 2, S.sqrt(2) - 1}
    assert len(enumerate_periodic(C2, 2)) == 4
    assert {o.x for o in enumerate_periodic(C2, 1)} <= {o.x for o in enumerate_periodic(C2, 2)}


@pytest.mark.parametrize("B", [C2, WordSet.parse("(1,2),(3,),(2,2,1)")])
def test_fixed_points_and_multipliers_exact(B):
    for n in (1, 2, 3):
        for o in enumerate_periodic(B, n):
            pts = gauss_orbit(o.x, o.word)
            assert pts[-1] == o.x
            prod = S(1)
            for p in pts[:-1]:
                prod = prod * p * p
            sign = -1 if len(o.word) % 2 else 1
            assert o.D == sign * prod.inverse()
            assert abs(o.D) > 1


def test_multiplier_examples():
    phi = (1 + S.sqrt(5)) / 2
    assert multiplier((1,)) == -phi * phi
    assert multiplier((2,)) == -(S.sqrt(2) + 1) ** 2
    for w in [(1,), (1, 2), (2, 2, 1), (3, 1, 4)]:
        assert multiplier(w + w) == multiplier(w) ** 2


def test_trace_closed_forms():
    orbs = enumerate_periodic(C2, 1)
    with mpmath.workprec(200):
        xs = [((mpmath.sqrt(5) - 1) / 2), mpmath.sqrt(2) - 1]
        expect = sum(x ** 1 / (1 + x * x) for x in xs)  # x^(2s) with s = 1/2
        assert abs(trace(mpf("0.5"), 1, orbs, 180) - expect) < mpf(2) ** -170
        expect0 = sum(1 / (1 - 1 / o.D.to_mpf(200)) for o in orbs)
        assert abs(trace(0, 1, orbs, 180) - expect0) < mpf(2) ** -170
    with pytest.raises(ValueError):
        trace(0.5, 2, orbs)


def test_affine_traces():
    t = TraceTable.affine(AffineCantor(), 6, 128)
    with mpmath.workprec(150):
        s = mpf("0.3")
        for n in range(1, 7):
            assert abs(t.trace(s, n) - 2 ** n * mpf(3) ** (-n * s) / (1 - mpf(3) ** -n)) < mpf(2) ** -120


def test_trace_table_matches_direct_trace():
    t = TraceTable.gauss(C2, 4, 128)
    for n in range(1, 5):
        with mpmath.workprec(150):
            assert abs(t.trace(mpf("0.37"), n) - trace(mpf("0.37"), n, enumerate_periodic(C2, n), 128)) < mpf(2) ** -115


def test_fredholm_low_orders():
    with mpmath.workprec(100):
        tr = [mpf("0.7"), mpf("0.2"), mpf("-0.05")]
        d = fredholm_coefficients(tr, 80)
        assert d[0] == -tr[0]
        assert abs(d[1] - (tr[0] ** 2 - tr[1]) / 2) < mpf(2) ** -75
        # third order from the exponential series by hand
        d3 = -(tr[0] ** 3 - 3 * tr[0] * tr[1] + 2 * tr[2]) / 6
        assert abs(d[2] - d3) < mpf(2) ** -75


def test_affine_determinant_vanishes_at_log2_log3():
    t = TraceTable.affine(AffineCantor(), 14, 200)
    with mpmath.workprec(220):
        s = mpmath.log(2) / mpmath.log(3)
        vals = [abs(determinant(t, s, M)) for M in (4, 8, 12, 14)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < mpf(10) ** -40


def test_affine_dimension():
    r = solve_dimension(AffineCantor(), 10)
    with mpmath.workprec(256):
        assert abs(r.s - mpmath.log(2) / mpmath.log(3)) < mpf(10) ** -12


def test_c2_dimension_to_reference():
    r = solve_dimension(C2, 10)
    with mpmath.workprec(256):
        assert abs(r.s - mpf(REF)) < mpf(10) ** -20
    assert r.residual <= mpf(2) ** -128
    assert r.orbit_counts == {n: 2 ** n for n in range(1, 11)}
    assert '"order": 10' in r.report() and "0.5312805062772051416" in r.report()


def test_c2_superexponential_convergence():
    r = solve_dimension(C2, 10, with_history=True)
    with mpmath.workprec(256):
        s = r.history  # s_2 .. s_10
        deltas = [abs(b - a) for a, b in zip(s, s[1:])]
        logs = [mpmath.log(d) for d in deltas[2:]]  # from |s_5 - s_4| on
        steps = [a - b for a, b in zip(logs, logs[1:])]
    assert all(b > a for a, b in zip(steps, steps[1:]))


def test_transpose_agreement():
    B = WordSet.parse("(1,2),(1,3),(3,3,2)")
    Bt = B.transpose()
    for n in (1, 2, 3, 4):
        assert Counter(o.D for o in enumerate_periodic(B, n)) == Counter(o.D for o in enumerate_periodic(Bt, n))
    r, rt = solve_dimension(B, 6), solve_dimension(Bt, 6)
    with mpmath.workprec(256):
        assert abs(r.s - rt.s) <= 10 * mpf(2) ** -256


@pytest.mark.parametrize("B", [C2, WordSet.parse("1,2,3"), WordSet.parse("(1,2),(3,)"), WordSet.parse("2,3")])
def test_within_palis_takens_bracket(B):
    s = solve_dimension(B, 8).s
    b = palis_takens_bounds(B, 10)
    assert b.alpha <= float(s) <= b.beta


def test_single_word_has_no_root():
    with pytest.raises(DimensionSolveError):
        solve_dimension(WordSet.of(2), 6)


def test_budget_and_order_validation():
    with pytest.raises(BudgetExceeded):
        solve_dimension(WordSet.parse("1,2,3,4"), 12, budget=10 ** 4)
    with pytest.raises(ValueError):
        solve_dimension(C2, 1)
