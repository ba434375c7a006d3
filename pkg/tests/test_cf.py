from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lmspectra.cf import (
    CertifiedReal, EventuallyPeriodicSeq, PrecisionContext, QuadraticSurd, Word,
    convergents, eval_finite, eval_periodic, expand_rational, format_periodic,
    hurwitz_sequence, lagrange_value, markov_value, parse_periodic, perron_height,
)
from conftest import cf_value, truncated_height

S = QuadraticSurd
SQRT5, SQRT8 = S.sqrt(5), S.sqrt(8)


# -- expansion and convergents ----------------------------------------------

@pytest.mark.parametrize("num,den,head,digits", [
    (355, 113, 3, (7, 16)),
    (22, 7, 3, (7,)),
    (1, 1, 1, ()),
    (-7, 3, -3, (1, 2)),
    (0, 5, 0, ()),
])
def test_expand_rational_examples(num, den, head, digits):
    w = expand_rational(num, den)
    assert (w.head, w.digits) == (head, digits)
    assert eval_finite(w) == Fraction(num, den)


def test_expand_rational_rejects_bad_denominator():
    with pytest.raises(ValueError):
        expand_rational(1, 0)


@given(st.integers(-10**9, 10**9), st.integers(1, 10**9))
def test_expand_rational_roundtrip_and_canonical(num, den):
    w = expand_rational(num, den)
    assert cf_value(w.a0, list(w.digits)) == Fraction(num, den)
    assert w.is_canonical


def test_canonical_form():
    assert Word((7, 15, 1), 3).canonical() == Word((7, 16), 3)
    assert Word((1,), 2).canonical() == Word((), 3)
    assert eval_finite(Word((7, 15, 1), 3)) == Fraction(355, 113)


def test_convergents_examples():
    assert [c.fraction for c in convergents(Word((7, 15, 1), 3))] == [
        Fraction(3), Fraction(22, 7), Fraction(333, 106), Fraction(355, 113)]
    assert [tuple(c) for c in convergents(Word((2, 2), 0))] == [(0, 1), (1, 2), (2, 5)]
    assert [tuple(c) for c in convergents(Word((), 5))] == [(5, 1)]
    with pytest.raises(ValueError):
        convergents(Word())


@given(st.lists(st.integers(1, 50), max_size=19), st.integers(2, 50), st.integers(0, 5))
def test_convergent_recurrence_and_quality(body, last, head):
    # canonical words only: a trailing 1 makes the last proper convergent touch the bound
    digits = body + [last]
    w = Word(tuple(digits), head)
    cs = convergents(w)
    x = eval_finite(w)
    assert cs[-1].fraction == x
    for i, c in enumerate(cs):
        assert gcd(c.p, c.q) == 1
        if i:
            assert c.q >= cs[i - 1].q
        if i >= 2:
            a = digits[i - 1]
            assert c.p == a * cs[i - 1].p + cs[i - 2].p
            assert c.q == a * cs[i - 1].q + cs[i - 2].q
    for c in cs[:-1]:
        assert abs(x - c.fraction) < Fraction(1, c.q * c.q)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10**6).flatmap(lambda b: st.tuples(st.integers(0, 3 * b), st.just(b))))
def test_best_approximation(ab):
    a, b = ab
    alpha = Fraction(a, b)
    convs = {c.fraction for c in convergents(expand_rational(a, b))}
    # every p/q with |alpha - p/q| < 1/(2q^2) must be a convergent; only p = round(alpha*q) can qualify
    for q in range(1, min(b, 3000) + 1):
        p = round(alpha * q)
        if abs(alpha - Fraction(p, q)) * 2 * q * q < 1:
            assert Fraction(p, q) in convs


def test_hurwitz():
    h = hurwitz_sequence(20)
    assert abs(float(h[20]) - 1 / 5 ** 0.5) < 1e-6
    # the error shrinks along the sequence
    errs = [abs(float(v) - 1 / 5 ** 0.5) for v in h[2:]]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))


# -- surds ------------------------------------------------------------------

def test_surd_normalization():
    assert S.sqrt(8) == 2 * S.sqrt(2)
    assert str(S.sqrt(8)) == "2*sqrt(2)"
    assert S(3, 2, 9, 1) == 9
    assert S(2, 4, 5, 6) == S(1, 2, 5, 3)
    assert S(1, 1, 5, -2) == S(-1, -1, 5, 2)
    assert hash(S.sqrt(8)) == hash(2 * S.sqrt(2))


def test_surd_field_ops():
    phi = S(1, 1, 5, 2)
    assert phi * phi == phi + 1
    assert phi.inverse() == phi - 1
    assert (S.sqrt(2) + 1) * (S.sqrt(2) - 1) == 1
    assert S.sqrt(2) * S.sqrt(8) == 4
    assert (S.sqrt(3) / S.sqrt(12)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        S.sqrt(2) + S.sqrt(3)


surds = st.builds(S, st.integers(-50, 50), st.integers(-50, 50),
                  st.sampled_from([2, 3, 5, 6, 7, 8, 12, 13, 221]), st.integers(1, 30))


@given(surds, surds)
def test_surd_compare_matches_highprecision(x, y):
    with mpmath.workprec(300):
        diff = x.to_mpf(300) - y.to_mpf(300)
    expect = 0 if abs(diff) < mpmath.mpf(2) ** -250 else (1 if diff > 0 else -1)
    assert x.compare(y) == expect


@given(surds, surds)
def test_surd_arithmetic_matches_mpmath(x, y):
    if not x.compatible(y):
        return
    with mpmath.workprec(200):
        xv, yv = x.to_mpf(200), y.to_mpf(200)
        assert abs((x + y).to_mpf(200) - (xv + yv)) < mpmath.mpf(2) ** -180
        assert abs((x * y).to_mpf(200) - xv * yv) < mpmath.mpf(2) ** -150
        if y != 0:
            assert abs((x / y).to_mpf(200) - xv / yv) < mpmath.mpf(2) ** -150 * (1 + abs(xv / yv))


@given(surds)
def test_surd_enclosure_is_directed(x):
    lo, hi = x.enclose(128)
    with mpmath.workprec(400):
        v = x.to_mpf(400)
        assert lo <= v <= hi
        assert hi - lo <= mpmath.mpf(2) ** -120 * (1 + abs(v))


# -- periodic expansions ----------------------------------------------------

def test_eval_periodic_examples():
    assert eval_periodic(Word(), (1,)) == (SQRT5 - 1) / 2
    assert eval_periodic(Word(), (2,)) == S.sqrt(2) - 1
    assert eval_periodic(Word((), 1), (1,)) == (1 + SQRT5) / 2
    assert eval_periodic(Word(), (4, 1)) == (S.sqrt(2) - 1) / 2
    assert eval_periodic(Word(), (1, 4)) == 2 * (S.sqrt(2) - 1)


@settings(max_examples=60)
@given(st.lists(st.integers(1, 9), max_size=6), st.lists(st.integers(1, 9), min_size=1, max_size=6))
def test_eval_periodic_against_truncation(pre, period):
    x = eval_periodic(Word(tuple(pre)), tuple(period))
    approx = cf_value(0, list(pre) + list(period) * (60 // len(period) + 1))
    assert abs(float(x) - float(approx)) < 1e-12


def test_periodic_serialization_roundtrip():
    pre, per = parse_periodic("0;2,1,(2,2,1,1)")
    assert pre == Word((2, 1), 0) and per == (2, 2, 1, 1)
    assert format_periodic(pre, per) == "0;2,1,(2,2,1,1)"
    assert parse_periodic("3;7,16") == (Word((7, 16), 3), ())


# -- sequences and heights --------------------------------------------------

def test_sequence_parse_and_digits():
    s = EventuallyPeriodicSeq.parse("((1,2))5|3,4|6((7))")
    assert s.window(-4, 5) == (2, 1, 2, 5, 3, 4, 6, 7, 7, 7)
    assert str(EventuallyPeriodicSeq.parse(str(s))) == str(s)
    with pytest.raises(ValueError):
        EventuallyPeriodicSeq.parse("1|2|3")
    with pytest.raises(ValueError):
        EventuallyPeriodicSeq((1,), (), (0,), (), (1,))


@given(st.integers(-20, 20), st.integers(-15, 15))
def test_shift_and_transpose_are_index_maps(k, i):
    s = EventuallyPeriodicSeq.parse("((1,2))5|3,4|6((7,1,1))")
    assert s.shift(k).digit(i) == s.digit(i + k)
    assert s.transpose().digit(i) == s.digit(-i)


def test_minimal_period():
    assert EventuallyPeriodicSeq.periodic((1, 2, 1, 2)).minimal_period() == (1, 2)
    assert EventuallyPeriodicSeq.parse("((1,2))|1,2|((1,2))").minimal_period() == (1, 2)
    assert EventuallyPeriodicSeq.parse("((2,1))|1,2|((1,2))").minimal_period() is None
    assert EventuallyPeriodicSeq.parse("((2))|3|((2))").minimal_period() is None


def test_perron_height_constant_sequences():
    for k in (-3, 0, 7):
        assert perron_height(EventuallyPeriodicSeq.periodic((1,)), k).exact == SQRT5
        assert perron_height(EventuallyPeriodicSeq.periodic((2,)), k).exact == SQRT8


def test_perron_height_two_shift_classes():
    s = EventuallyPeriodicSeq.periodic((1, 2))
    h0, h1 = perron_height(s, 0), perron_height(s, 1)
    digit = lambda i: (1, 2)[i % 2]
    for h, k in ((h0, 0), (h1, 1)):
        assert abs(float(h) - float(truncated_height(digit, k, 60))) < 1e-14
    assert h0.exact != h1.exact
    assert markov_value(s).value.exact == max(h0.exact, h1.exact)


def test_markov_value_of_2211():
    s = EventuallyPeriodicSeq.periodic((2, 2, 1, 1))
    mv = markov_value(s)
    assert mv.value.exact == S.sqrt(221) / 5
    digit = lambda i: (2, 2, 1, 1)[i % 4]
    brute = max(truncated_height(digit, k, 200) for k in range(4))
    with mpmath.workprec(300):
        assert abs(mv.value.value - mpmath.mpf(brute.numerator) / brute.denominator) < mpmath.mpf(2) ** -200
    assert mv.value.radius <= mpmath.mpf(2) ** -250 * mv.value.value


def test_markov_value_radius_is_relative():
    ctx = PrecisionContext(128)
    v = markov_value(EventuallyPeriodicSeq.periodic((1, 2, 2)), ctx).value
    assert isinstance(v, CertifiedReal)
    assert v.radius <= mpmath.mpf(2) ** (1 - 128) * v.value


def test_lagrange_ignores_center():
    s = EventuallyPeriodicSeq.parse("((1))|3|((1))")
    assert lagrange_value(s).exact == SQRT5
    mv = markov_value(s, PrecisionContext(64))
    digit = s.digit
    assert abs(float(mv.value) - float(truncated_height(digit, 0, 80))) < 1e-14


def test_markov_value_non_periodic_with_unrelated_tails():
    s = EventuallyPeriodicSeq.parse("((1))|3|((2))")
    mv = markov_value(s, PrecisionContext(64))
    brute = max(truncated_height(s.digit, k, 80) for k in range(-5, 6))
    with mpmath.workprec(200):
        assert mv.value.contains(mpmath.mpf(brute.numerator) / brute.denominator)
    assert mv.shift == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3),
       st.lists(st.integers(1, 4), min_size=1, max_size=3),
       st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_markov_ge_lagrange_ge_samples(left, center, right):
    s = EventuallyPeriodicSeq(tuple(left), (), tuple(center), (), tuple(right))
    ctx = PrecisionContext(64)
    m = markov_value(s, ctx).value
    l = lagrange_value(s, ctx)
    assert m.hi >= l.lo
    for k in range(-4, 5):
        assert m.hi >= perron_height(s, k, ctx).lo
    # deep in the right tail the samples approach the limsup from either side
    for k in range(len(center) + 80, len(center) + 80 + len(right)):
        assert l.hi >= perron_height(s, k, ctx).lo
