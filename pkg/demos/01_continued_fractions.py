"""
Continued fractions and Perron's height
=======================================

Expansions, convergents, exact quadratic surds, and the Markov value of a
bi-infinite sequence.
"""

from lmspectra.cf import (
    EventuallyPeriodicSeq, QuadraticSurd, convergents, eval_periodic, expand_rational,
    hurwitz_sequence, lagrange_value, markov_value, parse_periodic,
)

# the Euclidean algorithm gives the canonical expansion
w = expand_rational(355, 113)
print("355/113 =", w)
for c in convergents(w):
    print("   convergent", c.fraction)

# periodic expansions are quadratic surds, computed exactly
pre, period = parse_periodic("0;4,(1)")
print("[0;4,(1)] =", eval_periodic(pre, period))
print("sqrt(2) - 1 =", eval_periodic(*parse_periodic("0;(2)")))

# q_n |q_n phi - p_n| tends to 1/sqrt(5): the golden ratio is the worst approximable number
h = hurwitz_sequence(20)
print("Hurwitz constants:", [round(float(v), 8) for v in h[1:21:4]], "->", 1 / 5 ** 0.5)

# Markov values of periodic sequences are exact surds
for word in [(1,), (2,), (2, 2, 1, 1), (2, 1)]:
    mv = markov_value(EventuallyPeriodicSeq.periodic(word))
    print(f"m({''.join(map(str, word))}^Z) = {mv.value.exact} = {float(mv.value):.12f}")

# an eventually periodic sequence: Markov value (sup) against Lagrange value (limsup)
s = EventuallyPeriodicSeq.parse("((1))|3|((1))")
print(s, "markov", float(markov_value(s).value), "lagrange", float(lagrange_value(s)))
print(QuadraticSurd.sqrt(12) < QuadraticSurd.sqrt(13))
