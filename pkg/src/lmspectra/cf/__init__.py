"""Continued fractions, quadratic surds and Perron heights."""

from .precision import CertifiedReal, PrecisionContext
from .sequences import EventuallyPeriodicSeq, MarkovValue, lagrange_value, markov_value, perron_height, tail_bound
from .surd import QuadraticSurd
from .words import (
    Convergent,
    Word,
    convergents,
    eval_finite,
    eval_periodic,
    eval_tail,
    expand_rational,
    format_periodic,
    hurwitz_sequence,
    matrix,
    parse_periodic,
)

__all__ = [
    "CertifiedReal", "Convergent", "EventuallyPeriodicSeq", "MarkovValue", "PrecisionContext",
    "QuadraticSurd", "Word", "convergents", "eval_finite", "eval_periodic", "eval_tail",
    "expand_rational", "format_periodic", "hurwitz_sequence", "lagrange_value", "markov_value",
    "matrix", "parse_periodic", "perron_height", "tail_bound",
]
