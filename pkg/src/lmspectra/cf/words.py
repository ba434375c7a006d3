"""Finite continued-fraction words, convergents and periodic expansions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .surd import QuadraticSurd

Digits = Tuple[int, ...]


def _digits(seq: Iterable[int]) -> Digits:
    out = tuple(int(a) for a in seq)
    for a in out:
        if a < 1:
            raise ValueError(f"continued fraction digits must be >= 1, got {a}")
    return out


@dataclass(frozen=True)
class Word:
    """Digits ``a1..an`` with an optional integer head ``a0``.

    A word without head stands for ``[0; a1, ..., an]``.
    """

    digits: Digits = ()
    head: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "digits", _digits(self.digits))
        if self.head is not None:
            object.__setattr__(self, "head", int(self.head))

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    @property
    def a0(self) -> int:
        return 0 if self.head is None else self.head

    @property
    def is_empty(self) -> bool:
        return self.head is None and not self.digits

    def transpose(self) -> "Word":
        return Word(self.digits[::-1], self.head)

    def concat(self, other: Iterable[int]) -> "Word":
        return Word(self.digits + _digits(other), self.head)

    def canonical(self) -> "Word":
        """Equivalent word whose last digit is >= 2 (``[..., a, 1] -> [..., a+1]``)."""
        if self.digits and self.digits[-1] == 1:
            if len(self.digits) == 1:
                return Word((), self.a0 + 1)
            return Word(self.digits[:-2] + (self.digits[-2] + 1,), self.head)
        return self

    @property
    def is_canonical(self) -> bool:
        return not self.digits or self.digits[-1] >= 2

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"3;7,16"`` or ``"2,2"`` (no head)."""
        text = text.strip()
        head = None
        if ";" in text:
            h, text = text.split(";", 1)
            head = int(h)
        body = [t for t in text.replace(" ", "").split(",") if t]
        return cls(tuple(int(t) for t in body), head)

    def __str__(self):
        body = ",".join(map(str, self.digits))
        if self.head is None:
            return body
        return f"{self.head};{body}" if body else str(self.head)


class Convergent(NamedTuple):
    p: int
    q: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def expand_rational(num: int, den: int) -> Word:
    """Canonical continued fraction of ``num/den`` by the Euclidean algorithm."""
    if den < 1:
        raise ValueError("denominator must be positive")
    a0, rem = divmod(num, den)
    digits = []
    num, den = den, rem
    while den:
        a, rem = divmod(num, den)
        digits.append(a)
        num, den = den, rem
    return Word(tuple(digits), a0)


def matrix(digits: Sequence[int], head: int = 0) -> Tuple[int, int, int, int]:
    """``(p_n, p_{n-1}, q_n, q_{n-1})`` of ``[head; digits]``.

    Then ``[head; digits, y] = (p_n*y + p_{n-1}) / (q_n*y + q_{n-1})``.
    """
    p_prev, p, q_prev, q = 1, head, 0, 1
    for a in digits:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, p_prev, q, q_prev


def convergents(w: Word) -> List[Convergent]:
    if w.is_empty:
        raise ValueError("empty word has no continued fraction expansion")
    p_prev, p, q_prev, q = 1, w.a0, 0, 1
    out = [Convergent(p, q)]
    for a in w.digits:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(p, q))
    return out


def eval_finite(w: Word) -> Fraction:
    if w.is_empty:
        raise ValueError("empty word has no value")
    p, _, q, _ = matrix(w.digits, w.a0)
    return Fraction(p, q)


def _apply(m, y):
    p, pp, q, qp = m
    return (p * y + pp) / (q * y + qp)


@lru_cache(maxsize=1 << 16)
def _purely_periodic(period: Digits) -> QuadraticSurd:
    """``y = [P0; P1, ..., P_{k-1}, y]``, the value of the periodic expansion."""
    P, Pp, Q, Qp = matrix(period[1:], period[0])
    # Q y^2 + (Qp - P) y - Pp = 0, take the root > 1
    bq = P - Qp
    disc = bq * bq + 4 * Q * Pp
    y = QuadraticSurd(bq, 1, disc, 2 * Q)
    if y != _apply((P, Pp, Q, Qp), y):
        raise AssertionError(f"periodic fixed point check failed for {period}")
    return y


def eval_periodic(pre: Word, period: Sequence[int]) -> QuadraticSurd:
    """Exact value of ``[pre; period, period, ...]``."""
    period = _digits(period)
    if not period:
        raise ValueError("period must be nonempty")
    y = _purely_periodic(period)
    m = matrix(pre.digits, pre.a0)
    if m[0] * m[3] - m[1] * m[2] == 0:
        raise AssertionError("degenerate Moebius map")
    x = _apply(m, y)
    if x != _apply(m, _apply(matrix(period[1:], period[0]), y)):
        raise AssertionError("back-substitution failed")
    return x


@lru_cache(maxsize=1 << 18)
def eval_tail(prefix: Digits, period: Digits) -> QuadraticSurd:
    """Value ``[t0; t1, t2, ...]`` of the eventually periodic digit stream ``prefix + period^inf``."""
    if prefix:
        return _apply(matrix(prefix[1:], prefix[0]), _purely_periodic(period))
    return _purely_periodic(period)


# -- serialization ---------------------------------------------------------

_PERIODIC_RE = re.compile(r"^\s*(?:(-?\d+)\s*;)?\s*([\d,\s]*?)\s*,?\s*(?:\(([\d,\s]+)\))?\s*$")


def parse_periodic(text: str) -> Tuple[Word, Digits]:
    """Parse ``"0;2,1,(2,2,1,1)"`` into (preperiod word, period). Period may be empty."""
    m = _PERIODIC_RE.match(text)
    if not m:
        raise ValueError(f"malformed word {text!r}")
    head = int(m.group(1)) if m.group(1) is not None else None
    body = tuple(int(t) for t in m.group(2).replace(" ", "").split(",") if t)
    period = tuple(int(t) for t in (m.group(3) or "").replace(" ", "").split(",") if t)
    return Word(body, head), _digits(period)


def format_periodic(pre: Word, period: Sequence[int] = ()) -> str:
    parts = [str(a) for a in pre.digits]
    if period:
        parts.append("(" + ",".join(map(str, period)) + ")")
    body = ",".join(parts)
    if pre.head is None:
        return body
    return f"{pre.head};{body}"


def hurwitz_sequence(n: int) -> List[QuadraticSurd]:
    """Exact surds ``q_k * |q_k*phi - p_k|`` over the convergents of the golden ratio."""
    phi = QuadraticSurd(1, 1, 5, 2)
    out = []
    for c in convergents(Word((1,) * n, 1)):
        out.append(abs(c.q * (c.q * phi - c.p)))
    return out

