"""Eventually periodic bi-infinite sequences and Perron's height function.

A sequence is stored in five parts ``...L L l | c | r R R...``: left period,
left preperiod, center, right preperiod, right period.  Index 0 is the first
digit of the center.  The height at the origin is

    f(x) = [x_0; x_1, x_2, ...] + [0; x_{-1}, x_{-2}, ...]

and Markov/Lagrange values are its supremum / limsup along the shift orbit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm
from typing import List, NamedTuple, Optional, Sequence, Tuple

import mpmath
from mpmath import libmp

from .precision import CertifiedReal, PrecisionContext, enclosure_to_certified, resolve
from .surd import QuadraticSurd
from .words import Digits, _digits, eval_tail


def _rotate(w: Digits, k: int) -> Digits:
    k %= len(w)
    return w[k:] + w[:k]


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    left_period: Digits
    left_pre: Digits
    center: Digits
    right_pre: Digits
    right_period: Digits

    def __post_init__(self):
        for name in ("left_period", "left_pre", "center", "right_pre", "right_period"):
            object.__setattr__(self, name, _digits(getattr(self, name)))
        if not self.left_period or not self.right_period:
            raise ValueError("both periods must be nonempty")
        if not self.center:
            raise ValueError("center must contain the origin digit")

    @classmethod
    def periodic(cls, word: Sequence[int]) -> "EventuallyPeriodicSeq":
        """The sequence ``...www...`` with the origin at ``word[0]``."""
        w = _digits(word)
        return cls(w, (), w, (), w)

    @classmethod
    def from_tails(cls, center: Sequence[int], right: Tuple[Digits, Digits],
                   leftward: Tuple[Digits, Digits]) -> "EventuallyPeriodicSeq":
        """Build from a center, the digits to its right ``(prefix, period)`` and
        the digits to its left read leftwards ``(prefix, period)``."""
        (lp, lper), (rp, rper) = leftward, right
        return cls(lper[::-1], lp[::-1], tuple(center), rp, rper)

    # -- indexing ---------------------------------------------------------

    @property
    def _right_start(self) -> int:
        return len(self.center) + len(self.right_pre)

    @property
    def _left_start(self) -> int:
        return -len(self.left_pre)

    def digit(self, i: int) -> int:
        nc, nr = len(self.center), len(self.right_pre)
        if 0 <= i < nc:
            return self.center[i]
        if i >= nc:
            j = i - nc
            if j < nr:
                return self.right_pre[j]
            return self.right_period[(j - nr) % len(self.right_period)]
        j = -i - 1
        nl = len(self.left_pre)
        if j < nl:
            return self.left_pre[nl - 1 - j]
        L = self.left_period
        return L[len(L) - 1 - ((j - nl) % len(L))]

    def window(self, lo: int, hi: int) -> Digits:
        """Digits ``x_lo .. x_hi`` inclusive."""
        return tuple(self.digit(i) for i in range(lo, hi + 1))

    def right_tail(self, i: int) -> Tuple[Digits, Digits]:
        """``x_i, x_{i+1}, ...`` as (prefix, period)."""
        start = self._right_start
        if i >= start:
            return (), _rotate(self.right_period, i - start)
        return self.window(i, start - 1), self.right_period

    def left_tail(self, i: int) -> Tuple[Digits, Digits]:
        """``x_i, x_{i-1}, ...`` as (prefix, period)."""
        start = self._left_start - 1
        back = self.left_period[::-1]
        if i <= start:
            return (), _rotate(back, start - i)
        return tuple(self.digit(j) for j in range(i, start, -1)), back

    # -- symmetries -------------------------------------------------------

    def shift(self, k: int) -> "EventuallyPeriodicSeq":
        """``sigma^k``: the digit at index k becomes the origin."""
        return EventuallyPeriodicSeq.from_tails((self.digit(k),), self.right_tail(k + 1), self.left_tail(k - 1))

    def transpose(self) -> "EventuallyPeriodicSeq":
        """Reflection ``x'_i = x_{-i}``."""
        return EventuallyPeriodicSeq.from_tails((self.digit(0),), self.left_tail(-1), self.right_tail(1))

    def minimal_period(self) -> Optional[Digits]:
        """Smallest word ``w`` with ``self == ...www...`` (read from the origin), or None."""
        R = self.right_period
        anchor = self._right_start
        span = lcm(len(R), len(self.left_period))
        # agreement on lcm consecutive digits of the left periodic part propagates forever
        for i in range(self._left_start - 2 * span, anchor):
            if self.digit(i) != R[(i - anchor) % len(R)]:
                return None
        p = next(p for p in range(1, len(R) + 1) if len(R) % p == 0 and R == R[:p] * (len(R) // p))
        return self.window(0, p - 1)

    # -- serialization ----------------------------------------------------

    def __str__(self):
        j = lambda w: ",".join(map(str, w))
        return f"(({j(self.left_period)})){j(self.left_pre)}|{j(self.center)}|{j(self.right_pre)}(({j(self.right_period)}))"

    @classmethod
    def parse(cls, text: str) -> "EventuallyPeriodicSeq":
        m = _SEQ_RE.match(text.replace(" ", ""))
        if not m:
            raise ValueError(f"malformed sequence {text!r}; expected ((L))l|c|r((R))")
        parts = [tuple(int(t) for t in g.split(",") if t) for g in m.groups()]
        return cls(*parts)


_SEQ_RE = re.compile(r"^\(\(([\d,]+)\)\)([\d,]*)\|([\d,]+)\|([\d,]*)\(\(([\d,]+)\)\)$")


# -- heights ---------------------------------------------------------------

def _height_exact(s: EventuallyPeriodicSeq, k: int):
    """(right, left) surds with f(sigma^k s) = right + 1/left."""
    right = eval_tail(*s.right_tail(k))
    left = eval_tail(*s.left_tail(k - 1))
    return right, left


def _certify(right: QuadraticSurd, left: QuadraticSurd, bits: int) -> CertifiedReal:
    inv = left.inverse()
    if right.compatible(inv):
        v = right + inv
        lo, hi = v.enclose(bits)
        return enclosure_to_certified(lo, hi, bits, exact=v)
    rlo, rhi = right.enclose(bits + 4)
    ilo, ihi = inv.enclose(bits + 4)
    lo = mpmath.mp.make_mpf(libmp.mpf_add(rlo._mpf_, ilo._mpf_, bits, "f"))
    hi = mpmath.mp.make_mpf(libmp.mpf_add(rhi._mpf_, ihi._mpf_, bits, "c"))
    return enclosure_to_certified(lo, hi, bits)


def perron_height(s: EventuallyPeriodicSeq, k: int = 0, ctx: Optional[PrecisionContext] = None) -> CertifiedReal:
    """``f(sigma^k s)`` with a certified radius; exact when both tails share a radicand."""
    ctx = resolve(ctx)
    return _certify(*_height_exact(s, k), ctx.bits)


def tail_bound(depth: int) -> mpmath.mpf:
    """Bound on the change of a one-sided value when digits beyond ``depth`` are altered."""
    return mpmath.mpf(2) ** (2 - depth)


class MarkovValue(NamedTuple):
    value: CertifiedReal
    shift: int


def _argmax(cands: List[Tuple[CertifiedReal, int]]) -> Tuple[CertifiedReal, int]:
    best, best_k = cands[0]
    for v, k in cands[1:]:
        if best.exact is not None and v.exact is not None and best.exact.compatible(v.exact):
            if v.exact > best.exact:
                best, best_k = v, k
        elif v.value > best.value:
            best, best_k = v, k
    return best, best_k


def _periodic_max(word: Digits, bits: int, offset: int = 0) -> Tuple[CertifiedReal, int]:
    s = EventuallyPeriodicSeq.periodic(word)
    return _argmax([(perron_height(s, k, PrecisionContext(bits)), k + offset) for k in range(len(word))])


def markov_value(s: EventuallyPeriodicSeq, ctx: Optional[PrecisionContext] = None,
                 depth: Optional[int] = None) -> MarkovValue:
    """Supremum of ``f`` over the whole shift orbit, with a shift attaining it.

    Periodic inputs reduce to one period of shifts.  Otherwise every shift
    within ``depth`` digits of the non-periodic core is evaluated, together
    with the limits along both periodic ends; shifts further out differ from
    those limits by at most ``tail_bound(depth)``.
    """
    ctx = resolve(ctx)
    per = s.minimal_period()
    if per is not None:
        return MarkovValue(*_periodic_max(s.window(0, len(per) - 1), ctx.bits))
    if depth is None:
        depth = ctx.bits + 3
    kmin = s._left_start - depth
    kmax = s._right_start + depth
    window = [(perron_height(s, k, ctx), k) for k in range(kmin, kmax + 1)]
    best, best_k = _argmax(window)
    right_lim, _ = _periodic_max(s.right_period, ctx.bits)
    left_lim, _ = _periodic_max(s.left_period, ctx.bits)
    limit = right_lim if right_lim.value >= left_lim.value else left_lim
    bound = tail_bound(depth)
    with mpmath.workprec(ctx.bits + 8):
        if best.lo > limit.hi + bound:
            return MarkovValue(best, best_k)
        if limit.value >= best.value:
            return MarkovValue(limit.widen(bound), kmax if limit is right_lim else kmin)
        return MarkovValue(best.widen(bound), best_k)


def lagrange_value(s: EventuallyPeriodicSeq, ctx: Optional[PrecisionContext] = None) -> CertifiedReal:
    """``limsup_{n -> +inf} f(sigma^n s)``: the maximum over one right period."""
    ctx = resolve(ctx)
    return _periodic_max(s.right_period, ctx.bits)[0]
