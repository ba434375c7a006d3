"""Gauss-Cantor sets ``K(gamma, B)``: covers by cylinders, dimension bounds, sums.

``K(B)`` is the set of ``[0; b1, b2, ...]`` whose digit string is a
concatenation of blocks from a finite prefix-free word set ``B``;
``K(gamma, B)`` puts the fixed word ``gamma`` in front.  ``C(n)`` is the
set of continued fractions with all digits at most ``n``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import ROUND_CEILING, Decimal
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import log
from typing import Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .cf import QuadraticSurd, Word, eval_periodic
from .cf.words import Digits, _digits
from .errors import BudgetExceeded

DEFAULT_BUDGET = 1 << 22

Mat = Tuple[int, int, int, int]
_ID: Mat = (1, 0, 0, 1)


def _mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@lru_cache(maxsize=4096)
def _block(digits: Digits) -> Mat:
    """Product of ``[[a, 1], [1, 0]]`` over the digits.

    For the word ``w`` this is ``[[q, q'], [p, p']]`` where ``p/q`` and
    ``p'/q'`` are the last two convergents of ``[0; w]``.
    """
    m = _ID
    for a in digits:
        m = _mul(m, (a, 1, 1, 0))
    return m


def _moebius(m: Mat, t):
    q, qp, p, pp = m
    return (p + pp * t) / (q + qp * t)


# -- word sets ---------------------------------------------------------------

@dataclass(frozen=True)
class WordSet:
    """Finite prefix-free set of nonempty words, stored sorted."""

    words: Tuple[Digits, ...]

    def __post_init__(self):
        ws = tuple(sorted({_digits(w) for w in self.words}))
        if not ws:
            raise ValueError("word set must be nonempty")
        if any(len(w) == 0 for w in ws):
            raise ValueError("words must be nonempty")
        for u in ws:
            for v in ws:
                if u != v and v[:len(u)] == u:
                    raise ValueError(f"word set is not primitive: {u} is a prefix of {v}")
        object.__setattr__(self, "words", ws)

    @classmethod
    def of(cls, *words) -> "WordSet":
        return cls(tuple((w,) if isinstance(w, int) else tuple(w) for w in words))

    @classmethod
    def parse(cls, text: str) -> "WordSet":
        """``"1,2"`` gives single-digit words; ``"(1,1,2),(2,2,1)"`` gives longer ones."""
        text = text.replace(" ", "")
        if "(" in text:
            groups = [g for g in text.replace("),(", ")|(").split("|") if g]
            words = []
            for g in groups:
                if not (g.startswith("(") and g.endswith(")")):
                    raise ValueError(f"malformed word set {text!r}")
                words.append(tuple(int(t) for t in g[1:-1].split(",") if t))
            return cls(tuple(words))
        return cls(tuple((int(t),) for t in text.split(",") if t))

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def transpose(self) -> "WordSet":
        return WordSet(tuple(w[::-1] for w in self.words))

    def __str__(self):
        if all(len(w) == 1 for w in self.words):
            return ",".join(str(w[0]) for w in self.words)
        return ",".join("(" + ",".join(map(str, w)) + ")" for w in self.words)


def transpose(B: WordSet) -> WordSet:
    """Reverse every word.  Raises if the reversed set is no longer prefix-free."""
    return B.transpose()


def alphabet(n: int) -> WordSet:
    """``{1, ..., n}``, the block set of ``C(n)``."""
    return WordSet(tuple((a,) for a in range(1, n + 1)))


@dataclass(frozen=True)
class GaussCantorSpec:
    B: WordSet
    prefix: Digits = ()

    def __post_init__(self):
        if not isinstance(self.B, WordSet):
            object.__setattr__(self, "B", WordSet(tuple(self.B)))
        object.__setattr__(self, "prefix", _digits(self.prefix))

    @classmethod
    def C(cls, n: int) -> "GaussCantorSpec":
        return cls(alphabet(n))


SpecLike = Union[GaussCantorSpec, WordSet]


def _spec(x) -> GaussCantorSpec:
    if isinstance(x, GaussCantorSpec):
        return x
    if isinstance(x, WordSet):
        return GaussCantorSpec(x)
    return GaussCantorSpec(WordSet(tuple(x)))


# -- cylinders ---------------------------------------------------------------

@dataclass(frozen=True)
class CylinderInterval:
    """Closed interval of all ``[0; word, t]`` with ``t`` in ``[0, 1]``.

    ``lam`` and ``Lam`` bound ``|(G^n)'|`` on the interval from below and above.
    """

    word: Digits
    lo: Fraction
    hi: Fraction
    level: int
    lam: Fraction
    Lam: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, other: "CylinderInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def _cylinder(word: Digits, m: Mat, level: int) -> CylinderInterval:
    q, qp, p, pp = m
    a, b = Fraction(p, q), Fraction(p + pp, q + qp)
    return CylinderInterval(word, min(a, b), max(a, b), level, Fraction(q * q), Fraction((q + qp) ** 2))


def cylinder_interval(beta: Sequence[int], level: Optional[int] = None) -> CylinderInterval:
    """``I(beta)`` with endpoints ``p/q`` and ``(p+p')/(q+q')``; length ``1/(q(q+q'))``."""
    beta = _digits(beta)
    if not beta:
        raise ValueError("cylinder of the empty word is the whole unit interval")
    return _cylinder(beta, _block(beta), len(beta) if level is None else level)


def _check_budget(n: int, m: int, budget: int, what: str) -> None:
    if n ** m > budget:
        raise BudgetExceeded(what, n ** m, budget)


def _level_words(B: WordSet, m: int, budget: int = DEFAULT_BUDGET) -> List[Tuple[Digits, Mat]]:
    """All concatenations of ``m`` blocks with their matrices, in block-lexicographic order."""
    _check_budget(len(B), m, budget, f"level {m} cover of {len(B)} blocks")
    out = [((), _ID)]
    for _ in range(m):
        out = [(w + b, _mul(M, _block(b))) for w, M in out for b in B.words]
    return out


def cover(spec: SpecLike, m: int, budget: int = DEFAULT_BUDGET) -> List[CylinderInterval]:
    """The ``|B|^m`` level-``m`` cylinders of ``K(gamma, B)``, sorted by left endpoint."""
    spec = _spec(spec)
    if m < 1:
        raise ValueError("level must be >= 1")
    G = _block(spec.prefix)
    cyl = [_cylinder(spec.prefix + w, _mul(G, M), m) for w, M in _level_words(spec.B, m, budget)]
    cyl.sort(key=lambda c: c.lo)
    return cyl


def write_cover_csv(cyl: Iterable[CylinderInterval], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["level", "word", "lo_num", "lo_den", "hi_num", "hi_den"])
    for c in cyl:
        w.writerow([c.level, "-".join(map(str, c.word)),
                    c.lo.numerator, c.lo.denominator, c.hi.numerator, c.hi.denominator])


# -- affine test system ------------------------------------------------------

@dataclass(frozen=True)
class AffineCantor:
    """Cantor set of ``branches`` affine maps of slope ``slope`` (middle third by default)."""

    slope: int = 3
    branches: int = 2

    def __post_init__(self):
        if not 2 <= self.branches <= self.slope:
            raise ValueError("need 2 <= branches <= slope")

    @property
    def dimension(self) -> float:
        return log(self.branches) / log(self.slope)

    def cover(self, m: int) -> List[Tuple[Fraction, Fraction]]:
        step = (self.slope - 1) // (self.branches - 1)
        ivs = [(Fraction(0), Fraction(1))]
        for _ in range(m):
            ivs = [(lo + (hi - lo) * Fraction(i * step, self.slope), lo + (hi - lo) * Fraction(i * step + 1, self.slope))
                   for lo, hi in ivs for i in range(self.branches)]
        return ivs


# -- Palis-Takens bounds -----------------------------------------------------

class DimBounds(NamedTuple):
    alpha: float
    beta: float
    level: int

    def contains(self, x: float) -> bool:
        return self.alpha <= x <= self.beta

    @property
    def width(self) -> float:
        return self.beta - self.alpha


def _pressure_root(logs: np.ndarray, target: float = 0.0, tol: float = 1e-12) -> float:
    """Root in [0, 1] of ``log sum exp(-s * logs) = target``, clamped to the ends.

    The left side is nonincreasing in ``s``, so bisection is safe.
    """
    g = lambda s: logsumexp(-s * logs) - target
    if g(1.0) >= 0:
        return 1.0
    if g(0.0) <= 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def palis_takens_bounds(system: Union[SpecLike, AffineCantor], m: int, n0: int = 1,
                        budget: int = DEFAULT_BUDGET) -> DimBounds:
    """``alpha_m <= dim K <= beta_m`` from the level-``m`` cover.

    ``beta_m`` solves ``sum 1/lambda(J)^s = 1`` and ``alpha_m`` solves
    ``sum 1/Lambda(J)^s = max |(psi^(n0-1))'|``; for the Gauss branches
    ``lambda = q^2`` and ``Lambda = (q+q')^2``.  A prefix does not change the
    bounds, since the expanding map acts on the blocks after it.
    """
    if m < 1 or n0 < 1:
        raise ValueError("level and mixing time must be >= 1")
    if isinstance(system, AffineCantor):
        logs = np.full(system.branches ** m, m * log(system.slope))
        target = (n0 - 1) * log(system.slope)
        a = _pressure_root(logs, target)
        return DimBounds(a, _pressure_root(logs), m)
    spec = _spec(system)
    mats = [M for _, M in _level_words(spec.B, m, budget)]
    log_lam = np.array([2 * log(M[0]) for M in mats])
    log_Lam = np.array([2 * log(M[0] + M[1]) for M in mats])
    target = 0.0
    if n0 > 1:
        target = max(2 * log(M[0] + M[1]) for _, M in _level_words(spec.B, n0 - 1, budget))
    beta = _pressure_root(log_lam)
    alpha = _pressure_root(log_Lam, target)
    return DimBounds(min(alpha, beta), beta, m)


# -- Euler's transpose symmetry ---------------------------------------------

class EulerCheck(NamedTuple):
    q: int
    q_transpose: int
    equal: bool


def euler_denominator_check(beta: Sequence[int]) -> EulerCheck:
    """Reduced denominators of ``[0; beta]`` and ``[0; reversed beta]``."""
    beta = _digits(beta)
    if not beta:
        raise ValueError("empty word")
    x = Fraction(0)
    for a in reversed(beta):
        x = 1 / (a + x)
    y = Fraction(0)
    for a in beta:
        y = 1 / (a + y)
    return EulerCheck(x.denominator, y.denominator, x.denominator == y.denominator)


# -- convex hull of K(B) -----------------------------------------------------

@lru_cache(maxsize=256)
def _extremes(B: WordSet) -> Tuple[QuadraticSurd, QuadraticSurd]:
    """Exact ``(min K(B), max K(B))``.

    Appending a block of odd length reverses the order of the tail, so the
    extremes solve a two-state optimality system.  Some pair of blocks
    (one used while minimizing, one while maximizing) is optimal; every pair is
    tried and the optimality conditions are checked exactly.
    """
    odd = lambda w: len(w) % 2 == 1

    def values(wmin, wmax):
        if odd(wmin) and odd(wmax):
            return eval_periodic(Word(), wmin + wmax), eval_periodic(Word(), wmax + wmin)
        if not odd(wmin) and not odd(wmax):
            return eval_periodic(Word(), wmin), eval_periodic(Word(), wmax)
        if odd(wmin):
            mx = eval_periodic(Word(), wmax)
            return _moebius(_block(wmin), mx), mx
        mn = eval_periodic(Word(), wmin)
        return mn, _moebius(_block(wmax), mn)

    for wmin in B.words:
        for wmax in B.words:
            mn, mx = values(wmin, wmax)
            ok = True
            for w in B.words:
                M = _block(w)
                if _moebius(M, mx if odd(w) else mn) < mn or _moebius(M, mn if odd(w) else mx) > mx:
                    ok = False
                    break
            if ok:
                return mn, mx
    raise AssertionError(f"no optimal block policy found for {B}")


def hull(spec: SpecLike) -> Tuple[QuadraticSurd, QuadraticSurd]:
    """Exact endpoints of the convex hull of ``K(gamma, B)``."""
    spec = _spec(spec)
    mn, mx = _extremes(spec.B)
    if not spec.prefix:
        return mn, mx
    G = _block(spec.prefix)
    a, b = _moebius(G, mn), _moebius(G, mx)
    return (a, b) if a < b else (b, a)


def _enclose_float(x: QuadraticSurd) -> Tuple[float, float]:
    lo, hi = x.enclose(80)
    return np.nextafter(float(lo), -np.inf), np.nextafter(float(hi), np.inf)


def _outward(lo: np.ndarray, hi: np.ndarray, ulps: int = 8):
    """Widen float endpoints by a few relative ulps to absorb rounding in the Moebius evaluation."""
    eps = ulps * np.finfo(float).eps
    return lo - eps * np.maximum(np.abs(lo), 1.0), hi + eps * np.maximum(np.abs(hi), 1.0)


def tight_intervals(spec: SpecLike, m: int, budget: int = DEFAULT_BUDGET, kind: str = "tight"):
    """Float enclosures of the level-``m`` pieces of ``K(gamma, B)``, sorted by ``lo``.

    ``kind="tight"`` takes ``[0; gamma, beta, t]`` for ``t`` in the hull of
    ``K(B)``: the smallest interval around each piece, a point when ``B`` has
    one word.  ``kind="full"`` lets ``t`` range over ``[0, 1]`` (the cylinders
    of :func:`cover`).
    """
    spec = _spec(spec)
    if kind == "tight":
        mn, mx = _extremes(spec.B)
        tmn, tmx = float(mn), float(mx)
    elif kind == "full":
        tmn, tmx = 0.0, 1.0
    else:
        raise ValueError(f"unknown interval kind {kind!r}")
    G = _block(spec.prefix)
    mats = np.array([_mul(G, M) for _, M in _level_words(spec.B, m, budget)], dtype=object)
    if max(int(M) for M in mats[:, 0]) >= 2 ** 52:
        raise BudgetExceeded("float cylinder endpoints (denominator too large)", int(max(mats[:, 0])), 2 ** 52)
    q, qp, p, pp = (mats[:, i].astype(float) for i in range(4))
    e1 = (p + pp * tmn) / (q + qp * tmn)
    e2 = (p + pp * tmx) / (q + qp * tmx)
    lo, hi = _outward(np.minimum(e1, e2), np.maximum(e1, e2))
    order = np.argsort(lo, kind="stable")
    return lo[order], hi[order]


# -- arithmetic sums ---------------------------------------------------------

def merge_intervals(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Union of closed intervals as sorted, pairwise disjoint pieces."""
    if len(lo) == 0:
        return lo, hi
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    start = np.ones(len(lo), dtype=bool)
    start[1:] = lo[1:] > reach[:-1]
    idx = np.flatnonzero(start)
    end = np.append(idx[1:], len(lo)) - 1
    return lo[idx], reach[end]


def _covered(s_lo, s_hi, lo, hi) -> np.ndarray:
    j = np.searchsorted(s_lo, lo, side="right") - 1
    ok = j >= 0
    jj = np.where(ok, j, 0)
    return ok & (s_hi[jj] >= hi) if len(s_lo) else np.zeros(len(lo), dtype=bool)


@dataclass
class SumCover:
    """Merged outer cover of ``K(A) + K(B)`` at a given level."""

    lo: np.ndarray
    hi: np.ndarray
    level: int
    pairs_considered: int

    @property
    def intervals(self) -> List[Tuple[float, float]]:
        return list(zip(self.lo.tolist(), self.hi.tolist()))

    @property
    def hull(self) -> Tuple[float, float]:
        return float(self.lo[0]), float(self.hi[-1])

    @property
    def measure(self) -> float:
        return float(np.sum(self.hi - self.lo))

    @property
    def coverage(self) -> float:
        a, b = self.hull
        return self.measure / (b - a) if b > a else 1.0

    @property
    def is_interval(self) -> bool:
        return len(self.lo) == 1


def sum_cover(A: SpecLike, B: SpecLike, m: int, budget: int = DEFAULT_BUDGET,
              kind: str = "tight", chunk: int = 1 << 22) -> SumCover:
    """Union of ``I + J`` over level-``m`` pieces ``I`` of ``K(A)`` and ``J`` of ``K(B)``.

    Pieces are tight by default (see :func:`tight_intervals`).  Rather than forming
    all ``|A|^m |B|^m`` pairs, the ``B`` pieces are merged first and each ``I``
    is added to that union; an ``I`` whose sum with the hull of ``K(B)`` already
    lies inside the running result contributes nothing and is skipped.  The
    result is the same union of pairwise sums.
    """
    a_lo, a_hi = tight_intervals(A, m, budget, kind)
    b_lo, b_hi = merge_intervals(*tight_intervals(B, m, budget, kind))
    hb_lo, hb_hi = b_lo[0], b_hi[-1]
    order = np.argsort(-(a_hi - a_lo), kind="stable")
    a_lo, a_hi = a_lo[order], a_hi[order]
    s_lo, s_hi = np.empty(0), np.empty(0)
    batch = max(1, chunk // len(b_lo))
    used = 0
    for start in range(0, len(a_lo), batch):
        lo, hi = a_lo[start:start + batch], a_hi[start:start + batch]
        need = ~_covered(s_lo, s_hi, lo + hb_lo, hi + hb_hi)
        if not need.any():
            continue
        lo, hi = lo[need], hi[need]
        used += len(lo) * len(b_lo)
        new_lo = (lo[:, None] + b_lo[None, :]).ravel()
        new_hi = (hi[:, None] + b_hi[None, :]).ravel()
        # round sums outward: one ulp covers the single addition
        new_lo = np.nextafter(new_lo, -np.inf)
        new_hi = np.nextafter(new_hi, np.inf)
        s_lo, s_hi = merge_intervals(np.concatenate([s_lo, new_lo]), np.concatenate([s_hi, new_hi]))
    return SumCover(s_lo, s_hi, m, used)


# -- gap exponent ------------------------------------------------------------

class GapCheck(NamedTuple):
    s0: float
    n_max: int
    passed: bool
    worst_ratio: float          # max over words of the children's sum divided by the parent's
    worst_word: Digits
    threshold: float            # smallest exponent that would pass for every checked word
    words_checked: int


def _cyl_scale(w: Digits) -> int:
    """``q (q + q')``, the reciprocal length of ``I(w)``."""
    q, qp, _, _ = _block(w)
    return q * (q + qp)


def gap_exponent_check(s0: float, n_max: int, left: Digits = (1, 1, 2), right: Digits = (2, 2, 1),
                       budget: int = DEFAULT_BUDGET) -> GapCheck:
    """Check ``|I(t,1,1,2)|^s + |I(t,2,2,1)|^s <= |I(t)|^s`` for all ``t`` in ``{1,2}^n``, ``n <= n_max``.

    Interval lengths are exact; only the powers are floating point.
    """
    if not 0 < s0 < 1:
        raise ValueError("s0 must lie in (0, 1)")
    _check_budget(2, n_max + 1, budget, "gap exponent words")
    worst, worst_word, thr, count = -np.inf, (), 0.0, 0
    for n in range(n_max + 1):
        for t in product((1, 2), repeat=n):
            c = _cyl_scale(t)
            l1 = log(c) - log(_cyl_scale(t + left))
            l2 = log(c) - log(_cyl_scale(t + right))
            ratio = np.exp(s0 * l1) + np.exp(s0 * l2)
            count += 1
            if ratio > worst:
                worst, worst_word = ratio, t
            if np.exp(thr * l1) + np.exp(thr * l2) > 1:
                thr = brentq(lambda s: np.exp(s * l1) + np.exp(s * l2) - 1, 0.0, 1.0, xtol=1e-15)
    return GapCheck(s0, n_max, bool(worst <= 1), float(worst), worst_word, float(thr), count)


def dimension_upper_bound(dim_value: float, s0: float, digits: int = 6) -> Decimal:
    """``dim_value`` rounded up to ``digits`` decimals, plus ``s0``."""
    q = Decimal(1).scaleb(-digits)
    up = Decimal(repr(dim_value)).quantize(q, rounding=ROUND_CEILING)
    return up + Decimal(repr(s0))
