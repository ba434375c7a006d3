"""Certified approximations of the Lagrange and Markov spectra, gaps, and Hall's construction.

Outer covers come from windows ``x_{-N} .. x_N`` around the position where
the height ``f`` attains the Markov value: every unknown digit lies in
``1..A``, so each side of ``f`` at the center ranges over the image of an
interval under an integer Moebius map.  Windows are grown outward and cut
as soon as the center range leaves ``[a, b]`` or some other position is
forced to be higher than the center.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from mpmath import mpf

from .cf import EventuallyPeriodicSeq, PrecisionContext, QuadraticSurd, markov_value
from .cf.precision import CertifiedReal
from .cf.words import Digits, matrix
from .errors import BudgetExceeded
from .gauss_cantor import merge_intervals
from .markov import ZAGIER_C

DEFAULT_NODE_BUDGET = 5_000_000
DEFAULT_PERIOD_CAP = 10
_DOMINANCE_REACH = 8
_LOCAL = 10

_down = lambda x: math.nextafter(x, -math.inf)
_up = lambda x: math.nextafter(x, math.inf)


# -- named constants -------------------------------------------------------------

@dataclass(frozen=True)
class NamedConstants:
    c_F: QuadraticSurd
    sqrt12: QuadraticSurd
    sqrt13: QuadraticSurd
    perron: QuadraticSurd  # (9*sqrt(3) + 65)/22
    zagier: float

    def items(self):
        return [
            ("c_F", "4 + (253589820 + 283748*sqrt(462))/491993569", self.c_F),
            ("sqrt12", "sqrt(12)", self.sqrt12),
            ("sqrt13", "sqrt(13)", self.sqrt13),
            ("perron", "(9*sqrt(3) + 65)/22", self.perron),
        ]

    def lines(self, digits: int = 30, bits: int = 256) -> List[str]:
        out = []
        with mpmath.workprec(bits):
            for name, expr, v in self.items():
                out.append(f"{name} = {expr} = {mpmath.nstr(v.to_mpf(bits), digits)}")
        out.append(f"zagier_c = {self.zagier!r}")
        return out


def constants() -> NamedConstants:
    den = 491993569
    return NamedConstants(
        c_F=QuadraticSurd(4 * den + 253589820, 283748, 462, den),
        sqrt12=QuadraticSurd.sqrt(12),
        sqrt13=QuadraticSurd.sqrt(13),
        perron=QuadraticSurd(65, 9, 3, 22),
        zagier=ZAGIER_C,
    )


# -- window bounds -----------------------------------------------------------------

def _side(p: int, pp: int, q: int, qp: int, A: int) -> Tuple[float, float]:
    """Outward float range of ``(p*y + pp)/(q*y + qp)`` for ``y`` in ``[(A+2)/(A+1), A+1]``.

    Every complete quotient of a sequence with digits in ``1..A`` lies there.
    """
    v1 = (p * (A + 2) + pp * (A + 1)) / (q * (A + 2) + qp * (A + 1))
    v2 = (p * (A + 1) + pp) / (q * (A + 1) + qp)
    return (_down(v1), _up(v2)) if v1 <= v2 else (_down(v2), _up(v1))


def _height_range(right: Sequence[int], left: Sequence[int], A: int) -> Tuple[float, float]:
    """Range of ``[right_0; right_1, ...] + [0; left_0, left_1, ...]`` over all tails."""
    rlo, rhi = _side(*matrix(right[1:], right[0]), A)
    llo, lhi = _side(*matrix(left, 0), A)
    return _down(rlo + llo), _up(rhi + lhi)


@dataclass(frozen=True)
class WindowBounds:
    """Range of ``f`` at the center of a window, over all extensions with digits ``<= A``.

    ``dominated`` is set when some other position of the window is certainly
    higher than the center, so no extension has its Markov value attained there.
    """

    lo: float
    hi: float
    dominated: bool

    @property
    def width(self) -> float:
        return self.hi - self.lo


def cylinder_markov_bounds(w: Sequence[int], N: int, A: int) -> WindowBounds:
    """Bounds for the window ``w = (x_{-N}, .., x_N)``; width at most ``2^-(N-3)``."""
    w = tuple(int(d) for d in w)
    if len(w) != 2 * N + 1:
        raise ValueError(f"window must have length 2N+1 = {2 * N + 1}")
    if not all(1 <= d <= A for d in w):
        raise ValueError(f"digits must lie in 1..{A}")
    lo, hi = _height_range(w[N:], w[:N][::-1], A)
    dominated = any(_height_range(w[N + j:], w[:N + j][::-1], A)[0] > hi
                    for j in range(-N, N + 1) if j)
    return WindowBounds(lo, hi, dominated)


def window_size(Q: float) -> int:
    """Smallest ``N`` with ``2^-(N-3) < 1/(2Q)``."""
    N = 3
    while 2.0 ** (3 - N) >= 1 / (2 * Q):
        N += 1
    return N


# -- approximation ---------------------------------------------------------------

@dataclass(frozen=True)
class InnerPoint:
    """Markov value (equal to the Lagrange value) of the periodic sequence ``...www...``."""

    value: CertifiedReal
    word: Digits

    @property
    def exact(self) -> Optional[QuadraticSurd]:
        return self.value.exact

    def __float__(self):
        return float(self.value.value)


@dataclass
class SpectrumApproximation:
    a: float
    b: float
    Q: float
    A: int
    N: int
    raw_lo: np.ndarray
    raw_hi: np.ndarray
    inner: List[InnerPoint]
    period_bound: int
    nodes: int
    restricted: bool = False
    outer: List[Tuple[float, float]] = field(init=False)

    def __post_init__(self):
        lo, hi = merge_intervals(self.raw_lo, self.raw_hi)
        self.outer = list(zip(lo.tolist(), hi.tolist()))

    def covers(self, x: float) -> bool:
        return any(lo <= x <= hi for lo, hi in self.outer)

    @property
    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.outer)


def _dfs(a: float, b: float, A: int, N: int, width: float, budget: int):
    size = 2 * N + 1
    win = [0] * size
    los, his = [], []
    nodes = 0
    # position visited at each depth: 1, -1, 2, -2, ...
    order = [(k + 1) // 2 if k % 2 else -(k // 2) for k in range(1, 2 * N + 1)]

    def local_lo(j: int, r: int, l: int) -> float:
        i = N + j
        right = win[i:N + min(r, j + _LOCAL) + 1]
        left = win[N + max(-l, j - _LOCAL):i][::-1]
        return _height_range(right, left, A)[0]

    def visit(depth: int, r: int, l: int, R, L):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("spectrum windows", nodes, budget)
        rlo, rhi = _side(*R, A)
        llo, lhi = _side(*L, A)
        lo, hi = _down(rlo + llo), _up(rhi + lhi)
        if hi < a or lo > b:
            return
        if depth:
            pos = order[depth - 1]
            for j in range(max(-l, pos - _DOMINANCE_REACH), min(r, pos + _DOMINANCE_REACH) + 1):
                if j and local_lo(j, r, l) > hi:
                    return
        if hi - lo <= width or depth == 2 * N:
            los.append(lo)
            his.append(hi)
            return
        pos = order[depth]
        for d in range(1, A + 1):
            win[N + pos] = d
            if pos > 0:
                p, pp, q, qp = R
                visit(depth + 1, r + 1, l, (d * p + pp, p, d * q + qp, q), L)
            else:
                p, pp, q, qp = L
                visit(depth + 1, r, l + 1, R, (d * p + pp, p, d * q + qp, q))
        win[N + pos] = 0

    for c in range(1, A + 1):
        win[N] = c
        visit(0, 0, 0, (c, 1, 1, 0), (0, 1, 1, 0))
    return np.array(los, dtype=float), np.array(his, dtype=float), nodes


def _lyndon_words(n: int, A: int, keep) -> Iterable[Digits]:
    """Lyndon words of length ``n`` over ``1..A`` whose every prefix passes ``keep``."""
    w = [0] * (n + 1)

    def gen(t: int, p: int):
        if t > n:
            if n == p:
                yield tuple(w[1:])
            return
        for d in range(w[t - p], A + 1) if t > 1 else range(1, A + 1):
            w[t] = d
            if not keep(w[1:t + 1]):
                continue
            yield from gen(t + 1, p if t > 1 and d == w[t - p] else t)

    yield from gen(1, 1)


def periodic_points(a: float, b: float, A: int, max_period: int, bits: int = 128,
                    budget: int = DEFAULT_NODE_BUDGET) -> List[InnerPoint]:
    """Markov values in ``[a, b]`` of all primitive periodic words of length ``<= max_period``."""
    seen = 0

    def keep(prefix):
        nonlocal seen
        seen += 1
        if seen > budget:
            raise BudgetExceeded("periodic words", seen, budget)
        k = len(prefix) - 1
        # the newest digit only changes heights within reach of it
        for j in range(max(0, k - _LOCAL), k + 1):
            if _height_range(prefix[j:], prefix[max(0, j - _LOCAL):j][::-1], A)[0] > b:
                return False
        return True

    ctx = PrecisionContext(bits)
    out = []
    for n in range(1, max_period + 1):
        for w in _lyndon_words(n, A, keep):
            mv = markov_value(EventuallyPeriodicSeq.periodic(w), ctx)
            v = mv.value
            if v.hi >= a and v.lo <= b:
                k = mv.shift % n
                out.append(InnerPoint(v, w[k:] + w[:k]))
    out.sort(key=lambda p: (p.value.value, len(p.word), p.word))
    return out


def approximate_spectra(a: float, b: float, Q: float, A: int, period_bound: Optional[int] = None,
                        budget: int = DEFAULT_NODE_BUDGET, restricted: bool = False,
                        bits: int = 128) -> SpectrumApproximation:
    """Outer cover and inner points of ``M`` (and ``L``) in ``[a, b]`` at resolution ``1/Q``.

    Outer: every Markov value in ``[a, b]`` lies in one of the intervals,
    each of width ``<= 1/Q``.  This needs ``b <= A + 1`` since a digit ``d``
    forces ``f >= d``; with ``restricted=True`` the alphabet is taken as
    given and the cover is for sequences over ``1..A`` only.

    Inner: Markov values of periodic words of length ``<= period_bound``
    (default ``min(2N + 2, 10)``), each a point of ``L``, hence of ``M``.
    """
    a, b, Q = float(a), float(b), float(Q)
    if not a < b:
        raise ValueError("empty range")
    if Q < 1 or A < 1:
        raise ValueError("need Q >= 1 and A >= 1")
    if b > A + 1 and not restricted:
        raise ValueError(f"b = {b} exceeds A + 1 = {A + 1}: digits above A would be missed")
    N = window_size(Q)
    lo, hi, nodes = _dfs(a, b, A, N, 1 / Q, budget)
    if period_bound is None:
        period_bound = min(2 * N + 2, DEFAULT_PERIOD_CAP)
    inner = periodic_points(a, b, A, period_bound, bits, budget)
    return SpectrumApproximation(a, b, Q, A, N, lo, hi, inner, period_bound, nodes, restricted)


# -- gaps ------------------------------------------------------------------------

@dataclass(frozen=True)
class GapReport:
    lo: float
    hi: float
    gaps: Tuple[Tuple[float, float], ...]

    def contains(self, lo: float, hi: float) -> bool:
        """Whether ``[lo, hi]`` lies inside one reported gap."""
        return any(g0 < lo and hi < g1 for g0, g1 in self.gaps)


def detect_gaps(approx: SpectrumApproximation, scan: Optional[Tuple[float, float]] = None) -> GapReport:
    """Maximal open subintervals of the scan range (default ``[a, b]``) missing the outer cover."""
    lo, hi = (approx.a, approx.b) if scan is None else map(float, scan)
    if lo < approx.a or hi > approx.b or lo >= hi:
        raise ValueError("scan range must be a nonempty part of the approximated range")
    gaps, cur = [], lo
    for c0, c1 in approx.outer:
        if c1 < cur:
            continue
        if c0 > hi:
            break
        if c0 > cur:
            gaps.append((cur, c0))
        cur = max(cur, c1)
    if cur < hi:
        gaps.append((cur, hi))
    return GapReport(lo, hi, tuple(gaps))


# -- output ----------------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x))


def write_approx_csv(approx: SpectrumApproximation, fh: IO[str]) -> None:
    """Rows ``kind,lo,hi,word``: merged outer intervals, then inner points (``lo = hi``)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["kind", "lo", "hi", "word"])
    for lo, hi in approx.outer:
        w.writerow(["outer", _fmt(lo), _fmt(hi), ""])
    for p in approx.inner:
        w.writerow(["inner", _fmt(p.value.lo), _fmt(p.value.hi), "-".join(map(str, p.word))])


def write_gaps_csv(report: GapReport, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["lo", "hi"])
    for lo, hi in report.gaps:
        w.writerow([_fmt(lo), _fmt(hi)])


def render_svg(approx: SpectrumApproximation, width: int = 900, height: int = 140) -> str:
    """Strip plot: outer intervals on the upper strip, inner points as ticks below."""
    pad = 40
    span = approx.b - approx.a
    X = lambda v: pad + (width - 2 * pad) * (min(max(v, approx.a), approx.b) - approx.a) / span
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{pad}" y="16">outer cover (M), Q = {approx.Q:g}, A = {approx.A}</text>',
           f'<text x="{pad}" y="86">inner points (periodic words)</text>']
    for lo, hi in approx.outer:
        x0, x1 = X(lo), X(hi)
        out.append(f'<rect x="{x0:.3f}" y="24" width="{max(x1 - x0, 0.5):.3f}" height="30" fill="#34495e"/>')
    for p in approx.inner:
        x = X(float(p))
        out.append(f'<line x1="{x:.3f}" y1="92" x2="{x:.3f}" y2="112" stroke="#c0392b"/>')
    y = height - 14
    out.append(f'<line x1="{pad}" y1="{y - 8}" x2="{width - pad}" y2="{y - 8}" stroke="black"/>')
    for k in range(6):
        v = approx.a + span * k / 5
        out.append(f'<text x="{X(v):.3f}" y="{y + 6}" text-anchor="middle">{v:.4f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- Hall's construction -----------------------------------------------------------

_HALL_LOW = 5.75


@dataclass
class HallRealization:
    """``target = c0 + [0; a_1, a_2, ...] + [0; b_1, b_2, ...]`` with digits in ``1..4``.

    ``sequence`` is the periodic sequence ``(c0, a_1..a_n, b_n..b_1)``; its
    Lagrange value ``value`` (the height at the ``c0`` positions) is within
    ``error`` of the target.
    """

    target: mpf
    c0: int
    a: Digits
    b: Digits
    sequence: EventuallyPeriodicSeq
    value: CertifiedReal
    error: mpf

    def interleaved(self, blocks: int) -> Digits:
        """Leading digits of ``[0; b1,c0,a1, b2,b1,c0,a1,a2, ...]`` (blocks ``b_k..b_1, c0, a_1..a_k``)."""
        out: List[int] = []
        for k in range(1, blocks + 1):
            out += list(self.b[:k][::-1]) + [self.c0] + list(self.a[:k])
        return tuple(out)


def hall_sequence(c0: int, a: Sequence[int], b: Sequence[int]) -> EventuallyPeriodicSeq:
    return EventuallyPeriodicSeq.periodic((c0,) + tuple(a) + tuple(b)[::-1])


class _C4Hull:
    """Ranges of ``[0; w, t]`` with ``t`` in ``C(4)`` (tight) or any tail (full)."""

    def __init__(self, bits: int):
        with mpmath.workprec(bits):
            r = mpmath.sqrt(2) - 1
            # complete quotients 1/t for t in the hull [(sqrt2-1)/2, 2(sqrt2-1)] of C(4)
            self.y = (1 / (2 * r), 2 / r)

    def tight(self, w):
        p, pp, q, qp = matrix(w, 0)
        u, v = [(p * y + pp) / (q * y + qp) for y in self.y]
        return (u, v) if u < v else (v, u)

    @staticmethod
    def full_width(w):
        _, _, q, qp = matrix(w, 0)
        return mpf(1) / (q * (q + qp))


def _hall_digits(t: mpf, eps: mpf, bits: int, max_depth: int = 200):
    H = _C4Hull(bits)
    with mpmath.workprec(bits):
        def search(x, y):
            if len(x) + len(y) > max_depth:
                return None
            if H.full_width(x) + H.full_width(y) <= eps:
                return x, y
            # refine the side whose piece is wider
            grow_x = H.full_width(x) >= H.full_width(y)
            cands = []
            for d in range(1, 5):
                nx, ny = (x + (d,), y) if grow_x else (x, y + (d,))
                (x0, x1), (y0, y1) = H.tight(nx), H.tight(ny)
                if x0 + y0 <= t <= x1 + y1:
                    # prefer the child where t sits most centrally
                    lo, hi = x0 + y0, x1 + y1
                    cands.append((abs(t - (lo + hi) / 2) / (hi - lo), d, nx, ny))
            for _, _, nx, ny in sorted(cands):
                found = search(nx, ny)
                if found:
                    return found
            return None

        return search((), ())


def hall_realize(target, eps=1e-8, bits: int = 128) -> HallRealization:
    """Write ``target >= 6`` as ``c0 + x + y`` with ``x, y`` in ``C(4)`` and realize it in ``L``.

    Targets down to 5.75 are accepted: there the ``c0 = 5`` positions still
    carry the largest heights of the constructed sequence.
    """
    with mpmath.workprec(bits):
        ell, eps = mpf(target), mpf(eps)
        if ell < _HALL_LOW:
            raise ValueError(f"target must be >= {_HALL_LOW}")
        r = mpmath.sqrt(2) - 1
        c0 = max(5, int(mpmath.ceil(ell - 4 * r)))
        t = ell - c0
        if not r <= t <= 4 * r:
            raise ValueError(f"{ell} - {c0} is outside [sqrt2 - 1, 4(sqrt2 - 1)]")
        found = _hall_digits(t, eps / 2, bits)
        if found is None:
            raise RuntimeError(f"no C(4) + C(4) decomposition found for {t}")
        a, b = found
        seq = hall_sequence(c0, a, b)
        val = markov_value(seq, PrecisionContext(bits)).value
        err = abs(val.value - ell) + val.radius
        if err > eps:
            raise RuntimeError(f"realized value misses the target by {mpmath.nstr(err, 3)}")
        return HallRealization(ell, c0, a, b, seq, val, err)
