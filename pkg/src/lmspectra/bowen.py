"""Hausdorff dimension from periodic orbits: transfer-operator traces and Fredholm determinants.

For the branch map ``psi`` of ``K(B)`` (``psi = G^{|b|}`` on the cylinder of
block ``b``) the trace of ``L_s^n`` is a sum over fixed points of ``psi^n``::

    tr(L_s^n) = sum |D|^{-s} / (1 - 1/D),    D = (psi^n)'(x)

and ``det(I - z L_s) = exp(-sum tr(L_s^n) z^n / n) = 1 + sum d_n(s) z^n``.
The dimension is the zero of ``s -> 1 + sum_{n<=M} d_n(s)`` for large ``M``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mpf

from .cf import QuadraticSurd
from .cf.precision import DEFAULT_BITS
from .cf.words import Digits, _purely_periodic
from .errors import BudgetExceeded, DimensionSolveError
from .gauss_cantor import DEFAULT_BUDGET, AffineCantor, GaussCantorSpec, WordSet, _block, _spec

BRACKET = (mpf("1e-3"), 1 - mpf("1e-3"))


@dataclass(frozen=True)
class PeriodicOrbit:
    """Fixed point ``x = [0; w, w, ...]`` of ``psi^n`` for the block word ``w`` (``n`` blocks)."""

    blocks: Tuple[Digits, ...]
    x: QuadraticSurd
    D: QuadraticSurd

    @property
    def word(self) -> Digits:
        return sum(self.blocks, ())

    @property
    def period(self) -> int:
        return len(self.blocks)


def multiplier(word: Sequence[int], x: Optional[QuadraticSurd] = None) -> QuadraticSurd:
    """Signed derivative of ``G^{|w|}`` at ``[0; w, w, ...]``: ``(-1)^{|w|} (q + q' x)^2``.

    Equivalently ``(-1)^{|w|} / prod x_i^2`` over the Gauss iterates ``x_i``.
    """
    word = tuple(word)
    if x is None:
        x = _purely_periodic(word).inverse()
    q, qp, _, _ = _block(word)
    D = (q + qp * x) ** 2
    return -D if len(word) % 2 else D


def _orbit(blocks: Tuple[Digits, ...]) -> PeriodicOrbit:
    w = sum(blocks, ())
    # [0; w-bar] is the reciprocal of the purely periodic [w0; w1, ...]
    x = _purely_periodic(w).inverse()
    return PeriodicOrbit(blocks, x, multiplier(w, x))


def enumerate_periodic(B: Union[WordSet, GaussCantorSpec], n: int, budget: int = DEFAULT_BUDGET) -> List[PeriodicOrbit]:
    """All ``|B|^n`` fixed points of ``psi^n``, one per block word (not per rotation class)."""
    if n < 1:
        raise ValueError("period must be >= 1")
    B = _spec(B).B
    if len(B) ** n > budget:
        raise BudgetExceeded(f"period-{n} orbits", len(B) ** n, budget)
    out = [()]
    for _ in range(n):
        out = [w + (b,) for w in out for b in B.words]
    return [_orbit(w) for w in out]


class TraceTable:
    """Per-period orbit data ``(log|D|, 1/(1 - 1/D))`` at a fixed working precision."""

    def __init__(self, logs: Dict[int, List[mpf]], weights: Dict[int, List[mpf]], bits: int,
                 counts: Optional[Dict[int, int]] = None):
        self.logs, self.weights, self.bits = logs, weights, bits
        self.counts = counts or {n: len(v) for n, v in logs.items()}

    @property
    def order(self) -> int:
        return max(self.logs)

    @classmethod
    def gauss(cls, B, M: int, bits: int = DEFAULT_BITS, budget: int = DEFAULT_BUDGET) -> "TraceTable":
        B = _spec(B).B
        total = sum(len(B) ** n for n in range(1, M + 1))
        if total > budget:
            raise BudgetExceeded(f"orbits up to period {M}", total, budget)
        logs, weights = {}, {}
        with mpmath.workprec(bits + 20):
            for n in range(1, M + 1):
                ls, ws = [], []
                for orb in enumerate_periodic(B, n, budget):
                    D = orb.D.to_mpf(bits + 20)
                    ls.append(mpmath.log(abs(D)))
                    ws.append(1 / (1 - 1 / D))
                logs[n], weights[n] = ls, ws
        return cls(logs, weights, bits)

    @classmethod
    def affine(cls, system: AffineCantor, M: int, bits: int = DEFAULT_BITS) -> "TraceTable":
        """All ``branches^n`` fixed points share the multiplier ``slope^n``; stored once with a count."""
        logs, weights, counts = {}, {}, {}
        with mpmath.workprec(bits + 20):
            for n in range(1, M + 1):
                D = mpf(system.slope) ** n
                logs[n] = [mpmath.log(D)]
                weights[n] = [system.branches ** n / (1 - 1 / D)]
                counts[n] = system.branches ** n
        return cls(logs, weights, bits, counts)

    def trace(self, s, n: int) -> mpf:
        with mpmath.workprec(self.bits + 20):
            s = mpf(s)
            return mpmath.fsum(w * mpmath.exp(-s * L) for w, L in zip(self.weights[n], self.logs[n]))

    def traces(self, s, M: Optional[int] = None) -> List[mpf]:
        M = self.order if M is None else M
        return [self.trace(s, n) for n in range(1, M + 1)]


def trace(s, n: int, orbits: Sequence[PeriodicOrbit], bits: int = DEFAULT_BITS) -> mpf:
    """``sum |D|^{-s} / (1 - 1/D)`` over the given fixed points of ``psi^n``."""
    if any(o.period != n for o in orbits):
        raise ValueError("orbit set mixes periods")
    with mpmath.workprec(bits + 20):
        s = mpf(s)
        terms = []
        for o in orbits:
            D = o.D.to_mpf(bits + 20)
            terms.append(abs(D) ** (-s) / (1 - 1 / D))
        return mpmath.fsum(terms)


def fredholm_coefficients(traces: Sequence, bits: int = DEFAULT_BITS) -> List[mpf]:
    """``d_1 .. d_M`` from ``tr_1 .. tr_M`` via ``d_n = -(1/n) sum_k tr_k d_{n-k}``, ``d_0 = 1``."""
    with mpmath.workprec(bits + 20):
        d = [mpf(1)]
        for n in range(1, len(traces) + 1):
            d.append(-mpmath.fsum(traces[k - 1] * d[n - k] for k in range(1, n + 1)) / n)
        return d[1:]


def determinant(table: TraceTable, s, M: Optional[int] = None) -> mpf:
    """Truncation ``1 + sum_{n<=M} d_n(s)``."""
    with mpmath.workprec(table.bits + 20):
        return 1 + mpmath.fsum(fredholm_coefficients(table.traces(s, M), table.bits))


@dataclass
class DimensionResult:
    order: int
    s: mpf
    residual: mpf
    bits: int
    orbit_counts: Dict[int, int]
    previous: Optional[mpf] = None
    history: List[mpf] = field(default_factory=list)

    @property
    def delta(self) -> Optional[mpf]:
        """``|s_M - s_{M-1}|``, the empirical error proxy."""
        return None if self.previous is None else abs(self.s - self.previous)

    @property
    def digits(self) -> int:
        """Decimal digits supported by the last increment (capped by the precision)."""
        cap = int(self.bits * 0.30103)
        if not self.delta:
            return cap
        return min(cap, max(0, int(-mpmath.log10(self.delta))))

    def report(self) -> str:
        digits = self.digits
        with mpmath.workprec(self.bits):
            body = {
                "order": self.order,
                "digits": digits,
                "s_M": mpmath.nstr(self.s, max(digits, 15), strip_zeros=False),
                "residual": mpmath.nstr(self.residual, 3),
                "delta": None if self.delta is None else mpmath.nstr(self.delta, 3),
                "bits": self.bits,
                "orbit_count": {str(n): c for n, c in sorted(self.orbit_counts.items())},
            }
        return json.dumps(body, indent=2)


def _root(table: TraceTable, M: int) -> Tuple[mpf, mpf]:
    F = lambda s: determinant(table, s, M)
    bits = table.bits
    with mpmath.workprec(bits + 20):
        a, b = BRACKET
        fa, fb = F(a), F(b)
        if fa * fb > 0 or fa == 0 and fb == 0:
            raise DimensionSolveError(
                f"truncated determinant of order {M} has no sign change on [{mpmath.nstr(a, 3)}, {mpmath.nstr(b, 3)}]"
                f" (values {mpmath.nstr(fa, 5)}, {mpmath.nstr(fb, 5)})")
        # bisection to a coarse bracket, then safeguarded secant
        while b - a > mpf("1e-4"):
            c = (a + b) / 2
            fc = F(c)
            if (fc < 0) == (fa < 0):
                a, fa = c, fc
            else:
                b, fb = c, fc
        x0, f0, x1, f1 = a, fa, b, fb
        tol = mpf(2) ** (8 - bits)
        for _ in range(200):
            if f1 == f0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not a <= x2 <= b:
                x2 = (a + b) / 2
            f2 = F(x2)
            if (f2 < 0) == (fa < 0):
                a, fa = x2, f2
            else:
                b, fb = x2, f2
            x0, f0, x1, f1 = x1, f1, x2, f2
            if abs(x1 - x0) < tol or f2 == 0:
                break
        return x1, abs(f1)


def solve_dimension(system: Union[WordSet, GaussCantorSpec, AffineCantor, Sequence], M: int,
                    bits: int = DEFAULT_BITS, budget: int = DEFAULT_BUDGET,
                    with_history: bool = False) -> DimensionResult:
    """Zero ``s_M`` of the order-``M`` determinant truncation in ``(0.001, 0.999)``.

    Also solves order ``M - 1`` to report ``|s_M - s_{M-1}|``.  If the residual
    exceeds ``2^-128`` the precision is doubled and the solve repeated.
    """
    if M < 2:
        raise ValueError("order must be >= 2")
    while True:
        if isinstance(system, AffineCantor):
            table = TraceTable.affine(system, M, bits)
        else:
            table = TraceTable.gauss(system, M, bits, budget)
        s, res = _root(table, M)
        if res <= mpf(2) ** -128 or bits >= 4096:
            break
        bits *= 2
    hist = []
    for k in range(2 if with_history else M - 1, M):
        try:
            hist.append(_root(table, k)[0])
        except DimensionSolveError:
            hist.append(None)
    prev = hist[-1] if hist else None
    hist.append(s)
    return DimensionResult(M, s, res, bits, dict(table.counts), prev, hist if with_history else [])
