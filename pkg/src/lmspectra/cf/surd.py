"""Exact arithmetic on real quadratic irrationals ``(a + b*sqrt(d)) / r``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational

import mpmath
from mpmath import libmp

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign2(q: Fraction, c: Fraction, u) -> int:
    """Sign of ``q + c*sqrt(u)`` for rational q, c and u >= 0."""
    sc = _sign(c) if u else 0
    sq = _sign(q)
    if sc == 0:
        return sq
    if sq == 0 or sq == sc:
        return sc
    lhs, rhs = q * q, c * c * u
    if lhs > rhs:
        return sq
    if lhs < rhs:
        return sc
    return 0


def _sign3(q: Fraction, c1: Fraction, u1, c2: Fraction, u2) -> int:
    """Sign of ``q + c1*sqrt(u1) + c2*sqrt(u2)``."""
    s1 = _sign2(q, c1, u1)
    s2 = _sign(c2) if u2 else 0
    if s2 == 0:
        return s1
    if s1 == 0 or s1 == s2:
        return s2
    # opposite signs: compare (q + c1 sqrt u1)^2 with c2^2 u2
    cmp = _sign2(q * q + c1 * c1 * u1 - c2 * c2 * u2, 2 * q * c1, u1)
    if cmp > 0:
        return s1
    if cmp < 0:
        return s2
    return 0


class QuadraticSurd:
    """Immutable real number ``(a + b*sqrt(d)) / r`` with integer fields.

    Normal form: ``r > 0``, ``gcd(a, b, r) = 1``, small square factors pulled
    out of ``d``; rationals are stored with ``b = 0`` and ``d = 1``.  Equality
    and hashing go through :attr:`key`, which is canonical without factoring
    ``d``.

    >>> QuadraticSurd.sqrt(8) == 2 * QuadraticSurd.sqrt(2)
    True
    """

    __slots__ = ("_a", "_b", "_d", "_r")

    def __init__(self, a: int, b: int = 0, d: int = 1, r: int = 1):
        a, b, d, r = int(a), int(b), int(d), int(r)
        if r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if b and d:
            for p in _SMALL_PRIMES:
                pp = p * p
                if pp > d:
                    break
                while d % pp == 0:
                    d //= pp
                    b *= p
            if _is_square(d):
                a += b * isqrt(d)
                b = 0
        if b == 0 or d == 0:
            b, d = 0, 1
        if r < 0:
            a, b, r = -a, -b, -r
        g = gcd(gcd(a, b), r)
        self._a, self._b, self._d, self._r = a // g, b // g, d, r // g

    # -- construction -----------------------------------------------------

    @classmethod
    def sqrt(cls, n) -> "QuadraticSurd":
        """Square root of a non-negative rational."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("square root of a negative number")
        return cls(0, 1, n.numerator * n.denominator, n.denominator)

    @classmethod
    def coerce(cls, x) -> "QuadraticSurd":
        if isinstance(x, QuadraticSurd):
            return x
        if isinstance(x, bool):
            raise TypeError("refusing to treat bool as a number")
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Rational):
            return cls(x.numerator, 0, 1, x.denominator)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadraticSurd")

    # -- fields -----------------------------------------------------------

    a = property(lambda self: self._a)
    b = property(lambda self: self._b)
    d = property(lambda self: self._d)
    r = property(lambda self: self._r)

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._a, self._r)

    @property
    def key(self):
        """Canonical key: (rational part, sign of surd part, square of surd part)."""
        if self._b == 0:
            return (self.rational_part, 0, Fraction(0))
        return (self.rational_part, _sign(self._b), Fraction(self._b * self._b * self._d, self._r * self._r))

    def as_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._a, self._r)

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self._a, -self._b, self._d, self._r)

    def norm(self) -> Fraction:
        """Product with the conjugate."""
        return Fraction(self._a * self._a - self._b * self._b * self._d, self._r * self._r)

    def trace(self) -> Fraction:
        return Fraction(2 * self._a, self._r)

    # -- arithmetic -------------------------------------------------------

    def _common(self, other: "QuadraticSurd"):
        """Rewrite both operands over one radicand, or raise."""
        if other._b == 0 or self._b == 0 or other._d == self._d:
            d = self._d if self._b else other._d
            return (self._a, self._b, self._r), (other._a, other._b, other._r), d
        prod = self._d * other._d
        if not _is_square(prod):
            raise ValueError(f"incompatible radicands {self._d} and {other._d}")
        s = isqrt(prod)
        # sqrt(d_other) = s*sqrt(d_self)/d_self
        return (
            (self._a, self._b, self._r),
            (other._a * self._d, other._b * s, other._r * self._d),
            self._d,
        )

    def compatible(self, other) -> bool:
        other = QuadraticSurd.coerce(other)
        try:
            self._common(other)
        except ValueError:
            return False
        return True

    def __add__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        (a1, b1, r1), (a2, b2, r2), d = self._common(other)
        return QuadraticSurd(a1 * r2 + a2 * r1, b1 * r2 + b2 * r1, d, r1 * r2)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self._a, -self._b, self._d, self._r)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        (a1, b1, r1), (a2, b2, r2), d = self._common(other)
        return QuadraticSurd(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d, r1 * r2)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticSurd":
        n = self._a * self._a - self._b * self._b * self._d
        if n == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return QuadraticSurd(self._r * self._a, -self._r * self._b, self._d, n)

    def __truediv__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadraticSurd.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QuadraticSurd(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison -------------------------------------------------------

    def sign(self) -> int:
        return _sign2(Fraction(self._a), Fraction(self._b), self._d)

    def compare(self, other) -> int:
        """Exact three-way comparison, valid across unrelated radicands."""
        other = QuadraticSurd.coerce(other)
        q = Fraction(self._a, self._r) - Fraction(other._a, other._r)
        return _sign3(q, Fraction(self._b, self._r), self._d, Fraction(-other._b, other._r), other._d)

    def __eq__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        try:
            return self.compare(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self.compare(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self.compare(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self.compare(other) >= 0
        except TypeError:
            return NotImplemented

    # -- numerics ---------------------------------------------------------

    def enclose(self, bits: int = 256):
        """Directed-rounding enclosure ``(lo, hi)`` as mpf values."""
        lo = self._bound(bits, "f")
        hi = self._bound(bits, "c")
        return mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)

    def _bound(self, prec: int, rnd: str):
        a, b, d, r = self._a, self._b, self._d, self._r
        if b == 0:
            return libmp.from_rational(a, r, prec, rnd)
        # b*sqrt(d) rounded toward rnd: for b<0 the sqrt must round the other way
        flip = {"f": "c", "c": "f"}[rnd]
        s = libmp.mpf_sqrt(libmp.from_int(d), prec + 4, rnd if b > 0 else flip)
        t = libmp.mpf_mul(libmp.from_int(b), s, prec + 4, rnd)
        u = libmp.mpf_add(libmp.from_int(a), t, prec + 2, rnd)
        return libmp.mpf_div(u, libmp.from_int(r), prec, rnd)

    def to_mpf(self, bits: int = 256) -> mpmath.mpf:
        with mpmath.workprec(bits + 10):
            v = (self._a + self._b * mpmath.sqrt(self._d)) / self._r
        with mpmath.workprec(bits):
            return +v

    def __float__(self):
        return float(self.to_mpf(64))

    # -- display ----------------------------------------------------------

    def __repr__(self):
        return f"QuadraticSurd({self._a}, {self._b}, {self._d}, {self._r})"

    def __str__(self):
        a, b, d, r = self._a, self._b, self._d, self._r
        if b == 0:
            return str(a) if r == 1 else f"{a}/{r}"
        coef = "" if abs(b) == 1 else f"{abs(b)}*"
        rad = f"{coef}sqrt({d})"
        if a == 0:
            num = rad if b > 0 else f"-{rad}"
            return num if r == 1 else f"{num}/{r}"
        num = f"{a} {'+' if b > 0 else '-'} {rad}"
        return num if r == 1 else f"({num})/{r}"
