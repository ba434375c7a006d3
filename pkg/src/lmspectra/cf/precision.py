"""Working precision and value-plus-radius results."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import mpmath
from mpmath import libmp

if TYPE_CHECKING:
    from .surd import QuadraticSurd

DEFAULT_BITS = 256

_ROUNDING = {"nearest": "n", "downward": "f", "upward": "c"}


def default_bits() -> int:
    """Default mantissa bits, overridable through ``SPECTRA_BITS``."""
    raw = os.environ.get("SPECTRA_BITS")
    if raw is None:
        return DEFAULT_BITS
    bits = int(raw)
    if bits < 64:
        raise ValueError(f"SPECTRA_BITS must be >= 64, got {bits}")
    return bits


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = DEFAULT_BITS
    rounding: str = "nearest"

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError(f"need at least 53 mantissa bits, got {self.bits}")
        if self.rounding not in _ROUNDING:
            raise ValueError(f"unknown rounding mode {self.rounding!r}")

    @classmethod
    def default(cls) -> "PrecisionContext":
        return cls(bits=default_bits())

    @property
    def rnd(self) -> str:
        return _ROUNDING[self.rounding]

    @property
    def relative_radius(self) -> mpmath.mpf:
        return mpmath.mpf(2) ** (1 - self.bits)

    def rational(self, num: int, den: int) -> mpmath.mpf:
        """``num/den`` rounded in this context's direction."""
        return mpmath.mp.make_mpf(libmp.from_rational(num, den, self.bits, self.rnd))


def resolve(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return PrecisionContext.default() if ctx is None else ctx


@dataclass(frozen=True)
class CertifiedReal:
    """A real number known to lie in ``[value - radius, value + radius]``.

    ``exact`` carries the surd when the value is known in closed form.
    """

    value: mpmath.mpf
    radius: mpmath.mpf
    exact: Optional["QuadraticSurd"] = None

    @property
    def lo(self) -> mpmath.mpf:
        # prec=0: exact in libmp
        return mpmath.mp.make_mpf(libmp.mpf_sub(self.value._mpf_, self.radius._mpf_, 0))

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(libmp.mpf_add(self.value._mpf_, self.radius._mpf_, 0))

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def widen(self, extra) -> "CertifiedReal":
        if not extra:
            return self
        extra = mpmath.mpf(extra)
        rad = libmp.mpf_add(self.radius._mpf_, extra._mpf_, 0)
        return CertifiedReal(self.value, mpmath.mp.make_mpf(rad), None)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return mpmath.nstr(self.value, 30)


def enclosure_to_certified(lo: mpmath.mpf, hi: mpmath.mpf, bits: int, exact=None) -> CertifiedReal:
    """Midpoint/radius form of ``[lo, hi]``; the radius is rounded upward."""
    prec = bits + 8
    mid = libmp.mpf_shift(libmp.mpf_add(lo._mpf_, hi._mpf_, prec, "n"), -1)
    rad = max(
        mpmath.mp.make_mpf(libmp.mpf_sub(hi._mpf_, mid, prec, "c")),
        mpmath.mp.make_mpf(libmp.mpf_sub(mid, lo._mpf_, prec, "c")),
    )
    return CertifiedReal(mpmath.mp.make_mpf(mid), rad, exact)
