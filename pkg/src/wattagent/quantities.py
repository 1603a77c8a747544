"""Units, nonnegative intervals and unit conversion.

Canonical internal units are Wh for energy, Wh/token for per-token energy,
grams CO2e for emissions and $/Wh for energy prices.  Everything else is
converted on the way in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable

from .errors import ValidationError

# power of ten relative to Wh
ENERGY_UNITS = {"Wh": 0, "kWh": 3, "MWh": 6}


def check_finite(value, name="value"):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def check_nonneg(value, name="value"):
    value = check_finite(value, name)
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value!r}")
    return value


def check_positive(value, name="value"):
    value = check_finite(value, name)
    if value <= 0:
        raise ValidationError(f"{name} must be > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class Interval:
    """Closed range ``[lo, hi]`` of a nonnegative physical quantity.

    A point estimate is stored with ``lo == hi``.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo = check_nonneg(self.lo, "interval lower bound")
        hi = check_nonneg(self.hi, "interval upper bound")
        if lo > hi:
            raise ValidationError(f"interval bounds out of order: [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value) -> Interval:
        return cls(value, value)

    @classmethod
    def coerce(cls, value) -> Interval:
        """Accept an Interval, a scalar, a ``(lo, hi)`` pair or a ``{lo, hi}`` mapping."""
        if isinstance(value, Interval):
            return value
        if isinstance(value, dict):
            return cls(value["lo"], value["hi"])
        if isinstance(value, (tuple, list)):
            if len(value) != 2:
                raise ValidationError(f"expected a (lo, hi) pair, got {value!r}")
            return cls(*value)
        return cls.point(value)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def scale(self, factor) -> Interval:
        return interval_scale(self, factor)

    def __add__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return interval_sum([self, other])

    def __mul__(self, other):
        if isinstance(other, Interval):
            return interval_mul(self, other)
        if isinstance(other, (int, float)):
            return interval_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    def __str__(self):
        if self.is_point:
            return f"[{self.lo!r}]"
        return f"[{self.lo!r}, {self.hi!r}]"


ZERO = Interval(0.0, 0.0)


def interval_sum(terms: Iterable[Interval]) -> Interval:
    """Componentwise sum; the empty sum is ``[0, 0]``.

    Bounds are summed with :func:`math.fsum`, so the result is correctly
    rounded and independent of the order of ``terms``.
    """
    terms = [Interval.coerce(t) for t in terms]
    if not terms:
        return ZERO
    return Interval(math.fsum(t.lo for t in terms), math.fsum(t.hi for t in terms))


def interval_scale(i: Interval, factor) -> Interval:
    factor = check_nonneg(factor, "scale factor")
    i = Interval.coerce(i)
    return Interval(i.lo * factor, i.hi * factor)


def interval_mul(a: Interval, b: Interval) -> Interval:
    """Product of two nonnegative intervals (monotone in both bounds)."""
    a, b = Interval.coerce(a), Interval.coerce(b)
    return Interval(a.lo * b.lo, a.hi * b.hi)


def _shift(value: float, exponent: int) -> float:
    # decimal shift of the shortest repr, so 0.16 / 10**3 lands on 0.00016
    if exponent == 0:
        return value
    return float(Decimal(repr(value)).scaleb(exponent))


def _unit_exponent(unit):
    try:
        return ENERGY_UNITS[unit]
    except KeyError:
        raise ValidationError(
            f"unknown energy unit {unit!r}; expected one of {sorted(ENERGY_UNITS)}"
        ) from None


def convert_energy(value, from_unit: str, to_unit: str) -> float:
    """Convert an energy between Wh, kWh and MWh by exact power-of-ten scaling.

    >>> convert_energy(1, "kWh", "Wh")
    1000.0
    """
    value = check_finite(value, "energy")
    return _shift(value, _unit_exponent(from_unit) - _unit_exponent(to_unit))


def convert_per_energy(value, from_unit: str, to_unit: str) -> float:
    """Convert a quantity *per* unit energy, e.g. $/kWh -> $/Wh or g/kWh -> g/Wh."""
    value = check_finite(value, "rate")
    return _shift(value, _unit_exponent(to_unit) - _unit_exponent(from_unit))


def parse_per_energy_unit(unit: str) -> tuple[str, str]:
    """Split ``"g/kWh"`` into ``("g", "kWh")``."""
    numerator, sep, denominator = unit.partition("/")
    if not sep:
        raise ValidationError(f"expected a '<x>/<energy unit>' unit, got {unit!r}")
    _unit_exponent(denominator)
    return numerator, denominator
