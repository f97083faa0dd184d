"""Angles stored exactly (rational multiples of pi) or as raw radians.

Exact angles keep canonical results bit-stable: the unit phase factor for
any multiple of pi/2 is produced without a trig call, so states such as
(1/sqrt2)(1, i) come out with exact components. Every angle is kept in the
canonical half-open interval (-pi, pi].
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError

# Denominators above this are never produced by snapping; conventional
# textbook angles (pi/2, pi/3, ... pi/24) all fit.
_SNAP_MAX_DENOMINATOR = 24
_SNAP_TOLERANCE = 1e-9

_EXACT_RE = re.compile(r"^([+-]?)(\d+)?pi(?:/(\d+))?$")

_HALF = Fraction(1, 2)


def _wrap_fraction(f: Fraction) -> Fraction:
    """Reduce a multiple-of-pi fraction into (-1, 1]."""
    f = f % 2
    if f > 1:
        f -= 2
    return f


def _wrap_radians(r: float) -> float:
    r = math.remainder(r, math.tau)
    if r <= -math.pi:
        r = math.pi
    return r


@dataclass(frozen=True)
class PhaseAngle:
    """An angle in (-pi, pi], exact when it is a rational multiple of pi.

    ``fraction`` holds the multiple of pi for exact angles and is ``None``
    for free angles; ``radians`` is always populated.
    """

    fraction: Fraction | None
    radians: float

    @staticmethod
    def exact(numerator: int, denominator: int = 1) -> "PhaseAngle":
        """The angle (numerator/denominator) * pi, canonicalized."""
        frac = _wrap_fraction(Fraction(numerator, denominator))
        return PhaseAngle(frac, float(frac) * math.pi)

    @staticmethod
    def from_fraction(frac: Fraction) -> "PhaseAngle":
        frac = _wrap_fraction(Fraction(frac))
        return PhaseAngle(frac, float(frac) * math.pi)

    @staticmethod
    def from_radians(value: float) -> "PhaseAngle":
        """A free angle, wrapped into (-pi, pi]."""
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"angle must be finite, got {value!r}")
        return PhaseAngle(None, _wrap_radians(value))

    @staticmethod
    def snap(value: float) -> "PhaseAngle":
        """Wrap ``value`` and promote it to exact form when it sits within
        1e-9 of a rational multiple of pi with a small denominator."""
        value = _wrap_radians(float(value))
        candidate = Fraction(value / math.pi).limit_denominator(_SNAP_MAX_DENOMINATOR)
        if abs(float(candidate) * math.pi - value) <= _SNAP_TOLERANCE:
            return PhaseAngle.from_fraction(candidate)
        return PhaseAngle(None, value)

    @staticmethod
    def zero() -> "PhaseAngle":
        return PhaseAngle(Fraction(0), 0.0)

    @property
    def is_exact(self) -> bool:
        return self.fraction is not None

    @property
    def value(self) -> float:
        """The angle in radians."""
        return self.radians

    def unit(self) -> complex:
        """e**(i * angle), with exact values for multiples of pi/2."""
        if self.fraction is not None:
            f = self.fraction
            if f == 0:
                return 1 + 0j
            if f == 1:
                return -1 + 0j
            if f == _HALF:
                return 1j
            if f == -_HALF:
                return -1j
            return cmath.exp(1j * math.pi * float(f))
        return cmath.exp(1j * self.radians)

    def __add__(self, other: "PhaseAngle") -> "PhaseAngle":
        if not isinstance(other, PhaseAngle):
            return NotImplemented
        if self.fraction is not None and other.fraction is not None:
            return PhaseAngle.from_fraction(self.fraction + other.fraction)
        return PhaseAngle.from_radians(self.radians + other.radians)

    def __sub__(self, other: "PhaseAngle") -> "PhaseAngle":
        if not isinstance(other, PhaseAngle):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "PhaseAngle":
        if self.fraction is not None:
            return PhaseAngle.from_fraction(-self.fraction)
        return PhaseAngle.from_radians(-self.radians)

    def to_json(self) -> str | float:
        """Exact angles serialize as literals like ``"-pi/2"``, free ones
        as plain radians."""
        if self.fraction is not None:
            return format_phase(self)
        return self.radians

    def __str__(self) -> str:
        if self.fraction is not None:
            return format_phase(self)
        return repr(self.radians)


def format_phase(angle: PhaseAngle) -> str:
    """Literal form of an exact angle: ``0``, ``pi``, ``-pi/2``, ``2pi/3``."""
    if angle.fraction is None:
        raise ValueError("only exact angles have a literal form")
    f = angle.fraction
    if f == 0:
        return "0"
    sign = "-" if f < 0 else ""
    num, den = abs(f.numerator), f.denominator
    text = sign + (f"{num}pi" if num != 1 else "pi")
    if den != 1:
        text += f"/{den}"
    return text


def parse_phase(text: str | float) -> PhaseAngle:
    """Parse a phase literal: ``pi/3``, ``-2pi/5``, ``0`` or plain radians.

    Numbers (or numeric strings) are treated as free angles in radians.
    """
    if isinstance(text, PhaseAngle):
        return text
    if isinstance(text, (int, float)):
        return PhaseAngle.from_radians(float(text))
    cleaned = text.strip().replace(" ", "")
    if cleaned in ("0", "+0", "-0"):
        return PhaseAngle.exact(0)
    match = _EXACT_RE.match(cleaned)
    if match:
        sign, num, den = match.groups()
        numerator = int(num) if num else 1
        if sign == "-":
            numerator = -numerator
        return PhaseAngle.exact(numerator, int(den) if den else 1)
    try:
        return PhaseAngle.from_radians(float(cleaned))
    except ValueError:
        raise UsageError(f"malformed phase literal {text!r}") from None
