"""Exact noncommutative algebra over x, y, z, px, py, pz.

The generators obey the canonical commutation relations: position and
momentum along the same axis satisfy [q, p_q] = i*hbar, everything else
commutes. Expressions are kept normal-ordered (all position generators
left of all momentum generators, each block sorted), with Gaussian-
rational coefficients times a power of hbar. There is no floating point
anywhere in this module: a commutator either vanishes exactly or it does
not.

Coordinate handedness enters through the orbital angular momentum
components. A left-handed frame evaluated with a right-handed cross
product flips the sign of every component, which is how the left-handed
case is modeled here; the commutator [L_x, L_y] then closes with a minus
sign instead of a plus sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeOverflowError,
    ExpressionSyntaxError,
    UnknownSymbolError,
    UsageError,
)

__all__ = [
    "GENERATORS",
    "MAX_DEGREE",
    "GaussianRational",
    "Handedness",
    "OrbitalCommutatorResult",
    "WeylExpression",
    "angular_momentum",
    "commute",
    "normal_order",
    "parse",
    "verify_orbital_commutator",
]

GENERATORS = ("x", "y", "z", "px", "py", "pz")
_ORDER = {name: index for index, name in enumerate(GENERATORS)}
_MOMENTUM_PARTNER = {"px": "x", "py": "y", "pz": "z"}

# Guard against pathological blowup from user input.
MAX_DEGREE = 16


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


_ZERO = GaussianRational()
_ONE = GaussianRational(Fraction(1))
_MINUS_I = GaussianRational(Fraction(0), Fraction(-1))


def _as_coefficient(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value))
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise UsageError(
                "only exact coefficients are allowed; use Fraction or "
                "GaussianRational instead of floats"
            )
        return GaussianRational(Fraction(int(value.real)), Fraction(int(value.imag)))
    raise UsageError(f"cannot interpret {value!r} as an exact coefficient")


def _check_degree(degree: int) -> None:
    if degree > MAX_DEGREE:
        raise DegreeOverflowError(
            f"expression degree {degree} exceeds the supported maximum {MAX_DEGREE}"
        )


def _exponents(sorted_word: Sequence[str]) -> tuple[int, ...]:
    exps = [0] * len(GENERATORS)
    for name in sorted_word:
        exps[_ORDER[name]] += 1
    return tuple(exps)


def _word_from_exponents(exps: Sequence[int]) -> tuple[str, ...]:
    word = []
    for name, count in zip(GENERATORS, exps):
        word.extend([name] * count)
    return tuple(word)


@lru_cache(maxsize=65536)
def _normal_order_word(word: tuple[str, ...], strategy: str):
    """Rewrite a generator word into canonical form.

    Returns a tuple of ((exponents, inserted_hbar_power), coefficient)
    pairs. Each out-of-order same-axis pair contributes via
    p_q * q = q * p_q - i*hbar; all other adjacent swaps are free.
    ``strategy`` picks which out-of-order pair is fixed first and exists
    so the confluence of the rewriting can be tested.
    """
    bad = [
        k
        for k in range(len(word) - 1)
        if _ORDER[word[k]] > _ORDER[word[k + 1]]
    ]
    if not bad:
        return (((_exponents(word), 0), _ONE),)
    k = bad[0] if strategy == "leftmost" else bad[-1]
    left, right = word[k], word[k + 1]

    totals: dict[tuple[tuple[int, ...], int], GaussianRational] = {}

    def accumulate(key, coeff):
        current = totals.get(key, _ZERO) + coeff
        if current.is_zero:
            totals.pop(key, None)
        else:
            totals[key] = current

    swapped = word[:k] + (right, left) + word[k + 2:]
    for key, coeff in _normal_order_word(swapped, strategy):
        accumulate(key, coeff)
    if _MOMENTUM_PARTNER.get(left) == right:
        shortened = word[:k] + word[k + 2:]
        for (exps, extra), coeff in _normal_order_word(shortened, strategy):
            accumulate((exps, extra + 1), coeff * _MINUS_I)
    return tuple(sorted(totals.items()))


class WeylExpression:
    """A normal-ordered polynomial in the six generators.

    Terms map a monomial (an exponent vector plus an hbar power) to an
    exact Gaussian-rational coefficient; zero coefficients are never
    stored, and equality is structural equality of the term map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        cleaned = {}
        for key, coeff in (terms or {}).items():
            if not coeff.is_zero:
                cleaned[key] = coeff
        self._terms = cleaned

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "WeylExpression":
        return WeylExpression()

    @staticmethod
    def scalar(re=1, im=0, hbar: int = 0) -> "WeylExpression":
        if hbar < 0:
            raise UsageError("hbar exponent must be non-negative")
        coeff = GaussianRational(Fraction(re), Fraction(im))
        zero_exps = (0,) * len(GENERATORS)
        return WeylExpression({(zero_exps, hbar): coeff})

    @staticmethod
    def generator(name: str) -> "WeylExpression":
        if name not in _ORDER:
            raise UnknownSymbolError(f"unknown generator {name!r}")
        exps = [0] * len(GENERATORS)
        exps[_ORDER[name]] = 1
        return WeylExpression({(tuple(exps), 0): _ONE})

    @staticmethod
    def from_word(word: Iterable[str], coefficient=1, hbar: int = 0,
                  strategy: str = "leftmost") -> "WeylExpression":
        word = tuple(word)
        for name in word:
            if name not in _ORDER:
                raise UnknownSymbolError(f"unknown generator {name!r}")
        _check_degree(len(word))
        coeff = _as_coefficient(coefficient)
        terms: dict = {}
        for (exps, extra), k in _normal_order_word(word, strategy):
            key = (exps, hbar + extra)
            value = terms.get(key, _ZERO) + coeff * k
            terms[key] = value
        return WeylExpression(terms)

    # -- inspection --------------------------------------------------------

    def terms(self) -> dict:
        """A copy of the term map: {(exponents, hbar_power): coefficient}."""
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(exps) for exps, _ in self._terms)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "WeylExpression") -> "WeylExpression":
        if not isinstance(other, WeylExpression):
            return NotImplemented
        totals = dict(self._terms)
        for key, coeff in other._terms.items():
            totals[key] = totals.get(key, _ZERO) + coeff
        return WeylExpression(totals)

    def __sub__(self, other: "WeylExpression") -> "WeylExpression":
        if not isinstance(other, WeylExpression):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "WeylExpression":
        return WeylExpression({key: -coeff for key, coeff in self._terms.items()})

    def __mul__(self, other) -> "WeylExpression":
        if not isinstance(other, WeylExpression):
            return self.scale(other)
        totals: dict = {}
        for (exps1, n1), c1 in self._terms.items():
            word1 = _word_from_exponents(exps1)
            for (exps2, n2), c2 in other._terms.items():
                word = word1 + _word_from_exponents(exps2)
                _check_degree(len(word))
                c = c1 * c2
                for (exps, extra), k in _normal_order_word(word, "leftmost"):
                    key = (exps, n1 + n2 + extra)
                    totals[key] = totals.get(key, _ZERO) + c * k
        return WeylExpression(totals)

    def __rmul__(self, other) -> "WeylExpression":
        return self.scale(other)

    def scale(self, value) -> "WeylExpression":
        coeff = _as_coefficient(value)
        return WeylExpression(
            {key: coeff * c for key, c in self._terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylExpression):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        keys = sorted(
            self._terms, key=lambda kn: ([-e for e in kn[0]], kn[1])
        )
        pieces = []
        for index, key in enumerate(keys):
            sign, body = _format_term(self._terms[key], key)
            if index == 0:
                pieces.append(("-" if sign < 0 else "") + body)
            else:
                pieces.append((" - " if sign < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"WeylExpression({self})"


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _format_term(coeff: GaussianRational, key) -> tuple[int, str]:
    exps, hbar_power = key
    if coeff.re != 0:
        sign = 1 if coeff.re > 0 else -1
    else:
        sign = 1 if coeff.im > 0 else -1
    magnitude = coeff if sign > 0 else -coeff

    factors = []
    if magnitude.re != 0 and magnitude.im != 0:
        imag = magnitude.im
        joiner = " + " if imag > 0 else " - "
        imag_text = "i" if abs(imag) == 1 else f"{_format_rational(abs(imag))}*i"
        factors.append(f"({_format_rational(magnitude.re)}{joiner}{imag_text})")
    elif magnitude.im != 0:
        if magnitude.im == 1:
            factors.append("i")
        else:
            factors.append(f"{_format_rational(magnitude.im)}*i")
    elif magnitude.re != 1:
        factors.append(_format_rational(magnitude.re))

    factors.extend(["hbar"] * hbar_power)
    for name, count in zip(GENERATORS, exps):
        factors.extend([name] * count)
    if not factors:
        factors.append("1")
    return sign, "*".join(factors)


# --------------------------------------------------------------------------
# Normal ordering entry point


def normal_order(raw, strategy: str = "leftmost") -> WeylExpression:
    """Normal-order raw operator input.

    ``raw`` may be a WeylExpression (re-canonicalized, a no-op for well-
    formed expressions), a single word given as a sequence of generator
    names, or an iterable of (coefficient, hbar_power, word) triples.
    The result is independent of ``strategy`` ("leftmost" or "rightmost");
    both exist so that confluence is testable.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise UsageError(f"unknown rewrite strategy {strategy!r}")
    if isinstance(raw, WeylExpression):
        total = WeylExpression.zero()
        for (exps, n), coeff in raw.terms().items():
            total = total + WeylExpression.from_word(
                _word_from_exponents(exps), coeff, n, strategy
            )
        return total
    raw = list(raw)
    if all(isinstance(item, str) for item in raw):
        return WeylExpression.from_word(raw, strategy=strategy)
    total = WeylExpression.zero()
    for coefficient, hbar_power, word in raw:
        total = total + WeylExpression.from_word(
            word, coefficient, hbar_power, strategy
        )
    return total


def commute(a: WeylExpression, b: WeylExpression) -> WeylExpression:
    """[a, b] = a*b - b*a, normal-ordered, exact."""
    return a * b - b * a


# --------------------------------------------------------------------------
# Parser for the expression grammar


_TOKEN_KINDS = {
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "/": "SLASH",
    "(": "LPAREN",
    ")": "RPAREN",
}


def _tokenize(text: str):
    tokens = []
    index = 0
    while index < len(text):
        char = text[index]
        if char.isspace():
            index += 1
            continue
        if char in _TOKEN_KINDS:
            tokens.append((_TOKEN_KINDS[char], char, index))
            index += 1
            continue
        if char.isdigit():
            start = index
            while index < len(text) and text[index].isdigit():
                index += 1
            tokens.append(("NUM", text[start:index], start))
            continue
        if char.isalpha():
            start = index
            while index < len(text) and (text[index].isalnum() or text[index] == "_"):
                index += 1
            tokens.append(("IDENT", text[start:index], start))
            continue
        raise ExpressionSyntaxError(
            f"unexpected character {char!r}", position=index
        )
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: expr := sign? term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := rational | i | hbar |
    generator | '(' expr ')'. '*' is the only product; juxtaposition is
    not allowed and '/' appears only inside rational literals."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str):
        token = self.peek()
        if token[0] != kind:
            raise ExpressionSyntaxError(
                f"expected {kind}, found {token[1]!r}", position=token[2]
            )
        return self.advance()

    def parse(self) -> WeylExpression:
        expr = self.expression()
        token = self.peek()
        if token[0] != "END":
            raise ExpressionSyntaxError(
                f"unexpected trailing input {token[1]!r}", position=token[2]
            )
        return expr

    def expression(self) -> WeylExpression:
        negate = False
        if self.peek()[0] in ("PLUS", "MINUS"):
            negate = self.advance()[0] == "MINUS"
        total = self.term()
        if negate:
            total = -total
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.advance()[0]
            rhs = self.term()
            total = total + rhs if op == "PLUS" else total - rhs
        return total

    def term(self) -> WeylExpression:
        total = self.factor()
        while self.peek()[0] == "STAR":
            self.advance()
            total = total * self.factor()
        return total

    def factor(self) -> WeylExpression:
        kind, value, position = self.peek()
        if kind == "NUM":
            self.advance()
            numerator = int(value)
            if self.peek()[0] == "SLASH":
                self.advance()
                den_token = self.expect("NUM")
                denominator = int(den_token[1])
                if denominator == 0:
                    raise ExpressionSyntaxError(
                        "zero denominator", position=den_token[2]
                    )
                return WeylExpression.scalar(Fraction(numerator, denominator))
            return WeylExpression.scalar(numerator)
        if kind == "IDENT":
            self.advance()
            if value == "i":
                return WeylExpression.scalar(0, 1)
            if value == "hbar":
                return WeylExpression.scalar(1, 0, hbar=1)
            if value in _ORDER:
                return WeylExpression.generator(value)
            raise UnknownSymbolError(
                f"unknown symbol {value!r}", position=position
            )
        if kind == "LPAREN":
            self.advance()
            inner = self.expression()
            self.expect("RPAREN")
            return inner
        raise ExpressionSyntaxError(
            f"expected a factor, found {value!r}" if value else "unexpected end of input",
            position=position,
        )


def parse(text: str) -> WeylExpression:
    """Parse operator-expression text into a normal-ordered expression.

    Grammar: generators x y z px py pz, the symbols hbar and i, integer
    and rational literals, the operators + - * and parentheses. ``*`` is
    noncommutative and left-associative; a leading minus negates the
    first additive term, binding looser than ``*``.
    """
    if not isinstance(text, str):
        raise UsageError("expression must be a string")
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Orbital angular momentum and handedness


class Handedness(Enum):
    """Coordinate-frame handedness; the sign multiplies every component
    of the angular momentum when the frame is left-handed but the cross
    product stays right-handed."""

    RIGHT = 1
    LEFT = -1

    @property
    def sign(self) -> int:
        return self.value

    @staticmethod
    def parse(text: str) -> "Handedness":
        normalized = str(text).strip().lower()
        if normalized in ("right", "right-handed", "rh", "+1", "1"):
            return Handedness.RIGHT
        if normalized in ("left", "left-handed", "lh", "-1"):
            return Handedness.LEFT
        raise UsageError(f"unknown handedness {text!r}")


def angular_momentum(h: Handedness) -> tuple[WeylExpression, WeylExpression, WeylExpression]:
    """The components (L_x, L_y, L_z) of r cross p for the given frame.

    Right-handed: L_x = y*pz - z*py, L_y = z*px - x*pz, L_z = x*py - y*px.
    Left-handed frames (with the cross product kept right-handed) flip
    the sign of all three components.
    """
    g = WeylExpression.generator
    components = (
        g("y") * g("pz") - g("z") * g("py"),
        g("z") * g("px") - g("x") * g("pz"),
        g("x") * g("py") - g("y") * g("px"),
    )
    if h.sign == 1:
        return components
    return tuple(-c for c in components)


@dataclass(frozen=True)
class OrbitalCommutatorResult:
    """Outcome of checking [L_x, L_y] = sign * i*hbar * L_z exactly."""

    sign: int
    residual: WeylExpression

    @property
    def holds(self) -> bool:
        return self.residual.is_zero


def verify_orbital_commutator(h: Handedness) -> OrbitalCommutatorResult:
    """Evaluate [L_x, L_y] - sign*i*hbar*L_z in exact arithmetic.

    The residual is the zero expression for both frames: the right-handed
    components close with sign +1 and the left-handed ones with sign -1.
    No tolerance is involved anywhere.
    """
    l_x, l_y, l_z = angular_momentum(h)
    i_hbar = WeylExpression.scalar(0, h.sign, hbar=1)
    residual = commute(l_x, l_y) - i_hbar * l_z
    return OrbitalCommutatorResult(sign=h.sign, residual=residual)
