"""The quaternion algebra H(K) = (-1,-1 / K) and its order H(o_K).

Basis 1, i, j, k with i^2 = j^2 = -1 and k = ij = -ji, which is the
convention under which x + y*j maps to [[x, y], [-sigma(y), sigma(x)]].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import MixedRings, NotAUnit, NotDivisionRegime, NotIntegral, ParseError
from .groupring import kq8_division
from .quadfield import QuadRat, RingSpec, ThetaKind

BASIS = ("1", "i", "j", "k")
INFINITE = math.inf

Scalar = Union[int, Fraction, QuadRat]


class Quaternion:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingSpec, c1: Scalar = 0, ci: Scalar = 0, cj: Scalar = 0, ck: Scalar = 0):
        coeffs = []
        for c in (c1, ci, cj, ck):
            if not isinstance(c, QuadRat):
                c = QuadRat(ring, c)
            elif c.ring.d != ring.d:
                raise MixedRings(f"coefficient {c} is not in {ring}")
            coeffs.append(c)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @classmethod
    def basis(cls, ring: RingSpec, name: str, coeff: Scalar = 1) -> "Quaternion":
        slots = [0, 0, 0, 0]
        slots[BASIS.index(name)] = coeff
        return cls(ring, *slots)

    @property
    def c1(self) -> QuadRat:
        return self.coeffs[0]

    @property
    def ci(self) -> QuadRat:
        return self.coeffs[1]

    @property
    def cj(self) -> QuadRat:
        return self.coeffs[2]

    @property
    def ck(self) -> QuadRat:
        return self.coeffs[3]

    @property
    def is_integral(self) -> bool:
        return all(c.is_integral for c in self.coeffs)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(b for b, c in zip(BASIS, self.coeffs) if not c.is_zero())

    def _check(self, other: "Quaternion"):
        if other.ring.d != self.ring.d:
            raise MixedRings(f"cannot combine quaternions over {self.ring} and {other.ring}")

    def _lift(self, other):
        if isinstance(other, Quaternion):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, QuadRat)) and not isinstance(other, bool):
            return Quaternion(self.ring, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.ring, *(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.ring, *(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Scalar) -> "Quaternion":
        return Quaternion(self.ring, *(a * c for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        self._check(other)
        a1, b1, c1, d1 = self.coeffs
        a2, b2, c2, d2 = other.coeffs
        return Quaternion(
            self.ring,
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        a, b, c, d = self.coeffs
        return Quaternion(self.ring, a, -b, -c, -d)

    def norm(self) -> QuadRat:
        a, b, c, d = self.coeffs
        return a * a + b * b + c * c + d * d

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError(f"{self} has norm zero")
        return self.conj().scale(n.inverse())

    def __pow__(self, n: int) -> "Quaternion":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = Quaternion(self.ring, 1)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.ring.d == other.ring.d and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QuadRat)) and not isinstance(other, bool):
            return self.coeffs[0] == other and all(c.is_zero() for c in self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.d, self.coeffs))

    def __repr__(self):
        return f"Quaternion(d={self.ring.d}, {format_quaternion(self)})"

    def __str__(self):
        return format_quaternion(self)


def h_norm(x: Quaternion) -> QuadRat:
    return x.norm()


# matrix representation over F = K[i]


@dataclass(frozen=True)
class FElem:
    """re + im*i with re, im in K; i is the quaternion i, so i^2 = -1."""

    re: QuadRat
    im: QuadRat

    def __add__(self, o: "FElem") -> "FElem":
        return FElem(self.re + o.re, self.im + o.im)

    def __mul__(self, o: "FElem") -> "FElem":
        return FElem(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __neg__(self) -> "FElem":
        return FElem(-self.re, -self.im)

    def sigma(self) -> "FElem":
        """Conjugation by j, which negates the i-part."""
        return FElem(self.re, -self.im)


@dataclass(frozen=True)
class Mat2F:
    a: FElem
    b: FElem
    c: FElem
    d: FElem

    def __mul__(self, o: "Mat2F") -> "Mat2F":
        return Mat2F(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: "Mat2F") -> "Mat2F":
        return Mat2F(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def det(self) -> FElem:
        return self.a * self.d + -(self.b * self.c)

    def trace(self) -> FElem:
        return self.a + self.d


def psi(x: Quaternion) -> Mat2F:
    top_left = FElem(x.c1, x.ci)
    top_right = FElem(x.cj, x.ck)
    return Mat2F(top_left, top_right, -top_right.sigma(), top_left.sigma())


class CharPoly(NamedTuple):
    """X^2 + linear*X + constant."""

    linear: QuadRat
    constant: QuadRat

    def evaluate(self, x: Quaternion) -> Quaternion:
        return x * x + x.scale(self.linear) + self.constant

    def __str__(self):
        return f"X^2 + ({self.linear})X + ({self.constant})"


def char_poly(x: Quaternion) -> CharPoly:
    return CharPoly(-2 * x.c1, x.norm())


# units and torsion


class UnitCheck(NamedTuple):
    is_unit: bool
    norm: QuadRat


def is_unit(x: Quaternion) -> UnitCheck:
    if not x.is_integral:
        raise NotIntegral(f"{x} does not lie in H(o_K)")
    if not kq8_division(x.ring):
        raise NotDivisionRegime(f"H({x.ring.d}) is not a division ring")
    n = x.norm()
    return UnitCheck(n == 1 or n == -1, n)


def order(x: Quaternion):
    """Multiplicative order of a unit: 1, 2, 4 or INFINITE."""
    if x.ring.is_real:
        raise NotDivisionRegime("torsion classification needs K imaginary with H(K) a division ring")
    unit, n = is_unit(x)
    if not unit:
        raise NotAUnit(f"{x} has norm {n}")
    if n == -1:
        return INFINITE
    if x.c1.is_zero():
        return 4
    if x == 1:
        return 1
    if x == -1:
        return 2
    return INFINITE


# text syntax: "6s+15i+5j+1k", s = sqrt(d) of the ring, h = theta


_TERM = re.compile(r"([+-])(\d+(?:/\d+)?)?([sh])?([ijk])?")
_PAREN = re.compile(r"([+-])\(")
_DEN = re.compile(r"/(\d+)")
_BASIS = re.compile(r"[ijk]")


def _parse_scalar_term(ring: RingSpec, coeff: str | None, tok: str | None) -> QuadRat:
    c = Fraction(coeff) if coeff else Fraction(1)
    if tok == "s":
        return ring.element(0, c)
    if tok == "h":
        if ring.theta_kind is not ThetaKind.HALF_ONE_PLUS_SQRT_D:
            raise ParseError(f"'h' needs d = 1 (mod 4); d = {ring.d}")
        return ring.theta * c
    return ring.element(c)


def _closing(s: str, pos: int) -> int:
    """Index of the parenthesis closing the one at s[pos]."""
    depth = 0
    for k in range(pos, len(s)):
        depth += {"(": 1, ")": -1}.get(s[k], 0)
        if depth == 0:
            return k
    raise ParseError(f"unbalanced parentheses in {s!r}")


def _parse_sum(ring: RingSpec, s: str, allow_basis: bool) -> list[QuadRat]:
    """Signed terms of s (leading sign required) accumulated per basis slot."""
    slots = [ring.zero] * 4
    pos = 0
    while pos < len(s):
        g = _PAREN.match(s, pos)
        if g:
            close = _closing(s, g.end() - 1)
            inner = s[g.end() : close]
            if not inner:
                raise ParseError("empty parentheses")
            inner = inner if inner[0] in "+-" else "+" + inner
            value = _parse_sum(ring, inner, False)[0]
            pos = close + 1
            den = _DEN.match(s, pos)
            if den:
                value = value / int(den.group(1))
                pos = den.end()
            b = _BASIS.match(s, pos) if allow_basis else None
            idx = BASIS.index(b.group(0)) if b else 0
            if b:
                pos = b.end()
            slots[idx] = slots[idx] + (value if g.group(1) == "+" else -value)
            continue
        t = _TERM.match(s, pos)
        if not t or t.end() == pos + 1 or (t.group(4) and not allow_basis):
            raise ParseError(f"cannot parse {s[pos:]!r}")
        sign, coeff, tok, basis = t.groups()
        term = _parse_scalar_term(ring, coeff, tok)
        idx = BASIS.index(basis or "1")
        slots[idx] = slots[idx] + (term if sign == "+" else -term)
        pos = t.end()
    return slots


def parse_quaternion(ring: RingSpec, text: str) -> Quaternion:
    """Read e.g. '6s+15i+5j+k' or '((-3-s)/2)i+((-3+s)/2)j+2k'; s = sqrt(d), h = theta."""
    s = re.sub(r"\s+", "", text).replace("*", "").replace("\u2212", "-")
    if not s:
        raise ParseError("empty quaternion expression")
    if s[0] not in "+-":
        s = "+" + s
    try:
        slots = _parse_sum(ring, s, True)
    except ParseError as e:
        raise ParseError(f"{e} in {text!r}") from None
    return Quaternion(ring, *slots)


def _scalar_parts(c: QuadRat) -> list[tuple[Fraction, str]]:
    if c.x.denominator == 1 and c.y.denominator == 1:
        return [(c.x, ""), (c.y, "s")]
    if c.ring.theta_kind is ThetaKind.HALF_ONE_PLUS_SQRT_D and c.is_integral:
        a, b = c.theta_coords
        return [(a, ""), (b, "h")]
    return [(c.x, ""), (c.y, "s")]


def format_quaternion(x: Quaternion) -> str:
    """Canonical text form; inverse of parse_quaternion on its image."""
    out = []
    for basis, c in zip(BASIS, x.coeffs):
        suffix = "" if basis == "1" else basis
        for value, tok in _scalar_parts(c):
            if value == 0:
                continue
            sign = "-" if value < 0 else "+"
            out.append(f"{sign}{abs(value)}{tok}{suffix}")
    if not out:
        return "0"
    text = "".join(out)
    return text[1:] if text[0] == "+" else text
