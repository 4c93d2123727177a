"""Exact arithmetic in quadratic fields Q(sqrt d) and their rings of integers.

Elements are stored as ``(x + y*sqrt(d))`` with rational ``x, y`` kept as
integer numerators over one positive denominator.  Integrality is decided in
theta-coordinates, where ``theta = sqrt(d)`` for ``d = 2, 3 (mod 4)`` and
``theta = (1 + sqrt(d))/2`` for ``d = 1 (mod 4)``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Union

from .errors import (
    MixedRings,
    NotRealField,
    NotSquareFree,
    OutOfRange,
    PerfectSquare,
    PreconditionError,
)

DEFAULT_D_BOUND = 10**9

Rational = Union[int, Fraction]


class ThetaKind(str, enum.Enum):
    SQRT_D = "SQRT_D"
    HALF_ONE_PLUS_SQRT_D = "HALF_ONE_PLUS_SQRT_D"


def is_square_free(n: int) -> bool:
    """Trial division up to sqrt(|n|)."""
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 1 if p == 2 else 2
    return True


@dataclass(frozen=True)
class RingSpec:
    d: int
    theta_kind: ThetaKind
    discriminant: int
    is_real: bool

    def element(self, x: Rational = 0, y: Rational = 0) -> "QuadRat":
        return QuadRat(self, x, y)

    def from_theta(self, a: Rational, b: Rational) -> "QuadRat":
        """The element a + b*theta."""
        a, b = Fraction(a), Fraction(b)
        if self.theta_kind is ThetaKind.SQRT_D:
            return QuadRat(self, a, b)
        return QuadRat(self, a + b / 2, b / 2)

    @property
    def zero(self) -> "QuadRat":
        return QuadRat(self, 0, 0)

    @property
    def one(self) -> "QuadRat":
        return QuadRat(self, 1, 0)

    @property
    def sqrt_d(self) -> "QuadRat":
        return QuadRat(self, 0, 1)

    @property
    def theta(self) -> "QuadRat":
        return self.from_theta(0, 1)

    def __str__(self) -> str:
        return f"Q(sqrt({self.d}))"


@functools.lru_cache(maxsize=4096)
def _make_ring_cached(d: int) -> RingSpec:
    if d % 4 == 1:
        kind, disc = ThetaKind.HALF_ONE_PLUS_SQRT_D, d
    else:
        kind, disc = ThetaKind.SQRT_D, 4 * d
    return RingSpec(d=d, theta_kind=kind, discriminant=disc, is_real=d > 0)


def make_ring(d: int, bound: int = DEFAULT_D_BOUND) -> RingSpec:
    if isinstance(d, bool) or not isinstance(d, int):
        raise PreconditionError(f"d must be an integer, got {d!r}")
    if d in (0, 1):
        raise PreconditionError("d must differ from 0 and 1")
    if abs(d) > bound:
        raise OutOfRange(f"|d| = {abs(d)} exceeds the configured bound {bound}")
    if not is_square_free(d):
        raise NotSquareFree(f"d = {d} is not square-free")
    return _make_ring_cached(d)


def _split(v: Rational) -> tuple[int, int]:
    if isinstance(v, int):
        return v, 1
    if isinstance(v, Fraction):
        return v.numerator, v.denominator
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


class QuadRat:
    """An element x + y*sqrt(d) of Q(sqrt d); immutable."""

    __slots__ = ("ring", "_d", "_xn", "_yn", "_den")

    def __init__(self, ring: RingSpec, x: Rational = 0, y: Rational = 0):
        xn, xd = _split(x)
        yn, yd = _split(y)
        den = xd * yd // math.gcd(xd, yd)
        self._set(ring, xn * (den // xd), yn * (den // yd), den)

    def _set(self, ring, xn, yn, den):
        g = math.gcd(xn, yn, den)
        if g != 1:
            xn //= g
            yn //= g
            den //= g
        sa = object.__setattr__
        sa(self, "ring", ring)
        sa(self, "_d", ring.d)
        sa(self, "_xn", xn)
        sa(self, "_yn", yn)
        sa(self, "_den", den)

    @classmethod
    def _raw(cls, ring, xn, yn, den) -> "QuadRat":
        obj = cls.__new__(cls)
        obj._set(ring, xn, yn, den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadRat is immutable")

    # coordinates

    @property
    def x(self) -> Fraction:
        return Fraction(self._xn, self._den)

    @property
    def y(self) -> Fraction:
        return Fraction(self._yn, self._den)

    @property
    def theta_coords(self) -> tuple[Fraction, Fraction]:
        if self.ring.theta_kind is ThetaKind.SQRT_D:
            return self.x, self.y
        return Fraction(self._xn - self._yn, self._den), Fraction(2 * self._yn, self._den)

    @property
    def is_integral(self) -> bool:
        if self.ring.theta_kind is ThetaKind.SQRT_D:
            return self._den == 1
        return (2 * self._yn) % self._den == 0 and (self._xn - self._yn) % self._den == 0

    @property
    def is_rational(self) -> bool:
        return self._yn == 0

    def mod2(self) -> tuple[int, int]:
        """Image in o_K/2o_K as theta-coordinates mod 2."""
        if not self.is_integral:
            raise PreconditionError(f"{self} is not integral")
        a, b = self.theta_coords
        return int(a) % 2, int(b) % 2

    # arithmetic

    def _coerce(self, other) -> Optional["QuadRat"]:
        if isinstance(other, QuadRat):
            if other._d != self._d:
                raise MixedRings(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            n, den = _split(other)
            return QuadRat._raw(self.ring, n, 0, den)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == o._den:
            return QuadRat._raw(self.ring, self._xn + o._xn, self._yn + o._yn, self._den)
        return QuadRat._raw(
            self.ring,
            self._xn * o._den + o._xn * self._den,
            self._yn * o._den + o._yn * self._den,
            self._den * o._den,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadRat._raw(self.ring, -self._xn, -self._yn, self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        x1, y1, x2, y2 = self._xn, self._yn, o._xn, o._yn
        return QuadRat._raw(
            self.ring, x1 * x2 + self._d * y1 * y2, x1 * y2 + x2 * y1, self._den * o._den
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadRat":
        n = self._xn * self._xn - self._d * self._yn * self._yn
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        if n < 0:
            return QuadRat._raw(self.ring, -self._xn * self._den, self._yn * self._den, -n)
        return QuadRat._raw(self.ring, self._xn * self._den, -self._yn * self._den, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "QuadRat":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.ring.one
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conj(self) -> "QuadRat":
        return QuadRat._raw(self.ring, self._xn, -self._yn, self._den)

    def norm(self) -> Fraction:
        return Fraction(self._xn * self._xn - self._d * self._yn * self._yn, self._den * self._den)

    def trace(self) -> Fraction:
        return Fraction(2 * self._xn, self._den)

    def is_zero(self) -> bool:
        return self._xn == 0 and self._yn == 0

    def sign(self) -> int:
        """Sign under the real embedding sqrt(d) > 0."""
        if not self.ring.is_real:
            raise NotRealField(f"{self.ring} has no real embedding")
        x, y = self._xn, self._yn
        if x >= 0 and y >= 0:
            return 0 if x == 0 and y == 0 else 1
        if x <= 0 and y <= 0:
            return -1
        # opposite signs: compare x^2 with d*y^2
        diff = x * x - self._d * y * y
        return (1 if x > 0 else -1) if diff > 0 else (1 if y > 0 else -1)

    def __float__(self) -> float:
        if not self.ring.is_real:
            raise NotRealField(f"{self.ring} has no real embedding")
        return (self._xn + self._yn * math.sqrt(self._d)) / self._den

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            return (
                self._d == other._d
                and self._xn == other._xn
                and self._yn == other._yn
                and self._den == other._den
            )
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._yn == 0 and Fraction(self._xn, self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._yn == 0:
            return hash(Fraction(self._xn, self._den))
        return hash((self._d, self._xn, self._yn, self._den))

    def __repr__(self):
        return f"QuadRat(d={self._d}, {self})"

    def __str__(self):
        x, y, den = self._xn, self._yn, self._den
        root = f"√{self._d}" if self._d >= 0 else f"√({self._d})"
        if y == 0:
            body = str(x)
        else:
            ys = {1: "", -1: "-"}.get(y, str(y))
            body = f"{ys}{root}" if x == 0 else f"{x}{'+' if y > 0 else ''}{ys}{root}"
        if den == 1:
            return body
        return f"{body}/{den}" if y == 0 else f"({body})/{den}"


# units of o_K


@dataclass(frozen=True)
class FundUnit:
    epsilon: QuadRat
    norm: int
    mod2_order: int

    def __post_init__(self):
        if self.epsilon.norm() != self.norm or self.norm not in (1, -1):
            raise ValueError("epsilon must be a unit with the recorded norm")


class UnitGroup(NamedTuple):
    torsion: tuple[QuadRat, ...]
    rank: int
    fundamental: Optional[FundUnit]

    @property
    def torsion_order(self) -> int:
        return len(self.torsion)

    def describe(self) -> str:
        if self.fundamental is not None:
            return f"±⟨{self.fundamental.epsilon}⟩"
        return "{" + ", ".join(str(t) for t in self.torsion) + "}"


def unit_group_torsion(ring: RingSpec) -> UnitGroup:
    if ring.d > 0:
        return UnitGroup((ring.one, -ring.one), 1, fundamental_unit(ring))
    if ring.d == -1:
        gens = [ring.one, ring.theta]
    elif ring.d == -3:
        gens = [ring.one, ring.theta, ring.theta**2]
    else:
        gens = [ring.one]
    torsion = tuple(s for g in gens for s in (g, -g))
    return UnitGroup(torsion, 0, None)


def _cf_floor(P: int, Q: int, s: int) -> int:
    # floor((P + sqrt(D)) / Q) where s = isqrt(D) and D is not a square
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // -Q + 1)


def quadratic_cf(P: int, Q: int, D: int) -> Iterator[int]:
    """Partial quotients of (P + sqrt(D))/Q; needs Q | D - P^2."""
    if (D - P * P) % Q:
        raise PreconditionError("Q must divide D - P^2")
    s = math.isqrt(D)
    while True:
        a = _cf_floor(P, Q, s)
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def convergents(partials: Iterator[int]) -> Iterator[tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in partials:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0


def _mod2_mul(ring: RingSpec, u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    a1, b1 = u
    a2, b2 = v
    bb = b1 * b2
    if ring.theta_kind is ThetaKind.SQRT_D:
        # theta^2 = d
        return (a1 * a2 + bb * ring.d) % 2, (a1 * b2 + a2 * b1) % 2
    # theta^2 = theta + (d-1)/4
    return (a1 * a2 + bb * ((ring.d - 1) // 4)) % 2, (a1 * b2 + a2 * b1 + bb) % 2


def mod2_order(u: QuadRat) -> int:
    """Multiplicative order of a unit of o_K in o_K/2o_K."""
    r = u.mod2()
    cur = r
    for k in range(1, 4):
        if cur == (1, 0):
            return k
        cur = _mod2_mul(u.ring, cur, r)
    raise PreconditionError(f"{u} is not a unit modulo 2")


def fundamental_unit(ring: RingSpec) -> FundUnit:
    """Smallest unit > 1, read off the continued fraction of theta."""
    if not ring.is_real:
        raise NotRealField(f"{ring} is imaginary; its unit group is finite")
    if ring.theta_kind is ThetaKind.SQRT_D:
        cf, shift = quadratic_cf(0, 1, ring.d), 0
    else:
        cf, shift = quadratic_cf(1, 2, ring.d), 1
    # a convergent p/q of theta approximates -conj(theta) + shift
    for p, q in convergents(cf):
        eps = ring.from_theta(p - shift * q, q)
        n = eps.norm()
        if n in (1, -1) and eps.sign() > 0 and eps != 1:
            return FundUnit(eps, int(n), mod2_order(eps))
    raise AssertionError("unreachable")  # pragma: no cover


class Mod2Exponent(NamedTuple):
    bound: int
    exact_order: int


def salomao_exponent(d: int) -> int:
    """The exponent i with u^i = 1 (mod 2) for every unit u of o_K."""
    if d % 8 == 1:
        return 1
    if d % 4 in (2, 3):
        return 2
    return 3


def unit_mod2_exponent(ring: RingSpec) -> Mod2Exponent:
    if ring.is_real:
        gen = fundamental_unit(ring).epsilon
    elif ring.d == -1 or ring.d == -3:
        gen = ring.theta
    else:
        gen = -ring.one
    return Mod2Exponent(salomao_exponent(ring.d), mod2_order(gen))


# Pell equations


@dataclass(frozen=True)
class PellSolution:
    X: int
    Y: int
    D: int
    rhs: int

    def __post_init__(self):
        if self.X < 0 or self.Y < 0:
            raise ValueError("X and Y must be nonnegative")
        if self.X * self.X - self.D * self.Y * self.Y != self.rhs:
            raise ValueError(f"{self.X}^2 - {self.D}*{self.Y}^2 != {self.rhs}")


def _sqrt_cf_period(D: int) -> int:
    a0 = math.isqrt(D)
    for k, a in enumerate(quadratic_cf(0, 1, D)):
        if k and a == 2 * a0:
            return k
    raise AssertionError("unreachable")  # pragma: no cover


def pell_solve(D: int, rhs: int = 1) -> Optional[PellSolution]:
    """Minimal positive solution of X^2 - D*Y^2 = rhs, or None."""
    if D <= 0:
        raise PreconditionError("D must be positive")
    if rhs not in (1, -1):
        raise PreconditionError("rhs must be 1 or -1")
    if math.isqrt(D) ** 2 == D:
        raise PerfectSquare(f"D = {D} is a perfect square")
    period = _sqrt_cf_period(D)
    if rhs == -1 and period % 2 == 0:
        return None
    # (p_{l-1}, q_{l-1}) has norm (-1)^l; one more period squares it
    index = period - 1 if (period % 2 == 1) == (rhs == -1) else 2 * period - 1
    for k, (p, q) in enumerate(convergents(quadratic_cf(0, 1, D))):
        if k == index:
            return PellSolution(p, q, D, rhs)
    raise AssertionError("unreachable")  # pragma: no cover


def _pell_mul(D: int, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] + D * a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def pell_power(D: int, X: int, Y: int, n: int) -> tuple[int, int]:
    """Coefficients of (X + Y*sqrt(D))^n for n >= 0 (integer arithmetic)."""
    result, base = (1, 0), (X, Y)
    while n:
        if n & 1:
            result = _pell_mul(D, result, base)
        n >>= 1
        if n:
            base = _pell_mul(D, base, base)
    return result


def pell_nth(sol: PellSolution, n: int) -> PellSolution:
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    X, Y = pell_power(sol.D, sol.X, sol.Y, n)
    return PellSolution(X, Y, sol.D, sol.rhs**n)
