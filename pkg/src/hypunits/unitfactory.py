"""Constructions of units in H(o_K), K = Q(sqrt(-d)), d = 7 (mod 8).

Families: 2-Pell, 3-Pell, the four-term family with p + q = 1, Gauss units
m*sqrt(-d) + p*i + q*j + r*k, and the half-integral family
(m + sqrt(-d))/2 +- ((m - sqrt(-d))/2)*i + p*j.  Every witness carries the
integer data needed to rebuild it.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import (
    NoDecomposition,
    NormMinusOneSeed,
    NoSolution,
    OutOfRange,
    PreconditionError,
    TwoDNotSquareFree,
    WrongFamily,
    WrongRegime,
)
from .quadfield import FundUnit, PellSolution, RingSpec, make_ring, pell_power, pell_solve
from .quaternion import BASIS, Quaternion, is_unit, parse_quaternion

DEFAULT_SQUARES_BOUND = 10**6
DEFAULT_ENUM_BOUND = 100


class Family(str, enum.Enum):
    PELL2 = "PELL2"
    PELL3 = "PELL3"
    PELL4 = "PELL4"
    GAUSS = "GAUSS"
    EQGR = "EQGR"
    ADHOC = "ADHOC"


@dataclass(frozen=True)
class UnitWitness:
    u: Quaternion
    norm: int
    family: Family
    seed: dict = field(compare=False, hash=False)

    def __post_init__(self):
        unit, n = is_unit(self.u)
        if not unit or n != self.norm:
            raise ValueError(f"{self.u} does not have norm {self.norm}")


def positive_d(ring: RingSpec) -> int:
    """The d > 0 with K = Q(sqrt(-d)), checked against d = 7 (mod 8)."""
    d = -ring.d
    if d <= 0 or d % 8 != 7:
        raise WrongRegime(f"need K = Q(sqrt(-d)) with d = 7 (mod 8); got {ring}")
    return d


def quaternion_ring(d: int) -> RingSpec:
    """Ring of integers of Q(sqrt(-d)) for the unit constructions."""
    if d <= 0:
        raise PreconditionError("d must be positive; the field is Q(sqrt(-d))")
    return make_ring(-d)


def _check_basis(*names: str):
    for n in names:
        if n not in BASIS:
            raise PreconditionError(f"{n!r} is not one of 1, i, j, k")
    if len(set(names)) != len(names):
        raise PreconditionError(f"basis elements {names} must be pairwise distinct")


def _place(ring: RingSpec, pairs: Iterable[tuple[str, object]]) -> Quaternion:
    slots = [ring.zero] * 4
    for name, c in pairs:
        idx = BASIS.index(name)
        slots[idx] = slots[idx] + c
    return Quaternion(ring, *slots)


# 2-Pell


SeedLike = Union[PellSolution, FundUnit, tuple]


def _pell_pair(d: int, eps: SeedLike) -> tuple[int, int]:
    if isinstance(eps, PellSolution):
        if eps.D != d:
            raise PreconditionError(f"Pell solution is for D={eps.D}, expected {d}")
        p, m, n = eps.X, eps.Y, eps.rhs
    elif isinstance(eps, FundUnit):
        if eps.epsilon.ring.d != d or not (eps.epsilon.x.denominator == eps.epsilon.y.denominator == 1):
            raise PreconditionError(f"unit must lie in Z[sqrt({d})]")
        p, m, n = int(eps.epsilon.x), int(eps.epsilon.y), eps.norm
    else:
        p, m = eps
        n = p * p - d * m * m
    if n == -1:
        raise NormMinusOneSeed("2-Pell units need a unit of norm 1")
    if n != 1:
        raise PreconditionError(f"{p} + {m}*sqrt({d}) is not a unit")
    return p, m


def _build_pell2(ring, d, p, m, xi, psi):
    return _place(ring, [(xi, ring.sqrt_d * m), (psi, ring.element(p))])


def pell2_unit(ring: RingSpec, eps: SeedLike, xi: str, psi: str) -> UnitWitness:
    """m*sqrt(-d)*xi + p*psi for a norm-one unit p + m*sqrt(d)."""
    d = positive_d(ring)
    _check_basis(xi, psi)
    p, m = _pell_pair(d, eps)
    u = _build_pell2(ring, d, p, m, xi, psi)
    return UnitWitness(u, 1, Family.PELL2, {"d": d, "p": p, "m": m, "xi": xi, "psi": psi})


def u_eps_psi(ring: RingSpec, eps: SeedLike, psi: str) -> UnitWitness:
    """p + m*sqrt(-d)*psi, psi in {i, j, k}."""
    if psi == "1":
        raise PreconditionError("psi must be one of i, j, k")
    return pell2_unit(ring, eps, psi, "1")


def _eps_form(w: UnitWitness) -> tuple[int, int, int, str]:
    if w.family is not Family.PELL2:
        raise WrongFamily(f"expected a 2-Pell unit, got {w.family.value}")
    s = w.seed
    if s["psi"] != "1":
        raise WrongFamily("expected the form p + m*sqrt(-d)*psi")
    return s["d"], s["p"], s["m"], s["xi"]


def pell2_power(w: UnitWitness, n: int) -> UnitWitness:
    """w^n computed by powering p + m*sqrt(d) and rebuilding."""
    d, p, m, psi = _eps_form(w)
    a, b = pell_power(d, p, m, abs(n))
    if n < 0:
        b = -b  # the inverse of a norm-one unit is its conjugate
    return u_eps_psi(w.u.ring, (a, b), psi)


# 3-Pell


def pell3_unit(ring: RingSpec, xi: str = "1", psi: str = "i", phi: str = "j") -> UnitWitness:
    """m*sqrt(-d)*xi + p*psi + (1-p)*phi from X^2 - 2d*Y^2 = 1, X = 2p - 1."""
    d = positive_d(ring)
    _check_basis(xi, psi, phi)
    if d % 2 == 0:
        raise TwoDNotSquareFree(f"2d = {2 * d} is not square-free")
    sol = pell_solve(2 * d, 1)
    if sol is None or sol.X % 2 == 0:
        raise NoSolution(f"X^2 - {2 * d}Y^2 = 1 has no solution with X odd")
    p, m = (sol.X + 1) // 2, sol.Y
    u = _place(ring, [(xi, ring.sqrt_d * m), (psi, ring.element(p)), (phi, ring.element(1 - p))])
    return UnitWitness(u, 1, Family.PELL3, {"d": d, "p": p, "m": m, "xi": xi, "psi": psi, "phi": phi})


# four-term family, p + q = 1


def _pell4_element(ring, m, p, q):
    s = ring.sqrt_d * m
    return _place(ring, [("1", s), ("i", s), ("j", ring.element(p)), ("k", ring.element(q))])


def pell4_unit(ring: RingSpec) -> UnitWitness:
    """m*sqrt(-d)*(1 + i) + p*j + q*k with q = 1 - p, norm 1."""
    d = positive_d(ring)
    sol = pell_solve(d, 1)
    if sol is None:
        raise NoSolution(f"X^2 - {d}Y^2 = 1 has no solution")  # pragma: no cover
    x, y = sol.X, sol.Y
    if y % 2:
        x, y = pell_power(d, x, y, 2)
    if x % 2 == 0:
        raise NoSolution("no odd X with X^2 - 4dY^2 = 1")  # pragma: no cover
    m, p = y // 2, (1 + x) // 2
    q = 1 - p
    u = _pell4_element(ring, m, p, q)
    return UnitWitness(u, 1, Family.PELL4, {"d": d, "m": m, "p": p, "q": q, "X": x})


# sums of squares


class Triple(NamedTuple):
    p: int
    q: int
    r: int


def is_excluded_form(n: int) -> bool:
    """Whether n = 4^a (8b - 1); such n are not sums of three squares."""
    if n <= 0:
        return False
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def two_squares(n: int, max_part: Optional[int] = None) -> list[tuple[int, int]]:
    """All (q, r) with q >= r >= 0, q <= max_part and q^2 + r^2 = n, q descending."""
    out = []
    if n < 0:
        return out
    q = math.isqrt(n)
    if max_part is not None:
        q = min(q, max_part)
    while q >= 0:
        rem = n - q * q
        if rem > q * q:
            break
        r = math.isqrt(rem)
        if r * r == rem:
            out.append((q, r))
        q -= 1
    return out


def three_squares(n: int, all: bool = False, bound: int = DEFAULT_SQUARES_BOUND):
    """Canonical p >= q >= r >= 0 with p^2 + q^2 + r^2 = n.

    Returns one Triple (or a list of every canonical triple when ``all``),
    or None when there is no decomposition.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    if n > bound:
        raise OutOfRange(f"n = {n} exceeds the enumeration bound {bound}")
    if not all and is_excluded_form(n):
        return None
    found = []
    p = math.isqrt(n)
    while p >= 0 and 3 * p * p >= n:
        for q, r in two_squares(n - p * p, max_part=p):
            t = Triple(p, q, r)
            if not all:
                return t
            found.append(t)
        p -= 1
    if all:
        return found or None
    return None


def signed_permutations(t: Sequence[int]) -> list[tuple[int, ...]]:
    """Every sign/permutation variant of a triple, sorted and without repeats."""
    out = set()
    for perm in itertools.permutations(t):
        for signs in itertools.product((1, -1), repeat=len(t)):
            out.add(tuple(s * v for s, v in zip(signs, perm)))
    return sorted(out)


def canonical_triple(values: Sequence[int]) -> Triple:
    return Triple(*sorted((abs(v) for v in values), reverse=True))


# Gauss units


def _gauss_element(ring, m, support, values):
    return _place(ring, [("1", ring.sqrt_d * m)] + [(b, ring.element(v)) for b, v in zip(support, values)])


def gauss_units(
    ring: RingSpec,
    m: int,
    target_norm: int,
    all: bool = True,
    support: str = "ijk",
    bound: int = 10**12,
) -> list[UnitWitness]:
    """Units m*sqrt(-d) + p*i + q*j + r*k with p^2 + q^2 + r^2 = m^2 d + target_norm.

    ``support`` names the basis elements besides 1 that carry p, q (, r);
    a two-letter support searches two-square decompositions.
    """
    d = positive_d(ring)
    if target_norm not in (1, -1):
        raise PreconditionError("target_norm must be 1 or -1")
    if len(support) not in (2, 3) or "1" in support:
        raise PreconditionError("support must be two or three of i, j, k")
    _check_basis(*support)
    n = m * m * d + target_norm
    if len(support) == 3:
        res = three_squares(n, all=all, bound=bound)
        triples = [] if res is None else (res if all else [res])
    else:
        if n > bound:
            raise OutOfRange(f"n = {n} exceeds the enumeration bound {bound}")
        pairs = two_squares(n)
        triples = [pairs[0]] if pairs and not all else pairs
    if not triples:
        raise NoDecomposition(f"{n} = {m}^2*{d} + ({target_norm}) has no decomposition into {len(support)} squares")
    out = []
    for t in triples:
        u = _gauss_element(ring, m, support, t)
        out.append(
            UnitWitness(u, target_norm, Family.GAUSS, {"d": d, "m": m, "values": list(t), "support": support})
        )
    return out


# the half-integral family


class EqgrResult(NamedTuple):
    solutions: tuple[tuple[int, int], ...]
    units: tuple[UnitWitness, ...]


def eqgr_solutions(d: int, target_norm: int) -> tuple[tuple[int, int], ...]:
    """All integer (m, p) with m^2 + 2p^2 = d + 2*target_norm, sorted."""
    if d <= 0:
        raise PreconditionError("d must be positive")
    if target_norm not in (1, -1):
        raise PreconditionError("target_norm must be 1 or -1")
    rhs = d + 2 * target_norm
    sols = []
    p = 0
    while 2 * p * p <= rhs:
        rem = rhs - 2 * p * p
        m = math.isqrt(rem)
        if m * m == rem:
            for sm in {m, -m}:
                for sp in {p, -p}:
                    sols.append((sm, sp))
        p += 1
    return tuple(sorted(set(sols)))


def _eqgr_coeffs(ring, m, sign):
    s = ring.sqrt_d
    return (m + s) / 2, (m - s) / 2 * sign


def _eqgr_element(ring, m, p, sign):
    a, b = _eqgr_coeffs(ring, m, sign)
    return Quaternion(ring, a, b, p, 0)


def eqgr_solve(ring: RingSpec, target_norm: int) -> EqgrResult:
    """Solve m^2 + 2p^2 = d +- 2 and build (m+sqrt(-d))/2 +- ((m-sqrt(-d))/2) i + p j."""
    d = -ring.d
    sols = eqgr_solutions(d, target_norm)
    units: list[UnitWitness] = []
    if d % 8 == 7:
        for m, p in sols:
            for sign in (1, -1):
                u = _eqgr_element(ring, m, p, sign)
                units.append(UnitWitness(u, target_norm, Family.EQGR, {"d": d, "m": m, "p": p, "sign": sign}))
    return EqgrResult(sols, tuple(units))


def eqgr_expansion(ring: RingSpec, target_norm: int) -> dict[frozenset, set]:
    """Distinct units obtained by placing the three coefficients of each
    half-integral solution on every three-element support, in every order."""
    positive_d(ring)
    out: dict[frozenset, set] = {}
    for m, p in eqgr_solutions(-ring.d, target_norm):
        for sign in (1, -1):
            a, b = _eqgr_coeffs(ring, m, sign)
            values = (a, b, ring.element(p))
            for supp in itertools.combinations(BASIS, 3):
                bucket = out.setdefault(frozenset(supp), set())
                for perm in itertools.permutations(values):
                    bucket.add(_place(ring, zip(supp, perm)))
    return out


# exhaustive search


@dataclass(frozen=True)
class UnitPattern:
    """fixed + sum of t_b * b over the free basis slots, t_b integers."""

    fixed: Quaternion
    free: tuple[str, ...]


def gauss_pattern(ring: RingSpec, m: int) -> UnitPattern:
    return UnitPattern(Quaternion(ring, ring.sqrt_d * m), ("i", "j", "k"))


def enumerate_units(
    ring: RingSpec, pattern: UnitPattern, norm: int, bound: int, max_bound: int = DEFAULT_ENUM_BOUND
) -> list[UnitWitness]:
    """Every unit fixed + sum t_b*b of the given norm with |t_b| <= bound."""
    if bound < 0 or bound > max_bound:
        raise OutOfRange(f"bound {bound} outside [0, {max_bound}]")
    _check_basis(*pattern.free)
    idx = [BASIS.index(b) for b in pattern.free]
    # N(fixed + t) = sum over slots of (f + t)^2 = N(fixed) + sum (2 f t + t^2)
    fixed = pattern.fixed.coeffs
    base = pattern.fixed.norm()
    out = []
    target = pattern.fixed.ring.element(norm)
    twice = [2 * fixed[i] for i in idx]
    rng = range(-bound, bound + 1)
    for ts in itertools.product(rng, repeat=len(idx)):
        n = base
        for f2, t in zip(twice, ts):
            if t:
                n = n + f2 * t + t * t
        if n != target:
            continue
        slots = list(fixed)
        for i, t in zip(idx, ts):
            slots[i] = slots[i] + t
        u = Quaternion(ring, *slots)
        if not u.is_integral:
            continue
        out.append(UnitWitness(u, norm, Family.ADHOC, {"d": -ring.d, "expr": str(u)}))
    return out


# replay


def rebuild(w: UnitWitness) -> Quaternion:
    """Reconstruct the unit from its recorded seed."""
    s = w.seed
    ring = quaternion_ring(s["d"])
    if w.family is Family.PELL2:
        return _build_pell2(ring, s["d"], s["p"], s["m"], s["xi"], s["psi"])
    if w.family is Family.PELL3:
        return _place(
            ring,
            [(s["xi"], ring.sqrt_d * s["m"]), (s["psi"], ring.element(s["p"])), (s["phi"], ring.element(1 - s["p"]))],
        )
    if w.family is Family.PELL4:
        return _pell4_element(ring, s["m"], s["p"], s["q"])
    if w.family is Family.GAUSS:
        return _gauss_element(ring, s["m"], s["support"], s["values"])
    if w.family is Family.EQGR:
        return _eqgr_element(ring, s["m"], s["p"], s["sign"])
    return parse_quaternion(ring, s["expr"])
