"""Group rings o_K[G]: Wedderburn components, unit ranks, hyperbolicity verdicts.

The verdict follows the published classification literally.  The rank
engine is a separate Dirichlet computation; it annotates verdicts and never
changes them.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .errors import NotAUnit, NotInTable, NotIntegral, ParseError, PreconditionError
from .quadfield import QuadRat, RingSpec, fundamental_unit, unit_mod2_exponent

# small integer helpers


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def invariant_factors(cyclic_orders) -> tuple[int, ...]:
    """Invariant factors n_1 | n_2 | ... of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in cyclic_orders:
        if n < 1:
            raise ParseError(f"cyclic order must be positive, got {n}")
        for p, e in factorize(n).items():
            by_prime.setdefault(p, []).append(p**e)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for idx, q in enumerate(powers):
            factors[length - 1 - idx] *= q
    return tuple(f for f in factors if f > 1)


# group descriptors


class GroupKind(str, enum.Enum):
    ABELIAN = "ABELIAN"
    HAMILTONIAN2 = "HAMILTONIAN2"
    NAMED = "NAMED"


NAMED_ORDERS = {"S3": 6, "D4": 8, "Q12": 12, "C4:C4": 16}


@dataclass(frozen=True)
class GroupDescriptor:
    kind: GroupKind
    factors: tuple[int, ...] = ()
    rank: int = 0
    name: str = ""

    @classmethod
    def abelian(cls, *orders: int) -> "GroupDescriptor":
        return cls(GroupKind.ABELIAN, factors=invariant_factors(orders))

    @classmethod
    def hamiltonian(cls, n: int = 0) -> "GroupDescriptor":
        if n < 0:
            raise ParseError("elementary abelian rank must be >= 0")
        return cls(GroupKind.HAMILTONIAN2, rank=n)

    @classmethod
    def named(cls, name: str) -> "GroupDescriptor":
        if name not in NAMED_ORDERS:
            raise ParseError(f"unknown named group {name!r}")
        return cls(GroupKind.NAMED, name=name)

    @property
    def order(self) -> int:
        if self.kind is GroupKind.ABELIAN:
            return math.prod(self.factors)
        if self.kind is GroupKind.HAMILTONIAN2:
            return 8 * 2**self.rank
        return NAMED_ORDERS[self.name]

    @property
    def is_abelian(self) -> bool:
        return self.kind is GroupKind.ABELIAN

    @property
    def exponent(self) -> int:
        if self.kind is GroupKind.ABELIAN:
            return self.factors[-1] if self.factors else 1
        if self.kind is GroupKind.HAMILTONIAN2:
            return 4
        return {"S3": 6, "D4": 4, "Q12": 12, "C4:C4": 4}[self.name]

    def is_cyclic(self, n: Optional[int] = None) -> bool:
        if self.kind is not GroupKind.ABELIAN or len(self.factors) > 1:
            return False
        return n is None or self.order == n

    @property
    def label(self) -> str:
        if self.kind is GroupKind.ABELIAN:
            return "x".join(f"C{n}" for n in self.factors) or "C1"
        if self.kind is GroupKind.HAMILTONIAN2:
            return "Q8" if self.rank == 0 else f"E{2**self.rank}xQ8"
        return self.name

    def __str__(self) -> str:
        return self.label


_CYCLIC = re.compile(r"^C(\d+)(?:\^(\d+))?$")
_ELEMENTARY = re.compile(r"^E(\d+)$")


def parse_group(text: str) -> GroupDescriptor:
    """Parse 'C8', 'C2^3', 'C2xC4', 'Q8', 'S3', 'D4', 'Q12', 'C4:C4', 'E4xQ8', ..."""
    s = re.sub(r"\s+", "", text).replace("×", "x").replace("⋊", ":").replace("*", "x")
    if s in NAMED_ORDERS:
        return GroupDescriptor.named(s)
    if not s:
        raise ParseError("empty group descriptor")
    orders: list[int] = []
    quaternion = 0
    for tok in s.split("x"):
        if tok == "Q8":
            quaternion += 1
            continue
        if m := _CYCLIC.match(tok):
            n, k = int(m.group(1)), int(m.group(2) or 1)
            orders.extend([n] * k)
            continue
        if m := _ELEMENTARY.match(tok):
            n = int(m.group(1))
            if n < 1 or n & (n - 1):
                raise ParseError(f"E{n}: order of an elementary abelian 2-group must be a power of 2")
            orders.extend([2] * (n.bit_length() - 1))
            continue
        raise ParseError(f"cannot parse group factor {tok!r} in {text!r}")
    if quaternion > 1:
        raise ParseError("at most one Q8 factor is supported")
    if quaternion:
        inv = invariant_factors(orders)
        if any(f != 2 for f in inv):
            raise ParseError("only E x Q8 with E elementary abelian is supported")
        return GroupDescriptor.hamiltonian(len(inv))
    g = GroupDescriptor.abelian(*orders)
    if g.order == 1:
        raise ParseError("the trivial group is not covered by the classification")
    return g


def count_elements_of_order(m: int, factors: tuple[int, ...]) -> int:
    """#{g : order(g) = m} in prod C_{n_i}, by Mobius inversion."""
    total = 0
    for k in divisors(m):
        mu = mobius(m // k)
        if mu:
            total += mu * math.prod(math.gcd(k, n) for n in factors)
    return total


# Wedderburn decomposition and Dirichlet ranks


@dataclass(frozen=True)
class WedderburnComponent:
    level: int
    splits: bool
    degree: int  # [field : Q] of one copy
    r1: int
    r2: int
    unit_rank: int  # per field copy
    multiplicity: int  # number of Q(zeta_level) summands of Q[G]

    @property
    def copies(self) -> int:
        return self.multiplicity * (2 if self.splits else 1)

    @property
    def degree_over_k(self) -> int:
        return self.degree // 2


def _signature(ring: RingSpec, m: int, splits: bool) -> tuple[int, int, int]:
    phi = euler_phi(m)
    if splits:
        # each copy is Q(zeta_m)
        return (phi, 1, 0) if m <= 2 else (phi, 0, phi // 2)
    if m <= 2:
        return (2, 2, 0) if ring.is_real else (2, 0, 1)
    return 2 * phi, 0, phi


def wedderburn(ring: RingSpec, group: GroupDescriptor) -> list[WedderburnComponent]:
    if not group.is_abelian:
        raise PreconditionError(f"{group} is not abelian")
    conductor = abs(ring.discriminant)
    comps = []
    for m in divisors(group.exponent):
        count = count_elements_of_order(m, group.factors)
        if count == 0:
            continue
        splits = m % conductor == 0
        deg, r1, r2 = _signature(ring, m, splits)
        comps.append(
            WedderburnComponent(
                level=m,
                splits=splits,
                degree=deg,
                r1=r1,
                r2=r2,
                unit_rank=r1 + r2 - 1,
                multiplicity=count // euler_phi(m),
            )
        )
    return comps


@dataclass(frozen=True)
class RankReport:
    components: tuple[WedderburnComponent, ...]
    total_rank: int
    base_rank: int
    u1_rank: int
    notes: tuple[str, ...] = field(default=())


# Published torsion-free ranks of U_1(o_K[C_n]); ``None`` where no row applies.
def _table_value(n: int, d: int) -> Optional[int]:
    if n == 2:
        return 0 if d < 0 else 1
    if n == 3:
        return (0 if d == -3 else 1) if d < 0 else 1
    if n == 4:
        if d < -1:
            return 1
        return 0 if d == -1 else 2
    if n == 5:
        return 2 if d == 5 else 6
    if n == 6:
        if d < -3:
            return 2
        if d == -3:
            return 0
        return 3 if d > 1 else None
    if n == 8:
        if d < -1:
            return 4
        if d == -1:
            return 1
        return 4 if d == 2 else 5
    return None


TABLE_LEVELS = (2, 3, 4, 5, 6, 8)


def paper_rank_table(n: int, d: int) -> int:
    """The published rank of U_1(o_K[C_n]), verbatim."""
    value = _table_value(n, d) if n in TABLE_LEVELS else None
    if value is None:
        raise NotInTable(f"no published rank for n={n}, d={d}")
    return value


def unit_rank(ring: RingSpec, group: GroupDescriptor) -> RankReport:
    comps = tuple(wedderburn(ring, group))
    total = sum(c.copies * c.unit_rank for c in comps)
    base = 1 if ring.is_real else 0
    notes = []
    if group.is_cyclic() and group.order in TABLE_LEVELS:
        published = _table_value(group.order, ring.d)
        if published is not None and published != total - base:
            notes.append(
                f"published table gives r(U1)={published} for C{group.order}, d={ring.d}; "
                f"Dirichlet count gives {total - base}"
            )
    return RankReport(comps, total, base, total - base, tuple(notes))


# C_2 units


@dataclass(frozen=True)
class C2Element:
    """a + b*g in o_K[C_2] with g^2 = 1."""

    a: QuadRat
    b: QuadRat

    def __mul__(self, other: "C2Element") -> "C2Element":
        return C2Element(self.a * other.a + self.b * other.b, self.a * other.b + self.b * other.a)

    def __pow__(self, n: int) -> "C2Element":
        if n < 0:
            raise PreconditionError("negative powers are not supported")
        result = C2Element(self.a.ring.one, self.a.ring.zero)
        for _ in range(n):
            result = result * self
        return result

    @property
    def augmentation(self) -> QuadRat:
        return self.a + self.b

    def is_one(self) -> bool:
        return self.a == 1 and self.b.is_zero()

    def __str__(self):
        return f"({self.a}) + ({self.b})g"


class C2Unit(NamedTuple):
    u: C2Element
    inverse: C2Element


def c2_unit(ring: RingSpec, a: QuadRat) -> C2Unit:
    if not a.is_integral:
        raise NotIntegral(f"{a} is not in o_K")
    if a.is_zero() or a == 1:
        raise PreconditionError("a must lie in o_K minus {0, 1}")
    e = 2 * a - 1
    if e.norm() not in (1, -1):
        raise NotAUnit(f"2a - 1 = {e} is not a unit of o_K")
    ae = a / e
    u = C2Element(a, 1 - a)
    v = C2Element(ae, 1 - ae)
    assert (u * v).is_one()
    return C2Unit(u, v)


class C2UnitGroup(NamedTuple):
    structure: str
    g: C2Element
    w: Optional[C2Element]
    n: Optional[int]


def c2_unit_generator(ring: RingSpec) -> C2UnitGroup:
    g = C2Element(ring.zero, ring.one)
    if not ring.is_real:
        return C2UnitGroup("C2", g, None, None)
    eps = fundamental_unit(ring).epsilon
    n = unit_mod2_exponent(ring).exact_order
    en = eps**n
    w = C2Element((1 + en) / 2, (1 - en) / 2)
    c2_unit(ring, w.a)  # checks 2a - 1 = eps^n is a unit
    return C2UnitGroup("C2 x Z", g, w, n)


# Z^2 inside M_2(o_K)

Mat2 = tuple[QuadRat, QuadRat, QuadRat, QuadRat]


def _mat_mul(m: Mat2, n: Mat2) -> Mat2:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


class Z2Witness(NamedTuple):
    u: Mat2
    v: Mat2
    bound: int
    commute: bool
    relation_free: bool


def z2_witness(ring: RingSpec, bound: int = 10) -> Z2Witness:
    """u = 1 + e12, v = 1 + sqrt(d) e12; checks u^a v^b != 1 for 0 < max(|a|,|b|) <= bound."""
    one, zero, s = ring.one, ring.zero, ring.sqrt_d
    ident = (one, zero, zero, one)
    u = (one, one, zero, one)
    v = (one, s, zero, one)
    u_inv = (one, -one, zero, one)
    v_inv = (one, -s, zero, one)

    def powers(m, m_inv):
        table = {0: ident}
        for k in range(1, bound + 1):
            table[k] = _mat_mul(table[k - 1], m)
            table[-k] = _mat_mul(table[-k + 1], m_inv)
        return table

    up, vp = powers(u, u_inv), powers(v, v_inv)
    free = True
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            prod = _mat_mul(up[a], vp[b])
            if prod != (one, a + b * s, zero, one):
                free = False
            if (a, b) != (0, 0) and prod == ident:
                free = False
    commute = _mat_mul(u, v) == _mat_mul(v, u)
    return Z2Witness(u, v, bound, commute, free)


# K[Q_8] and the torsion list


def kq8_division(ring: RingSpec) -> bool:
    """Whether K[Q_8] = 4K + H(K) is a direct sum of division rings."""
    d = ring.d
    if d % 8 == 1:
        return True
    return (d % 4 in (2, 3) or d % 8 == 5) and d > 0


class HamiltonianSplit(NamedTuple):
    field_copies: int
    quaternion_copies: int
    quaternion_division: bool


def hamiltonian_decomposition(ring: RingSpec, group: GroupDescriptor) -> HamiltonianSplit:
    """K[E x Q_8] = 2^n (4K + H(K)) for E elementary abelian of rank n."""
    if group.kind is not GroupKind.HAMILTONIAN2:
        raise PreconditionError(f"{group} is not a Hamiltonian 2-group")
    copies = 2**group.rank
    return HamiltonianSplit(4 * copies, copies, kq8_division(ring))


@dataclass(frozen=True)
class TorsionCandidate:
    clause: int
    label: str
    contains: Callable[[GroupDescriptor], bool] = field(compare=False, repr=False)


def torsion_candidates() -> list[TorsionCandidate]:
    def cyclic(n):
        return lambda g: g.is_cyclic(n)

    def exponent_divides(n):
        return lambda g: g.is_abelian and n % g.exponent == 0

    def named(name):
        return lambda g: g.kind is GroupKind.NAMED and g.name == name

    return [
        TorsionCandidate(1, "C5", cyclic(5)),
        TorsionCandidate(1, "C8", cyclic(8)),
        TorsionCandidate(1, "C12", cyclic(12)),
        TorsionCandidate(1, "abelian of exponent dividing 4", exponent_divides(4)),
        TorsionCandidate(1, "abelian of exponent dividing 6", exponent_divides(6)),
        TorsionCandidate(2, "Hamiltonian 2-group", lambda g: g.kind is GroupKind.HAMILTONIAN2),
        TorsionCandidate(3, "S3", named("S3")),
        TorsionCandidate(3, "D4", named("D4")),
        TorsionCandidate(3, "Q12", named("Q12")),
        TorsionCandidate(3, "C4:C4", named("C4:C4")),
    ]


def in_torsion_list(group: GroupDescriptor) -> bool:
    return any(c.contains(group) for c in torsion_candidates())


# classification

CITATIONS = {
    "mainresult-1": "classification, clause 1: G in {C2, C3}, any d",
    "mainresult-2": "classification, clause 2: abelian of exponent dividing 2 (d<0), 4 (d=-1) or 6 (d=-3)",
    "mainresult-3": "classification, clause 3: G = C4 and d < 0",
    "mainresult-4": "classification, clause 4: G = C8 and d = -1",
    "mainresult-5": "classification, clause 5: G = Q8, d < 0 and d = 1 (mod 8)",
    "tjpp": "G is not in the list of possible torsion subgroups of a hyperbolic unit group",
    "klein": "non-cyclic elementary abelian 2-group needs o_K imaginary",
    "trank-2": "U1(o_K[C4]) is hyperbolic only for d < 0",
    "trank-3": "abelian of exponent n > 2 is hyperbolic only for n=4, d=-1 or n=6, d=-3",
    "trank-4": "U1(o_K[C8]) is hyperbolic only for d = -1",
    "trank-5": "U1(o_K[C5]) is never hyperbolic",
    "c12": "U1(o_K[C12]) is never hyperbolic",
    "mhp-corollary": "M2(K) is a Wedderburn component, so Z^2 embeds",
    "hamiltonian": "Hamiltonian 2-groups of order > 8 are never hyperbolic",
    "kq8-corollary": "K[Q8] is not a sum of division rings, so M2(K) occurs",
}


@dataclass(frozen=True)
class Verdict:
    hyperbolic: bool
    case_citation: str
    reason: str
    consistency_note: Optional[str] = None


def _positive_clause(d: int, g: GroupDescriptor) -> Optional[str]:
    if g.is_cyclic(2) or g.is_cyclic(3):
        return "mainresult-1"
    if g.is_abelian and (
        (2 % g.exponent == 0 and d < 0)
        or (4 % g.exponent == 0 and d == -1)
        or (6 % g.exponent == 0 and d == -3)
    ):
        return "mainresult-2"
    if g.is_cyclic(4) and d < 0:
        return "mainresult-3"
    if g.is_cyclic(8) and d == -1:
        return "mainresult-4"
    if g.kind is GroupKind.HAMILTONIAN2 and g.rank == 0 and d < 0 and d % 8 == 1:
        return "mainresult-5"
    return None


def _negative_citation(ring: RingSpec, g: GroupDescriptor) -> tuple[str, str]:
    if g.kind is GroupKind.NAMED:
        return "mhp-corollary", CITATIONS["mhp-corollary"]
    if g.kind is GroupKind.HAMILTONIAN2:
        if g.rank > 0:
            return "hamiltonian", CITATIONS["hamiltonian"]
        if ring.is_real:
            return "trank-2", "Q8 contains C4, " + CITATIONS["trank-2"]
        return "kq8-corollary", CITATIONS["kq8-corollary"]
    if not in_torsion_list(g):
        return "tjpp", CITATIONS["tjpp"]
    if g.is_cyclic(5):
        return "trank-5", CITATIONS["trank-5"]
    if g.is_cyclic(8):
        return "trank-4", CITATIONS["trank-4"]
    if g.is_cyclic(12):
        return "c12", CITATIONS["c12"]
    if g.is_cyclic(4):
        return "trank-2", CITATIONS["trank-2"]
    if g.exponent == 2:
        return "klein", CITATIONS["klein"]
    return "trank-3", CITATIONS["trank-3"]


def classify_hyperbolic(ring: RingSpec, group: GroupDescriptor, check: bool = False) -> Verdict:
    clause = _positive_clause(ring.d, group)
    if clause is not None:
        hyperbolic, citation, reason = True, clause, CITATIONS[clause]
    else:
        citation, reason = _negative_citation(ring, group)
        hyperbolic = False
    note = None
    if check and group.is_abelian:
        report = unit_rank(ring, group)
        rank_says = report.u1_rank <= 1
        if rank_says == hyperbolic:
            note = f"rank engine agrees: r(U1) = {report.u1_rank}"
        else:
            note = (
                f"rank engine disagrees: Dirichlet count gives r(U1) = {report.u1_rank}, "
                f"which would make U1 {'hyperbolic' if rank_says else 'non-hyperbolic'}; "
                "verdict kept as published"
            )
        if report.notes:
            note += "; " + "; ".join(report.notes)
    return Verdict(hyperbolic, citation, reason, note)
