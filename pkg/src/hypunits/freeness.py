"""Bounded evidence that two 2-Pell units generate a free group.

Nothing here proves freeness.  ``no_relation_up_to`` evaluates every freely
reduced word up to a length bound exactly; an empty report only says no
relation of that length exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import OutOfRange, PreconditionError, WrongFamily
from .quaternion import Quaternion
from .unitfactory import Family, UnitWitness

MAX_WORD_LENGTH = 10

# letters: x, X = x^-1, y, Y = y^-1
_INVERSE = {"x": "X", "X": "x", "y": "Y", "Y": "y"}


@dataclass(frozen=True)
class WordReport:
    max_length: int
    relations_found: tuple[str, ...]
    elements_examined: int

    @property
    def relation_free(self) -> bool:
        return not self.relations_found


def _eps_data(w: UnitWitness) -> tuple[int, int, str]:
    if w.family is not Family.PELL2 or w.seed.get("psi") != "1":
        raise WrongFamily("powers_disjoint needs units of the form p + m*sqrt(-d)*psi")
    return w.seed["p"], w.seed["m"], w.seed["xi"]


def powers_disjoint(x: UnitWitness, y: UnitWitness, bound: int = 6) -> bool:
    """Whether x^a = y^b only for a = b = 0 (|a|, |b| <= bound checked directly).

    For distinct psi the powers x^a = p_a + m_a sqrt(-d) psi keep a nonzero
    psi-part when a != 0 and live in different coordinates from every y^b,
    so the symbolic answer is True; the brute-force comparison must agree.
    """
    px, mx, psi_x = _eps_data(x)
    py, my, psi_y = _eps_data(y)
    if bound < 0:
        raise PreconditionError("bound must be nonnegative")
    symbolic = None
    if psi_x != psi_y and mx != 0 and my != 0:
        symbolic = True

    def powers(u: Quaternion) -> dict[int, Quaternion]:
        table = {0: Quaternion(u.ring, 1)}
        inv = u.inverse()
        for k in range(1, bound + 1):
            table[k] = table[k - 1] * u
            table[-k] = table[-k + 1] * inv
        return table

    xs, ys = powers(x.u), powers(y.u)
    collide = any(
        xs[a] == ys[b] for a in xs for b in ys if (a, b) != (0, 0)
    )
    brute = not collide
    if symbolic is not None and symbolic != brute:
        raise AssertionError("symbolic and brute-force disjointness disagree")
    return brute


def no_relation_up_to(x: Quaternion, y: Quaternion, L: int, max_length: int = MAX_WORD_LENGTH) -> WordReport:
    """Evaluate all freely reduced words in x, y of length 1..L; report those equal to 1."""
    if L < 0 or L > max_length:
        raise OutOfRange(f"word length {L} outside [0, {max_length}]")
    gens = {"x": x, "X": x.inverse(), "y": y, "Y": y.inverse()}
    relations: list[str] = []
    examined = 0
    # depth-first over the prefix tree, reusing each prefix product
    stack: list[tuple[str, Quaternion]] = [(c, gens[c]) for c in "YyXx"]
    while stack:
        word, value = stack.pop()
        examined += 1
        if value == 1:
            relations.append(word)
        if len(word) < L:
            last_inv = _INVERSE[word[-1]]
            for c in "YyXx":
                if c != last_inv:
                    stack.append((word + c, value * gens[c]))
    relations.sort(key=lambda w: (len(w), w))
    return WordReport(L, tuple(relations), examined)


def find_free_power(x: Quaternion, y: Quaternion, M: int, L: int, max_length: int = MAX_WORD_LENGTH) -> Optional[int]:
    """Smallest m <= M with no relation of length <= L between x^m and y^m."""
    if L < 0 or L > max_length:
        raise OutOfRange(f"word length {L} outside [0, {max_length}]")
    for m in range(1, M + 1):
        if no_relation_up_to(x**m, y**m, L, max_length).relation_free:
            return m
    return None
