import itertools

import pytest

from hypunits.errors import OutOfRange, WrongFamily
from hypunits.freeness import find_free_power, no_relation_up_to, powers_disjoint
from hypunits.quadfield import pell_solve
from hypunits.quaternion import Quaternion, parse_quaternion
from hypunits.unitfactory import gauss_units, pell2_unit, quaternion_ring, u_eps_psi

R7, R23 = quaternion_ring(7), quaternion_ring(23)


def pair(ring, a="i", b="j"):
    eps = pell_solve(-ring.d, 1)
    return u_eps_psi(ring, eps, a), u_eps_psi(ring, eps, b)


def evaluate(word, x, y):
    gens = {"x": x, "X": x.inverse(), "y": y, "Y": y.inverse()}
    out = Quaternion(x.ring, 1)
    for c in word:
        out = out * gens[c]
    return out


def test_powers_disjoint():
    x, y = pair(R7)
    assert powers_disjoint(x, y, 6)
    assert not powers_disjoint(x, x, 6)
    for a, b in itertools.permutations("ijk", 2):
        assert powers_disjoint(*pair(R23, a, b), 4)


def test_powers_disjoint_wrong_family():
    x, _ = pair(R7)
    with pytest.raises(WrongFamily):
        powers_disjoint(x, gauss_units(R7, 6, -1)[0], 3)
    with pytest.raises(WrongFamily):
        powers_disjoint(x, pell2_unit(R7, pell_solve(7), "i", "k"), 3)


def test_no_relation_d7():
    x, y = pair(R7)
    rep = no_relation_up_to(x.u, y.u, 6)
    assert rep.relations_found == ()
    assert rep.elements_examined == sum(4 * 3 ** (n - 1) for n in range(1, 7))


def test_trivial_relations():
    one = Quaternion(R7, 1)
    rep = no_relation_up_to(one, one, 1)
    assert "x" in rep.relations_found
    i = Quaternion.basis(R7, "i")
    rep = no_relation_up_to(i, parse_quaternion(R7, "8+3sj"), 4)
    assert "xxxx" in rep.relations_found
    for w in rep.relations_found:
        assert evaluate(w, i, parse_quaternion(R7, "8+3sj")) == 1


def test_monotone_and_inverse():
    i = Quaternion.basis(R7, "i")
    j = Quaternion.basis(R7, "j")
    short = set(no_relation_up_to(i, j, 4).relations_found)
    longer = set(no_relation_up_to(i, j, 6).relations_found)
    assert short <= longer and short
    x, y = pair(R7)
    for w in ("xyXy", "xxyYYx", "yXXyxy"):
        inv = "".join({"x": "X", "X": "x", "y": "Y", "Y": "y"}[c] for c in reversed(w))
        assert evaluate(w + inv, x.u, y.u) == 1


def test_find_free_power():
    x, y = pair(R7)
    assert find_free_power(x.u, y.u, 3, 6) == 1
    assert find_free_power(x.u, x.u, 3, 4) is None
    assert find_free_power(x.u, y.u, 0, 4) is None


def test_bounds():
    x, y = pair(R7)
    with pytest.raises(OutOfRange):
        no_relation_up_to(x.u, y.u, 11)
    with pytest.raises(OutOfRange):
        find_free_power(x.u, y.u, 1, 12)
