import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypunits.errors import MixedRings, NotAUnit, NotDivisionRegime, NotIntegral, ParseError
from hypunits.quadfield import make_ring
from hypunits.quaternion import (
    INFINITE,
    FElem,
    Quaternion,
    char_poly,
    format_quaternion,
    h_norm,
    is_unit,
    order,
    parse_quaternion,
    psi,
)

R7, R15, R23 = make_ring(-7), make_ring(-15), make_ring(-23)


def q(ring, text):
    return parse_quaternion(ring, text)


def rand_q(rng, ring, size=20):
    return Quaternion(ring, *(ring.from_theta(rng.randint(-size, size), rng.randint(-size, size)) for _ in range(4)))


def test_relations():
    i, j, k = (Quaternion.basis(R7, b) for b in "ijk")
    assert i * j == k and j * i == -k
    assert j * k == i and k * i == j
    assert i * i == j * j == k * k == -1
    x = q(R7, "8+3sj")
    assert x * x == q(R7, "127+48sj")


def test_norm_examples():
    v0 = q(R7, "6s+15i+5j+k")
    assert h_norm(v0) == -1
    assert v0.conj() * v0 == h_norm(v0)
    assert h_norm(Quaternion(R7, 1)) == 1
    assert h_norm(q(R23, "2s+8i+5j+2k")) == 1


def test_is_unit_examples():
    assert is_unit(q(R23, "5s+23i+6j+3k")) == (True, -1)
    assert not is_unit(q(R7, "1+i")).is_unit
    assert is_unit(q(R23, "3588s+12168i+12167j")) == (True, 1)
    with pytest.raises(NotIntegral):
        is_unit(q(R7, "1/2+i"))
    with pytest.raises(NotDivisionRegime):
        is_unit(q(make_ring(-5), "1+i"))


def test_psi_examples():
    one, zero = FElem(R7.one, R7.zero), FElem(R7.zero, R7.zero)
    m = psi(Quaternion(R7, 1))
    assert (m.a, m.b, m.c, m.d) == (one, zero, zero, one)
    m = psi(Quaternion.basis(R7, "j"))
    assert (m.a, m.b, m.c, m.d) == (zero, one, -one, zero)
    v0 = q(R7, "6s+15i+5j+k")
    assert psi(v0).det() == FElem(R7.element(-1), R7.zero)


def test_char_poly_examples():
    cp = char_poly(Quaternion.basis(R7, "i"))
    assert cp.linear == 0 and cp.constant == 1
    cp = char_poly(q(R7, "6s+15i+5j+k"))
    assert cp.linear == -12 * R7.sqrt_d and cp.constant == -1


def test_order_examples():
    assert order(Quaternion.basis(R7, "i")) == 4
    assert order(q(R7, "6s+15i+5j+k")) is INFINITE
    assert order(q(R15, "((-3-s)/2)i+((-3+s)/2)j+2k")) == 4
    assert order(Quaternion(R7, 1)) == 1
    assert order(Quaternion(R7, -1)) == 2
    with pytest.raises(NotAUnit):
        order(q(R7, "1+i"))
    with pytest.raises(NotDivisionRegime):
        order(Quaternion(make_ring(3), 1))


@pytest.mark.parametrize("ring", [R7, R15, R23])
def test_laws_random(ring):
    rng = random.Random(-ring.d)
    for _ in range(2000):
        x, y = rand_q(rng, ring), rand_q(rng, ring)
        assert (x * y).norm() == x.norm() * y.norm()
        px, py = psi(x), psi(y)
        assert psi(x * y) == px * py
        assert psi(x + y) == px + py
        assert px.det() == FElem(x.norm(), ring.zero)
        assert px.trace() == FElem(2 * x.c1, ring.zero)
        assert char_poly(x).evaluate(x) == 0
        assert x * x.conj() == x.norm() == x.conj() * x
        assert (x * y).conj() == y.conj() * x.conj()


coeff = st.integers(-10**4, 10**4)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([R7, R15, R23]), st.lists(coeff, min_size=24, max_size=24))
def test_associativity_and_distributivity(ring, cs):
    x, y, z = (Quaternion(ring, *(ring.from_theta(cs[2 * k + 8 * t], cs[2 * k + 1 + 8 * t]) for k in range(4))) for t in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_order_against_brute_force():
    rng = random.Random(5)
    units = [Quaternion.basis(R7, b) for b in "ijk"]
    units += [q(R15, "((-3-s)/2)i+((-3+s)/2)j+2k"), q(R7, "6s+15i+5j+k"), q(R7, "8+3si"), q(R7, "1"), q(R7, "-1")]
    units += [q(R23, "2s+8i+5j+2k"), q(R23, "5s+23i+6j+3k")]
    for _ in range(20):
        a, b, c = rng.sample([Quaternion.basis(R7, n) for n in "ijk"], 3)
        units.append(a * b * c)
    for u in units:
        o = order(u)
        if o is INFINITE:
            assert all(u**n != 1 for n in range(1, 25))
        else:
            assert u**o == 1 and all(u**n != 1 for n in range(1, o))


def test_mixed_rings():
    with pytest.raises(MixedRings):
        Quaternion(R7, 1) * Quaternion(R15, 1)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("6s+15i+5j+k", "6s+15i+5j+1k"),
        ("6 s + 15 i + 5 j + 1 k", "6s+15i+5j+1k"),
        ("-i", "-1i"),
        ("0", "0"),
        ("(1+s)/2", "1h"),
        ("((-3-s)/2)i+((-3+s)/2)j+2k", None),
    ],
)
def test_parser_examples(text, expected):
    x = q(R15, text)
    if expected is not None:
        assert format_quaternion(x) == expected
    assert q(R15, format_quaternion(x)) == x


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([R7, R15, make_ring(-2), make_ring(-5)]), st.lists(st.integers(-50, 50), min_size=8, max_size=8),
       st.sampled_from([1, 2, 3]))
def test_print_parse_round_trip(ring, cs, den):
    # den = 1 gives integral theta-coordinates; otherwise arbitrary rationals
    if den == 1:
        coeffs = [ring.from_theta(cs[2 * k], cs[2 * k + 1]) for k in range(4)]
    else:
        coeffs = [ring.element(Fraction(cs[2 * k], den), Fraction(cs[2 * k + 1], den)) for k in range(4)]
    x = Quaternion(ring, *coeffs)
    text = format_quaternion(x)
    assert q(ring, text) == x
    assert format_quaternion(q(ring, text)) == text


def test_parser_rejects():
    for bad in ("", "2x", "1+", "(1+i)i", "((1+s)", "h"):
        with pytest.raises(ParseError):
            q(R7 if bad != "h" else make_ring(-2), bad)
