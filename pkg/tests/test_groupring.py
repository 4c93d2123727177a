import pytest

from hypunits.errors import NotAUnit, NotInTable, ParseError, PreconditionError
from hypunits.groupring import (
    CITATIONS,
    GroupDescriptor,
    GroupKind,
    TABLE_LEVELS,
    c2_unit,
    c2_unit_generator,
    classify_hyperbolic,
    count_elements_of_order,
    hamiltonian_decomposition,
    in_torsion_list,
    kq8_division,
    paper_rank_table,
    parse_group,
    torsion_candidates,
    unit_rank,
    wedderburn,
    z2_witness,
)
from hypunits.quadfield import make_ring

from oracles import GRID_D, HAND_TABLE, dirichlet_u1_rank, element_order_counts, square_free_range

FLAGGED = {(5, d) for d in range(-2000, 2000) if d != 5} | {(8, -1)}


def test_parse_group():
    assert parse_group("C8").factors == (8,)
    assert parse_group("C2^3").factors == (2, 2, 2)
    assert parse_group("C2xC4").factors == (2, 4)
    assert parse_group("C6 x C6").label == "C6xC6"
    assert parse_group("C2xC3").factors == (6,)
    assert parse_group("Q8").kind is GroupKind.HAMILTONIAN2
    g = parse_group("C2xQ8")
    assert g.rank == 1 and g.order == 16 and str(g) == "E2xQ8"
    assert parse_group("E4xQ8").rank == 2
    assert parse_group("C4⋊C4").name == "C4:C4"
    assert parse_group("S3").order == 6
    for bad in ("", "C1", "Z5", "C4xQ8", "E3xQ8", "Q8xQ8"):
        with pytest.raises(ParseError):
            parse_group(bad)


@pytest.mark.parametrize("factors", [(2,), (8,), (12,), (2, 2), (2, 4), (6, 6), (2, 2, 2), (3, 9), (4, 4, 2)])
def test_element_order_counts(factors):
    oracle = element_order_counts(factors)
    for m, cnt in oracle.items():
        assert count_elements_of_order(m, factors) == cnt
    assert sum(oracle.values()) == GroupDescriptor.abelian(*factors).order


@pytest.mark.parametrize("d", [-7, -3, -1, 2, 5, 7])
@pytest.mark.parametrize("factors", [(2,), (3,), (4,), (5,), (8,), (12,), (2, 2), (6, 6), (2, 4)])
def test_dimension_count(d, factors):
    g = GroupDescriptor.abelian(*factors)
    comps = wedderburn(make_ring(d), g)
    dim_over_q = sum(c.multiplicity * (2 if c.splits else 1) * c.degree_over_k * 2 for c in comps)
    assert dim_over_q == 2 * g.order
    for c in comps:
        assert c.degree == c.r1 + 2 * c.r2
        assert c.unit_rank == c.r1 + c.r2 - 1


def test_wedderburn_examples():
    comps = {c.level: c for c in wedderburn(make_ring(-1), GroupDescriptor.abelian(8))}
    assert sorted(comps) == [1, 2, 4, 8]
    assert comps[4].splits and comps[8].splits and not comps[2].splits
    (c3,) = [c for c in wedderburn(make_ring(-3), GroupDescriptor.abelian(3)) if c.level == 3]
    assert c3.splits and c3.copies == 2
    comps = wedderburn(make_ring(7), GroupDescriptor.abelian(2))
    assert len(comps) == 2 and all((c.r1, c.r2, c.copies) == (2, 0, 1) for c in comps)


@pytest.mark.parametrize("d", [-7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13])
@pytest.mark.parametrize("factors", [(2,), (3,), (4,), (5,), (6,), (8,), (12,), (2, 2), (2, 4), (6, 6)])
def test_rank_matches_sympy_oracle(d, factors):
    rep = unit_rank(make_ring(d), GroupDescriptor.abelian(*factors))
    assert rep.u1_rank == dirichlet_u1_rank(d, factors)
    assert rep.u1_rank == rep.total_rank - rep.base_rank
    assert rep.base_rank == (1 if d > 0 else 0)


def test_rank_examples():
    assert unit_rank(make_ring(-7), GroupDescriptor.abelian(3)).u1_rank == 1
    assert unit_rank(make_ring(-3), GroupDescriptor.abelian(6)).u1_rank == 0
    rep = unit_rank(make_ring(-1), GroupDescriptor.abelian(8))
    assert rep.u1_rank == 2 and rep.notes
    with pytest.raises(PreconditionError):
        unit_rank(make_ring(-7), parse_group("Q8"))


def test_published_table_verbatim():
    assert paper_rank_table(8, -1) == 1
    assert paper_rank_table(5, 5) == 2
    assert paper_rank_table(4, 7) == 2
    assert paper_rank_table(8, -2) == 4
    with pytest.raises(NotInTable):
        paper_rank_table(7, 2)
    with pytest.raises(NotInTable):
        paper_rank_table(6, -1)


# cells where the Dirichlet count departs from the table without being flagged
UNFLAGGED_DISCREPANCIES = {(8, -2): 3}


@pytest.mark.parametrize("d", [-7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13])
def test_table_agreement_outside_flagged(d):
    for n in TABLE_LEVELS:
        try:
            published = paper_rank_table(n, d)
        except NotInTable:
            continue
        rep = unit_rank(make_ring(d), GroupDescriptor.abelian(n))
        if (n, d) in FLAGGED:
            assert rep.u1_rank == (3 if n == 5 else 2)
            assert rep.notes
        elif (n, d) in UNFLAGGED_DISCREPANCIES:
            assert rep.u1_rank == UNFLAGGED_DISCREPANCIES[n, d] != published
            assert rep.notes
        else:
            assert rep.u1_rank == published
            assert not rep.notes


def test_discrepancy_note_whenever_values_differ():
    for d in square_free_range(-40, 40):
        for n in TABLE_LEVELS:
            try:
                published = paper_rank_table(n, d)
            except NotInTable:
                continue
            rep = unit_rank(make_ring(d), GroupDescriptor.abelian(n))
            assert bool(rep.notes) == (rep.u1_rank != published)


def test_c2_units():
    r = make_ring(2)
    cu = c2_unit(r, r.element(2, 1))
    assert (cu.u * cu.inverse).is_one()
    assert cu.u.augmentation == 1
    with pytest.raises(NotAUnit):
        c2_unit(make_ring(-5), make_ring(-5).element(2))
    with pytest.raises(PreconditionError):
        c2_unit(r, r.one)


def test_c2_generator():
    r = make_ring(2)
    gen = c2_unit_generator(r)
    assert gen.n == 2
    assert gen.w.a == r.element(2, 1) and gen.w.b == r.element(-1, -1)
    assert c2_unit_generator(make_ring(-7)).w is None
    r5 = make_ring(5)
    gen = c2_unit_generator(r5)
    assert gen.n == 3
    assert gen.w.a == (3 + r5.sqrt_d) / 2 and gen.w.b == (-1 - r5.sqrt_d) / 2
    assert (gen.w**3).augmentation == 1


def test_kq8_division():
    assert kq8_division(make_ring(-7))
    assert not kq8_division(make_ring(-5))
    assert kq8_division(make_ring(3))
    for d in square_free_range(-100, 100):
        expected = d % 8 == 1 or (d > 0 and (d % 4 in (2, 3) or d % 8 == 5))
        assert kq8_division(make_ring(d)) == expected
    h = hamiltonian_decomposition(make_ring(-7), parse_group("E4xQ8"))
    assert (h.field_copies, h.quaternion_copies, h.quaternion_division) == (16, 4, True)


@pytest.mark.parametrize("d", square_free_range(-30, 30))
def test_z2_witness(d):
    w = z2_witness(make_ring(d), bound=6)
    assert w.commute and w.relation_free


def test_z2_witness_larger_bound():
    assert z2_witness(make_ring(5), bound=100).relation_free


def test_torsion_candidates():
    labels = [c.label for c in torsion_candidates()]
    assert "Hamiltonian 2-group" in labels and "C4:C4" in labels
    assert in_torsion_list(parse_group("Q8"))
    assert in_torsion_list(parse_group("C4:C4"))
    assert not in_torsion_list(parse_group("C7"))
    assert not in_torsion_list(parse_group("C9"))


def test_classify_examples():
    v = classify_hyperbolic(make_ring(-7), parse_group("Q8"))
    assert v.hyperbolic and v.case_citation == "mainresult-5"
    for d in (-7, 2, 5):
        assert not classify_hyperbolic(make_ring(d), parse_group("S3")).hyperbolic
    v = classify_hyperbolic(make_ring(3), parse_group("C2xC2"))
    assert not v.hyperbolic and v.case_citation == "klein"
    assert classify_hyperbolic(make_ring(-7), parse_group("C7")).case_citation == "tjpp"


@pytest.mark.parametrize("name", sorted(HAND_TABLE))
def test_classifier_hand_table(name):
    hyperbolic_ds, pos, neg = HAND_TABLE[name]
    g = parse_group(name)
    for d in GRID_D:
        v = classify_hyperbolic(make_ring(d), g)
        assert v.hyperbolic == (d in hyperbolic_ds), (name, d)
        assert v.case_citation in (pos if v.hyperbolic else neg), (name, d, v.case_citation)
        assert v.case_citation in CITATIONS


def test_verdict_depends_on_sign_and_residue():
    groups = [parse_group(n) for n in HAND_TABLE]
    seen = {}
    for d in square_free_range(-200, 200):
        for g in groups:
            key = (d % 8, d < 0, d == -1, d == -3, g.label)
            v = classify_hyperbolic(make_ring(d), g)
            seen.setdefault(key, set()).add((v.hyperbolic, v.case_citation))
    assert all(len(s) == 1 for s in seen.values())


def test_check_mode_consistency():
    for d in GRID_D:
        for name in HAND_TABLE:
            g = parse_group(name)
            v = classify_hyperbolic(make_ring(d), g, check=True)
            if not g.is_abelian:
                assert v.consistency_note is None
                continue
            rep = unit_rank(make_ring(d), g)
            if v.hyperbolic and (name, d) != ("C8", -1):
                assert rep.u1_rank <= 1
            if (name, d) == ("C8", -1):
                assert v.consistency_note and "disagrees" in v.consistency_note
            plain = classify_hyperbolic(make_ring(d), g)
            assert (plain.hyperbolic, plain.case_citation) == (v.hyperbolic, v.case_citation)
