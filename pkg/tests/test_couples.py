import pytest
from hypothesis import given, settings

from ctsat import published as ref
from ctsat.couples import Ccs, ccs_clear, ccs_from_json, constants, cts_to_ccs, enumerate_sets
from ctsat.triplets import Cts, build_cts
from ctsat.triplets import enumerate_sets as cts_sets

from conftest import ct_formulas

P = ref.NAMES.index


def test_table7_structures_and_labels():
    got = [cts_to_ccs(s) for s in ref.cts_system(4)]
    want = ref.ccs_system(7).structures
    assert got == list(want)
    g1, g2 = got
    # G1: d,e = 01 next to e,f = 10 (triplet 010 on d,e,f is absent)
    assert g1.forbidden_bits() == [(3, "01", "10")]
    assert [ref.NAMES[v] for v in g1.permutation[3:6]] == ["d", "e", "f"]
    # G2: f,c = 01 next to c,d = 10
    assert g2.forbidden_bits() == [(5, "01", "10")]
    assert [ref.NAMES[v] for v in g2.permutation[5:8]] == ["f", "c", "d"]


def test_superfluous_set_needs_labels():
    g1 = cts_to_ccs(ref.cts_system(4).structures[0])
    assert "00101011" in enumerate_sets(g1, honor_labels=False)
    assert "00101011" not in enumerate_sets(g1)
    # direct check against the triplets structure
    assert "00101011" not in cts_sets(ref.cts_system(4).structures[0])


def test_forbidden_pairs_are_absent_triplets():
    for s in ref.cts_system(6):
        g = cts_to_ccs(s)
        for j, x, y in g.forbidden:
            assert ((x << 1) | (y & 1)) not in s.tiers[j]


def test_elementary_cts_has_no_labels():
    g = cts_to_ccs(Cts.from_bits(range(5), [["010"], ["101"], ["010"]]))
    assert not g.forbidden
    assert enumerate_sets(g) == {"01010"}


def test_empty_cts_rejected():
    with pytest.raises(ValueError):
        cts_to_ccs(Cts(tuple(range(4)), (frozenset(), frozenset({1}))))


def test_empty_tier_ccs_has_no_sets():
    g = Ccs((0, 1, 2), (frozenset({1}), frozenset()))
    assert enumerate_sets(g) == set()


def test_forbidden_must_reference_present_couples():
    with pytest.raises(ValueError):
        Ccs((0, 1, 2), (frozenset({1}), frozenset({2})), frozenset({(0, 1, 3)}))


def test_json_roundtrip_and_clear():
    g = ref.ccs_system(10).structures[2]
    assert ccs_from_json(g.to_json()) == g
    assert ccs_clear(g) == g


def test_constants():
    g = Ccs.from_bits(range(3), [["10", "11"], ["00", "10"]])
    assert constants(g) == {0: 1, 2: 0}


@settings(max_examples=200, deadline=None)
@given(ct_formulas(max_n=10))
def test_ccs_superset_and_exact_with_labels(ctf):
    cts = build_cts(ctf)
    if cts.empty:
        return
    g = cts_to_ccs(cts)
    exact = cts_sets(cts)
    assert enumerate_sets(g) == exact
    assert enumerate_sets(g, honor_labels=False) >= exact
