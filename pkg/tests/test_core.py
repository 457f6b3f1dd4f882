"""Block algebra, type arithmetic, feasibility, and the design verifier."""

import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from hsd.core import (
    Design,
    HoleStructure,
    TypeSpec,
    block_forms,
    block_pairs,
    canonical_block,
    expected_block_count,
    is_feasible,
    pair,
    parse_type,
    relabel,
    uniform_type,
    verify_design,
)
from hsd.catalog import catalog_get


# --- blocks -----------------------------------------------------------------

def test_pair_is_order_free():
    assert pair(3, 1) == (1, 3)
    assert pair(1, 3) == (1, 3)
    assert pair("x1", 5) == (5, "x1")  # labels sort after finite points


def test_block_forms_are_the_four_rotations():
    forms = block_forms((1, 2, 3, 4))
    assert forms == ((1, 2, 3, 4), (2, 1, 4, 3), (3, 4, 1, 2), (4, 3, 2, 1))


def test_canonical_block_agrees_across_forms():
    b = (7, 2, 9, 4)
    c = canonical_block(b)
    for f in block_forms(b):
        assert canonical_block(f) == c
    assert canonical_block(c) == c


def test_block_pairs_colors():
    got = block_pairs((1, 2, 3, 4))
    assert got == [
        ((1, 2), 1),
        ((3, 4), 1),
        ((1, 3), 2),
        ((2, 4), 2),
        ((1, 4), 3),
        ((2, 3), 3),
    ]


def test_block_pairs_multiset_invariant_under_equivalence():
    b = (5, "x1", 2, 8)
    want = sorted(map(repr, block_pairs(b)))
    for f in block_forms(b):
        assert sorted(map(repr, block_pairs(f))) == want


points_st = st.lists(
    st.one_of(st.integers(0, 400), st.sampled_from(["x1", "x2", "x3"])),
    min_size=4,
    max_size=4,
    unique=True,
)


@given(points_st)
def test_canonicalization_idempotent_property(pts):
    b = tuple(pts)
    c = canonical_block(b)
    assert canonical_block(c) == c
    assert c in block_forms(b)
    for f in block_forms(b):
        assert canonical_block(f) == c


# --- types ------------------------------------------------------------------

def test_parse_str_roundtrip():
    for text in ["3^8 2^1", "9^4 1^1", "1^12", "4^22 34^1", "15^4 3^1 8^1"]:
        t = parse_type(text)
        assert parse_type(str(t)) == t
        assert str(t) == text


def test_same_size_exponents_merge():
    # a long hole of size 3 is indistinguishable from another short hole
    assert parse_type("3^7 3^1") == parse_type("3^8")
    assert str(parse_type("3^7 3^1")) == "3^8"


def test_uniform_type():
    assert uniform_type(8, 2) == parse_type("3^8 2^1")
    assert uniform_type(8, 3) == parse_type("3^9")
    assert uniform_type(8, 0) == parse_type("3^8")
    assert uniform_type(4, 0, h=9) == parse_type("9^4")


def test_of_and_from_counts():
    assert TypeSpec.of(3, 3, 3, 3) == parse_type("3^4")
    assert TypeSpec.of(3, 3, 1, 3, 3) == parse_type("3^4 1^1")
    assert TypeSpec.from_counts({3: 8, 2: 1}) == parse_type("3^8 2^1")


def test_points_and_hole_count():
    t = parse_type("3^8 2^1")
    assert t.points == 26
    assert t.holes == 9
    assert parse_type("9^4 1^1").points == 37


def test_parse_rejects_garbage():
    for bad in ["", "junk", "3^", "^4", "3^x"]:
        with pytest.raises(ValueError):
            parse_type(bad)


@given(st.dictionaries(st.integers(1, 40), st.integers(1, 9), min_size=1, max_size=5))
def test_parse_str_roundtrip_property(counts):
    t = TypeSpec.from_counts(counts)
    assert parse_type(str(t)) == t


# --- block count identity ---------------------------------------------------

# cross pairs / 2, spot values recomputed by hand from C(P,2) minus hole pairs
EXPECTED_COUNTS = {
    "3^7 1^1": 105,
    "3^8 2^1": 150,
    "3^8 1^1": 138,
    "9^4 1^1": 261,
    "5^5 2^1": 150,
    "3^13 16^1": 663,
    "3^12 4^1": 369,
    "9^7 3^1": 945,
    "3^21 8^1": 1197,
    "4^19 30^1": 2508,
    "1^4": 3,
}


def test_expected_block_count_spot_values():
    for text, n in EXPECTED_COUNTS.items():
        assert expected_block_count(parse_type(text)) == n, text


def test_expected_block_count_rejects_odd_cross():
    # 1^2 has a single cross pair; no integer block count exists
    with pytest.raises(ValueError):
        expected_block_count(parse_type("1^2"))


@given(st.dictionaries(st.integers(1, 20), st.integers(1, 6), min_size=1, max_size=4))
def test_expected_block_count_matches_pair_arithmetic(counts):
    t = TypeSpec.from_counts(counts)
    p = t.points
    cross = p * (p - 1) // 2 - sum(h * (h - 1) // 2 * k for h, k in t.counts().items())
    if cross % 2:
        with pytest.raises(ValueError):
            expected_block_count(t)
    else:
        assert expected_block_count(t) == cross // 2


# --- feasibility ------------------------------------------------------------

def test_feasibility_spot_cells():
    assert is_feasible(8, 2).feasible
    assert is_feasible(4, 0).feasible
    assert is_feasible(5, 0).feasible
    assert is_feasible(13, 16).feasible
    assert not is_feasible(9, 1).feasible
    assert not is_feasible(6, 0).feasible   # n = 2 (mod 4), no u works
    assert not is_feasible(7, 0).feasible   # needs odd u here
    assert not is_feasible(3, 1).feasible   # too few short holes
    assert not is_feasible(4, 5).feasible   # long hole too big


def test_feasibility_failure_names():
    assert is_feasible(9, 1).failed() == ["n(n + 2u - 1) = 0 (mod 4)"]
    assert "n >= 4" in is_feasible(3, 1).failed()
    assert "2u <= 3(n - 1)" in is_feasible(4, 5).failed()
    assert "u >= 0" in is_feasible(8, -1).failed()


def test_feasibility_report_bool():
    assert bool(is_feasible(8, 2))
    assert not bool(is_feasible(9, 1))


def test_n_two_mod_four_always_infeasible():
    for n in (6, 10, 14, 18, 22):
        for u in range(0, 3 * (n - 1) // 2 + 1):
            assert not is_feasible(n, u).feasible, (n, u)


def test_feasible_cells_admit_integer_block_count():
    for n in range(4, 30):
        for u in range(0, 50):
            if is_feasible(n, u).feasible:
                expected_block_count(uniform_type(n, u))  # must not raise


# --- hole structures and the verifier ---------------------------------------

def test_hole_structure_basics():
    st_ = HoleStructure([(0, 1, 2), (3, 4, 5), (6,)])
    assert st_.type() == parse_type("3^2 1^1")
    # hole indices are an internal ordering; only membership is contractual
    assert st_.hole_of(3) == st_.hole_of(4) != st_.hole_of(0)
    assert st_.same_hole(0, 2)
    assert not st_.same_hole(2, 3)
    assert st_.cross_pair_count() == 21 - 6  # C(7,2) minus two hole triples


def test_hole_structure_rejects_duplicate_points():
    with pytest.raises(ValueError):
        HoleStructure([(0, 1), (1, 2)])


def test_verify_accepts_bundled_small_design():
    d = catalog_get("S/1^4").design()
    rep = verify_design(d)
    assert rep.ok and not rep.errors
    assert len(d.blocks) == 3


def test_verify_flags_missing_block():
    d = catalog_get("S/1^4").design()
    rep = verify_design(Design(d.holes, d.blocks[:-1]))
    assert not rep.ok and rep.errors


def test_verify_flags_duplicate_block():
    d = catalog_get("S/1^4").design()
    rep = verify_design(Design(d.holes, list(d.blocks) + [d.blocks[0]]))
    assert not rep.ok


def test_verify_flags_degenerate_block():
    d = catalog_get("A1/3^8 1^1").design()
    a, b, _, c = d.blocks[0]
    rep = verify_design(Design(d.holes, list(d.blocks[:-1]) + [(a, b, a, c)]))
    assert not rep.ok


def test_design_equality_ignores_block_form_and_order():
    d = catalog_get("S/1^4").design()
    shuffled = [block_forms(b)[i % 4] for i, b in enumerate(reversed(d.blocks))]
    assert Design(d.holes, shuffled) == d


def test_relabel_to_integers():
    d = catalog_get("A1/3^8 1^1").design()  # has an x1 label
    r = relabel(d)
    assert r.points == tuple(range(25))
    assert verify_design(r).ok
    assert len(r.blocks) == len(d.blocks)


def test_relabel_with_explicit_mapping_preserves_verification():
    d = catalog_get("S/1^4").design()
    perm = {p: (p * 3 + 1) % 11 for p in d.points}
    r = relabel(d, perm)
    assert verify_design(r).ok


def _random_block_fuzz(seed, cases):
    rng = random.Random(seed)
    for _ in range(cases):
        pts = rng.sample(range(600), 4)
        if rng.random() < 0.2:
            pts[rng.randrange(4)] = "x%d" % rng.randint(1, 3)
        b = tuple(pts)
        c = canonical_block(b)
        assert canonical_block(c) == c
        assert {canonical_block(f) for f in block_forms(b)} == {c}


def test_canonicalization_fuzz_small():
    # the full 10^4-case sweep lives in the acceptance suite
    _random_block_fuzz(7, 500)
