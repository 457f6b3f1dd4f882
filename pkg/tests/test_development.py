"""Starter sets, orbits, development, and the difference census."""

import math
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from hsd.catalog import catalog_get
from hsd.core import parse_type, verify_design
from hsd.development import (
    StarterSet,
    develop,
    difference_census,
    orbit,
    orbit_length,
    shift_block,
)


def _starter(key):
    return catalog_get(key).load()


def test_starter_set_shape():
    ss = _starter("Ex2.1")
    assert ss.modulus == 21 and ss.step == 1
    assert ss.infinite == ("x1",)
    assert ss.n == 7 and ss.u == 1
    assert ss.type == parse_type("3^7 1^1")
    assert len(ss.holes()) == 8


def test_same_hole_differences():
    ss = _starter("Ex2.1")
    # holes are {i, i+7, i+14} mod 21, so the interior differences are 7 and 14
    assert ss.same_hole_differences() == {7, 14}


def test_shift_block_fixes_labels():
    assert shift_block((0, 1, "x1", 5), 4, 21) == (4, 5, "x1", 9)
    assert shift_block((20, 0, 1, 2), 1, 21) == (0, 1, 2, 3)


def test_full_orbit():
    blks = orbit((0, 1, 3, 7), 24, 1)
    assert len(blks) == 24
    assert len(set(blks)) == 24


def test_short_orbits_in_bundled_starters():
    ss = _starter("A1/3^8 1^1")
    assert ss.modulus == 24 and ss.step == 4
    census = Counter(orbit_length(s, ss.modulus, ss.step) for s in ss.starters)
    assert census == {3: 6, 6: 20}
    short = next(s for s in ss.starters if orbit_length(s, ss.modulus, ss.step) == 3)
    blks = orbit(short, ss.modulus, ss.step)
    assert len(blks) == 3 == len(set(blks))


def test_orbit_length_divides_orbit_bound():
    rng = random.Random(11)
    for _ in range(300):
        g = 4 * rng.randint(2, 50)
        step = rng.choice([k for k in range(1, g + 1) if g % k == 0])
        b = tuple(rng.sample(range(g), 4))
        length = orbit_length(b, g, step)
        assert (g // step) % length == 0
        assert len(set(orbit(b, g, step))) == length


def test_develop_worked_example():
    ss = _starter("Ex2.1")
    d = develop(ss)
    assert len(d.blocks) == 105
    assert d.type == parse_type("3^7 1^1")
    assert verify_design(d).ok


def test_develop_counts_short_orbits_once():
    ss = _starter("Ex2.2")
    census = Counter(orbit_length(s, ss.modulus, ss.step) for s in ss.starters)
    assert census == {6: 3, 12: 11}
    d = develop(ss)
    assert len(d.blocks) == 3 * 6 + 11 * 12 == 150


def test_starter_set_validation():
    with pytest.raises(ValueError):
        StarterSet(modulus=12, hole_size=3, step=5, infinite=(), starters=((0, 1, 2, 3),))
    with pytest.raises(ValueError):  # x2 is not declared
        StarterSet(modulus=21, hole_size=3, step=1, infinite=("x1",), starters=((0, 1, 2, "x2"),))
    with pytest.raises(ValueError):  # 30 is outside Z_21
        StarterSet(modulus=21, hole_size=3, step=1, infinite=(), starters=((0, 1, 2, 30),))


def test_census_passes_on_step_one_starters():
    for key in ["Ex2.1", "A2/3^9 2^1", "A10/3^13 14^1"]:
        ss = _starter(key)
        assert ss.step == 1
        rep = difference_census(ss)
        assert rep.ok, (key, rep.errors)


def test_census_refuses_larger_steps():
    with pytest.raises(ValueError):
        difference_census(_starter("A1/3^8 1^1"))


def test_census_matches_develop_verdict_on_mutations():
    # the two certificates must agree: break one starter entry and both
    # the census and the developed design have to go red together
    base = _starter("Ex2.1")
    rng = random.Random(3)
    for _ in range(12):
        starters = [list(s) for s in base.starters]
        i = rng.randrange(len(starters))
        j = rng.randrange(4)
        old = starters[i][j]
        new = rng.randrange(base.modulus)
        if new == old or new in starters[i]:
            continue
        starters[i][j] = new
        ss = StarterSet(
            modulus=base.modulus,
            hole_size=base.hole_size,
            step=base.step,
            infinite=base.infinite,
            starters=tuple(tuple(s) for s in starters),
        )
        census_ok = difference_census(ss).ok
        dev_ok = verify_design(develop(ss)).ok
        assert census_ok == dev_ok


@given(st.integers(1, 30), st.integers(0, 200))
def test_orbit_closes_property(mult, start):
    g = 4 * mult
    b = (start % g, (start + 1) % g, (start + 2) % g, "x1")
    blks = orbit(b, g, 1)
    # shifting by the full modulus returns to the start
    assert shift_block(b, g, g) == tuple(p if p == "x1" else p % g for p in b)
    assert len(blks) == orbit_length(b, g, 1)
