"""Colour systems: validation rules, completeness, realization, generality."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from copylab.colour import (
    ColourParams,
    ColourSystem,
    Edge,
    Generality,
    SetFamily,
    assemble,
    classify_generality,
    general_position_check,
    intersection_deviation,
    is_complete,
    neighbourhood_family,
    realize,
    validate,
)
from copylab.colour.fixtures import random_system, star_fixture
from copylab.errors import ValidationError
from copylab.graphs import Graph, sample_gnp
from copylab.rng import derive_seed, generator

HALF = Fraction(1, 2)


def test_validate_uncoloured_edge():
    cs = ColourSystem(
        ColourParams(1, (1,), (1,)),
        (1, None, None),
        (Edge(1, 2, 1, 1),),
    )
    report = validate(cs)
    assert any(v.rule == "edge-uncoloured-endpoints" for v in report)


def test_validate_g0_edge_always_fails():
    cs = ColourSystem(ColourParams(0, (), ()), (None, None), (Edge(0, 1, 1, 1),))
    assert any(v.rule == "edge-uncoloured-endpoints" for v in validate(cs))


def test_validate_star_fixture_clean():
    cs = star_fixture(12, 2, HALF, seed=1)
    assert validate(cs) == []


def test_validate_colour_class_sizes():
    cs = ColourSystem(ColourParams(2, (1, 1), (1, 1)), (1, None), ())
    rules = {v.rule for v in validate(cs)}
    assert "colour-class-size" in rules


def test_validate_edge_colour_rule_and_duplicates():
    params = ColourParams(2, (1, 1), (2, 2))
    cs = ColourSystem(params, (1, 2, None), (Edge(0, 1, 2, 1),))
    assert any(v.rule == "edge-colour-rule" for v in validate(cs))
    dup = ColourSystem(params, (1, 2, None), (Edge(0, 1, 1, 1), Edge(0, 1, 1, 1)))
    assert any(v.rule == "duplicate-edge" for v in validate(dup))
    shade = ColourSystem(params, (1, 2, None), (Edge(0, 2, 1, 3),))
    assert any(v.rule == "shade-range" for v in validate(shade))


def test_json_roundtrip():
    cs = random_system(2, (1, 4), (2, 1), 14, HALF, seed=7)
    assert validate(cs) == []
    back = ColourSystem.from_json(cs.to_json())
    assert back == cs


def test_complete_g0_always():
    cs = ColourSystem(ColourParams(0, (), ()), (None,) * 5, ())
    assert is_complete(cs)


def test_complete_needs_empty_prescription_witness():
    # A single colour-2 vertex adjacent to the colour-1 vertex cannot
    # witness the empty prescription.
    params = ColourParams(2, (1, 1), (1, 1))
    adjacent = ColourSystem(params, (1, 2, None), (Edge(0, 1, 1, 1),))
    assert not is_complete(adjacent)
    params2 = ColourParams(2, (1, 2), (1, 1))
    both = ColourSystem(params2, (1, 2, 2, None), (Edge(0, 1, 1, 1),))
    assert is_complete(both)


def test_complete_fixture_builder():
    cs = random_system(2, (1, 4), (2, 1), 20, HALF, seed=3)
    assert is_complete(cs)
    cs2 = random_system(2, (2, 16), (2, 1), 40, HALF, seed=3)
    assert is_complete(cs2)
    with pytest.raises(ValidationError):
        random_system(2, (1, 3), (2, 1), 20, HALF, seed=3)


def test_realize_g0_is_g0():
    cs = ColourSystem(ColourParams(0, (), ()), (None,) * 6, ())
    G0 = sample_gnp(6, HALF, seed=2)
    assert realize(cs, G0, ()) == G0


def test_realize_star_shades():
    cs = star_fixture(9, 2, HALF, seed=5)
    G0 = sample_gnp(8, HALF, seed=6)
    for shade in (1, 2):
        R = realize(cs, G0, (shade,))
        star = cs.star_masks[(0, shade)]
        assert R.rows[0] == star << 1  # uncoloured ids are 1..8
        assert R.edge_count == G0.edge_count + star.bit_count()


@pytest.mark.parametrize("seed", range(20))
def test_realize_edge_count_identity(seed):
    cs = random_system(2, (1, 4), (2, 1), 16, HALF, seed=seed)
    G0 = sample_gnp(16 - 5, HALF, seed=seed + 100)
    for shades in ((1, 1), (2, 1)):
        R = realize(cs, G0, shades)
        selected = sum(
            1 for e in cs.edges if e.shade == shades[e.colour - 1]
        )
        assert R.edge_count == G0.edge_count + selected


def test_neighbourhood_family_shapes():
    g0 = ColourSystem(ColourParams(0, (), ()), (None,) * 4, ())
    assert neighbourhood_family(g0).m == 0
    star = star_fixture(10, 2, HALF, seed=8)
    assert neighbourhood_family(star).m == 2
    cs = random_system(2, (2, 1), (3, 1), 30, HALF, seed=9, complete=False)
    assert neighbourhood_family(cs).m == 2 * 3 + 1 * 1


def test_general_position_empty_family():
    fam = SetFamily(tuple(range(50)), ())
    assert general_position_check(fam, HALF, 1).passed


def test_general_position_full_set_fails():
    ground = tuple(range(100))
    fam = SetFamily(ground, (frozenset(ground),))
    report = general_position_check(fam, HALF, 1)
    assert not report.passed
    assert report.worst_deviation == 50.0
    assert report.threshold == pytest.approx(10 * math.log(100))
    assert report.worst_I in ((), (1,))


def test_general_position_random_sets_pass():
    passes = 0
    for seed in range(100):
        rng = generator(derive_seed(seed, "gp-fixture", 0))
        sets = tuple(
            frozenset(int(x) for x in rng.integers(0, 2, size=1000).nonzero()[0])
            for _ in range(4)
        )
        fam = SetFamily(tuple(range(1000)), sets)
        if general_position_check(fam, HALF, 1).passed:
            passes += 1
    assert passes >= 95


def test_classify_generality_g0():
    cs = ColourSystem(ColourParams(0, (), ()), (None,) * 8, ())
    assert classify_generality(cs, HALF) is Generality.P_GENERAL


def test_classify_generality_seeded_stars():
    hits = 0
    for seed in range(100):
        cs = star_fixture(1000, 1, HALF, seed=seed)
        if classify_generality(cs, HALF) is Generality.P_GENERAL:
            hits += 1
    assert hits >= 95


def test_deletion_stability():
    # Families passing at (p, K) still pass at (p, 2K) after deleting at
    # most 2^(sum a_i t_i) ground elements.
    stable = 0
    for seed in range(100):
        cs = star_fixture(500, 2, HALF, seed=2000 + seed)
        fam = neighbourhood_family(cs)
        if not general_position_check(fam, HALF, 3).passed:
            continue
        drop = 2 ** cs.params.m
        kept = fam.ground[drop:]
        if general_position_check(fam.restricted_to(kept), HALF, 6).passed:
            stable += 1
    assert stable >= 95


def test_intersection_bound():
    for seed in range(10):
        cs = random_system(2, (1, 2), (2, 1), 120, HALF, seed=seed, complete=False)
        fam = neighbourhood_family(cs)
        K = 2
        if not general_position_check(fam, HALF, K).passed:
            continue
        _, worst = intersection_deviation(fam, HALF)
        R = len(fam.ground)
        assert worst <= 2**fam.m * K * math.sqrt(R) * math.log(R)
