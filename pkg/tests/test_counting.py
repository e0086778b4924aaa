"""Copy tables over colour systems: oracle equivalence and exact means."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copylab.colour import (
    ColourParams,
    ColourSystem,
    Extension,
    count_injective_tuples,
    exact_mu,
    exact_mu_system,
    exact_nu,
    extension_system,
    itershades,
    kappa,
    kappa_table,
    psi_table,
)
from copylab.colour.fixtures import random_restricted, random_system, star_fixture
from copylab.graphs import PatternGraph, count_labelled_copies, sample_gnp
from copylab.tables import TableFunction

from oracles import (
    brute_exact_mu_entry,
    brute_exact_nu_entry,
    brute_kappa_entry,
    brute_psi_entry,
)

HALF = Fraction(1, 2)
K2 = PatternGraph.from_name("K2")
K3 = PatternGraph.from_name("K3")
P3 = PatternGraph.from_name("P3")


def test_injective_tuple_counts():
    assert count_injective_tuples([]) == 1
    assert count_injective_tuples([0b111]) == 3
    assert count_injective_tuples([0b111, 0b111]) == 6
    assert count_injective_tuples([0b11, 0b11, 0b11]) == 0
    assert count_injective_tuples([0b1100, 0b0011]) == 4


@given(st.lists(st.integers(0, 2**10 - 1), min_size=0, max_size=4))
@settings(max_examples=60, deadline=None)
def test_injective_tuple_counts_match_enumeration(masks):
    import itertools

    sets = [[i for i in range(10) if (m >> i) & 1] for m in masks]
    brute = sum(
        1
        for tup in itertools.product(*sets)
        if len(set(tup)) == len(tup)
    )
    assert count_injective_tuples(masks) == brute


def test_psi_g0_is_plain_count():
    cs = ColourSystem(ColourParams(0, (), ()), (None,) * 7, ())
    G0 = sample_gnp(7, HALF, seed=3)
    tab = psi_table(K3, cs, G0)
    assert tab.shape == ()
    assert tab.entries[0] == count_labelled_copies(K3, G0)


def test_psi_star_closed_forms():
    cs = star_fixture(11, 2, HALF, seed=4)
    G0 = sample_gnp(10, HALF, seed=5)
    tab_k2 = psi_table(K2, cs, G0)
    tab_k3 = psi_table(K3, cs, G0)
    for j in (1, 2):
        star = cs.star_masks[(0, j)]
        assert tab_k2[(j,)] == 2 * star.bit_count()
        inside = sum((G0.rows[u] & star).bit_count() for u in range(10) if (star >> u) & 1) // 2
        assert tab_k3[(j,)] == 6 * inside


@pytest.mark.parametrize("seed", range(20))
def test_psi_matches_brute_force(seed):
    cs = random_system(1, (2,), (2,), 9, HALF, seed=seed)
    G0 = sample_gnp(7, HALF, seed=seed + 50)
    tab = psi_table(K3, cs, G0)
    for shades in itershades(cs.params):
        assert tab[shades] == brute_psi_entry(K3, cs, G0, shades)


@pytest.mark.parametrize("seed", range(6))
def test_psi_two_colours_matches_brute_force(seed):
    cs = random_system(2, (1, 4), (1, 1), 11, HALF, seed=seed)
    G0 = sample_gnp(6, HALF, seed=seed + 70)
    for H in (K3, P3):
        tab = psi_table(H, cs, G0)
        for shades in itershades(cs.params):
            assert tab[shades] == brute_psi_entry(H, cs, G0, shades)


def test_psi_entries_bounded():
    cs = random_system(1, (1,), (3,), 10, HALF, seed=6)
    G0 = sample_gnp(9, HALF, seed=7)
    tab = psi_table(K3, cs, G0)
    n = cs.order
    assert all(0 <= e <= n**3 for e in tab.entries)


def test_kappa_k2_g0():
    cs = ColourSystem(ColourParams(0, (), ()), (None,) * 5, ())
    G0 = sample_gnp(5, HALF, seed=8)
    assert kappa(K2, cs, G0, (), 1, 3) == 2


@pytest.mark.parametrize("seed", range(25))
def test_kappa_is_psi_toggle_for_uncoloured_pairs(seed):
    cs = random_system(1, (1,), (2,), 9, HALF, seed=seed)
    G0 = sample_gnp(8, HALF, seed=seed + 30)
    u, v = cs.uncoloured[0], cs.uncoloured[3]
    pu, pv = cs.uncoloured_pos[u], cs.uncoloured_pos[v]
    plus = G0.with_edge(pu, pv)
    minus = G0.without_edge(pu, pv)
    for H in (K3, P3):
        ktab = kappa_table(H, cs, G0, u, v)
        diff = psi_table(H, cs, plus) - psi_table(H, cs, minus)
        assert ktab == diff


@pytest.mark.parametrize("seed", range(10))
def test_kappa_matches_brute_force(seed):
    cs = random_system(1, (2,), (2,), 8, HALF, seed=seed)
    G0 = sample_gnp(6, HALF, seed=seed + 90)
    u = cs.uncoloured[1]
    v = 0  # coloured
    for shades in itershades(cs.params):
        assert kappa(K3, cs, G0, shades, u, v) == brute_kappa_entry(K3, cs, G0, shades, u, v)
        assert kappa(P3, cs, G0, shades, u, v) == brute_kappa_entry(P3, cs, G0, shades, u, v)


def test_kappa_k3_coloured_endpoint_closed_form():
    cs = star_fixture(10, 2, HALF, seed=11)
    G0 = sample_gnp(9, HALF, seed=12)
    u = cs.uncoloured[2]
    pu = cs.uncoloured_pos[u]
    for j in (1, 2):
        star = cs.star_masks[(0, j)]
        expected = 6 * ((star | (1 << pu)) & ~(1 << pu) & G0.rows[pu]).bit_count()
        assert kappa(K3, cs, G0, (j,), u, 0) == expected


# -- exact expectations -----------------------------------------------------


def _tiny_rcs(seed: int, n: int = 6) -> tuple:
    rcs = random_restricted(1, (1,), (), n, HALF, seed=seed)
    u_ids = rcs.uncoloured
    rng_members = [u for i, u in enumerate(u_ids) if (seed >> i) & 1 or i % 2 == 0]
    ext = Extension({0: frozenset(rng_members)})
    return rcs, ext


def test_exact_mu_closed_forms():
    rcs, ext = _tiny_rcs(3, n=9)
    s = len(ext.sets[0])
    mu_k2 = exact_mu(rcs, ext, K2, HALF)
    assert mu_k2.entries[0] == 2 * s
    mu_k3 = exact_mu(rcs, ext, K3, HALF)
    assert mu_k3.entries[0] == Fraction(6 * s * (s - 1) // 2, 2)


@pytest.mark.parametrize("seed", range(4))
def test_exact_mu_equals_exhaustive_mean(seed):
    rcs, ext = _tiny_rcs(seed, n=6)  # |U| = 5: 1024 graphs
    p = Fraction(1, 3)
    for H in (K2, K3, P3):
        mu = exact_mu(rcs, ext, H, p)
        for shades in itershades(rcs.params):
            assert mu[shades] == brute_exact_mu_entry(H, rcs, ext, shades, p)


@pytest.mark.parametrize("seed", range(4))
def test_exact_nu_equals_exhaustive_mean(seed):
    rcs, ext = _tiny_rcs(seed, n=6)
    p = Fraction(1, 3)
    u = rcs.uncoloured[1]
    v = 0
    for H in (K2, K3, P3):
        nu = exact_nu(rcs, ext, H, p, u, v)
        for shades in itershades(rcs.params):
            assert nu[shades] == brute_exact_nu_entry(H, rcs, ext, shades, p, u, v)


@pytest.mark.parametrize("seed", range(6))
def test_exact_nu_is_mu_difference(seed):
    rcs, ext = _tiny_rcs(seed, n=8)
    p = Fraction(2, 5)
    v = 0
    for u in rcs.uncoloured[:3]:
        with_u = Extension({v: ext.sets[v] | {u}})
        without_u = Extension({v: ext.sets[v] - {u}})
        for H in (K3, P3):
            nu = exact_nu(rcs, ext, H, p, u, v)
            diff = exact_mu(rcs, with_u, H, p) - exact_mu(rcs, without_u, H, p)
            assert nu == diff


def test_exact_nu_closed_form_k3():
    rcs, ext = _tiny_rcs(5, n=10)
    u = rcs.uncoloured[0]
    nu = exact_nu(rcs, ext, K3, HALF, u, 0)
    s_minus_u = len(ext.sets[0] - {u})
    assert nu.entries[0] == 6 * HALF * s_minus_u


def test_exact_mu_system_is_extension_average():
    # mu over both sources of randomness = sum over extensions of
    # Pr(extension) * exact_mu; check on a 3-element uncoloured part.
    import itertools

    rcs = random_restricted(1, (1,), (), 4, HALF, seed=9)
    p = Fraction(1, 3)
    u_ids = rcs.uncoloured
    total = TableFunction.constant(rcs.params.shape(), Fraction(0))
    for members in itertools.chain.from_iterable(
        itertools.combinations(u_ids, k) for k in range(len(u_ids) + 1)
    ):
        ext = Extension({0: frozenset(members)})
        weight = p ** len(members) * (1 - p) ** (len(u_ids) - len(members))
        total = total + exact_mu(rcs, ext, K3, p).scale(weight)
    assert exact_mu_system(rcs, K3, p) == total


def test_psi_mu_consistency_monte_carlo():
    # The analytic mean sits inside a loose CI of the sampled psi mean.
    from copylab.colour import extend_restricted

    rcs = random_restricted(1, (1,), (), 60, HALF, seed=21)
    ext, gs = extend_restricted(rcs, HALF, seed=22)
    mu = exact_mu(rcs, ext, K3, HALF)
    trials = 400
    acc = 0
    for t in range(trials):
        G0 = sample_gnp(len(rcs.uncoloured), HALF, seed=10_000 + t)
        acc += psi_table(K3, gs, G0).entries[0]
    sample_mean = acc / trials
    exact = float(mu.entries[0])
    assert abs(sample_mean - exact) < 0.05 * max(exact, 1.0) + 50
