"""Deterministic colour-system fixtures.

Builders put coloured vertices first (grouped by colour, then by index) and
sample star neighbourhoods with derived seeds, so a (parameters, seed) pair
pins the fixture exactly.  Complete fixtures witness every shade
prescription by cycling the prescription list over the colour class.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from ..errors import ValidationError
from ..rng import bernoulli_matrix, derive_seed
from .systems import ColourParams, ColourSystem, RestrictedColourSystem, assemble


def _prescriptions(params: ColourParams, colour: int, earlier_ids: Sequence[int], colour_of) -> list:
    """All assignments of a shade subset to each earlier coloured vertex."""
    per_vertex = []
    for v in earlier_ids:
        t = params.t[colour_of(v) - 1]
        per_vertex.append(
            [frozenset(s + 1 for s in range(t) if (mask >> s) & 1) for mask in range(1 << t)]
        )
    return list(itertools.product(*per_vertex))


def random_system(
    g: int,
    a: Sequence[int],
    t: Sequence[int],
    n: int,
    p: Fraction,
    seed: int,
    complete: bool = True,
    restricted: bool = False,
) -> ColourSystem:
    """A seeded system with p-random shade neighbourhoods.

    With ``complete=True`` the coloured-coloured edges realize every shade
    prescription (requires a_i at least the prescription count of colour i).
    With ``restricted=True`` the last colour keeps no uncoloured edges and a
    single shade.
    """
    params = ColourParams(g, tuple(a), tuple(t))
    if restricted and (g < 1 or params.t[-1] != 1):
        raise ValidationError("restricted systems need t_g = 1")

    c_total = params.coloured_total
    colour_of_id: list[int] = []
    for i in range(1, g + 1):
        colour_of_id.extend([i] * params.a[i - 1])

    coloured_edges: list[tuple[int, int, int]] = []
    if complete:
        offset = 0
        for i in range(1, g + 1):
            earlier = list(range(offset))
            patterns = _prescriptions(params, i, earlier, lambda v: colour_of_id[v])
            if params.a[i - 1] < len(patterns):
                raise ValidationError(
                    f"colour {i} needs a_{i} >= {len(patterns)} vertices to be complete"
                )
            for k in range(params.a[i - 1]):
                w = offset + k
                pattern = patterns[k % len(patterns)]
                for v, shades in zip(earlier, pattern):
                    for s in shades:
                        coloured_edges.append((v, w, s))
            offset += params.a[i - 1]

    star_sets: dict[tuple[int, int], list[int]] = {}
    u_ids = list(range(c_total, n))
    row = 0
    star_rows = sum(
        params.t[i - 1] * params.a[i - 1] for i in range(1, g + 1 - (1 if restricted else 0))
    )
    bits = bernoulli_matrix(derive_seed(seed, "fixture-stars", 0), max(star_rows, 1), len(u_ids), p)
    vid = 0
    for i in range(1, g + 1):
        for _ in range(params.a[i - 1]):
            if restricted and i == g:
                vid += 1
                continue
            for s in range(1, params.t[i - 1] + 1):
                star_sets[(vid, s)] = [u for k, u in enumerate(u_ids) if bits[row][k]]
                row += 1
            vid += 1

    return assemble(params, n, star_sets, coloured_edges, restricted=restricted)


def random_restricted(
    g: int,
    a: Sequence[int],
    t_head: Sequence[int],
    n: int,
    p: Fraction,
    seed: int,
    complete: bool = True,
) -> RestrictedColourSystem:
    """Restricted fixture with parameters (g, a_1..a_g, t_1..t_{g-1})."""
    rcs = random_system(g, a, tuple(t_head) + (1,), n, p, seed, complete=complete, restricted=True)
    assert isinstance(rcs, RestrictedColourSystem)
    return rcs


def star_fixture(n: int, t1: int, p: Fraction, seed: int) -> ColourSystem:
    """One coloured vertex, t1 shades, p-random neighbourhoods."""
    return random_system(1, (1,), (t1,), n, p, seed)


def triangle_count_restricted(n: int, p: Fraction, seed: int) -> RestrictedColourSystem:
    """The workhorse fixture: one last-colour vertex over n-1 uncoloured."""
    return random_restricted(1, (1,), (), n, p, seed)
