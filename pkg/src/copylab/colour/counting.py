"""Shade-indexed copy counts over colour systems, exact and expected.

Counting a pattern H in a realized colour system stratifies by where the
copy touches the coloured vertices: enumerate the subset W of H-vertices
mapped onto coloured vertices (the image has to hit every colour class),
check the H[W] edges against the selected shades, and extend the remaining
H-vertices injectively into the uncoloured part with bitset backtracking.

The same stratification computes expectations over a random uncoloured
graph in closed form: edges inside the uncoloured part each contribute a
factor p, and the injective placement count for the remaining vertices is a
partition-lattice inclusion-exclusion over intersection sizes.  This turns
the mean tables (and their edge-increment versions) into exact rational
values rather than sampled ones.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence

from ..errors import ValidationError
from ..graphs import Graph, PatternGraph
from ..tables import TableFunction
from .systems import ColourSystem, Extension, RestrictedColourSystem, check_shades, itershades

Pin = tuple[str, int]  # ("c", coloured id) or ("u", uncoloured position)


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All partitions of a small sequence into nonempty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]
        yield [[head]] + part


def count_injective_tuples(masks: Sequence[int]) -> int:
    """Number of tuples of pairwise-distinct elements, one from each bitset.

    Inclusion-exclusion over the partition lattice: collapsing a block of
    coordinates to a common value contributes the intersection size with
    sign (-1)^(|B|-1) (|B|-1)!.
    """
    if not masks:
        return 1
    total = 0
    for part in set_partitions(range(len(masks))):
        term = 1
        for block in part:
            inter = masks[block[0]]
            for i in block[1:]:
                inter &= masks[i]
            term *= (-1) ** (len(block) - 1) * factorial(len(block) - 1) * inter.bit_count()
        total += term
    return total


class RealizedView:
    """Selected-shade adjacency of a colour system (stars and coloured pairs)."""

    def __init__(self, cs: ColourSystem, shades: Sequence[int]):
        self.cs = cs
        self.shades = check_shades(cs.params, shades)
        self.star: dict[int, int] = {}
        for c in cs.coloured:
            colour = cs.colours[c]
            assert colour is not None
            self.star[c] = cs.star_masks[(c, self.shades[colour - 1])]
        self.c_adj: set[tuple[int, int]] = set()
        for pair, shade_set in cs.coloured_shades.items():
            colour = min(cs.tag(pair[0]), cs.tag(pair[1]))
            if (colour, self.shades[colour - 1]) in shade_set:
                self.c_adj.add(pair)


class ClassMeetingCounter:
    """Counts labelled H-copies that touch every colour class, for one shade
    selection, against varying stars / uncoloured graphs.

    The coloured-assignment skeleton (which H-vertices map to which coloured
    vertices) is precompiled, so Monte Carlo loops that only vary the stars
    or the uncoloured graph reuse it.
    """

    def __init__(
        self,
        H: PatternGraph,
        cs: ColourSystem,
        shades: Sequence[int],
        extra_cc: Iterable[tuple[int, int]] = (),
    ):
        self.H = H
        self.cs = cs
        self.view = RealizedView(cs, shades)
        self.n_unc = len(cs.uncoloured)
        c_adj = set(self.view.c_adj)
        for a, b in extra_cc:
            c_adj.add((min(a, b), max(a, b)))

        adj = H.adjacency()
        classes = cs.classes
        coloured = cs.coloured
        h = H.h

        # Pre-enumerate every admissible map from a subset W of H-vertices
        # onto coloured vertices: injective, class-covering, H[W]-edges
        # realized under the selected shades.
        self.assignments: list[dict[int, int]] = []
        for size in range(0, min(h, len(coloured)) + 1):
            for W in itertools.combinations(range(h), size):
                wset = set(W)
                for images in itertools.permutations(coloured, size):
                    phi = dict(zip(W, images))
                    img = set(images)
                    if any(not img & set(cls) for cls in classes):
                        continue
                    ok = True
                    for x, y in H.edges:
                        if x in wset and y in wset:
                            pair = (min(phi[x], phi[y]), max(phi[x], phi[y]))
                            if pair not in c_adj:
                                ok = False
                                break
                    if ok:
                        self.assignments.append(phi)
        self._adj = adj

    # -- exact counting against a concrete uncoloured graph ---------------

    def count(
        self,
        rows: Sequence[int],
        star: dict[int, int] | None = None,
        pins: dict[int, Pin] | None = None,
        extra_cu: Iterable[tuple[int, int]] = (),
    ) -> int:
        """Total copies meeting every class, given uncoloured bit-rows.

        `star` overrides the view's star masks (Monte Carlo extensions);
        `pins` fixes H-vertices to coloured ids or uncoloured positions;
        `extra_cu` marks (coloured id, uncoloured position) pairs whose edge
        is forced present.
        """
        star = self.view.star if star is None else star
        pins = pins or {}
        extra: dict[int, int] = {}
        for c, pos in extra_cu:
            extra[c] = extra.get(c, 0) | (1 << pos)
        full = (1 << self.n_unc) - 1
        adj = self._adj

        pinned_c = {x: val for x, (kind, val) in pins.items() if kind == "c"}
        pinned_u = {x: val for x, (kind, val) in pins.items() if kind == "u"}
        if len(set(pinned_u.values())) != len(pinned_u):
            return 0

        total = 0
        for phi in self.assignments:
            if any(x not in phi or phi[x] != c for x, c in pinned_c.items()):
                continue
            if any(x in phi for x in pinned_u):
                continue
            eff = {c: star[c] | extra.get(c, 0) for c in phi.values()}

            ok = True
            used0 = 0
            for x, pos in pinned_u.items():
                used0 |= 1 << pos
                for y in adj[x]:
                    if y in phi and not (eff[phi[y]] >> pos) & 1:
                        ok = False
                        break
                    if y in pinned_u and y > x and not (rows[pos] >> pinned_u[y]) & 1:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue

            free = [x for x in range(self.H.h) if x not in phi and x not in pinned_u]
            base_mask: dict[int, int] = {}
            for y in free:
                mask = full
                for x in adj[y]:
                    if x in phi:
                        mask &= eff[phi[x]]
                    elif x in pinned_u:
                        mask &= rows[pinned_u[x]]
                base_mask[y] = mask
            order = sorted(free, key=lambda y: (base_mask[y].bit_count(), y))
            total += self._extend(order, base_mask, rows, used0)
        return total

    def _extend(
        self, order: list[int], base_mask: dict[int, int], rows: Sequence[int], used0: int
    ) -> int:
        adj = self._adj
        if not order:
            return 1
        placed: dict[int, int] = {}

        def rec(depth: int, used: int) -> int:
            y = order[depth]
            cand = base_mask[y] & ~used
            for x in adj[y]:
                if x in placed:
                    cand &= rows[placed[x]]
            if depth == len(order) - 1:
                return cand.bit_count()
            out = 0
            while cand:
                b = cand & -cand
                placed[y] = b.bit_length() - 1
                out += rec(depth + 1, used | b)
                cand ^= b
            placed.pop(y, None)
            return out

        return rec(0, used0)

    # -- exact expectation over a random uncoloured graph ------------------

    def expectation(
        self,
        p: Fraction,
        star: dict[int, int] | None = None,
        pins: dict[int, Pin] | None = None,
        extra_cu: Iterable[tuple[int, int]] = (),
        random_colours: frozenset[int] = frozenset(),
    ) -> Fraction:
        """E over G0 ~ G(U, p) of the class-meeting copy count.

        Every H-edge landing inside the uncoloured part contributes a factor
        p; edges into coloured vertices whose colour is in `random_colours`
        are also priced at p (their stars are independent p-subsets rather
        than fixed sets).  Placements of the unpinned uncoloured H-vertices
        are counted by :func:`count_injective_tuples`.
        """
        star = self.view.star if star is None else star
        pins = pins or {}
        extra: dict[int, int] = {}
        for c, pos in extra_cu:
            extra[c] = extra.get(c, 0) | (1 << pos)
        full = (1 << self.n_unc) - 1
        adj = self._adj
        colours = self.cs.colours

        pinned_c = {x: val for x, (kind, val) in pins.items() if kind == "c"}
        pinned_u = {x: val for x, (kind, val) in pins.items() if kind == "u"}
        if len(set(pinned_u.values())) != len(pinned_u):
            return Fraction(0)
        pinned_bits = 0
        for pos in pinned_u.values():
            pinned_bits |= 1 << pos

        total = Fraction(0)
        for phi in self.assignments:
            if any(x not in phi or phi[x] != c for x, c in pinned_c.items()):
                continue
            if any(x in phi for x in pinned_u):
                continue
            eff = {c: star[c] | extra.get(c, 0) for c in phi.values()}

            p_edges = 0
            ok = True
            for x, pos in pinned_u.items():
                for y in adj[x]:
                    if y in phi:
                        c = phi[y]
                        if colours[c] in random_colours and not (extra.get(c, 0) >> pos) & 1:
                            p_edges += 1
                        elif not (eff[c] >> pos) & 1:
                            ok = False
                            break
                    elif y in pinned_u and y > x:
                        p_edges += 1
                if not ok:
                    break
            if not ok:
                continue

            free = [x for x in range(self.H.h) if x not in phi and x not in pinned_u]
            masks = []
            for y in free:
                mask = full & ~pinned_bits
                for x in adj[y]:
                    if x in phi:
                        c = phi[x]
                        if colours[c] in random_colours:
                            p_edges += 1
                        else:
                            mask &= eff[c]
                    elif x in pinned_u:
                        p_edges += 1
                    elif x in free and x > y:
                        p_edges += 1
                masks.append(mask)
            total += p**p_edges * count_injective_tuples(masks)
        return total


# ---------------------------------------------------------------------------
# Public table operations
# ---------------------------------------------------------------------------


def graph_rows_by_position(cs: ColourSystem, G0: Graph) -> list[int]:
    if G0.n != len(cs.uncoloured):
        raise ValidationError(
            f"G0 has {G0.n} vertices but the system has {len(cs.uncoloured)} uncoloured"
        )
    return list(G0.rows)


def psi_table(H: PatternGraph, cs: ColourSystem, G0: Graph) -> TableFunction:
    """Entry (j_1..j_g): labelled H-copies in the realized graph that use at
    least one vertex of every colour."""
    rows = graph_rows_by_position(cs, G0)
    n = cs.order
    if n**H.h >= 2**63:
        from ..errors import CapacityError

        raise CapacityError(f"n^h = {n}^{H.h} exceeds the counting budget")
    entries = []
    for shades in itershades(cs.params):
        counter = ClassMeetingCounter(H, cs, shades)
        entries.append(counter.count(rows))
    return TableFunction(cs.params.shape(), tuple(entries))


def _pin_for(cs: ColourSystem, vertex: int) -> Pin:
    if cs.colours[vertex] is None:
        return ("u", cs.uncoloured_pos[vertex])
    return ("c", vertex)


def kappa(
    H: PatternGraph,
    cs: ColourSystem,
    G0: Graph,
    shades: Sequence[int],
    u: int,
    v: int,
) -> int:
    """Labelled H-copies in the realized graph plus the edge uv whose image
    contains uv and touches every colour class."""
    if u == v:
        raise ValidationError("u and v must differ")
    rows = graph_rows_by_position(cs, G0)
    pin_u, pin_v = _pin_for(cs, u), _pin_for(cs, v)

    extra_cu: list[tuple[int, int]] = []
    extra_cc: list[tuple[int, int]] = []
    if pin_u[0] == "u" and pin_v[0] == "u":
        rows[pin_u[1]] |= 1 << pin_v[1]
        rows[pin_v[1]] |= 1 << pin_u[1]
    elif pin_u[0] == "c" and pin_v[0] == "c":
        extra_cc.append((u, v))
    else:
        (cid, upos) = (pin_u[1], pin_v[1]) if pin_u[0] == "c" else (pin_v[1], pin_u[1])
        extra_cu.append((cid, upos))

    counter = ClassMeetingCounter(H, cs, shades, extra_cc=extra_cc)
    total = 0
    for x, y in H.edges:
        total += counter.count(rows, pins={x: pin_u, y: pin_v}, extra_cu=extra_cu)
        total += counter.count(rows, pins={x: pin_v, y: pin_u}, extra_cu=extra_cu)
    return total


def kappa_table(
    H: PatternGraph, cs: ColourSystem, G0: Graph, u: int, v: int
) -> TableFunction:
    entries = tuple(kappa(H, cs, G0, shades, u, v) for shades in itershades(cs.params))
    return TableFunction(cs.params.shape(), entries)


# ---------------------------------------------------------------------------
# Exact expectations (means of psi / kappa over the random uncoloured graph)
# ---------------------------------------------------------------------------

EXPECTATION_BUDGET = 10**8


def _extension_stars(rcs: RestrictedColourSystem, ext: Extension) -> dict[int, int]:
    g = rcs.params.g
    stars: dict[int, int] = {}
    pos = rcs.uncoloured_pos
    for c in rcs.coloured:
        if rcs.colours[c] == g:
            stars[c] = ext.mask(c, pos)
    return stars


def _check_expectation_budget(H: PatternGraph, cs: ColourSystem) -> None:
    from ..errors import CapacityError

    n = cs.order
    if n**H.h >= 2**63:
        raise CapacityError(f"n^h = {n}^{H.h} exceeds the counting budget")
    k = max(H.h - cs.params.g - 1, 0)
    if len(cs.uncoloured) ** k > EXPECTATION_BUDGET:
        raise CapacityError(
            f"|U|^{k} placement terms exceed the {EXPECTATION_BUDGET:.0e} budget"
        )


def exact_mu(
    rcs: RestrictedColourSystem,
    extension: Extension,
    H: PatternGraph,
    p: Fraction,
) -> TableFunction:
    """Exact mean table of psi over the random uncoloured graph, for a fixed
    extension: entry (j..) = E_G0 [psi_H(extended system, G0, j..)]."""
    _check_expectation_budget(H, rcs)
    ext_stars = _extension_stars(rcs, extension)
    entries = []
    for shades in itershades(rcs.params):
        counter = ClassMeetingCounter(H, rcs, shades)
        star = dict(counter.view.star)
        star.update(ext_stars)
        entries.append(counter.expectation(Fraction(p), star=star))
    return TableFunction(rcs.params.shape(), tuple(entries))


def exact_nu(
    rcs: RestrictedColourSystem,
    extension: Extension,
    H: PatternGraph,
    p: Fraction,
    u: int,
    v: int,
) -> TableFunction:
    """Exact mean table of kappa at the pair (u, v): the expected number of
    copies through the edge uv (u uncoloured, v of the last colour)."""
    if rcs.colours[u] is not None:
        raise ValidationError(f"u = {u} must be uncoloured")
    if rcs.colours[v] != rcs.params.g:
        raise ValidationError(f"v = {v} must have the last colour")
    _check_expectation_budget(H, rcs)
    ext_stars = _extension_stars(rcs, extension)
    upos = rcs.uncoloured_pos[u]
    entries = []
    for shades in itershades(rcs.params):
        counter = ClassMeetingCounter(H, rcs, shades)
        star = dict(counter.view.star)
        star.update(ext_stars)
        total = Fraction(0)
        for x, y in H.edges:
            for a, b in ((x, y), (y, x)):
                total += counter.expectation(
                    Fraction(p),
                    star=star,
                    pins={a: ("u", upos), b: ("c", v)},
                    extra_cu=[(v, upos)],
                )
        entries.append(total)
    return TableFunction(rcs.params.shape(), tuple(entries))


def exact_mu_system(
    rcs: RestrictedColourSystem, H: PatternGraph, p: Fraction
) -> TableFunction:
    """Exact mean table of psi when both the uncoloured graph and the
    last-colour neighbourhoods are random (each priced at p)."""
    _check_expectation_budget(H, rcs)
    g = rcs.params.g
    empty_ext = {c: 0 for c in rcs.coloured if rcs.colours[c] == g}
    entries = []
    for shades in itershades(rcs.params):
        counter = ClassMeetingCounter(H, rcs, shades)
        star = dict(counter.view.star)
        star.update(empty_ext)
        entries.append(
            counter.expectation(Fraction(p), star=star, random_colours=frozenset({g}))
        )
    return TableFunction(rcs.params.shape(), tuple(entries))
