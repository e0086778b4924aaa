"""Coloured, shaded multigraph systems.

A colour system tracks, for each of g rounds, a set of special vertices
(colour i has a_i of them) and t_i parallel "shades" of the edges at those
vertices; the shades encode alternative neighbourhood choices.  Choosing one
shade per colour and a graph on the uncoloured vertices realizes an ordinary
simple graph.

Construction is permissive: structural rules are checked by
:func:`validate`, which reports violations as data rather than raising, so
that deliberately broken systems can be built and inspected in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, NamedTuple, Sequence

from ..errors import ValidationError
from ..graphs import Graph

#: ordering tag for uncoloured vertices; larger than any admissible colour,
#: so an edge's colour is always the min of its endpoint tags.
UNCOLOURED_TAG = 10**9


class Edge(NamedTuple):
    u: int
    v: int
    colour: int
    shade: int

    def normalised(self) -> "Edge":
        if self.u <= self.v:
            return self
        return Edge(self.v, self.u, self.colour, self.shade)

    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class ColourParams:
    """The parameter vector (g, a_1..a_g, t_1..t_g)."""

    g: int
    a: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValidationError("g must be >= 0")
        if len(self.a) != self.g or len(self.t) != self.g:
            raise ValidationError("a and t must both have length g")
        if any(x < 1 for x in self.a) or any(x < 1 for x in self.t):
            raise ValidationError("all a_i and t_i must be >= 1")

    @property
    def T(self) -> int:
        out = 1
        for t in self.t:
            out *= t
        return out

    @property
    def coloured_total(self) -> int:
        return sum(self.a)

    @property
    def m(self) -> int:
        """Number of (coloured vertex, shade) neighbourhoods: sum a_i t_i."""
        return sum(ai * ti for ai, ti in zip(self.a, self.t))

    def shape(self) -> tuple[int, ...]:
        return self.t


@dataclass(frozen=True)
class Violation:
    """One broken construction rule, pointing at the offending item."""

    rule: str
    detail: str


@dataclass(frozen=True)
class ColourSystem:
    """A colour system: per-vertex colour tags plus (colour, shade) edges."""

    params: ColourParams
    colours: tuple[int | None, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        n = len(self.colours)
        for e in self.edges:
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValidationError(f"edge {e} outside vertex range")
        object.__setattr__(
            self, "edges", tuple(sorted(e.normalised() for e in self.edges))
        )

    # -- basic views --------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.colours)

    def tag(self, v: int) -> int:
        c = self.colours[v]
        return UNCOLOURED_TAG if c is None else c

    @cached_property
    def uncoloured(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.colours) if c is None)

    @cached_property
    def uncoloured_pos(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.uncoloured)}

    @cached_property
    def coloured(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.colours) if c is not None)

    def vertices_of_colour(self, i: int) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.colours) if c == i)

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Vertex ids per colour, index 0 holding colour 1."""
        out: list[list[int]] = [[] for _ in range(self.params.g)]
        for v, c in enumerate(self.colours):
            if c is not None and 1 <= c <= self.params.g:
                out[c - 1].append(v)
        return tuple(tuple(cls) for cls in out)

    # -- cached adjacency ---------------------------------------------------

    @cached_property
    def star_masks(self) -> dict[tuple[int, int], int]:
        """(coloured vertex, shade) -> bitmask of uncoloured positions."""
        masks: dict[tuple[int, int], int] = {}
        for c in self.coloured:
            colour = self.colours[c]
            assert colour is not None
            for s in range(1, self.params.t[colour - 1] + 1):
                masks[(c, s)] = 0
        pos = self.uncoloured_pos
        for e in self.edges:
            cu, cv = self.colours[e.u], self.colours[e.v]
            if cu is None and cv is not None:
                key = (e.v, e.shade)
                if key in masks:
                    masks[key] |= 1 << pos[e.u]
            elif cv is None and cu is not None:
                key = (e.u, e.shade)
                if key in masks:
                    masks[key] |= 1 << pos[e.v]
        return masks

    @cached_property
    def coloured_shades(self) -> dict[tuple[int, int], frozenset[tuple[int, int]]]:
        """(u, v) with u < v both coloured -> set of (colour, shade) edges."""
        out: dict[tuple[int, int], set[tuple[int, int]]] = {}
        for e in self.edges:
            if self.colours[e.u] is not None and self.colours[e.v] is not None:
                out.setdefault(e.pair(), set()).add((e.colour, e.shade))
        return {k: frozenset(v) for k, v in out.items()}

    def shade_set(self, u: int, v: int, colour: int) -> frozenset[int]:
        """Shades of the given colour present between two vertices."""
        if u > v:
            u, v = v, u
        return frozenset(e.shade for e in self.edges if e.pair() == (u, v) and e.colour == colour)

    def adjacency_fingerprint(self, w: int) -> tuple[tuple[int, frozenset[int]], ...]:
        """For an uncoloured vertex: shades joining it to every coloured vertex."""
        fp = []
        for c in self.coloured:
            colour = self.colours[c]
            assert colour is not None
            shades = frozenset(
                s for s in range(1, self.params.t[colour - 1] + 1)
                if (self.star_masks[(c, s)] >> self.uncoloured_pos[w]) & 1
            )
            fp.append((c, shades))
        return tuple(fp)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        return {
            "g": self.params.g,
            "a": list(self.params.a),
            "t": list(self.params.t),
            "vertices": [{"id": v, "colour": c} for v, c in enumerate(self.colours)],
            "edges": [
                {"u": e.u, "v": e.v, "colour": e.colour, "shade": e.shade} for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ColourSystem":
        params = ColourParams(obj["g"], tuple(obj["a"]), tuple(obj["t"]))
        verts = sorted(obj["vertices"], key=lambda r: r["id"])
        if [r["id"] for r in verts] != list(range(len(verts))):
            raise ValidationError("vertex ids must be 0..n-1")
        colours = tuple(r["colour"] for r in verts)
        edges = tuple(Edge(r["u"], r["v"], r["colour"], r["shade"]) for r in obj["edges"])
        return cls(params, colours, edges)


class RestrictedColourSystem(ColourSystem):
    """A colour system with a single shade of the last colour and no
    last-colour edges into the uncoloured part (those get added later as
    random neighbourhoods)."""


@dataclass(frozen=True)
class Extension:
    """One neighbourhood set per last-colour vertex, inside the uncoloured part."""

    sets: dict[int, frozenset[int]]

    def mask(self, v: int, pos: dict[int, int]) -> int:
        out = 0
        for w in self.sets[v]:
            out |= 1 << pos[w]
        return out


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(cs: ColourSystem) -> list[Violation]:
    """Check every construction rule; an empty report means the system is
    well-formed.  Violations are returned, never raised."""
    out: list[Violation] = []
    params = cs.params

    for i in range(1, params.g + 1):
        have = len(cs.vertices_of_colour(i))
        if have != params.a[i - 1]:
            out.append(
                Violation("colour-class-size", f"colour {i} has {have} vertices, expected {params.a[i-1]}")
            )
    for v, c in enumerate(cs.colours):
        if c is not None and not 1 <= c <= params.g:
            out.append(Violation("colour-range", f"vertex {v} has colour {c} outside 1..{params.g}"))

    seen: set[tuple[int, int, int, int]] = set()
    for e in cs.edges:
        if e.u == e.v:
            out.append(Violation("self-loop", f"edge {e} is a loop"))
            continue
        cu, cv = cs.colours[e.u], cs.colours[e.v]
        if cu is None and cv is None:
            out.append(Violation("edge-uncoloured-endpoints", f"edge {e} incident to no coloured vertex"))
            continue
        expected = min(cs.tag(e.u), cs.tag(e.v))
        if e.colour != expected:
            out.append(
                Violation("edge-colour-rule", f"edge {e} should have colour {expected}")
            )
            continue
        t_range = params.t[e.colour - 1] if 1 <= e.colour <= params.g else 0
        if not 1 <= e.shade <= t_range:
            out.append(Violation("shade-range", f"edge {e} shade outside 1..{t_range}"))
        key = (e.u, e.v, e.colour, e.shade)
        if key in seen:
            out.append(Violation("duplicate-edge", f"parallel edge {e} repeats (pair, colour, shade)"))
        seen.add(key)

    if isinstance(cs, RestrictedColourSystem) and params.g >= 1:
        if params.t[-1] != 1:
            out.append(Violation("restricted-shades", "last colour must have a single shade"))
        g = params.g
        for e in cs.edges:
            if e.colour == g:
                if (cs.colours[e.u] is None) != (cs.colours[e.v] is None):
                    out.append(
                        Violation(
                            "restricted-last-colour",
                            f"edge {e} joins a coloured and an uncoloured vertex in colour {g}",
                        )
                    )
    return out


def ensure_valid(cs: ColourSystem) -> None:
    report = validate(cs)
    if report:
        raise ValidationError("; ".join(f"{v.rule}: {v.detail}" for v in report[:5]))


# ---------------------------------------------------------------------------
# Completeness
# ---------------------------------------------------------------------------

COMPLETENESS_BUDGET = 1 << 20


def prescription_count(params: ColourParams, upto_colour: int) -> int:
    """Number of shade prescriptions over the vertices of colours < upto_colour."""
    total = 1
    for j in range(1, upto_colour):
        total *= (2 ** params.t[j - 1]) ** params.a[j - 1]
    return total


def is_complete(cs: ColourSystem) -> bool:
    """Whether every shade prescription to earlier colours is witnessed.

    For each colour i, every assignment of a shade subset to each vertex of
    each smaller colour must be realized exactly by some colour-i vertex.
    Checked by comparing the witnessed adjacency fingerprints against the
    full prescription space, colour by colour.
    """
    from ..errors import CapacityError

    params = cs.params
    for i in range(1, params.g + 1):
        total = prescription_count(params, i)
        if total > COMPLETENESS_BUDGET:
            raise CapacityError(
                f"colour {i} has {total} prescriptions (> {COMPLETENESS_BUDGET})"
            )
        earlier = [v for v in cs.coloured if cs.colours[v] < i]
        witnessed = set()
        for w in cs.vertices_of_colour(i):
            fp = tuple(cs.shade_set(w, v, cs.colours[v]) for v in earlier)
            witnessed.add(fp)
        if len(witnessed) != total:
            return False
    return True


# ---------------------------------------------------------------------------
# Realization
# ---------------------------------------------------------------------------


def check_shades(params: ColourParams, shades: Sequence[int]) -> tuple[int, ...]:
    if len(shades) != params.g:
        raise ValidationError(f"need {params.g} shades, got {len(shades)}")
    for j, t in zip(shades, params.t):
        if not 1 <= j <= t:
            raise ValidationError(f"shade {j} outside 1..{t}")
    return tuple(shades)


def realize(cs: ColourSystem, G0: Graph, shades: Sequence[int]) -> Graph:
    """The simple graph on all vertices of the system: G0 on the uncoloured
    part plus, for each colour i, the colour-i edges of the selected shade."""
    shades = check_shades(cs.params, shades)
    if G0.n != len(cs.uncoloured):
        raise ValidationError(
            f"G0 has {G0.n} vertices but the system has {len(cs.uncoloured)} uncoloured"
        )
    u_ids = cs.uncoloured
    pairs = set()
    for a, b in G0.edges():
        pairs.add((min(u_ids[a], u_ids[b]), max(u_ids[a], u_ids[b])))
    for e in cs.edges:
        if 1 <= e.colour <= cs.params.g and e.shade == shades[e.colour - 1]:
            pairs.add(e.pair())
    return Graph.from_edges(cs.order, sorted(pairs))


# ---------------------------------------------------------------------------
# Assembly helpers
# ---------------------------------------------------------------------------


def assemble(
    params: ColourParams,
    n: int,
    star_sets: dict[tuple[int, int], Iterable[int]] | None = None,
    coloured_edges: Iterable[tuple[int, int, int]] = (),
    restricted: bool = False,
) -> ColourSystem:
    """Build a system with coloured vertices first (grouped by colour).

    `star_sets` maps (coloured vertex id, shade) to uncoloured neighbour ids;
    `coloured_edges` lists (u, v, shade) pairs between coloured vertices (the
    edge colour is implied by the endpoint tags).
    """
    c_total = params.coloured_total
    if n < c_total:
        raise ValidationError(f"order {n} cannot hold {c_total} coloured vertices")
    colours: list[int | None] = []
    for i in range(1, params.g + 1):
        colours.extend([i] * params.a[i - 1])
    colours.extend([None] * (n - c_total))

    edges: list[Edge] = []
    for (v, shade), nbrs in (star_sets or {}).items():
        colour = colours[v]
        if colour is None:
            raise ValidationError(f"vertex {v} is not coloured")
        for w in nbrs:
            edges.append(Edge(min(v, w), max(v, w), colour, shade))
    for u, v, shade in coloured_edges:
        cu, cv = colours[u], colours[v]
        if cu is None or cv is None:
            raise ValidationError(f"({u},{v}) is not a coloured pair")
        edges.append(Edge(min(u, v), max(u, v), min(cu, cv), shade))

    cls = RestrictedColourSystem if restricted else ColourSystem
    return cls(params, tuple(colours), tuple(edges))


def drop_last_colour(cs: ColourSystem) -> ColourSystem:
    """Forget the last colour: its vertices become uncoloured and its edges
    disappear (the one-colour-down view used for 'essentially' checks)."""
    params = cs.params
    if params.g == 0:
        raise ValidationError("no colour to drop")
    reduced = ColourParams(params.g - 1, params.a[:-1], params.t[:-1])
    colours = tuple(None if c == params.g else c for c in cs.colours)
    edges = tuple(e for e in cs.edges if e.colour != params.g)
    return ColourSystem(reduced, colours, edges)


def itershades(params: ColourParams) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(1, t + 1) for t in params.t))
