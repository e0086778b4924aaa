"""Random extensions, dispersedness estimation, and the W-set split.

Extending a restricted system hands every last-colour vertex an independent
p-subset of the uncoloured vertices as its (single-shade) neighbourhood.
Dispersedness asks whether, over that randomness, any single copy-count
table value is hit too often.  The W-set split goes the other way: it peels
2^(sum a_i t_i) uncoloured vertices (one per adjacency pattern) off a
system, recolours them, and verifies exactly that the copy table decomposes
into the through-W and without-W parts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CopylabError, ValidationError
from ..graphs import Graph
from ..parallel import run_chunks
from ..rng import CHUNK_TRIALS, bernoulli_matrix, bits_to_int, chunk_bounds, chunk_count, derive_seed
from ..stats import EstimationResult
from ..tables import TableFunction
from .counting import ClassMeetingCounter, graph_rows_by_position, psi_table
from .position import is_essentially_p_general
from .systems import (
    ColourParams,
    ColourSystem,
    Edge,
    Extension,
    RestrictedColourSystem,
    ensure_valid,
    is_complete,
    itershades,
)


class PatternNotRepresented(CopylabError):
    """Some coloured-adjacency pattern has no uncoloured witness."""


def last_colour_vertices(rcs: RestrictedColourSystem) -> tuple[int, ...]:
    return rcs.vertices_of_colour(rcs.params.g)


def extension_system(rcs: RestrictedColourSystem, ext: Extension) -> ColourSystem:
    """The colour system obtained by wiring each last-colour vertex to its
    extension set in the unique last-colour shade."""
    g = rcs.params.g
    new_edges = list(rcs.edges)
    for v in last_colour_vertices(rcs):
        for w in sorted(ext.sets[v]):
            new_edges.append(Edge(min(v, w), max(v, w), g, 1))
    return ColourSystem(rcs.params, rcs.colours, tuple(new_edges))


def extend_restricted(
    rcs: RestrictedColourSystem, p: Fraction, seed: int
) -> tuple[Extension, ColourSystem]:
    """Sample the random extension: each uncoloured vertex joins each S_v
    independently with probability p.  Deterministic given the seed."""
    ensure_valid(rcs)
    vs = last_colour_vertices(rcs)
    u_ids = rcs.uncoloured
    bits = bernoulli_matrix(seed, max(len(vs), 1), len(u_ids), Fraction(p))
    sets = {
        v: frozenset(u_ids[k] for k in np.nonzero(bits[i])[0]) for i, v in enumerate(vs)
    }
    ext = Extension(sets)
    return ext, extension_system(rcs, ext)


# ---------------------------------------------------------------------------
# Dispersedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DispersednessQuery:
    q: float
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if not 0 < self.q <= 1:
            raise ValidationError("q must lie in (0, 1]")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")


@dataclass(frozen=True)
class DispersednessReport:
    max_frequency: float
    attaining: TableFunction
    result: EstimationResult
    q: float
    dispersed: bool
    distinct_tables: int
    warnings: tuple[str, ...] = field(default_factory=tuple)


def dispersedness_estimate(
    rcs: RestrictedColourSystem,
    G0: Graph,
    H,
    p: Fraction,
    query: DispersednessQuery,
    workers: int | None = None,
) -> DispersednessReport:
    """Estimate the largest hit frequency of any full copy table over the
    random extension, for a fixed uncoloured graph.

    The universal quantifier over target tables is replaced by the empirical
    mode: the most frequent sampled table majorises the frequency estimate
    of every fixed target from the same sample.  G0 counts as dispersed when
    mode frequency plus the Wilson half-width stays below q.
    """
    warnings: list[str] = []
    if not is_essentially_p_general(rcs, p):
        warnings.append("system is not essentially p-general")
    if not is_complete(rcs):
        warnings.append("system is not complete")

    rows = graph_rows_by_position(rcs, G0)
    vs = last_colour_vertices(rcs)
    n_unc = len(rcs.uncoloured)
    counters = [ClassMeetingCounter(H, rcs, shades) for shades in itershades(rcs.params)]
    p = Fraction(p)

    def one_chunk(c: int) -> Counter[tuple[int, ...]]:
        lo, hi = chunk_bounds(c, query.trials)
        batch = hi - lo
        bits = bernoulli_matrix(derive_seed(query.seed, "dispersedness", c), batch * len(vs), n_unc, p)
        tally: Counter[tuple[int, ...]] = Counter()
        for i in range(batch):
            star = {
                v: bits_to_int(bits[i * len(vs) + k]) for k, v in enumerate(vs)
            }
            key = tuple(
                counter.count(rows, star={**counter.view.star, **star}) for counter in counters
            )
            tally[key] += 1
        return tally

    tallies = run_chunks(one_chunk, chunk_count(query.trials), workers)
    total: Counter[tuple[int, ...]] = Counter()
    for t in tallies:
        total.update(t)

    best_key, best_hits = max(total.items(), key=lambda kv: (kv[1], kv[0]))
    est = EstimationResult.from_counts(best_hits, query.trials, query.seed)
    return DispersednessReport(
        max_frequency=est.estimate,
        attaining=TableFunction(rcs.params.shape(), best_key),
        result=est,
        q=query.q,
        dispersed=est.estimate + est.half_width <= query.q,
        distinct_tables=len(total),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# The W-set decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    W: tuple[int, ...]
    recoloured: RestrictedColourSystem
    reduced: ColourSystem
    reduced_graph: Graph
    extension: Extension
    lhs: TableFunction
    through_W: TableFunction
    without_W: TableFunction
    identity_holds: bool


def _all_patterns(cs: ColourSystem) -> list[tuple[tuple[int, frozenset[int]], ...]]:
    import itertools

    per_vertex = []
    for c in cs.coloured:
        colour = cs.colours[c]
        assert colour is not None
        t = cs.params.t[colour - 1]
        subsets = [
            frozenset(s + 1 for s in range(t) if (mask >> s) & 1) for mask in range(1 << t)
        ]
        per_vertex.append([(c, sub) for sub in subsets])
    return [tuple(combo) for combo in itertools.product(*per_vertex)]


def decompose(cs: ColourSystem, G0: Graph, H) -> Decomposition:
    """Split the copy table of a system at its W-set.

    W holds, for each possible shade-adjacency pattern towards the coloured
    vertices, the lowest-index uncoloured witness.  The W vertices get the
    next colour (with the induced G0[W] edges in its single shade), the rest
    of G0 restricts to the remaining uncoloured vertices, and the identity

        psi(system) = psi(recoloured, restricted graph, extension) +
                      psi(system minus W, restricted graph)

    is verified entrywise, exactly.
    """
    ensure_valid(cs)
    params = cs.params
    g_new = params.g + 1

    fingerprints: dict[tuple, int] = {}
    for w in cs.uncoloured:
        fp = cs.adjacency_fingerprint(w)
        if fp not in fingerprints:
            fingerprints[fp] = w
    patterns = _all_patterns(cs)
    missing = [pat for pat in patterns if pat not in fingerprints]
    if missing:
        raise PatternNotRepresented(
            f"{len(missing)} of {len(patterns)} adjacency patterns have no uncoloured witness"
        )
    W = tuple(sorted(fingerprints[pat] for pat in patterns))
    a_g = len(patterns)

    u_pos = cs.uncoloured_pos
    kept_ids = [u for u in cs.uncoloured if u not in set(W)]
    reduced_graph = G0.induced([u_pos[u] for u in kept_ids])

    # Recoloured system: W joins as the new last colour; G0[W] is painted in
    # its single shade.
    new_params = ColourParams(g_new, params.a + (a_g,), params.t + (1,))
    colours = list(cs.colours)
    for w in W:
        colours[w] = g_new
    new_edges = list(cs.edges)
    for i, wi in enumerate(W):
        for wj in W[i + 1 :]:
            if G0.has_edge(u_pos[wi], u_pos[wj]):
                new_edges.append(Edge(wi, wj, g_new, 1))
    recoloured = RestrictedColourSystem(new_params, tuple(colours), tuple(new_edges))

    # Extension: G0 edges from W into the surviving uncoloured part.
    sets = {}
    for w in W:
        row = G0.rows[u_pos[w]]
        sets[w] = frozenset(u for u in kept_ids if (row >> u_pos[u]) & 1)
    extension = Extension(sets)

    # The reduced system deletes W (ids shift down, order preserved).
    keep = [v for v in range(cs.order) if v not in set(W)]
    remap = {v: i for i, v in enumerate(keep)}
    reduced = ColourSystem(
        params,
        tuple(cs.colours[v] for v in keep),
        tuple(
            Edge(remap[e.u], remap[e.v], e.colour, e.shade)
            for e in cs.edges
            if e.u in remap and e.v in remap
        ),
    )

    lhs = psi_table(H, cs, G0)
    through = psi_table(H, extension_system(recoloured, extension), reduced_graph).squeeze_last()
    without = psi_table(H, reduced, reduced_graph)
    identity = lhs == through + without
    return Decomposition(
        W=W,
        recoloured=recoloured,
        reduced=reduced,
        reduced_graph=reduced_graph,
        extension=extension,
        lhs=lhs,
        through_W=through,
        without_W=without,
        identity_holds=identity,
    )
