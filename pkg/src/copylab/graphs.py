"""Graphs, G(n,p) sampling, and exact labelled-copy counting.

The two central objects are a small pattern graph H (the counting template)
and a dense host graph G with O(1) edge queries.  Adjacency is stored as one
bit-row per vertex (a Python int), so the inner pruning loop of the counting
kernel is a word-parallel AND plus popcount.

Counts are exact.  A labelled copy of H in G is an injective vertex map
carrying every H-edge to a G-edge; a homomorphism drops injectivity.  Both
are computed by recursive backtracking over the H-vertices in a connectivity
order, intersecting candidate sets with the adjacency rows of already-placed
images.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, ValidationError
from .parallel import run_chunks
from .rational import RationalProb
from .rng import CHUNK_TRIALS, bernoulli_matrix, bits_to_int, chunk_bounds, chunk_count, derive_seed
from .stats import EstimationResult

COUNT_BUDGET = 2**63


def pair_index(u: int, v: int, n: int) -> int:
    """Index of the unordered pair {u, v} in lexicographic order over 0..n-1."""
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def pair_list(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


# ---------------------------------------------------------------------------
# Pattern graphs
# ---------------------------------------------------------------------------

_NAMED_PATTERNS: dict[str, tuple[int, tuple[tuple[int, int], ...]]] = {
    "K1": (1, ()),
    "K2": (2, ((0, 1),)),
    "K3": (3, ((0, 1), (0, 2), (1, 2))),
    "K4": (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
    "P3": (3, ((0, 1), (1, 2))),
    "P4": (4, ((0, 1), (1, 2), (2, 3))),
    "C4": (4, ((0, 1), (1, 2), (2, 3), (0, 3))),
    "C5": (5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4))),
    "STAR3": (4, ((0, 1), (0, 2), (0, 3))),
}


@dataclass(frozen=True)
class PatternGraph:
    """The fixed small graph H: h vertices 0..h-1 and a set of edges."""

    h: int
    edges: frozenset[tuple[int, int]]
    name: str = ""

    def __post_init__(self) -> None:
        if self.h < 1:
            raise ValidationError("pattern graph needs at least one vertex")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop at {u}")
            if not (0 <= u < self.h and 0 <= v < self.h):
                raise ValidationError(f"edge ({u},{v}) outside vertex range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, h: int, edges: Iterable[Sequence[int]], name: str = "") -> "PatternGraph":
        return cls(h, frozenset((e[0], e[1]) for e in edges), name)

    @classmethod
    def from_name(cls, name: str) -> "PatternGraph":
        key = name.upper()
        if key not in _NAMED_PATTERNS:
            raise ValidationError(f"unknown pattern name {name!r}; known: {sorted(_NAMED_PATTERNS)}")
        h, edges = _NAMED_PATTERNS[key]
        return cls.from_edges(h, edges, key)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def connected_flag(self) -> bool:
        seen = {0}
        frontier = [0]
        adj = self.adjacency()
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return len(seen) == self.h

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.h)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        vs = set(vertices)
        return sum(1 for u, v in self.edges if u in vs and v in vs)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n": self.h,
            "edges": [[u, v] for u, v in sorted(self.edges)],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "PatternGraph":
        return cls.from_edges(obj["n"], obj["edges"], obj.get("name", ""))


def parse_pattern(obj: Any) -> PatternGraph:
    """Pattern from a name string or a {'n':..., 'edges':...} mapping."""
    if isinstance(obj, PatternGraph):
        return obj
    if isinstance(obj, str):
        return PatternGraph.from_name(obj)
    if isinstance(obj, dict):
        return PatternGraph.from_json(obj)
    raise ValidationError(f"cannot parse pattern graph from {obj!r}")


# ---------------------------------------------------------------------------
# Host graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0..n-1 with bit-row adjacency."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.rows) != self.n:
            raise ValidationError("row count must equal n")
        for u, row in enumerate(self.rows):
            if row >> self.n:
                raise ValidationError(f"row {u} has bits outside 0..n-1")
            if (row >> u) & 1:
                raise ValidationError(f"self-loop at {u}")
        for u in range(self.n):
            for_check = self.rows[u]
            while for_check:
                b = for_check & -for_check
                v = b.bit_length() - 1
                if not (self.rows[v] >> u) & 1:
                    raise ValidationError(f"adjacency not symmetric at ({u},{v})")
                for_check ^= b

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << u) for u in range(n)))

    @classmethod
    def from_pair_bits(cls, n: int, bits: Sequence[bool] | np.ndarray) -> "Graph":
        """Graph from one bit per unordered pair, pairs in lexicographic order."""
        rows = [0] * n
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if bits[k]:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
                k += 1
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = self.rows[u] >> (u + 1)
            v = u + 1
            while row:
                if row & 1:
                    yield (u, v)
                row >>= 1
                v += 1

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def with_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ValidationError("no self-loops")
        rows = list(self.rows)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def without_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph re-indexed to 0..len(vertices)-1 (given order)."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = [0] * len(vertices)
        for i, v in enumerate(vertices):
            row = self.rows[v]
            for w, j in index.items():
                if (row >> w) & 1:
                    rows[i] |= 1 << j
        return Graph(len(vertices), tuple(rows))

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [[u, v] for u, v in self.edges()]}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Graph":
        return cls.from_edges(obj["n"], obj["edges"])


def sample_gnp(n: int, p: RationalProb | Fraction, seed: int) -> Graph:
    """Sample G(n,p): each unordered pair present independently with probability p.

    Deterministic given the seed; the probability is hit exactly (a uniform
    draw from [0, den) is compared with num).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    m = n * (n - 1) // 2
    if m == 0:
        return Graph.empty(n)
    bits = bernoulli_matrix(seed, 1, m, Fraction(p))[0]
    return Graph.from_pair_bits(n, bits)


# ---------------------------------------------------------------------------
# Counting kernel
# ---------------------------------------------------------------------------


def _placement_order(H: PatternGraph, placed: Sequence[int]) -> list[int]:
    """Order the unplaced H-vertices so each has as many placed neighbours as
    possible when reached (greedy; ties broken by vertex index)."""
    adj = H.adjacency()
    placed_set = set(placed)
    order: list[int] = []
    remaining = [x for x in range(H.h) if x not in placed_set]
    while remaining:
        best = max(remaining, key=lambda x: (sum(1 for y in adj[x] if y in placed_set), -x))
        order.append(best)
        placed_set.add(best)
        remaining.remove(best)
    return order


def _count_maps(
    H: PatternGraph,
    rows: Sequence[int],
    n: int,
    pins: dict[int, int] | None = None,
    injective: bool = True,
) -> int:
    """Count (injective) homomorphisms H -> G extending the pinned assignment.

    `rows` is the bit-row adjacency of the host graph.  Pinned H-vertices are
    fixed to host vertices; edges among pinned pairs are checked up front.
    """
    pins = pins or {}
    adj = H.adjacency()
    full = (1 << n) - 1

    if injective and len(set(pins.values())) != len(pins):
        return 0
    for x, gx in pins.items():
        for y in adj[x]:
            if y in pins and y > x and not (rows[gx] >> pins[y]) & 1:
                return 0

    order = _placement_order(H, list(pins))
    if not order:
        return 1

    placed_before: list[list[int]] = []
    seen = set(pins)
    for x in order:
        placed_before.append([y for y in adj[x] if y in seen])
        seen.add(x)

    image = dict(pins)
    used0 = 0
    if injective:
        for gx in pins.values():
            used0 |= 1 << gx

    def recurse(depth: int, used: int) -> int:
        x = order[depth]
        cand = full
        for y in placed_before[depth]:
            cand &= rows[image[y]]
        if injective:
            cand &= ~used
        if depth == len(order) - 1:
            return cand.bit_count()
        total = 0
        while cand:
            b = cand & -cand
            g = b.bit_length() - 1
            image[x] = g
            total += recurse(depth + 1, used | b)
            del image[x]
            cand ^= b
        return total

    return recurse(0, used0)


def _check_count_budget(H: PatternGraph, n: int) -> None:
    if n**H.h >= COUNT_BUDGET:
        raise CapacityError(f"n^h = {n}^{H.h} exceeds the 2^63 counting budget")


def count_labelled_copies(H: PatternGraph, G: Graph) -> int:
    """Number of injective homomorphisms from H into G (labelled copies)."""
    _check_count_budget(H, G.n)
    return _count_maps(H, G.rows, G.n, injective=True)


def count_homomorphisms(H: PatternGraph, G: Graph) -> int:
    """Number of (not necessarily injective) edge-preserving maps H -> G."""
    _check_count_budget(H, G.n)
    return _count_maps(H, G.rows, G.n, injective=False)


def automorphism_count(H: PatternGraph) -> int:
    """|Aut(H)|, by counting labelled copies of H in itself (h <= 10)."""
    if H.h > 10:
        raise CapacityError("automorphism brute force limited to h <= 10")
    return count_labelled_copies(H, Graph.from_edges(H.h, H.edges))


def count_copies_through_edge(H: PatternGraph, G: Graph, u: int, v: int) -> int:
    """Labelled copies of H in G whose image contains the edge {u, v}.

    The edge must be present in G.  A copy's image contains {u,v} exactly
    when the (unique) preimages of u and v are H-adjacent, so summing pinned
    counts over ordered H-edges counts each copy once.
    """
    total = 0
    for x, y in H.edges:
        total += _count_maps(H, G.rows, G.n, pins={x: u, y: v}, injective=True)
        total += _count_maps(H, G.rows, G.n, pins={x: v, y: u}, injective=True)
    return total


def delta_edge(H: PatternGraph, G: Graph, u: int, v: int) -> int:
    """Copy-count increment of the edge {u,v}: X_H(G+uv) - X_H(G-uv).

    Equals the number of labelled copies in G+uv whose image contains uv.
    """
    if u == v:
        raise ValidationError("u and v must differ")
    _check_count_budget(H, G.n)
    return count_copies_through_edge(H, G.with_edge(u, v), u, v)


# ---------------------------------------------------------------------------
# Exact distribution of the copy count over G(n,p)
# ---------------------------------------------------------------------------

DEFAULT_PAIR_CUTOFF = 24
_ENUM_CHUNK = 1 << 20


@dataclass(frozen=True)
class ExactDistribution:
    """Exact law of the labelled copy count X_H over G(n,p)."""

    support: dict[int, Fraction]
    n: int
    p: Fraction
    pattern: PatternGraph

    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def mean(self) -> Fraction:
        return sum((Fraction(v) * pr for v, pr in self.support.items()), Fraction(0))

    def max_point_probability(self) -> Fraction:
        return max(self.support.values())

    def to_json(self) -> dict[str, Any]:
        from .rational import rational_to_json

        return {
            "n": self.n,
            "p": rational_to_json(self.p),
            "pattern": self.pattern.to_json(),
            "support": {str(v): rational_to_json(pr) for v, pr in sorted(self.support.items())},
        }


def _copy_masks(H: PatternGraph, n: int) -> dict[int, int]:
    """Required-edge bitmask (over the C(n,2) pair bits) of every injection
    of H into [n], with multiplicities."""
    import itertools

    masks: Counter[int] = Counter()
    for phi in itertools.permutations(range(n), H.h):
        mask = 0
        for x, y in H.edges:
            mask |= 1 << pair_index(phi[x], phi[y], n)
        masks[mask] += 1
    return dict(masks)


def exact_distribution(
    H: PatternGraph, n: int, p: RationalProb | Fraction, pair_cutoff: int = DEFAULT_PAIR_CUTOFF
) -> ExactDistribution:
    """Exhaustively enumerate all 2^C(n,2) graphs and tabulate X_H exactly.

    Each graph has probability p^e (1-p)^(C(n,2)-e) in exact rationals, so
    the returned support sums to exactly 1.
    """
    p = Fraction(p)
    m = n * (n - 1) // 2
    if m > pair_cutoff:
        raise CapacityError(
            f"exhaustive enumeration needs 2^{m} graphs (C({n},2) = {m} > cutoff {pair_cutoff})"
        )
    if H.h > n:
        return ExactDistribution({0: Fraction(1)}, n, p, H)

    masks = _copy_masks(H, n)
    max_count = sum(masks.values())

    # Histogram over (copy count, edge count) cells, accumulated chunkwise.
    cells: Counter[tuple[int, int]] = Counter()
    total_graphs = 1 << m
    for start in range(0, total_graphs, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, total_graphs)
        block = np.arange(start, stop, dtype=np.int64)
        counts = np.zeros(block.shape, dtype=np.int64)
        for mask, mult in masks.items():
            counts += mult * ((block & mask) == mask)
        edges = np.bitwise_count(block).astype(np.int64)
        keys = counts * (m + 1) + edges
        hist = np.bincount(keys, minlength=(max_count + 1) * (m + 1))
        for key in np.nonzero(hist)[0]:
            cells[(int(key) // (m + 1), int(key) % (m + 1))] += int(hist[key])

    edge_prob = [p**e * (1 - p) ** (m - e) for e in range(m + 1)]
    support: dict[int, Fraction] = {}
    for (value, e), howmany in cells.items():
        pr = howmany * edge_prob[e]
        if pr != 0:
            support[value] = support.get(value, Fraction(0)) + pr
    support = {v: pr for v, pr in support.items() if pr != 0}
    return ExactDistribution(support, n, p, H)


def expected_count(H: PatternGraph, n: int, p: RationalProb | Fraction) -> Fraction:
    """First moment of the labelled copy count: n(n-1)...(n-h+1) p^e(H)."""
    ways = 1
    for i in range(H.h):
        ways *= n - i
    return Fraction(ways) * Fraction(p) ** H.e


# ---------------------------------------------------------------------------
# Monte Carlo point-probability estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointProbEstimate:
    """Most frequent copy-count value and its estimated point probability."""

    mode: int
    result: EstimationResult
    sample_mean: float
    sample_variance: float
    tally_size: int = 0


def _triangle_counts(bits: np.ndarray, n: int, pairs: list[tuple[int, int]]) -> np.ndarray:
    """Labelled K3 counts (= trace A^3) for a batch of pair-bit rows."""
    batch = bits.shape[0]
    A = np.zeros((batch, n, n), dtype=np.float32)
    iu = np.fromiter((u for u, _ in pairs), dtype=np.int64)
    iv = np.fromiter((v for _, v in pairs), dtype=np.int64)
    A[:, iu, iv] = bits
    A[:, iv, iu] = bits
    A2 = np.matmul(A, A)
    return np.rint((A2 * A).sum(axis=(1, 2))).astype(np.int64)


def copy_count_tally(
    H: PatternGraph,
    n: int,
    p: RationalProb | Fraction,
    trials: int,
    seed: int,
    label: str = "pointprob",
    workers: int | None = None,
) -> Counter[int]:
    """Tally of X_H over `trials` independent G(n,p) samples.

    Chunked sampling with derived per-chunk seeds; the triangle and
    single-edge patterns take a vectorized path over the same edge bits, so
    the tally does not depend on which path ran.
    """
    _check_count_budget(H, n)
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    p = Fraction(p)
    pairs = pair_list(n)
    m = len(pairs)
    is_triangle = H.h == 3 and H.e == 3
    is_edge = H.h == 2 and H.e == 1

    def one_chunk(c: int) -> Counter[int]:
        lo, hi = chunk_bounds(c, trials)
        bits = bernoulli_matrix(derive_seed(seed, label, c), hi - lo, m, p)
        tally: Counter[int] = Counter()
        if is_triangle and n >= 3:
            values, reps = np.unique(_triangle_counts(bits, n, pairs), return_counts=True)
            for v, r in zip(values, reps):
                tally[int(v)] += int(r)
        elif is_edge:
            values, reps = np.unique(2 * bits.sum(axis=1, dtype=np.int64), return_counts=True)
            for v, r in zip(values, reps):
                tally[int(v)] += int(r)
        else:
            for row in bits:
                G = Graph.from_pair_bits(n, row)
                tally[count_labelled_copies(H, G)] += 1
        return tally

    tallies = run_chunks(one_chunk, chunk_count(trials), workers)
    total: Counter[int] = Counter()
    for t in tallies:
        total.update(t)
    return total


def point_prob_estimate(
    H: PatternGraph,
    n: int,
    p: RationalProb | Fraction,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> PointProbEstimate:
    """Estimate the maximal point probability of X_H over G(n,p).

    Returns the empirical mode, its frequency with a Wilson 95% interval,
    and the sample mean/variance of the tallied counts.
    """
    tally = copy_count_tally(H, n, p, trials, seed, workers=workers)
    mode, hits = max(tally.items(), key=lambda kv: (kv[1], -kv[0]))
    mean = sum(v * c for v, c in tally.items()) / trials
    var = sum((v - mean) ** 2 * c for v, c in tally.items()) / trials
    return PointProbEstimate(
        mode=mode,
        result=EstimationResult.from_counts(hits, trials, seed),
        sample_mean=mean,
        sample_variance=var,
        tally_size=len(tally),
    )
