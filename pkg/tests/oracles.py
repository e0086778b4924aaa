"""Independent brute-force oracles used to freeze expected values.

Everything here enumerates naively (permutations, products, powersets) and
stays deliberately independent of the package's counting kernels.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from copylab.graphs import Graph, PatternGraph


def brute_labelled_copies(H: PatternGraph, G: Graph) -> int:
    total = 0
    for phi in itertools.permutations(range(G.n), H.h):
        if all(G.has_edge(phi[x], phi[y]) for x, y in H.edges):
            total += 1
    return total


def brute_homomorphisms(H: PatternGraph, G: Graph) -> int:
    total = 0
    for phi in itertools.product(range(G.n), repeat=H.h):
        if all(G.has_edge(phi[x], phi[y]) for x, y in H.edges):
            total += 1
    return total


def brute_unlabelled_copies(H: PatternGraph, G: Graph) -> int:
    """Number of subgraphs of G isomorphic to H, by vertex-set enumeration."""
    found = 0
    for vs in itertools.combinations(range(G.n), H.h):
        images = set()
        for phi in itertools.permutations(vs):
            if all(G.has_edge(phi[x], phi[y]) for x, y in H.edges):
                images.add(frozenset((min(phi[x], phi[y]), max(phi[x], phi[y])) for x, y in H.edges))
        found += len(images)
    return found


def brute_copies_through_edge(H: PatternGraph, G: Graph, u: int, v: int) -> int:
    total = 0
    for phi in itertools.permutations(range(G.n), H.h):
        if not all(G.has_edge(phi[x], phi[y]) for x, y in H.edges):
            continue
        if any({phi[x], phi[y]} == {u, v} for x, y in H.edges):
            total += 1
    return total


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def binomial_pmf(n: int, k: int, p: Fraction) -> Fraction:
    return binomial(n, k) * p**k * (1 - p) ** (n - k)


def binomial_mode(n: int, p: Fraction) -> int:
    """Argmax of the Binomial(n,p) pmf (smallest maximiser)."""
    best, best_pr = 0, Fraction(0)
    for k in range(n + 1):
        pr = binomial_pmf(n, k, p)
        if pr > best_pr:
            best, best_pr = k, pr
    return best


def all_graphs(n: int):
    """Every labelled graph on n vertices."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for picks in itertools.product((False, True), repeat=len(pairs)):
        yield Graph.from_edges(n, [e for e, on in zip(pairs, picks) if on])


def nonisomorphic_patterns(max_h: int) -> list[PatternGraph]:
    """All pattern graphs on 1..max_h vertices up to isomorphism."""
    out: list[PatternGraph] = []
    for h in range(1, max_h + 1):
        pairs = list(itertools.combinations(range(h), 2))
        seen: set[frozenset] = set()
        for picks in itertools.product((False, True), repeat=len(pairs)):
            edges = frozenset(e for e, on in zip(pairs, picks) if on)
            canon = min(
                frozenset((min(s[u], s[v]), max(s[u], s[v])) for u, v in edges)
                for s in itertools.permutations(range(h))
            )
            if canon not in seen:
                seen.add(canon)
                out.append(PatternGraph(h, edges, name=f"h{h}e{len(edges)}"))
    return out


# -- colour-system oracles (naive enumeration over realized graphs) ---------


def brute_psi_entry(H, cs, G0, shades) -> int:
    from copylab.colour import realize

    R = realize(cs, G0, shades)
    classes = [set(cls) for cls in cs.classes]
    total = 0
    for phi in itertools.permutations(range(R.n), H.h):
        if not all(R.has_edge(phi[x], phi[y]) for x, y in H.edges):
            continue
        img = set(phi)
        if all(img & cls for cls in classes):
            total += 1
    return total


def brute_kappa_entry(H, cs, G0, shades, u, v) -> int:
    from copylab.colour import realize

    R = realize(cs, G0, shades).with_edge(u, v)
    classes = [set(cls) for cls in cs.classes]
    total = 0
    for phi in itertools.permutations(range(R.n), H.h):
        if not all(R.has_edge(phi[x], phi[y]) for x, y in H.edges):
            continue
        img = set(phi)
        if not all(img & cls for cls in classes):
            continue
        if any({phi[x], phi[y]} == {u, v} for x, y in H.edges):
            total += 1
    return total


def brute_exact_mu_entry(H, rcs, ext, shades, p: Fraction) -> Fraction:
    """Mean of the psi entry over every graph on the uncoloured part."""
    from copylab.colour import extension_system

    gs = extension_system(rcs, ext)
    m = len(rcs.uncoloured)
    total = Fraction(0)
    for G0 in all_graphs(m):
        weight = p**G0.edge_count * (1 - p) ** (m * (m - 1) // 2 - G0.edge_count)
        total += weight * brute_psi_entry(H, gs, G0, shades)
    return total


def brute_exact_nu_entry(H, rcs, ext, shades, p: Fraction, u: int, v: int) -> Fraction:
    from copylab.colour import extension_system

    gs = extension_system(rcs, ext)
    m = len(rcs.uncoloured)
    total = Fraction(0)
    for G0 in all_graphs(m):
        weight = p**G0.edge_count * (1 - p) ** (m * (m - 1) // 2 - G0.edge_count)
        total += weight * brute_kappa_entry(H, gs, G0, shades, u, v)
    return total
