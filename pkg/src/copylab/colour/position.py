"""Set families in general position.

A family S_1..S_m over a ground set R is in (p, K)-general position when
every Boolean atom S_I (elements inside exactly the sets indexed by I) has
size within K * |R|^(1/2) * log|R| of its binomial expectation
p^|I| (1-p)^(m-|I|) |R|.  Logarithms are natural throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import CapacityError, ValidationError
from .systems import ColourSystem, RestrictedColourSystem, drop_last_colour

ATOM_BUDGET_SETS = 20


@dataclass(frozen=True)
class SetFamily:
    """Subsets S_1..S_m of a ground set, in a fixed order."""

    ground: tuple[int, ...]
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        ground = set(self.ground)
        for i, s in enumerate(self.sets):
            if not s <= ground:
                raise ValidationError(f"set {i + 1} is not a subset of the ground set")

    @property
    def m(self) -> int:
        return len(self.sets)

    def atom_sizes(self) -> list[int]:
        """Size of S_I for every I, indexed by the membership bitmask of I."""
        sizes = [0] * (1 << self.m)
        for x in self.ground:
            key = 0
            for i, s in enumerate(self.sets):
                if x in s:
                    key |= 1 << i
            sizes[key] += 1
        return sizes

    def restricted_to(self, keep: Sequence[int]) -> "SetFamily":
        keep_set = set(keep)
        return SetFamily(
            tuple(x for x in self.ground if x in keep_set),
            tuple(frozenset(s & keep_set) for s in self.sets),
        )


@dataclass(frozen=True)
class GeneralPositionReport:
    passed: bool
    m: int
    ground_size: int
    threshold: float
    worst_I: tuple[int, ...]
    worst_deviation: float
    worst_slack: float
    worst_atom_size: int

    def __bool__(self) -> bool:
        return self.passed


def position_threshold(ground_size: int, K: int) -> float:
    if ground_size <= 1:
        return float(K)
    return K * math.sqrt(ground_size) * math.log(ground_size)


def general_position_check(family: SetFamily, p: Fraction, K: int) -> GeneralPositionReport:
    """Exhaustively test every atom of the family against the (p, K) bound.

    Atom sizes are exact; the comparison against K*sqrt(R)*log R happens in
    floats (the threshold is irrational anyway).
    """
    if K < 1:
        raise ValidationError("K must be >= 1")
    m = family.m
    if m > ATOM_BUDGET_SETS:
        raise CapacityError(f"2^{m} atoms exceed the budget of 2^{ATOM_BUDGET_SETS}")
    R = len(family.ground)
    p = Fraction(p)
    threshold = position_threshold(R, K)
    sizes = family.atom_sizes()

    worst_dev = -1.0
    worst_I: tuple[int, ...] = ()
    worst_size = 0
    for key in range(1 << m):
        k = key.bit_count()
        expected = p**k * (1 - p) ** (m - k) * R
        dev = abs(Fraction(sizes[key]) - expected)
        fdev = float(dev)
        if fdev > worst_dev:
            worst_dev = fdev
            worst_I = tuple(i + 1 for i in range(m) if (key >> i) & 1)
            worst_size = sizes[key]
    return GeneralPositionReport(
        passed=worst_dev <= threshold,
        m=m,
        ground_size=R,
        threshold=threshold,
        worst_I=worst_I,
        worst_deviation=worst_dev,
        worst_slack=threshold - worst_dev,
        worst_atom_size=worst_size,
    )


def intersection_deviation(family: SetFamily, p: Fraction) -> tuple[tuple[int, ...], float]:
    """Worst deviation of any intersection cap_{i in I} S_i from p^|I| |R|.

    Companion bound to the atom check: for a family passing at (p, K) every
    such deviation is at most 2^m * K * sqrt(R) * log R.
    """
    m = family.m
    if m > ATOM_BUDGET_SETS:
        raise CapacityError(f"2^{m} subsets exceed the budget")
    R = len(family.ground)
    p = Fraction(p)
    worst = -1.0
    worst_I: tuple[int, ...] = ()
    for key in range(1 << m):
        members = [i for i in range(m) if (key >> i) & 1]
        inter = set(family.ground)
        for i in members:
            inter &= family.sets[i]
        dev = abs(Fraction(len(inter)) - p ** len(members) * R)
        if float(dev) > worst:
            worst = float(dev)
            worst_I = tuple(i + 1 for i in members)
    return worst_I, worst


# ---------------------------------------------------------------------------
# Colour-system generality
# ---------------------------------------------------------------------------


def neighbourhood_family(cs: ColourSystem) -> SetFamily:
    """The m = sum a_i t_i shade neighbourhoods of the coloured vertices,
    over the uncoloured ground set, ordered by (colour, vertex id, shade)."""
    sets: list[frozenset[int]] = []
    u_ids = cs.uncoloured
    for i in range(1, cs.params.g + 1):
        for v in cs.vertices_of_colour(i):
            for s in range(1, cs.params.t[i - 1] + 1):
                mask = cs.star_masks[(v, s)]
                members = set()
                k = mask
                while k:
                    b = k & -k
                    members.add(u_ids[b.bit_length() - 1])
                    k ^= b
                sets.append(frozenset(members))
    return SetFamily(u_ids, tuple(sets))


class Generality(enum.Enum):
    P_GENERAL = "p-general"
    WEAKLY_ONLY = "weakly p-general only"
    NEITHER = "neither"


def classify_generality(cs: ColourSystem, p: Fraction) -> Generality:
    """Atom test at K = 3^g (general) and K = 2*3^g (weak fallback)."""
    family = neighbourhood_family(cs)
    K = 3**cs.params.g
    if general_position_check(family, p, K).passed:
        return Generality.P_GENERAL
    if general_position_check(family, p, 2 * K).passed:
        return Generality.WEAKLY_ONLY
    return Generality.NEITHER


def is_p_general(cs: ColourSystem, p: Fraction) -> bool:
    return classify_generality(cs, p) is Generality.P_GENERAL


def is_weakly_p_general(cs: ColourSystem, p: Fraction) -> bool:
    return classify_generality(cs, p) in (Generality.P_GENERAL, Generality.WEAKLY_ONLY)


def essential_view(rcs: RestrictedColourSystem) -> ColourSystem:
    """The system with the last colour forgotten (its vertices join the
    uncoloured part); 'essentially X' means this view is X."""
    return drop_last_colour(rcs)


def is_essentially_p_general(rcs: RestrictedColourSystem, p: Fraction) -> bool:
    return is_p_general(essential_view(rcs), p)


def is_essentially_weakly_p_general(rcs: RestrictedColourSystem, p: Fraction) -> bool:
    return is_weakly_p_general(essential_view(rcs), p)
