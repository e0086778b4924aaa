"""Dense tables indexed by shade tuples.

A TableFunction holds one entry per shade tuple (j_1, ..., j_g) in
[t_1] x ... x [t_g], stored row-major with the last coordinate fastest.
Entries are ints or exact Fractions; all comparisons and norms are exact.
The empty shape () is the g = 0 case and holds a single entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator, Sequence

from .rational import rational_from_json, rational_to_json

Entry = int | Fraction


def shade_tuples(shape: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All 1-based shade tuples for a shape, row-major (last coordinate fastest)."""
    return itertools.product(*(range(1, t + 1) for t in shape))


@dataclass(frozen=True)
class TableFunction:
    """Dense array over shade tuples with exact entries."""

    shape: tuple[int, ...]
    entries: tuple[Entry, ...]

    def __post_init__(self) -> None:
        size = 1
        for t in self.shape:
            if t < 1:
                raise ValueError("shape entries must be >= 1")
            size *= t
        if len(self.entries) != size:
            raise ValueError(f"need {size} entries for shape {self.shape}, got {len(self.entries)}")

    @classmethod
    def build(cls, shape: Sequence[int], fn: Callable[[tuple[int, ...]], Entry]) -> "TableFunction":
        return cls(tuple(shape), tuple(fn(j) for j in shade_tuples(shape)))

    @classmethod
    def constant(cls, shape: Sequence[int], value: Entry) -> "TableFunction":
        size = 1
        for t in shape:
            size *= t
        return cls(tuple(shape), (value,) * size)

    def index(self, j: Sequence[int]) -> int:
        if len(j) != len(self.shape):
            raise ValueError(f"tuple {j} does not match shape {self.shape}")
        idx = 0
        for coord, t in zip(j, self.shape):
            if not 1 <= coord <= t:
                raise ValueError(f"shade {coord} outside [1, {t}]")
            idx = idx * t + (coord - 1)
        return idx

    def __getitem__(self, j: Sequence[int]) -> Entry:
        return self.entries[self.index(j)]

    def items(self) -> Iterator[tuple[tuple[int, ...], Entry]]:
        return zip(shade_tuples(self.shape), self.entries)

    def map(self, fn: Callable[[Entry], Entry]) -> "TableFunction":
        return TableFunction(self.shape, tuple(fn(e) for e in self.entries))

    def __add__(self, other: "TableFunction") -> "TableFunction":
        self._check_same_shape(other)
        return TableFunction(self.shape, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "TableFunction") -> "TableFunction":
        self._check_same_shape(other)
        return TableFunction(self.shape, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, factor: Entry) -> "TableFunction":
        return TableFunction(self.shape, tuple(factor * e for e in self.entries))

    def inf_norm(self) -> Entry:
        return max(abs(e) for e in self.entries)

    def squeeze_last(self) -> "TableFunction":
        """Drop a trailing size-1 axis (aligns (t_1..t_{g-1}, 1) with (t_1..t_{g-1}))."""
        if not self.shape or self.shape[-1] != 1:
            raise ValueError("last axis is not of size 1")
        return TableFunction(self.shape[:-1], self.entries)

    def with_trailing_one(self) -> "TableFunction":
        return TableFunction(self.shape + (1,), self.entries)

    def _check_same_shape(self, other: "TableFunction") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def to_json(self) -> dict[str, Any]:
        ents: list[Any] = []
        for e in self.entries:
            if isinstance(e, Fraction) and not isinstance(e, int):
                ents.append(rational_to_json(e))
            else:
                ents.append(int(e))
        return {"shape": list(self.shape), "entries": ents}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "TableFunction":
        entries = []
        for e in obj["entries"]:
            if isinstance(e, dict):
                entries.append(rational_from_json(e))
            else:
                entries.append(int(e))
        return cls(tuple(obj["shape"]), tuple(entries))
