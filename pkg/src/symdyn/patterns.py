"""Lattice geometry and finite patterns over Z^d.

Symbols are small nonnegative integers. A pattern is stored as a pair of
parallel tuples (cells, symbols) with cells sorted lexicographically, so two
equal patterns always have identical representations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Vector = tuple[int, ...]

MAX_DIMENSION = 3


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Symbol table: symbols are ``0..size-1``, names are for display only."""

    names: tuple[str, ...]

    @classmethod
    def of_size(cls, size: int) -> Alphabet:
        return cls(tuple(str(i) for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, symbol) -> bool:
        return isinstance(symbol, int) and 0 <= symbol < len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


def check_dimension(d: int) -> None:
    if not 1 <= d <= MAX_DIMENSION:
        raise DimensionError(f"dimension {d} outside supported range 1..{MAX_DIMENSION}")


@lru_cache(maxsize=None)
def window_cells(n: int, d: int) -> tuple[Vector, ...]:
    """Cells of the cube [-n, n]^d in canonical (lexicographic) order."""
    if n < 0:
        raise ValueError("window radius must be nonnegative")
    return tuple(itertools.product(range(-n, n + 1), repeat=d))


@lru_cache(maxsize=None)
def window_index(n: int, d: int) -> dict[Vector, int]:
    return {c: i for i, c in enumerate(window_cells(n, d))}


@dataclass(frozen=True)
class Window:
    radius: int
    dimension: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("window radius must be nonnegative")

    @property
    def cells(self) -> tuple[Vector, ...]:
        return window_cells(self.radius, self.dimension)

    def __len__(self) -> int:
        return (2 * self.radius + 1) ** self.dimension

    def __contains__(self, v: Vector) -> bool:
        return all(-self.radius <= x <= self.radius for x in v)


@dataclass(frozen=True)
class Pattern:
    dimension: int
    cells: tuple[Vector, ...]
    symbols: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.symbols):
            raise ValueError("cells and symbols differ in length")
        for c in self.cells:
            if len(c) != self.dimension:
                raise DimensionError(f"cell {c} is not {self.dimension}-dimensional")
        if list(self.cells) != sorted(set(self.cells)):
            raise ValueError("cells must be distinct and in canonical order; use Pattern.make")

    @classmethod
    def make(cls, assignment: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]],
             dimension: int | None = None) -> Pattern:
        items = assignment.items() if isinstance(assignment, Mapping) else assignment
        table: dict[Vector, int] = {}
        for cell, sym in items:
            cell = tuple(int(x) for x in cell)
            if cell in table and table[cell] != sym:
                raise ValueError(f"conflicting symbols at {cell}")
            table[cell] = int(sym)
        if dimension is None:
            if not table:
                raise ValueError("dimension required for the empty pattern")
            dimension = len(next(iter(table)))
        cells = tuple(sorted(table))
        return cls(dimension, cells, tuple(table[c] for c in cells))

    @classmethod
    def empty(cls, dimension: int) -> Pattern:
        return cls(dimension, (), ())

    @classmethod
    def word(cls, symbols: Sequence[int], start: int = 0) -> Pattern:
        """1-dimensional pattern on ``start .. start+len-1``."""
        return cls(1, tuple((start + i,) for i in range(len(symbols))), tuple(symbols))

    @classmethod
    def block(cls, symbols: Sequence[int], radius: int, dimension: int) -> Pattern:
        """Pattern on the full window [-radius, radius]^d, symbols in canonical order."""
        cells = window_cells(radius, dimension)
        if len(symbols) != len(cells):
            raise ValueError("symbol count does not match window size")
        return cls(dimension, cells, tuple(symbols))

    def as_dict(self) -> dict[Vector, int]:
        return dict(zip(self.cells, self.symbols))

    def __len__(self) -> int:
        return len(self.cells)

    def is_empty(self) -> bool:
        return not self.cells

    def bounds(self) -> tuple[Vector, Vector]:
        """Per-axis (min, max) corners of the support."""
        if not self.cells:
            raise ValueError("empty pattern has no bounds")
        lo = tuple(min(c[k] for c in self.cells) for k in range(self.dimension))
        hi = tuple(max(c[k] for c in self.cells) for k in range(self.dimension))
        return lo, hi

    def extent(self) -> int:
        """Largest per-axis extent (max - min + 1) of the support."""
        lo, hi = self.bounds()
        return max(h - l + 1 for l, h in zip(lo, hi))

    def window_radius(self) -> int | None:
        """Radius n if the support is exactly [-n, n]^d, else None."""
        if not self.cells:
            return None
        n = self.cells[-1][0]
        if n >= 0 and self.cells == window_cells(n, self.dimension):
            return n
        return None

    def normalized(self) -> Pattern:
        """Translate so the lexicographically least corner of the bounding box is 0."""
        lo, _ = self.bounds()
        return pattern_shift(self, tuple(-x for x in lo))

    def __str__(self) -> str:
        if self.dimension == 1 and self.cells and all(
                b[0] - a[0] == 1 for a, b in zip(self.cells, self.cells[1:])):
            return "".join(str(s) for s in self.symbols)
        return " ".join(f"({','.join(map(str, c))})={s}" for c, s in zip(self.cells, self.symbols))


def _check_same_dim(d1: int, d2: int) -> None:
    if d1 != d2:
        raise DimensionError(f"dimension mismatch: {d1} vs {d2}")


def pattern_shift(p: Pattern, v: Sequence[int]) -> Pattern:
    _check_same_dim(p.dimension, len(v))
    cells = tuple(tuple(a + b for a, b in zip(c, v)) for c in p.cells)
    # translation preserves lexicographic order
    return Pattern(p.dimension, cells, p.symbols)


def pattern_restrict(p: Pattern, w: Window) -> Pattern:
    _check_same_dim(p.dimension, w.dimension)
    keep = [i for i, c in enumerate(p.cells) if c in w]
    return Pattern(p.dimension, tuple(p.cells[i] for i in keep), tuple(p.symbols[i] for i in keep))


def occurs_in(needle: Pattern, hay: Pattern) -> set[Vector]:
    """All offsets v such that needle shifted by v sits inside hay and agrees with it."""
    _check_same_dim(needle.dimension, hay.dimension)
    if not needle.cells:
        raise ValueError("empty needle occurs everywhere")
    if not hay.cells:
        return set()
    table = hay.as_dict()
    anchor = needle.cells[0]
    found = set()
    for cell in hay.cells:
        v = tuple(a - b for a, b in zip(cell, anchor))
        if all(table.get(tuple(x + y for x, y in zip(c, v))) == s
               for c, s in zip(needle.cells, needle.symbols)):
            found.add(v)
    return found


def patterns_compatible(p: Pattern, q: Pattern) -> bool:
    _check_same_dim(p.dimension, q.dimension)
    small, large = (p, q) if len(p) <= len(q) else (q, p)
    table = large.as_dict()
    return all(table.get(c, s) == s for c, s in zip(small.cells, small.symbols))
