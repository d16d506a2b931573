"""Hausdorff distance between subshifts, computed from window languages.

Configurations carry the metric d(x, y) = 2^-m with m the smallest radius
|u|_inf at which x and y differ. Two subshifts are then within 2^-(n+1) of each
other in the Hausdorff metric exactly when their window-n languages coincide,
which is what :func:`hausdorff_proxy` tests resolution by resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .patterns import Alphabet, Pattern, window_cells, window_index
from .sft import BlockLanguage


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DyadicDistance:
    """Either exactly 2^-exponent, or at most 2^-exponent (``exact=False``).

    Ordering follows the distance value: ``AtMost(2^-(N+1)) < Exact(2^-N)``.
    """

    sort_key: tuple[int, bool]

    @classmethod
    def exact_at(cls, m: int) -> DyadicDistance:
        return cls((-m, True))

    @classmethod
    def at_most(cls, m: int) -> DyadicDistance:
        return cls((-m, False))

    @property
    def exponent(self) -> int:
        return -self.sort_key[0]

    @property
    def exact(self) -> bool:
        return self.sort_key[1]

    @property
    def value(self) -> float:
        return 2.0 ** -self.exponent

    def __repr__(self) -> str:
        kind = "Exact" if self.exact else "AtMost"
        return f"{kind}(2^-{self.exponent})"

    def to_json(self) -> dict:
        return {"kind": "Exact" if self.exact else "AtMost", "exponent": self.exponent}


@lru_cache(maxsize=None)
def _restriction_indices(n: int, m: int, d: int) -> tuple[int, ...]:
    index = window_index(n, d)
    return tuple(index[c] for c in window_cells(m, d))


def restrict_language(l: BlockLanguage, m: int) -> BlockLanguage:
    if m < 0 or m > l.resolution:
        raise ResolutionError(f"cannot restrict resolution {l.resolution} language to {m}")
    if m == l.resolution:
        return l
    idx = _restriction_indices(l.resolution, m, l.dimension)
    blocks = frozenset(tuple(b[i] for i in idx) for b in l.blocks)
    return BlockLanguage(l.dimension, l.alphabet, m, blocks)


def language_equal_at(a: BlockLanguage, b: BlockLanguage, n: int) -> bool:
    if a.dimension != b.dimension:
        raise ValueError("languages of different dimension")
    if n > min(a.resolution, b.resolution):
        raise ResolutionError(f"resolution {n} exceeds available {min(a.resolution, b.resolution)}")
    return restrict_language(a, n).blocks == restrict_language(b, n).blocks


def hausdorff_proxy(a: BlockLanguage, b: BlockLanguage, upto: int) -> DyadicDistance:
    if upto > min(a.resolution, b.resolution):
        raise ResolutionError(
            f"comparison at {upto} needs both languages at that resolution "
            f"(have {a.resolution}, {b.resolution})")
    for n in range(upto + 1):
        if not language_equal_at(a, b, n):
            return DyadicDistance.exact_at(n)
    return DyadicDistance.at_most(upto + 1)


def language_of_pattern(p: Pattern, n: int, alphabet: Alphabet | None = None) -> BlockLanguage:
    """All window-n sub-blocks of a full-window pattern (an inner approximation)."""
    radius = p.window_radius()
    if radius is None:
        raise ValueError("pattern support must be a full window [-R, R]^d")
    if radius < n:
        raise ResolutionError(f"window radius {radius} smaller than resolution {n}")
    d = p.dimension
    if alphabet is None:
        alphabet = Alphabet.of_size(max(p.symbols) + 1)
    index = window_index(radius, d)
    offsets = window_cells(n, d)
    blocks = set()
    for center in window_cells(radius - n, d):
        idx = [index[tuple(a + b for a, b in zip(center, o))] for o in offsets]
        blocks.add(tuple(p.symbols[i] for i in idx))
    return BlockLanguage(d, alphabet, n, frozenset(blocks))
