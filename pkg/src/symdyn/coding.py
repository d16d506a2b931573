"""Sliding block codes as clopen partitions, and the SFT-image check.

A code of radius w reads the window [-w, w]^d around a cell and emits one
output symbol; its fibers are the atoms of the corresponding clopen partition.
Rules are total: windows missing from a table map to the code's default.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .patterns import Alphabet, Pattern, Vector, window_cells, window_index
from .sft import BlockLanguage, Sft, occurrences
from .space import ResolutionError, restrict_language

DEFAULT_MAX_OUTPUT_SYMBOLS = 1 << 16


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    dimension: int
    radius: int
    in_alphabet: Alphabet
    out_alphabet: Alphabet
    rule: Callable[[tuple[int, ...]], int]
    default: int | None = None
    table: Mapping[tuple[int, ...], int] | None = None

    @classmethod
    def from_table(cls, dimension, radius, in_alphabet, out_alphabet,
                   table: Mapping[tuple[int, ...], int], default: int = 0) -> SlidingBlockCode:
        """Table keys are window symbol tuples in canonical order."""
        size = (2 * radius + 1) ** dimension
        for key, val in table.items():
            if len(key) != size:
                raise ValueError(f"rule key {key} does not cover the radius-{radius} window")
            if val not in out_alphabet:
                raise ValueError(f"output symbol {val} not in output alphabet")
        if default not in out_alphabet:
            raise ValueError(f"default symbol {default} not in output alphabet")
        frozen = dict(table)
        return cls(dimension, radius, in_alphabet, out_alphabet,
                   lambda w: frozen.get(w, default), default, frozen)

    @classmethod
    def identity(cls, dimension: int, alphabet: Alphabet) -> SlidingBlockCode:
        return cls.from_table(dimension, 0, alphabet, alphabet,
                              {(s,): s for s in range(alphabet.size)}, 0)

    @classmethod
    def constant(cls, dimension: int, in_alphabet: Alphabet, symbol: int = 0,
                 out_alphabet: Alphabet | None = None, radius: int = 0) -> SlidingBlockCode:
        out_alphabet = out_alphabet or Alphabet.of_size(symbol + 1)
        return cls.from_table(dimension, radius, in_alphabet, out_alphabet, {}, symbol)

    def __call__(self, window: tuple[int, ...]) -> int:
        return self.rule(window)

    def rule_table(self) -> dict[tuple[int, ...], int]:
        """The full rule, evaluated on every input window."""
        size = (2 * self.radius + 1) ** self.dimension
        return {w: self.rule(w) for w in itertools.product(range(self.in_alphabet.size), repeat=size)}


@lru_cache(maxsize=None)
def _neighborhoods(outer: int, inner: int, d: int) -> tuple[tuple[int, ...], ...]:
    """For each cell of window ``outer - inner``, indices of its radius-``inner`` neighborhood
    inside the window of radius ``outer``."""
    index = window_index(outer, d)
    offsets = window_cells(inner, d)
    return tuple(tuple(index[tuple(a + b for a, b in zip(c, o))] for o in offsets)
                 for c in window_cells(outer - inner, d))


def apply_to_block(c: SlidingBlockCode, block: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Image of a window-n block: a window-(n - w) block."""
    rule = c.rule
    return tuple(rule(tuple(block[i] for i in nb)) for nb in _neighborhoods(n, c.radius, c.dimension))


def code_apply(c: SlidingBlockCode, l: BlockLanguage, out_resolution: int | None = None) -> BlockLanguage:
    if l.dimension != c.dimension:
        raise ValueError("code and language differ in dimension")
    if l.alphabet.size != c.in_alphabet.size:
        raise AlphabetMismatch("language alphabet is not the code's input alphabet")
    if out_resolution is None:
        out_resolution = l.resolution - c.radius
    if out_resolution < 0 or l.resolution < out_resolution + c.radius:
        raise ResolutionError(
            f"radius-{c.radius} code needs input resolution {max(out_resolution, 0) + c.radius}, "
            f"have {l.resolution}")
    n = out_resolution + c.radius
    src = restrict_language(l, n)
    blocks = frozenset(apply_to_block(c, b, n) for b in src.blocks)
    return BlockLanguage(l.dimension, c.out_alphabet, out_resolution, blocks)


def compose_codes(outer: SlidingBlockCode, inner: SlidingBlockCode) -> SlidingBlockCode:
    """The code ``outer . inner``: apply inner first."""
    if inner.out_alphabet.size != outer.in_alphabet.size:
        raise AlphabetMismatch(
            f"inner outputs {inner.out_alphabet.size} symbols, outer reads {outer.in_alphabet.size}")
    if inner.dimension != outer.dimension:
        raise ValueError("codes differ in dimension")
    d = inner.dimension
    radius = inner.radius + outer.radius
    inner_nbs = _neighborhoods(radius, inner.radius, d)
    inner_rule, outer_rule = inner.rule, outer.rule

    def rule(window):
        mid = tuple(inner_rule(tuple(window[i] for i in nb)) for nb in inner_nbs)
        return outer_rule(mid)

    return SlidingBlockCode(d, radius, inner.in_alphabet, outer.out_alphabet, rule)


def partition_refine(c: SlidingBlockCode, r: int,
                     max_symbols: int = DEFAULT_MAX_OUTPUT_SYMBOLS) -> SlidingBlockCode:
    """Join of the shifted partitions over the cube [-r, r]^d.

    The output symbol encodes the tuple of c-outputs over the cube, read in
    canonical order, as a mixed-radix number.
    """
    if r < 0:
        raise ValueError("refinement radius must be nonnegative")
    if r == 0:
        return c
    d = c.dimension
    k = c.out_alphabet.size
    span = (2 * r + 1) ** d
    if k ** span > max_symbols:
        raise ValueError(f"refined alphabet of {k}^{span} symbols exceeds cap {max_symbols}")
    names = tuple("(" + ",".join(c.out_alphabet.names[s] for s in t) + ")"
                  for t in itertools.product(range(k), repeat=span))
    radius = c.radius + r
    nbs = _neighborhoods(radius, c.radius, d)
    base = c.rule

    def rule(window):
        code = 0
        for nb in nbs:
            code = code * k + base(tuple(window[i] for i in nb))
        return code

    return SlidingBlockCode(d, radius, c.in_alphabet, Alphabet(names), rule)


def refined_center(refined: SlidingBlockCode, base: SlidingBlockCode, symbol: int) -> int:
    """The base-code output at the center cell of a refined output symbol."""
    r = refined.radius - base.radius
    span = (2 * r + 1) ** base.dimension
    k = base.out_alphabet.size
    digits = []
    for _ in range(span):
        symbol, rem = divmod(symbol, k)
        digits.append(rem)
    digits.reverse()
    return digits[span // 2]


def stability_radius(x: Sft, c: SlidingBlockCode) -> int:
    return x.diameter + c.radius


@dataclass(frozen=True)
class ImageWitness:
    input_block: Pattern
    position: Vector
    violated: Pattern


@dataclass(frozen=True)
class ImageCheck:
    ok: bool
    witness: ImageWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


def image_in_sft_check(l: BlockLanguage, c: SlidingBlockCode, x: Sft,
                       out_resolution: int | None = None) -> ImageCheck:
    """Does every coded block avoid x's forbidden patterns?

    The verdict at output resolution n reads only the input restricted to
    n + c.radius.
    """
    if l.resolution < stability_radius(x, c):
        raise ResolutionError(
            f"need input resolution >= {stability_radius(x, c)} (diameter + code radius), "
            f"have {l.resolution}")
    if out_resolution is None:
        out_resolution = l.resolution - c.radius
    if l.alphabet.size != c.in_alphabet.size:
        raise AlphabetMismatch("language alphabet is not the code's input alphabet")
    if c.out_alphabet.size != x.alphabet.size:
        raise AlphabetMismatch("code outputs are not symbols of the target SFT")
    d = l.dimension
    cells = window_cells(out_resolution, d)
    index = {cell: i for i, cell in enumerate(cells)}
    per_pattern = [(f, occurrences(f, cells, index)) for f in x.forbidden]
    n_in = out_resolution + c.radius
    src = restrict_language(l, n_in)
    for block in src.sorted_blocks():
        out = apply_to_block(c, block, n_in)
        for f, occs in per_pattern:
            for occ in occs:
                if all(out[i] == s for i, s in occ):
                    first = cells[occ[0][0]]
                    pos = tuple(a - b for a, b in zip(first, f.cells[0]))
                    return ImageCheck(False, ImageWitness(Pattern.block(block, n_in, d), pos, f))
    return ImageCheck(True)
