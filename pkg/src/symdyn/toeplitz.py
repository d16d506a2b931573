"""Toeplitz points from bit sequences by coloring nested arithmetic progressions.

Step k colors, with bit omega(k), the progression of period 2^k through the
first still-uncolored integer in a fixed enumeration of Z. After k steps the
uncolored integers form a single coset of 2^k Z, so the progressions (and the
bases they pass through) depend only on the enumeration, never on omega.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .patterns import Alphabet, Pattern
from .sft import BlockLanguage
from .space import language_of_pattern

# guard against enumerations that never reach a residue class
MAX_ENUMERATION_SEARCH = 1 << 20


class EnumerationExhausted(RuntimeError):
    pass


class WindowNotFilled(ValueError):
    def __init__(self, cell: int, steps: int):
        super().__init__(f"cell {cell} is still uncolored after {steps} steps; supply a longer omega")
        self.cell = cell


class NoRepresentative(ValueError):
    def __init__(self, step: int):
        super().__init__(f"no cell of the step-{step} progression lies in the window")
        self.step = step


class InconsistentColoring(ValueError):
    pass


def default_enumeration() -> Iterator[int]:
    """0, 1, -1, 2, -2, ..."""
    yield 0
    for i in itertools.count(1):
        yield i
        yield -i


@dataclass(frozen=True)
class ToeplitzSpec:
    omega: tuple[int, ...] = ()
    enumeration: Sequence[int] | None = None  # None means the default enumeration

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.omega):
            raise ValueError("omega must be a bit sequence")
        if self.enumeration is not None and len(set(self.enumeration)) != len(self.enumeration):
            raise ValueError("enumeration repeats an integer")

    def integers(self) -> Iterable[int]:
        if self.enumeration is None:
            return default_enumeration()
        return iter(self.enumeration)


@dataclass(frozen=True)
class ColoringStructure:
    bases: tuple[int, ...]

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(2 ** k for k in range(1, len(self.bases) + 1))

    @property
    def steps(self) -> int:
        return len(self.bases)

    def step_of(self, x: int) -> int | None:
        """The step that colors x, or None if x is still uncolored."""
        for k, b in enumerate(self.bases, start=1):
            if (x - b) % (2 ** k) == 0:
                return k
        return None

    def residual(self) -> tuple[int, int]:
        """The uncolored coset as (residue, modulus)."""
        k = len(self.bases)
        if k == 0:
            return 0, 1
        m = 2 ** k
        return (self.bases[-1] + m // 2) % m, m


def coloring_structure(spec: ToeplitzSpec, steps: int) -> ColoringStructure:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    bases: list[int] = []
    residue, modulus = 0, 1
    for k in range(1, steps + 1):
        for count, x in enumerate(spec.integers()):
            if x % modulus == residue:
                break
            if count >= MAX_ENUMERATION_SEARCH:
                raise EnumerationExhausted(f"no uncolored integer found for step {k}")
        else:
            raise EnumerationExhausted(f"enumeration ran out before step {k}")
        bases.append(x)
        modulus *= 2
        # the other half of the old coset stays uncolored
        residue = (x + modulus // 2) % modulus
    return ColoringStructure(tuple(bases))


def toeplitz_encode(spec: ToeplitzSpec, radius: int) -> Pattern:
    """The point y_omega on [-radius, radius]."""
    structure = coloring_structure(spec, len(spec.omega))
    symbols = []
    for x in range(-radius, radius + 1):
        k = structure.step_of(x)
        if k is None:
            raise WindowNotFilled(x, len(spec.omega))
        symbols.append(spec.omega[k - 1])
    return Pattern.word(symbols, -radius)


def fill_steps(radius: int, spec: ToeplitzSpec | None = None) -> int:
    """Fewest steps after which every cell of [-radius, radius] is colored."""
    spec = spec or ToeplitzSpec()
    k = 0
    while True:
        residue, modulus = coloring_structure(spec, k).residual()
        if not any((x - residue) % modulus == 0 for x in range(-radius, radius + 1)):
            return k
        k += 1


def toeplitz_decode(p: Pattern, k_max: int, spec: ToeplitzSpec | None = None) -> tuple[int, ...]:
    """Read omega(1..k_max) back from an aligned window of y_omega."""
    radius = p.window_radius()
    if p.dimension != 1 or radius is None:
        raise ValueError("decoding needs a 1-dimensional pattern on [-N, N]")
    spec = spec or ToeplitzSpec()
    structure = coloring_structure(spec, k_max)
    by_cell = p.as_dict()
    bits = []
    for k, b in enumerate(structure.bases, start=1):
        period = 2 ** k
        first = -radius + (b + radius) % period
        seen = {by_cell[(x,)] for x in range(first, radius + 1, period)}
        if not seen:
            raise NoRepresentative(k)
        if len(seen) > 1:
            raise InconsistentColoring(f"progression {b} mod {period} carries symbols {sorted(seen)}")
        bits.append(seen.pop())
    return tuple(bits)


def orbit_language(p: Pattern, n: int) -> BlockLanguage:
    """Observed window-n blocks of the point; an inner approximation of its orbit closure."""
    return language_of_pattern(p, n, Alphabet.of_size(2))


def syndetic_check(p: Pattern, block: Pattern, gap: int) -> bool:
    """Does every gap-sided sub-box of p's window contain an occurrence of block?"""
    radius = p.window_radius()
    if radius is None:
        raise ValueError("pattern support must be a full window")
    side = 2 * radius + 1
    if gap < 1 or gap > side:
        raise ValueError(f"gap {gap} outside 1..{side}")
    if block.is_empty():
        raise ValueError("empty block")
    d = p.dimension
    table = p.as_dict()
    block = block.normalized()
    _, hi = block.bounds()
    hits = set()
    for corner in p.cells:
        if all(table.get(tuple(a + b for a, b in zip(c, corner))) == s
               for c, s in zip(block.cells, block.symbols)):
            hits.add(corner)
    # a sub-box [a, a + gap)^d contains the occurrence at corner v iff a <= v and v + hi < a + gap
    for a in itertools.product(range(-radius, radius - gap + 2), repeat=d):
        if not any(all(a[k] <= v[k] and v[k] + hi[k] < a[k] + gap for k in range(d)) for v in hits):
            return False
    return True
