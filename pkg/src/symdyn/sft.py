"""Shifts of finite type and their finite-resolution block languages.

All languages here are *locally* admissible: a block is kept when no forbidden
pattern occurs fully inside it. Whether it extends to a configuration of the
whole lattice is undecidable for d >= 2, so every language produced by this
module is an outer approximation of the true language.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .patterns import Alphabet, Pattern, Vector, Window, check_dimension, window_cells

DEFAULT_MAX_BLOCKS = 10**6


class BlockBudgetExceeded(RuntimeError):
    def __init__(self, limit: int, what: str = "blocks"):
        super().__init__(f"more than {limit} {what}; raise the budget to continue")
        self.limit = limit


@dataclass(frozen=True)
class Sft:
    dimension: int
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...] = ()

    def __post_init__(self):
        check_dimension(self.dimension)
        for f in self.forbidden:
            if f.dimension != self.dimension:
                raise ValueError(f"forbidden pattern {f} has dimension {f.dimension}")
            if f.is_empty():
                raise ValueError("empty forbidden pattern")
            for s in f.symbols:
                if s not in self.alphabet:
                    raise ValueError(f"symbol {s} of {f} not in alphabet")

    @classmethod
    def from_words(cls, alphabet_size: int, words: Sequence[Sequence[int]]) -> Sft:
        """1-dimensional SFT forbidding the given words."""
        return cls(1, Alphabet.of_size(alphabet_size), tuple(Pattern.word(w) for w in words))

    @property
    def diameter(self) -> int:
        if not self.forbidden:
            return 1
        return max(f.extent() for f in self.forbidden)

    def with_forbidden(self, *extra: Pattern) -> Sft:
        return Sft(self.dimension, self.alphabet, self.forbidden + tuple(extra))


@dataclass(frozen=True)
class BlockLanguage:
    """Set of blocks on the window [-n, n]^d.

    Blocks are stored as symbol tuples in canonical window order; use
    :meth:`patterns` for :class:`Pattern` objects.
    """

    dimension: int
    alphabet: Alphabet
    resolution: int
    blocks: frozenset[tuple[int, ...]] = field(default_factory=frozenset)

    def __post_init__(self):
        size = (2 * self.resolution + 1) ** self.dimension
        for b in self.blocks:
            if len(b) != size:
                raise ValueError(f"block of length {len(b)} on a window of {size} cells")

    @classmethod
    def from_patterns(cls, patterns, alphabet: Alphabet, resolution: int, dimension: int):
        cells = window_cells(resolution, dimension)
        blocks = set()
        for p in patterns:
            if p.cells != cells:
                raise ValueError(f"pattern {p} is not a full window-{resolution} block")
            blocks.add(p.symbols)
        return cls(dimension, alphabet, resolution, frozenset(blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, block) -> bool:
        if isinstance(block, Pattern):
            block = block.symbols
        return tuple(block) in self.blocks

    def sorted_blocks(self) -> list[tuple[int, ...]]:
        return sorted(self.blocks)

    def patterns(self) -> list[Pattern]:
        return [Pattern.block(b, self.resolution, self.dimension) for b in self.sorted_blocks()]

    @property
    def window(self) -> Window:
        return Window(self.resolution, self.dimension)


@dataclass(frozen=True)
class Empty:
    resolution: int


@dataclass(frozen=True)
class PeriodicWitness:
    pattern: Pattern  # fundamental domain [0, p_1) x ... x [0, p_d)
    period: Vector


@dataclass(frozen=True)
class Nonempty:
    witness: PeriodicWitness


@dataclass(frozen=True)
class Unknown:
    budget: int


EmptinessVerdict = Empty | Nonempty | Unknown


# -- enumeration --------------------------------------------------------------

def occurrences(f: Pattern, cells: Sequence[Vector],
                index: dict[Vector, int]) -> list[tuple[tuple[int, int], ...]]:
    """Every placement of f fully inside ``cells``, as (cell index, symbol) pairs."""
    last = f.cells[-1]
    out = []
    for c in cells:
        v = tuple(a - b for a, b in zip(c, last))
        occ = []
        for fc, s in zip(f.cells, f.symbols):
            i = index.get(tuple(x + y for x, y in zip(fc, v)))
            if i is None:
                break
            occ.append((i, s))
        else:
            out.append(tuple(occ))
    return out


def _group(n_slots: int, occs) -> list[list[tuple[tuple[int, ...], frozenset]]]:
    """File each occurrence under its largest slot, grouping equal slot tuples.

    A slot is checked right after it is filled, when every slot of an occurrence
    filed there is known; one set lookup then covers all forbidden patterns
    sharing those slots.
    """
    grouped: list[dict[tuple[int, ...], set]] = [{} for _ in range(n_slots)]
    for occ in occs:
        occ = sorted(occ)
        slots = tuple(i for i, _ in occ)
        grouped[slots[-1]].setdefault(slots, set()).add(tuple(s for _, s in occ))
    return [[(slots, frozenset(bad)) for slots, bad in g.items()] for g in grouped]


def _placement_checks(forbidden: Sequence[Pattern], cells: Sequence[Vector],
                      index: dict[Vector, int]):
    return _group(len(cells), (occ for f in forbidden for occ in occurrences(f, cells, index)))


def _dfs(size: int, nsym: int, checks) -> Iterator[tuple[int, ...]]:
    """Depth-first fill of ``size`` slots, yielding assignments in lexicographic order."""
    if size == 0:
        yield ()
        return
    word = [0] * size
    pos = 0
    word[0] = -1
    while pos >= 0:
        word[pos] += 1
        if word[pos] >= nsym:
            pos -= 1
            continue
        if any(tuple([word[i] for i in slots]) in bad for slots, bad in checks[pos]):
            continue
        if pos == size - 1:
            yield tuple(word)
        else:
            pos += 1
            word[pos] = -1


def iter_admissible(x: Sft, n: int) -> Iterator[tuple[int, ...]]:
    """Yield the locally admissible window-n blocks of x in canonical order."""
    if n < 0:
        raise ValueError("resolution must be nonnegative")
    cells = window_cells(n, x.dimension)
    index = {c: i for i, c in enumerate(cells)}
    checks = _placement_checks(x.forbidden, cells, index)
    return _dfs(len(cells), x.alphabet.size, checks)


def box_cells(sides: Sequence[int]) -> tuple[Vector, ...]:
    return tuple(itertools.product(*(range(s) for s in sides)))


def iter_admissible_box(x: Sft, sides: Sequence[int]) -> Iterator[Pattern]:
    """Locally admissible patterns on the box [0, s_1) x ... x [0, s_d)."""
    if len(sides) != x.dimension or min(sides) < 1:
        raise ValueError(f"bad box shape {tuple(sides)}")
    cells = box_cells(sides)
    index = {c: i for i, c in enumerate(cells)}
    checks = _placement_checks(x.forbidden, cells, index)
    for w in _dfs(len(cells), x.alphabet.size, checks):
        yield Pattern(x.dimension, cells, w)


def admissible_blocks(x: Sft, n: int, max_blocks: int = DEFAULT_MAX_BLOCKS) -> BlockLanguage:
    blocks = []
    for b in iter_admissible(x, n):
        blocks.append(b)
        if len(blocks) > max_blocks:
            raise BlockBudgetExceeded(max_blocks)
    return BlockLanguage(x.dimension, x.alphabet, n, frozenset(blocks))


def has_admissible_block(x: Sft, n: int) -> bool:
    return next(iter_admissible(x, n), None) is not None


# -- periodic witnesses -------------------------------------------------------

def _periods_with_max(d: int, k: int) -> list[Vector]:
    vecs = [p for p in itertools.product(range(1, k + 1), repeat=d) if max(p) == k]
    return sorted(vecs, key=lambda p: (math.prod(p), p))


def _torus_checks(forbidden: Sequence[Pattern], period: Vector):
    cells = list(itertools.product(*(range(p) for p in period)))
    index = {c: i for i, c in enumerate(cells)}
    occs = []
    for f in forbidden:
        for v in cells:
            occ: dict[int, int] = {}
            for fc, s in zip(f.cells, f.symbols):
                i = index[tuple((a + b) % p for a, b, p in zip(fc, v, period))]
                if occ.setdefault(i, s) != s:
                    break  # needs two symbols in one cell, never occurs
            else:
                occs.append(tuple(occ.items()))
    return cells, _group(len(cells), occs)


def find_periodic(x: Sft, period: Vector) -> PeriodicWitness | None:
    """Search for a configuration of x with the given period vector."""
    cells, checks = _torus_checks(x.forbidden, period)
    word = next(_dfs(len(cells), x.alphabet.size, checks), None)
    if word is None:
        return None
    return PeriodicWitness(Pattern(x.dimension, tuple(cells), word), tuple(period))


def periodic_witness_search(x: Sft, max_period: int) -> PeriodicWitness | None:
    """First periodic configuration found with all periods <= max_period.

    Periods are tried by growing maximum component, then volume, then
    lexicographically. A ``None`` result says nothing about emptiness.
    """
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    for k in range(1, max_period + 1):
        for period in _periods_with_max(x.dimension, k):
            w = find_periodic(x, period)
            if w is not None:
                return w
    return None


def verify_periodic(x: Sft, witness: PeriodicWitness) -> bool:
    """Check every placement of every forbidden pattern modulo the period."""
    table = witness.pattern.as_dict()
    period = witness.period
    for f in x.forbidden:
        for v in table:
            if all(table[tuple((a + b) % p for a, b, p in zip(fc, v, period))] == s
                   for fc, s in zip(f.cells, f.symbols)):
                return False
    return True


def emptiness_semidecide(x: Sft, budget_n: int) -> EmptinessVerdict:
    """Interleave the compactness check at n = 0, 1, ... with periodic search.

    Step k first asks whether window-k blocks exist (none means x is empty),
    then tries every period vector whose largest component is k + 1.
    """
    if budget_n < 0:
        raise ValueError("budget must be nonnegative")
    for k in range(budget_n + 1):
        if not has_admissible_block(x, k):
            return Empty(k)
        for period in _periods_with_max(x.dimension, k + 1):
            w = find_periodic(x, period)
            if w is not None:
                return Nonempty(w)
    return Unknown(budget_n)


# -- constructions ------------------------------------------------------------

def product_alphabet(a: Alphabet, b: Alphabet) -> Alphabet:
    return Alphabet(tuple(f"({x},{y})" for x in a.names for y in b.names))


def product_sft(a: Sft, b: Sft) -> Sft:
    """Product shift; the pair (i, j) is encoded as ``i * |B| + j``."""
    if a.dimension != b.dimension:
        raise ValueError("product of SFTs of different dimension")
    nb = b.alphabet.size
    na = a.alphabet.size
    forbidden = []
    for f in a.forbidden:
        for other in itertools.product(range(nb), repeat=len(f)):
            forbidden.append(Pattern(f.dimension, f.cells,
                                     tuple(s * nb + t for s, t in zip(f.symbols, other))))
    for f in b.forbidden:
        for other in itertools.product(range(na), repeat=len(f)):
            forbidden.append(Pattern(f.dimension, f.cells,
                                     tuple(t * nb + s for s, t in zip(f.symbols, other))))
    return Sft(a.dimension, product_alphabet(a.alphabet, b.alphabet), tuple(forbidden))


def project_language(l: BlockLanguage, factor_sizes: tuple[int, int], coordinate: int,
                     alphabet: Alphabet) -> BlockLanguage:
    """Project a product-alphabet language onto one factor (0 = first)."""
    nb = factor_sizes[1]
    if coordinate == 0:
        proj = {tuple(s // nb for s in b) for b in l.blocks}
    else:
        proj = {tuple(s % nb for s in b) for b in l.blocks}
    return BlockLanguage(l.dimension, alphabet, l.resolution, frozenset(proj))


def observed_transitions(l: BlockLanguage) -> set[tuple[int, int, int]]:
    """Triples (axis, i, j): some block has i at u and j at u + e_axis."""
    cells = window_cells(l.resolution, l.dimension)
    index = {c: i for i, c in enumerate(cells)}
    pairs = []
    for k in range(l.dimension):
        for c, i in index.items():
            nb = c[:k] + (c[k] + 1,) + c[k + 1:]
            if nb in index:
                pairs.append((k, i, index[nb]))
    seen = set()
    for b in l.blocks:
        for k, i, j in pairs:
            seen.add((k, b[i], b[j]))
    return seen


def transition_sft(l: BlockLanguage) -> Sft:
    """SFT forbidding every axis-adjacent pair never seen in the language."""
    if l.resolution < 1:
        raise ValueError("transition data needs resolution at least 1")
    if not l.blocks:
        raise ValueError("empty language exhibits no transitions")
    seen = observed_transitions(l)
    d = l.dimension
    origin = (0,) * d
    forbidden = []
    for k in range(d):
        e = tuple(1 if a == k else 0 for a in range(d))
        for i in range(l.alphabet.size):
            for j in range(l.alphabet.size):
                if (k, i, j) not in seen:
                    forbidden.append(Pattern.make({origin: i, e: j}, d))
    return Sft(d, l.alphabet, tuple(forbidden))


def higher_block_sft(l: BlockLanguage, max_blocks: int = DEFAULT_MAX_BLOCKS) -> Sft:
    """SFT whose forbidden set is every window-n block missing from the language."""
    cells = window_cells(l.resolution, l.dimension)
    total = l.alphabet.size ** len(cells)
    if total - len(l.blocks) > max_blocks:
        raise BlockBudgetExceeded(max_blocks, "forbidden blocks")
    forbidden = tuple(Pattern(l.dimension, cells, w)
                      for w in itertools.product(range(l.alphabet.size), repeat=len(cells))
                      if w not in l.blocks)
    return Sft(l.dimension, l.alphabet, forbidden)
