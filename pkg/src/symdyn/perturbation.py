"""Search for a proper sub-SFT that is close to a given SFT but has a different image.

Given W, a code c and a keep-resolution n, candidates W0 = W minus one extra
pattern are tried in a fixed order. A candidate is accepted when

* W0's window-n language equals W's (Hausdorff distance at most 2^-(n+1)),
  both as computed at n and as restricted from the top comparison resolution,
* W0 still has admissible blocks at the top comparison resolution, and
* the images of W and W0 under c differ at some resolution m <= image_budget.

Both images are computed once at the top resolution (image_budget plus the
code radius) and restricted down; per-resolution local languages are not
nested, and comparing them directly reports spurious differences. They are
still outer approximations, so results are flagged ``approximate``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .coding import SlidingBlockCode, code_apply
from .patterns import Alphabet, Pattern, occurs_in, window_cells
from .sft import (DEFAULT_MAX_BLOCKS, BlockLanguage, Sft, admissible_blocks, has_admissible_block,
                  iter_admissible_box, product_sft)
from .space import language_equal_at


@dataclass(frozen=True)
class PerturbationRequest:
    w: Sft
    code: SlidingBlockCode
    keep_resolution: int
    pattern_budget: int
    image_budget: int
    max_blocks: int = DEFAULT_MAX_BLOCKS

    def __post_init__(self):
        if self.keep_resolution < 0:
            raise ValueError("keep_resolution must be nonnegative")
        if self.pattern_budget < 1 or self.image_budget < 1:
            raise ValueError("budgets must be at least 1")


@dataclass(frozen=True)
class Found:
    w0: Sft
    excluded: Pattern
    agreement_resolution: int
    divergence_resolution: int
    witness: Pattern  # in the image of W, absent from the image of W0
    candidates_tried: int
    approximate: bool = True


@dataclass(frozen=True)
class NotFound:
    pattern_budget: int
    image_budget: int
    candidates_tried: int = 0


PerturbationResult = Found | NotFound


def image_language(w: Sft, c: SlidingBlockCode, m: int,
                   max_blocks: int = DEFAULT_MAX_BLOCKS) -> BlockLanguage:
    """Outer approximation of the window-m language of c(W)."""
    return code_apply(c, admissible_blocks(w, m + c.radius, max_blocks), m)


def box_shapes(d: int, max_cells: int) -> list[tuple[int, ...]]:
    """Box side-vectors with at most ``max_cells`` cells, by cell count then lexicographically."""
    shapes = [s for s in itertools.product(range(1, max_cells + 1), repeat=d)
              if math.prod(s) <= max_cells]
    return sorted(shapes, key=lambda s: (math.prod(s), s))


def candidate_patterns(w: Sft, pattern_budget: int):
    """Box patterns locally admissible in W, by size; within a size, symbols descending."""
    for shape in box_shapes(w.dimension, pattern_budget):
        pats = list(iter_admissible_box(w, shape))
        yield from reversed(pats)


def _divergence(w: Sft, w0: Sft, c: SlidingBlockCode, keep: int, image_budget: int,
                max_blocks: int):
    """First resolution where the images differ, or None.

    Returns None as well when the images already differ at or below ``keep``:
    then W0 is not close to W once extendability to the top resolution is
    taken into account.
    """
    top = max(image_budget, keep) + c.radius
    if not has_admissible_block(w0, top):
        return None  # W0 is provably empty
    lang = admissible_blocks(w, top, max_blocks)
    lang0 = admissible_blocks(w0, top, max_blocks)
    if not language_equal_at(lang, lang0, keep):
        return None
    for m in range(image_budget + 1):
        img = code_apply(c, lang, m)
        img0 = code_apply(c, lang0, m)
        if img.blocks != img0.blocks:
            missing = sorted(img.blocks - img0.blocks) or sorted(img0.blocks - img.blocks)
            return m, Pattern.block(missing[0], m, w.dimension)
    return None


def perturb_subsystem(req: PerturbationRequest) -> PerturbationResult:
    w, c, n = req.w, req.code, req.keep_resolution
    base = admissible_blocks(w, n, req.max_blocks)
    if not base.blocks:
        return NotFound(req.pattern_budget, req.image_budget)
    tried = 0
    for cand in candidate_patterns(w, req.pattern_budget):
        tried += 1
        w0 = w.with_forbidden(cand)
        if admissible_blocks(w0, n, req.max_blocks).blocks != base.blocks:
            continue
        hit = _divergence(w, w0, c, n, req.image_budget, req.max_blocks)
        if hit is not None:
            m, witness = hit
            return Found(w0, cand, n, m, witness, tried)
    return NotFound(req.pattern_budget, req.image_budget, tried)


def brute_force_blocks(x: Sft, n: int) -> BlockLanguage:
    """Window-n language by filtering every block, without incremental checks."""
    cells = window_cells(n, x.dimension)
    keep = set()
    for word in itertools.product(range(x.alphabet.size), repeat=len(cells)):
        p = Pattern(x.dimension, cells, word)
        if not any(occurs_in(f, p) for f in x.forbidden):
            keep.add(word)
    return BlockLanguage(x.dimension, x.alphabet, n, frozenset(keep))


def certify(req: PerturbationRequest, result: Found) -> bool:
    """Re-run the acceptance conditions of a Found result with brute-force enumeration."""
    w, w0, c = req.w, result.w0, req.code
    if not set(w.forbidden) <= set(w0.forbidden):
        return False
    n = result.agreement_resolution
    if not language_equal_at(brute_force_blocks(w0, n), brute_force_blocks(w, n), n):
        return False
    m = result.divergence_resolution
    if m > req.image_budget:
        return False
    top = max(req.image_budget, n) + c.radius
    lang, lang0 = brute_force_blocks(w, top), brute_force_blocks(w0, top)
    if not lang0.blocks or not language_equal_at(lang, lang0, n):
        return False
    img, img0 = code_apply(c, lang, m), code_apply(c, lang0, m)
    return result.witness.symbols in img.blocks and result.witness.symbols not in img0.blocks


def product_projection_check(factors: list[Sft], n: int,
                             max_blocks: int = DEFAULT_MAX_BLOCKS) -> bool:
    """Project the window-n language of the product onto each factor and compare.

    An empty factor empties the product; that case passes vacuously.
    """
    if not factors:
        raise ValueError("no factors")
    d = factors[0].dimension
    if any(f.dimension != d for f in factors):
        raise ValueError("factors differ in dimension")
    prod = factors[0]
    for f in factors[1:]:
        prod = product_sft(prod, f)
    lang = admissible_blocks(prod, n, max_blocks)
    if not lang.blocks:
        return any(not has_admissible_block(f, n) for f in factors)
    sizes = [f.alphabet.size for f in factors]
    for i, f in enumerate(factors):
        proj = project_factor(lang, sizes, i)
        if proj.blocks != admissible_blocks(f, n, max_blocks).blocks:
            return False
    return True


def project_factor(lang: BlockLanguage, sizes: list[int], i: int) -> BlockLanguage:
    """Coordinate i of an iterated product language (left-nested pairs, mixed radix)."""
    after = math.prod(sizes[i + 1:])
    blocks = frozenset(tuple((s // after) % sizes[i] for s in b) for b in lang.blocks)
    return BlockLanguage(lang.dimension, Alphabet.of_size(sizes[i]), lang.resolution, blocks)
