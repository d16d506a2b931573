import itertools
import random

import pytest

from oracles import brute_blocks, brute_box_count, brute_restrict, random_domino_sft, random_sft_1d
from symdyn.patterns import Alphabet, Pattern
from symdyn.sft import (BlockBudgetExceeded, BlockLanguage, Empty, Nonempty, Sft, Unknown,
                        admissible_blocks, emptiness_semidecide, higher_block_sft,
                        iter_admissible_box, periodic_witness_search, product_sft,
                        project_language, transition_sft, verify_periodic)

BIN = Alphabet.of_size(2)
ALL_HORIZONTAL = Sft(2, BIN, tuple(Pattern.make({(0, 0): a, (1, 0): b})
                                   for a, b in itertools.product(range(2), repeat=2)))


def test_full_shift_counts(full):
    assert len(admissible_blocks(full, 1)) == 8


def test_golden_counts(golden):
    assert len(admissible_blocks(golden, 0)) == 2
    assert len(admissible_blocks(golden, 1)) == 5
    lengths = [len(list(iter_admissible_box(golden, [k]))) for k in range(1, 5)]
    oracle = [sum("11" not in "".join(map(str, w)) for w in itertools.product(range(2), repeat=k))
              for k in range(1, 5)]
    assert lengths == oracle == [2, 3, 5, 8]


def test_hard_square_2x2(hard_square):
    assert len(list(iter_admissible_box(hard_square, [2, 2]))) == 7
    assert brute_box_count(hard_square, [2, 2]) == 7


@pytest.mark.parametrize("seed", range(25))
def test_blocks_match_brute_force(seed):
    rng = random.Random(seed)
    x = random_sft_1d(rng)
    for n in range(4):
        assert admissible_blocks(x, n).blocks == brute_blocks(x, n)


def test_blocks_in_canonical_order(golden):
    from symdyn.sft import iter_admissible
    seq = list(iter_admissible(golden, 2))
    assert seq == sorted(seq)


def test_block_cap_is_reported(full):
    with pytest.raises(BlockBudgetExceeded):
        admissible_blocks(full, 3, max_blocks=100)


@pytest.mark.parametrize("seed", range(15))
def test_nesting(seed):
    rng = random.Random(seed)
    x = random_sft_1d(rng)
    for n in range(4):
        upper = admissible_blocks(x, n + 1)
        assert brute_restrict(upper.blocks, n + 1, n, 1) <= admissible_blocks(x, n).blocks
    y = random_domino_sft(rng)
    upper = admissible_blocks(y, 1)
    assert brute_restrict(upper.blocks, 1, 0, 2) <= admissible_blocks(y, 0).blocks


def test_emptiness_examples(full):
    assert emptiness_semidecide(Sft.from_words(2, [[0], [1]]), 3) == Empty(0)
    v = emptiness_semidecide(ALL_HORIZONTAL, 3)
    assert v == Empty(1)
    # oracle: window 0 has no horizontal pair, window 1 has one in every row
    assert brute_blocks(ALL_HORIZONTAL, 0) and not brute_blocks(ALL_HORIZONTAL, 1)
    v = emptiness_semidecide(Sft(2, BIN), 3)
    assert isinstance(v, Nonempty)
    assert v.witness.period == (1, 1) and v.witness.pattern.symbols == (0,)


def test_emptiness_unknown_at_tiny_budget():
    # three letters, no two equal symbols at distance 1 or 2: every point has period 3
    words = [[a, b] for a in range(3) for b in range(3) if a == b]
    words += [[a, c, b] for a in range(3) for b in range(3) for c in range(3) if a == b]
    x = Sft.from_words(3, words)
    assert emptiness_semidecide(x, 0) == Unknown(0)
    v = emptiness_semidecide(x, 2)
    assert isinstance(v, Nonempty) and v.witness.period == (3,)


def test_periodic_witness_examples(golden):
    w = periodic_witness_search(golden, 3)
    assert w.period == (1,) and w.pattern.symbols == (0,)
    alt = Sft.from_words(2, [[0, 0], [1, 1]])
    w = periodic_witness_search(alt, 3)
    assert w.period == (2,) and w.pattern.symbols == (0, 1)
    assert verify_periodic(alt, w)
    assert periodic_witness_search(Sft.from_words(2, [[0], [1]]), 4) is None


@pytest.mark.parametrize("seed", range(20))
def test_no_false_emptiness(seed):
    x = random_domino_sft(random.Random(seed))
    w = periodic_witness_search(x, 3)
    for budget in range(4):
        v = emptiness_semidecide(x, budget)
        if w is not None:
            assert not isinstance(v, Empty)
        if isinstance(v, Empty):
            assert not brute_blocks(x, v.resolution)
        if isinstance(v, Nonempty):
            assert verify_periodic(x, v.witness)


def test_product_examples(golden, full):
    p = product_sft(full, full)
    assert p.alphabet.size == 4 and not p.forbidden
    assert len(admissible_blocks(p, 1)) == 4 ** 3
    gg = product_sft(golden, golden)
    assert len(list(iter_admissible_box(gg, [2]))) == 9
    empty = Sft.from_words(2, [[0], [1]])
    assert emptiness_semidecide(product_sft(golden, empty), 2) == Empty(0)


@pytest.mark.parametrize("seed", range(10))
def test_product_projection(seed):
    rng = random.Random(seed)
    a, b = random_sft_1d(rng, max_alphabet=2), random_sft_1d(rng, max_alphabet=2)
    lang = admissible_blocks(product_sft(a, b), 1)
    sizes = (a.alphabet.size, b.alphabet.size)
    assert project_language(lang, sizes, 0, a.alphabet).blocks == (
        admissible_blocks(a, 1).blocks if lang.blocks else frozenset())
    assert project_language(lang, sizes, 1, b.alphabet).blocks == (
        admissible_blocks(b, 1).blocks if lang.blocks else frozenset())


def test_transition_examples(golden, full):
    assert transition_sft(admissible_blocks(full, 1)).forbidden == ()
    t = transition_sft(admissible_blocks(golden, 1))
    assert t.forbidden == (Pattern.word([1, 1]),)
    zeros = BlockLanguage(1, BIN, 1, frozenset({(0, 0, 0)}))
    t = transition_sft(zeros)
    assert {str(f) for f in t.forbidden} == {"01", "10", "11"}
    assert admissible_blocks(t, 3).blocks == {(0,) * 7}


def test_transition_rejects_empty():
    with pytest.raises(ValueError):
        transition_sft(BlockLanguage(1, BIN, 1, frozenset()))


@pytest.mark.parametrize("seed", range(10))
def test_transition_contains_input(seed):
    x = random_domino_sft(random.Random(seed))
    lang = admissible_blocks(x, 1)
    if not lang.blocks:
        return
    t = transition_sft(lang)
    assert lang.blocks <= admissible_blocks(t, 1).blocks


def test_higher_block_examples(golden, full):
    assert higher_block_sft(admissible_blocks(full, 1)).forbidden == ()
    l = admissible_blocks(golden, 1)
    h = higher_block_sft(l)
    assert len(h.forbidden) == 3
    assert all("11" in str(f) for f in h.forbidden)
    assert admissible_blocks(h, 1).blocks == l.blocks
    none = BlockLanguage(1, BIN, 1, frozenset())
    assert emptiness_semidecide(higher_block_sft(none), 3) == Empty(1)


@pytest.mark.parametrize("seed", range(10))
def test_higher_block_outer_approximation(seed):
    rng = random.Random(seed)
    x = random_sft_1d(rng, max_alphabet=2)
    top = admissible_blocks(x, 3)
    for n in range(3):
        l = BlockLanguage(1, x.alphabet, n, frozenset(brute_restrict(top.blocks, 3, n, 1)))
        assert l.blocks <= admissible_blocks(higher_block_sft(l), n).blocks


def test_diameter():
    assert Sft(1, BIN).diameter == 1
    assert Sft.from_words(2, [[1, 1]]).diameter == 2
    assert Sft(2, BIN, (Pattern.make({(0, 0): 1, (2, 1): 0}),)).diameter == 3
