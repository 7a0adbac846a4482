"""Free reduction, edge powers, Britton reduction and classification.

The independent machinery (coset normal form, bounded rewriting search,
rotation-based conjugacy oracle) lives in lamkit.acceptance; here it is
exercised on spot cases plus randomized words, while the acceptance
criterion sweeps the full bounded universe.
"""

import random

import pytest

from lamkit.acceptance import (
    bounded_rewriting_min_length,
    conjugacy_oracle,
    enumerate_words,
    normal_form,
    normal_form_length,
)
from lamkit.amalgam import (
    EDGE_CONJUGATE,
    IDENTITY,
    PSEUDO_ANOSOV_TYPE,
    AmalgamWord,
    EdgeWords,
    Syllable,
    amalgam_word,
    britton_reduce,
    classify_element,
    cyclic_decompose,
    format_word,
    free_inv,
    free_mul,
    free_reduce,
    is_britton_reduced,
    is_proper_power,
    parse_word,
    power_of_edge,
)
from lamkit.errors import EdgeWordError, ParameterError


# ---------------------------------------------------------------------------
# free words


def test_free_reduce_examples():
    assert free_reduce((1, -1)) == ()
    assert free_reduce((1, 2, -2, 1)) == (1, 1)
    assert free_reduce((3, -2, 2, -3, 1)) == (1,)


def test_word_times_inverse_is_trivial():
    rng = random.Random(4)
    for _ in range(50):
        word = free_reduce(
            tuple(rng.choice((1, -1, 2, -2, 3, -3)) for _ in range(rng.randint(0, 12)))
        )
        assert free_mul(word, free_inv(word)) == ()


def test_cyclic_decompose():
    conj, core = cyclic_decompose((1, 2, 3, -2, -1))
    assert conj == (1, 2) and core == (3,)
    assert cyclic_decompose((1, 2)) == ((), (1, 2))


def test_proper_power_detection():
    assert is_proper_power((1, 1))
    assert is_proper_power((1, 2, 1, 2))
    assert is_proper_power((2, 1, 1, -2))  # conjugate of a square
    assert not is_proper_power((1,))
    assert not is_proper_power((1, 2))
    assert not is_proper_power(())


def test_power_of_edge_basics():
    z = (1,)
    assert power_of_edge((1, 1, 1), z) == 3
    assert power_of_edge((-1, -1), z) == -2
    assert power_of_edge((), z) == 0
    assert power_of_edge((1, 2), z) is None
    assert power_of_edge((2,), z) is None


@pytest.mark.parametrize("z", [(1,), (1, 2), (2, -1), (1, 2, -1), (2, 1, 1, -2)])
def test_power_of_edge_sweep(z):
    if is_proper_power(z):
        with pytest.raises(EdgeWordError):
            power_of_edge((1,), z)
        return
    from lamkit.amalgam import free_pow

    for k in range(-20, 21):
        assert power_of_edge(free_pow(z, k), z) == k
    # appending a fresh letter lands outside the cyclic subgroup
    assert power_of_edge(free_mul(z, (3,)), z) is None


def test_edge_word_validation():
    with pytest.raises(EdgeWordError):
        EdgeWords(left=(), right=(1,))
    with pytest.raises(EdgeWordError):
        EdgeWords(left=(1, 1), right=(1,))


# ---------------------------------------------------------------------------
# britton reduction


def test_edge_power_absorbed_across_the_amalgam():
    word = amalgam_word([("L", (1, 1)), ("R", (2,))])
    reduced = britton_reduce(word)
    assert reduced.syllables == (Syllable("R", (1, 1, 2)),)


def test_trivial_syllable_merges_neighbors():
    word = amalgam_word([("L", (2,)), ("R", ()), ("L", (3,))])
    reduced = britton_reduce(word)
    assert reduced.syllables == (Syllable("L", (2, 3)),)


def test_identity_collapses_to_empty_word():
    word = amalgam_word([("L", (1,)), ("R", (-1,))])
    assert britton_reduce(word).is_identity()


def test_reduction_is_idempotent_and_non_increasing():
    rng = random.Random(8)
    universe = enumerate_words(max_syllables=3, rank=2, max_letters=2)
    for word in rng.sample(universe, 300):
        reduced = britton_reduce(word)
        assert is_britton_reduced(reduced)
        assert reduced.syllable_length <= word.syllable_length
        again = britton_reduce(reduced)
        assert again.syllables == reduced.syllables


def test_reduced_word_represents_the_same_element():
    # the coset normal form is a complete invariant; it must agree before
    # and after reduction
    rng = random.Random(13)
    universe = enumerate_words(max_syllables=3, rank=2, max_letters=2)
    for word in rng.sample(universe, 300):
        reduced = britton_reduce(word)
        assert normal_form(word) == normal_form(reduced)
        assert reduced.syllable_length == normal_form_length(word)


def test_reduced_length_matches_bounded_rewriting_search():
    rng = random.Random(23)
    universe = enumerate_words(max_syllables=3, rank=2, max_letters=1)
    for word in rng.sample(universe, 60):
        assert britton_reduce(word).syllable_length == bounded_rewriting_min_length(word)


def test_non_default_edge_word():
    edge = EdgeWords(left=(1, 2), right=(1, 2))
    word = amalgam_word([("L", (1, 2, 1, 2)), ("R", (3,))], edge)
    reduced = britton_reduce(word)
    assert reduced.syllables == (Syllable("R", (1, 2, 1, 2, 3)),)


# ---------------------------------------------------------------------------
# classification


def test_edge_power_is_edge_conjugate():
    word = amalgam_word([("L", (1, 1, 1, 1, 1))])
    assert classify_element(word) == EDGE_CONJUGATE


def test_conjugated_edge_power_is_edge_conjugate():
    word = amalgam_word([("L", (2, 1, 1, 1, 1, 1, -2))])
    assert classify_element(word) == EDGE_CONJUGATE


def test_two_syllable_word_is_pseudo_anosov_type():
    word = amalgam_word([("L", (2,)), ("R", (3,))])
    assert classify_element(word) == PSEUDO_ANOSOV_TYPE
    assert conjugacy_oracle(word) == PSEUDO_ANOSOV_TYPE


def test_identity_classification():
    assert classify_element(amalgam_word([])) == IDENTITY
    assert classify_element(amalgam_word([("L", (1,)), ("R", (-1,))])) == IDENTITY


def test_classification_is_a_conjugacy_invariant():
    rng = random.Random(31)
    universe = enumerate_words(max_syllables=3, rank=2, max_letters=2)
    for word in rng.sample(universe, 120):
        label = classify_element(word)
        sylls = word.syllables
        # cyclic permutation of syllables
        for r in range(1, len(sylls)):
            rotated = AmalgamWord(sylls[r:] + sylls[:r], word.edge)
            assert classify_element(rotated) == label
        # conjugation by a single letter on either side
        letter = rng.choice((1, -1, 2, -2))
        factor = rng.choice(("L", "R"))
        conjugated = AmalgamWord(
            (Syllable(factor, (letter,)),) + sylls + (Syllable(factor, (-letter,)),),
            word.edge,
        )
        assert classify_element(conjugated) == label


def test_classification_matches_rotation_oracle_spotwise():
    rng = random.Random(37)
    universe = enumerate_words(max_syllables=3, rank=2, max_letters=2)
    for word in rng.sample(universe, 200):
        assert classify_element(word) == conjugacy_oracle(word)


# ---------------------------------------------------------------------------
# parsing and formatting


def test_parse_and_format_roundtrip():
    word = parse_word("L:g1^2 R:g3 L:z^-1", rank=4)
    assert word.syllables == (
        Syllable("L", (1, 1)),
        Syllable("R", (3,)),
        Syllable("L", (-1,)),
    )
    assert format_word(word) == "L:g1^2 R:g3 L:g1^-1"
    assert format_word(britton_reduce(amalgam_word([]))) == "1"


def test_parse_expands_edge_word():
    edge = EdgeWords(left=(1, 2), right=(2,))
    word = parse_word("L:z^2 R:z^-1", rank=4, edge=edge)
    assert word.syllables == (Syllable("L", (1, 2, 1, 2)), Syllable("R", (-2,)))


def test_parse_errors():
    with pytest.raises(ParameterError):
        parse_word("X:g1", rank=4)
    with pytest.raises(ParameterError):
        parse_word("L:g9", rank=4)
    with pytest.raises(ParameterError):
        parse_word("L:what", rank=4)
    with pytest.raises(ParameterError):
        parse_word("L:g0", rank=4)
