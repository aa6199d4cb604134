import itertools
import random

import pytest

from azenum.errors import InputError
from azenum.wqo import (
    Embedding,
    Word,
    block_split,
    column_word,
    decode_column_embedding,
    find_increasing_pair,
    format_word,
    is_star_embedded,
    is_subword,
    last_appearance_order,
    parse_word,
    rightmost_embedding,
)
from oracles import brute_star, brute_subword


def w(text):
    return Word(tuple(text))


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        for letters in itertools.product(alphabet, repeat=n):
            yield Word(letters)


# -- deletion order ----------------------------------------------------------


def test_subword_examples():
    assert is_subword(w("ab"), w("axb")).image == (0, 2)
    assert is_subword(w("ba"), w("ab")) is None
    assert is_subword(w(""), w("xyz")).image == ()
    assert is_subword(w(""), w("")).image == ()


def test_subword_matches_brute_force():
    rng = random.Random(30)
    for _ in range(300):
        w1 = Word(tuple(rng.choice("abc") for _ in range(rng.randint(0, 5))))
        w2 = Word(tuple(rng.choice("abc") for _ in range(rng.randint(0, 7))))
        got = is_subword(w1, w2)
        assert (got is not None) == (brute_subword(w1, w2) is not None)
        if got is not None:
            assert got.is_subword_witness(w1, w2)


def test_rightmost_embedding_dominates():
    rng = random.Random(31)
    for _ in range(200):
        w2 = Word(tuple(rng.choice("ab") for _ in range(rng.randint(1, 7))))
        n = rng.randint(1, len(w2))
        for combo in itertools.combinations(range(len(w2)), n):
            w1 = Word(tuple(w2.letters[p] for p in combo))
            rm = rightmost_embedding(w1, w2)
            assert all(rm.image[i] >= combo[i] for i in range(n))


# -- strong order ------------------------------------------------------------


def test_star_examples():
    assert is_star_embedded(w("ab"), w("aab")).image == (1, 2)
    assert is_star_embedded(w("ab"), w("aba")) is None
    for word in [w(""), w("a"), w("abcab")]:
        e = is_star_embedded(word, word)
        assert e.image == tuple(range(len(word)))


def test_star_empty_word_only_below_empty():
    assert is_star_embedded(w(""), w("")) is not None
    assert is_star_embedded(w(""), w("a")) is None


def test_star_implies_subword():
    rng = random.Random(32)
    for _ in range(500):
        w1 = Word(tuple(rng.choice("ab") for _ in range(rng.randint(0, 4))))
        w2 = Word(tuple(rng.choice("ab") for _ in range(rng.randint(0, 7))))
        e = is_star_embedded(w1, w2)
        if e is not None:
            assert is_subword(w1, w2) is not None
            assert e.is_subword_witness(w1, w2)


def test_star_decision_equals_brute_force_exhaustive():
    words = list(all_words("ab", 6))
    for w2 in words:
        for w1 in words:
            if len(w1) > len(w2):
                continue
            got = is_star_embedded(w1, w2)
            want = brute_star(w1, w2)
            assert (got is None) == (want is None), (w1, w2)
            if got is not None:
                assert got.is_star_witness(w1, w2)


def test_star_decision_equals_brute_force_sampled_3_letters():
    rng = random.Random(33)
    for _ in range(2000):
        w1 = Word(tuple(rng.choice("abc") for _ in range(rng.randint(0, 6))))
        w2 = Word(tuple(rng.choice("abc") for _ in range(rng.randint(0, 8))))
        assert (is_star_embedded(w1, w2) is None) == (brute_star(w1, w2) is None)


def test_star_partial_order_properties():
    words = list(all_words("ab", 4))
    below = {}
    for w1 in words:
        for w2 in words:
            e = is_star_embedded(w1, w2)
            if e is not None:
                below[(w1, w2)] = e
    # antisymmetry
    for (w1, w2) in below:
        if (w2, w1) in below:
            assert w1 == w2
    # transitivity with witness composition
    for (w1, w2), e12 in below.items():
        for w3 in words:
            if (w2, w3) in below:
                composed = e12.compose(below[(w2, w3)])
                assert composed.is_star_witness(w1, w3)


# -- column coding -----------------------------------------------------------


def test_block_split_example():
    blocks, trailing = block_split(w("abab"))
    assert blocks == [tuple("ab"), tuple("a")]
    assert trailing == "b"
    blocks, trailing = block_split(w("ab"))
    assert blocks == [(), ("a",)]
    assert trailing == "b"


def test_block_split_reassembles():
    rng = random.Random(34)
    for _ in range(200):
        word = Word(tuple(rng.choice("abc") for _ in range(rng.randint(1, 9))))
        blocks, trailing = block_split(word)
        assert tuple(x for b in blocks for x in b) + (trailing,) == word.letters


def test_column_word_heights():
    col = column_word(w("abab"))
    assert len(col) == 2
    assert col.letters[0] == ("a", "a")
    assert col.letters[1][0] == "b"
    assert repr(col.letters[1][1]) == "x"  # padding sentinel


def test_coding_soundness_random():
    # whenever the coded words compare in the deletion order, the decoded
    # witness is a valid strong-order witness
    rng = random.Random(35)
    hits = 0
    for _ in range(3000):
        w1 = Word(tuple(rng.choice("ab") for _ in range(rng.randint(1, 5))))
        w2 = Word(tuple(rng.choice("ab") for _ in range(rng.randint(1, 9))))
        if not w1.letters or not w2.letters:
            continue
        sig = (frozenset(w1.letters), last_appearance_order(w1))
        if sig != (frozenset(w2.letters), last_appearance_order(w2)):
            continue
        fprime = is_subword(column_word(w1), column_word(w2))
        if fprime is None:
            continue
        emb = decode_column_embedding(w1, w2, fprime)
        assert emb.is_star_witness(w1, w2)
        hits += 1
    assert hits > 50


# -- pair finders ------------------------------------------------------------


def test_higman_pair_example():
    r = find_increasing_pair([w("b"), w("ab"), w("aab")], "higman")
    assert (r.i, r.j) == (0, 1)
    assert r.embedding.is_subword_witness(w("b"), w("ab"))


def test_star_pair_examples():
    r = find_increasing_pair([w("a"), w("aa")], "star")
    assert (r.i, r.j) == (0, 1)
    assert r.embedding.image == (1,)

    r = find_increasing_pair([w("ab"), w("ba"), w("abab")], "star")
    assert (r.i, r.j) == (0, 2)
    assert r.embedding.image == (2, 3)


def test_pair_not_found_on_exhausted_stream():
    assert find_increasing_pair([w("ab"), w("ba")], "star") is None
    assert find_increasing_pair([], "higman") is None
    with pytest.raises(InputError):
        find_increasing_pair([], "nope")


def test_star_pair_terminates_on_random_streams():
    rng = random.Random(36)
    for _ in range(20):
        def stream():
            while True:
                yield Word(tuple(rng.choice("ab") for _ in range(rng.randint(1, 6))))

        capped = itertools.islice(stream(), 2000)
        r = find_increasing_pair(capped, "star")
        assert r is not None and r.i < r.j


def test_higman_pair_frontier_is_antichain():
    words = [w("ba"), w("ab"), w("bb"), w("aabb")]
    r = find_increasing_pair(words, "higman")
    assert (r.i, r.j) == (1, 3)


# -- text interface ----------------------------------------------------------


def test_parse_and_format_word():
    word = parse_word("a,b,a")
    assert word.letters == ("a", "b", "a")
    assert format_word(word) == "a,b,a"
    assert parse_word("") == Word(())
