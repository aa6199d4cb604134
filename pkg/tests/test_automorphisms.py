import random

import pytest

from azenum.automorphisms import (
    AutWord,
    BetaStar,
    Perm,
    alpha_word,
    apply_word,
    check_coset_welldefined,
    extend_automorphism,
    finite_automorphism_from_word,
    verify_automorphism,
    word_from_json,
    word_to_json,
)
from azenum.central_product import CPContext
from azenum.errors import InputError
from azenum.groups import catalog_group, make_kgroup


def make_ctx(name):
    table, analysis, default_k = catalog_group(name)
    return CPContext(make_kgroup(table, analysis, default_k))


@pytest.fixture(scope="module")
def c4k():
    return make_ctx("C4")


@pytest.fixture(scope="module")
def c2k():
    return make_ctx("C2")


@pytest.fixture(scope="module")
def q8k():
    return make_ctx("Q8")


def word(*gens):
    return AutWord(tuple(gens))


# -- permutations -----------------------------------------------------------


def test_transposition_moves_entry(c4k):
    g = c4k.group.index_of_name("g")
    swap = Perm.from_mapping({0: 1, 1: 0})
    assert apply_word(c4k, word(swap), c4k.embed(g, 0)) == c4k.embed(g, 1)
    assert apply_word(c4k, word(swap), c4k.embed(g, 2)) == c4k.embed(g, 2)


def test_perm_rejects_non_bijection():
    with pytest.raises(InputError):
        Perm.from_mapping({0: 1})
    with pytest.raises(InputError):
        Perm.from_cycles([[0, 1], [1, 2]])


def test_perm_cycles_round_trip():
    p = Perm.from_cycles([[0, 3, 5], [1, 2]])
    assert Perm.from_cycles(p.cycles()) == p
    assert apply_inv_is_identity(p)


def apply_inv_is_identity(p):
    m = p.mapping()
    inv = p.inverse().mapping()
    return all(inv[t] == s for s, t in m.items())


def test_perm_is_homomorphism_random(q8k):
    rng = random.Random(20)
    p = Perm.from_cycles([[0, 2, 1], [3, 4]])
    w = word(p)
    for _ in range(40):
        x = q8k.make({c: rng.randrange(8) for c in rng.sample(range(5), 2)})
        y = q8k.make({c: rng.randrange(8) for c in rng.sample(range(5), 2)})
        assert apply_word(q8k, w, q8k.multiply(x, y)) == q8k.multiply(
            apply_word(q8k, w, x), apply_word(q8k, w, y)
        )


# -- ladder maps ------------------------------------------------------------


def test_beta_star_pinned_action(c4k):
    # a single entry at the first window slot fans out to all other slots
    g = c4k.group.index_of_name("g")
    bs = BetaStar(tuple(range(6)))  # exponent 4 => window size 6
    img = apply_word(c4k, word(bs), c4k.embed(g, 0))
    assert img == c4k.make({c: g for c in range(1, 6)})


def test_beta_star_fixes_embedded_k(c4k):
    bs = BetaStar(tuple(range(6)))
    for k in c4k.k_list:
        assert apply_word(c4k, word(bs), c4k.embed_k(k)) == c4k.embed_k(k)


def test_beta_star_self_inverse_exhaustive(c4k):
    bs = word(BetaStar(tuple(range(6))))
    assert c4k.gamma_n_order(6) == 128
    for x in c4k.all_cosets(6):
        assert apply_word(c4k, bs, apply_word(c4k, bs, x)) == x


def test_beta_star_wrong_arity_rejected(c4k):
    with pytest.raises(InputError):
        apply_word(c4k, word(BetaStar((0, 1, 2))), c4k.identity)
    with pytest.raises(InputError):
        BetaStar((0, 0, 1, 2, 3, 4))


def test_beta_star_is_automorphism(c4k, q8k):
    r = verify_automorphism(c4k, word(BetaStar(tuple(range(6)))), 6)
    assert r.ok and r.exhaustive and r.size == 128
    r = verify_automorphism(q8k, word(BetaStar((0, 2, 3, 1, 5, 4))), 6)
    assert r.ok


def test_wrong_window_size_is_representative_dependent(c4k, c2k):
    # one slot short of exponent+2: the raw action does not descend
    assert check_coset_welldefined(c4k, tuple(range(5))) is not None
    assert check_coset_welldefined(c2k, tuple(range(3))) is not None
    # the correct arity shows no dependence
    assert check_coset_welldefined(c4k, tuple(range(6))) is None
    assert check_coset_welldefined(c2k, tuple(range(4))) is None


# -- words ------------------------------------------------------------------


def test_empty_word_is_identity(q8k):
    rng = random.Random(21)
    for _ in range(10):
        x = q8k.make({c: rng.randrange(8) for c in rng.sample(range(4), 2)})
        assert apply_word(q8k, word(), x) == x


def test_word_inverse_property(c4k):
    rng = random.Random(22)
    w = word(
        BetaStar((0, 2, 3, 4, 5, 1)),
        Perm.from_cycles([[0, 4, 2]]),
        BetaStar(tuple(range(6))),
    )
    wi = w.inverse()
    for _ in range(30):
        x = c4k.make({c: rng.randrange(4) for c in rng.sample(range(6), 3)})
        assert apply_word(c4k, wi, apply_word(c4k, w, x)) == x
        assert apply_word(c4k, w, apply_word(c4k, wi, x)) == x


def test_word_json_round_trip():
    w = word(Perm.from_cycles([[0, 1], [2, 5, 3]]), BetaStar((4, 0, 1, 6)))
    assert word_from_json(word_to_json(w)) == w
    with pytest.raises(InputError):
        word_from_json([{"nope": []}])


# -- the copy words ---------------------------------------------------------


def test_alpha_word_c2_example(c2k):
    g = 1
    w = alpha_word(c2k, [2, 3], i0=0, j0=1)
    assert apply_word(c2k, w, c2k.embed(g, 0)) == c2k.make({0: g, 2: g, 3: g})
    # trivial-at-I-and-j0 inputs keep their own entry at i0
    assert apply_word(c2k, w, c2k.identity) == c2k.identity


def test_alpha_word_c4_example(c4k):
    g = c4k.group.index_of_name("g")
    w = alpha_word(c4k, [1, 2, 3, 4], i0=0, j0=5)
    assert apply_word(c4k, w, c4k.embed(g, 0)) == c4k.make(
        {c: g for c in range(5)}
    )
    g2 = c4k.group.index_of_name("g2")
    assert apply_word(c4k, w, c4k.embed(g2, 0)) == c4k.make(
        {c: g2 for c in range(5)}
    )


def test_alpha_word_two_blocks(c2k):
    g = 1
    w = alpha_word(c2k, [2, 3, 4, 5], i0=0, j0=1)
    assert apply_word(c2k, w, c2k.embed(g, 0)) == c2k.make(
        {0: g, 2: g, 3: g, 4: g, 5: g}
    )


def test_alpha_word_is_automorphism(c2k):
    w = alpha_word(c2k, [2, 3], i0=0, j0=1)
    r = verify_automorphism(c2k, w, 4)
    assert r.ok and r.exhaustive


def test_alpha_word_validation(c4k):
    with pytest.raises(InputError):
        alpha_word(c4k, [1, 2, 3], i0=0, j0=5)  # exponent must divide |I|
    with pytest.raises(InputError):
        alpha_word(c4k, [1, 2, 3, 4], i0=1, j0=5)
    with pytest.raises(InputError):
        alpha_word(c4k, [1, 2, 3, 4], i0=0, j0=0)


# -- verification -----------------------------------------------------------


def test_verify_rejects_out_of_range_word(c4k):
    with pytest.raises(InputError):
        verify_automorphism(c4k, word(Perm.from_mapping({0: 6, 6: 0})), 4)


def test_verify_sampled_path(q8k):
    # level 4: 512 elements, 512^2 pairs exceeds the exhaustive cap
    w = word(Perm.from_cycles([[0, 1, 2]]))
    r = verify_automorphism(q8k, w, 4, sample_pairs=500, rng=random.Random(5))
    assert r.ok and not r.exhaustive and r.pairs_checked == 500


def test_double_beta_star_is_identity_word(c4k):
    bs = BetaStar(tuple(range(6)))
    w = word(bs, bs)
    for x in c4k.all_cosets(6):
        assert apply_word(c4k, w, x) == x


# -- extension --------------------------------------------------------------


def test_extend_identity(c4k):
    phi = finite_automorphism_from_word(c4k, word(), 1)
    ext = extend_automorphism(c4k, phi, 3)
    assert all(ext.mapping[x] == x for x in c4k.all_cosets(3))


def test_extend_conjugation_is_automorphism(c4k):
    # conjugation by a fixed element, defined on level 2, extended to level 3
    g = c4k.embed(c4k.group.index_of_name("g"), 0)
    gi = c4k.inverse(g)
    phi = {
        x: c4k.multiply(g, c4k.multiply(x, gi)) for x in c4k.all_cosets(2)
    }
    from azenum.automorphisms import FiniteAutomorphism

    ext = extend_automorphism(c4k, FiniteAutomorphism(2, phi), 3)
    dom = c4k.all_cosets(3)
    assert len(set(ext.mapping.values())) == len(dom)
    for x in dom[:64]:
        for y in dom[:64]:
            assert ext.mapping[c4k.multiply(x, y)] == c4k.multiply(
                ext.mapping[x], ext.mapping[y]
            )
    # the extension agrees with level-3 conjugation by the same element
    for x in dom:
        assert ext.mapping[x] == c4k.multiply(g, c4k.multiply(x, gi))


def test_extend_requires_k_fixed(q8k):
    # a map sending the embedded -1 elsewhere cannot extend centrally
    minus1 = q8k.embed_k(1)
    i_img = q8k.embed(q8k.group.index_of_name("i"), 0)
    mapping = {x: x for x in q8k.all_cosets(1)}
    mapping[minus1], mapping[i_img] = mapping[i_img], mapping[minus1]
    from azenum.automorphisms import FiniteAutomorphism

    with pytest.raises(InputError):
        extend_automorphism(q8k, FiniteAutomorphism(1, mapping), 2)


def test_extend_level_must_grow(c4k):
    phi = finite_automorphism_from_word(c4k, word(), 2)
    with pytest.raises(InputError):
        extend_automorphism(c4k, phi, 2)
