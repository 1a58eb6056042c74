import random

import pytest
from hypothesis import given, strategies as st

from hyperjac.braid import BraidWord, pure_braid_generator, random_word
from hyperjac.homology import (
    braid_relations,
    cycle,
    generator_matrices,
    pairing,
    purity_mod2_property,
    rep_word,
    rep_word_by_products,
    symplecticity_property,
    transvection_matrix,
    verify_braid_relations,
)
from hyperjac.modring import Modulus, chain_form, determinant, identity, is_symplectic, mat_mul, reduce


def genus_and_word(max_len=25):
    return st.integers(1, 3).flatmap(
        lambda g: st.tuples(
            st.just(g),
            st.lists(st.integers(1, 2 * g).flatmap(lambda k: st.sampled_from((k, -k))), max_size=max_len).map(
                lambda ls, g=g: BraidWord(2 * g + 1, tuple(ls))
            ),
        )
    )


def test_genus_one_generators():
    gens = generator_matrices(1)
    assert gens[1] == ((1, -1), (0, 1))
    assert gens[2] == ((1, 0), (1, 1))
    assert mat_mul(gens[1], gens[-1]) == identity(2)


def test_transvection_action():
    g = 2
    e = chain_form(g)
    v = cycle(2, g)
    t = transvection_matrix(v, e)
    for x in ((1, 0, 0, 0), (0, 0, 1, 3), (2, -1, 5, 7)):
        tx = tuple(sum(t[r][c] * x[c] for c in range(4)) for r in range(4))
        expect = tuple(xi + pairing(x, v, e) * vi for xi, vi in zip(x, v))
        assert tx == expect
    with pytest.raises(ValueError):
        transvection_matrix((0, 0, 0, 0), e)


def test_chain_pairings():
    g = 3
    e = chain_form(g)
    for i in range(1, 2 * g + 1):
        for j in range(1, 2 * g + 1):
            expect = 1 if j == i + 1 else -1 if j == i - 1 else 0
            assert pairing(cycle(i, g), cycle(j, g), e) == expect


def test_pure_generator_example():
    w = pure_braid_generator(1, 3, 3)
    assert rep_word(w, 1) == ((3, -2), (2, -1))
    assert rep_word_by_products(w, 1) == ((3, -2), (2, -1))


def test_braid_relation_in_genus_one():
    lhs = rep_word(BraidWord(3, (1, 2, 1)), 1)
    assert lhs == rep_word(BraidWord(3, (2, 1, 2)), 1) == ((0, -1), (1, 0))


def test_relation_count():
    # 2g-1 braid relations plus the pairs with |i-j| >= 2
    assert [len(braid_relations(g)) for g in (1, 2, 3, 4)] == [1, 6, 15, 28]


def test_word_must_match_genus():
    with pytest.raises(ValueError):
        rep_word(BraidWord(4, (1,)), 1)


@given(genus_and_word())
def test_fast_path_matches_products(gw):
    g, w = gw
    assert rep_word(w, g) == rep_word_by_products(w, g)
    m = Modulus(3)
    assert rep_word(w, g, m) == reduce(rep_word(w, g), m)


@given(genus_and_word(15), st.data())
def test_representation_is_a_homomorphism(gw, data):
    g, u = gw
    letters = data.draw(st.lists(st.integers(1, 2 * g).flatmap(lambda k: st.sampled_from((k, -k))), max_size=15))
    v = BraidWord(2 * g + 1, tuple(letters))
    assert rep_word(u * v, g) == mat_mul(rep_word(u, g), rep_word(v, g))
    assert mat_mul(rep_word(u, g), rep_word(u.inverse(), g)) == identity(2 * g)


@given(genus_and_word())
def test_image_is_symplectic_with_unit_determinant(gw):
    g, w = gw
    a = rep_word(w, g)
    assert is_symplectic(a, chain_form(g))
    assert determinant(a) == 1


def test_reports_pass_and_fault():
    for g in (1, 2, 3, 4):
        assert verify_braid_relations(g).passed
    assert not verify_braid_relations(2, fault=True).passed
    r = purity_mod2_property(2, 400, seed=5)
    assert r.passed and r.seed == 5 and r.level == 1
    assert not purity_mod2_property(2, 400, seed=5, fault=True).passed
    assert symplecticity_property(3, 200, seed=1).passed
    assert not symplecticity_property(3, 200, seed=1, fault=True).passed


def test_purity_report_sees_pure_words():
    r = purity_mod2_property(1, 400, seed=2)
    pure = int(r.details[0].split("pure: ")[1].rstrip(")"))
    assert pure >= 100


def test_random_word_reduction_mod_two():
    rng = random.Random(9)
    for _ in range(100):
        w = random_word(rng, 5)
        assert rep_word(w, 2, Modulus(1)) == reduce(rep_word(w, 2), Modulus(1))
