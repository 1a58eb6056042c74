import itertools
import random

import pytest
from hypothesis import given, strategies as st

from hyperjac.modring import (
    MAX_LEVEL,
    Modulus,
    NotSymplecticError,
    as_matrix,
    brute_force_sp_count,
    chain_form,
    congruence_level,
    decode,
    determinant,
    encode,
    gamma_quotient_order,
    identity,
    is_symplectic,
    mat_mul,
    mat_pow,
    reduce,
    sp_group_order,
    standard_form,
    symplectic_basis_change,
    symplectic_inverse,
    transpose,
)


def naive_sp_count(g):
    """Pure-python count over F_2, independent of the numpy enumerator."""
    d = 2 * g
    e = chain_form(g)
    count = 0
    for bits in itertools.product((0, 1), repeat=d * d):
        a = tuple(tuple(bits[r * d:(r + 1) * d]) for r in range(d))
        if is_symplectic(a, e, Modulus(1)):
            count += 1
    return count


def test_modulus_range():
    assert Modulus(3).value == 8
    for bad in (0, MAX_LEVEL + 1, 1.5):
        with pytest.raises(ValueError):
            Modulus(bad)


def test_chain_form_shape():
    e = chain_form(2)
    assert e == ((0, 1, 0, 0), (-1, 0, 1, 0), (0, -1, 0, 1), (0, 0, -1, 0))
    assert transpose(e) == tuple(tuple(-x for x in row) for row in e)
    assert determinant(e) == 1


def test_standard_form_is_equivalent_to_chain_form():
    for g in (1, 2, 3, 4):
        e = chain_form(g)
        p = symplectic_basis_change(e)
        assert mat_mul(mat_mul(transpose(p), e), p) == standard_form(g)
        assert abs(determinant(p)) == 1


def test_group_orders_closed_form():
    assert sp_group_order(1, 1) == 6
    assert sp_group_order(2, 1) == 720
    assert sp_group_order(1, 2) == 48
    assert sp_group_order(1, 3) == 384
    assert gamma_quotient_order(1, 2) == 8
    assert gamma_quotient_order(2, 3) == 2**20
    assert gamma_quotient_order(3, 2) == 2**21
    assert gamma_quotient_order(2, 1) == 1


def test_brute_force_counts_agree_with_formula():
    assert brute_force_sp_count(1) == naive_sp_count(1) == sp_group_order(1, 1)
    assert brute_force_sp_count(2) == sp_group_order(2, 1)


def test_brute_force_is_basis_independent():
    assert brute_force_sp_count(2, standard_form(2)) == 720


def test_encode_known_bytes():
    assert encode(identity(2), Modulus(1)) == bytes([0b1001])
    a = ((1, 3), (0, 1))
    assert encode(a, Modulus(2)) == bytes([0b01_00_11_01])
    assert len(encode(identity(4), Modulus(3))) == 6


def test_encode_rejects_unreduced():
    with pytest.raises(ValueError):
        encode(((2, 0), (0, 1)), Modulus(1))
    with pytest.raises(ValueError):
        decode(b"\x00\x00", 2, Modulus(1))


def test_encode_roundtrip_random():
    rng = random.Random(11)
    for _ in range(1000):
        n = rng.randint(1, MAX_LEVEL)
        d = rng.choice((2, 4, 6, 8))
        m = Modulus(n)
        a = tuple(tuple(rng.randrange(m.value) for _ in range(d)) for _ in range(d))
        assert decode(encode(a, m), d, m) == a


small_matrix = st.integers(1, 3).flatmap(
    lambda g: st.lists(st.lists(st.integers(-20, 20), min_size=2 * g, max_size=2 * g),
                       min_size=2 * g, max_size=2 * g)
).map(as_matrix)


@given(small_matrix, st.integers(1, MAX_LEVEL))
def test_reduction_commutes_with_product(a, n):
    m = Modulus(n)
    b = transpose(a)
    assert reduce(mat_mul(a, b), m) == mat_mul(reduce(a, m), reduce(b, m), m)


@given(small_matrix)
def test_determinant_multiplicative(a):
    b = transpose(a)
    assert determinant(mat_mul(a, b)) == determinant(a) * determinant(b)


def test_mat_pow():
    a = ((1, 1), (0, 1))
    assert mat_pow(a, 5) == ((1, 5), (0, 1))
    assert mat_pow(a, 5, Modulus(2)) == ((1, 1), (0, 1))
    assert mat_pow(a, 0) == identity(2)


def test_symplectic_inverse():
    e = chain_form(1)
    t = ((1, -1), (0, 1))
    inv = symplectic_inverse(t, e)
    assert mat_mul(t, inv) == identity(2)
    with pytest.raises(NotSymplecticError):
        symplectic_inverse(((2, 0), (0, 1)), e)


def test_congruence_level():
    m = Modulus(3)
    assert congruence_level(identity(2), m) == 3
    assert congruence_level(((3, 0), (0, 1)), m) == 1
    assert congruence_level(((5, 4), (0, 1)), m) == 2
    assert congruence_level(((0, 1), (1, 0)), m) == 0
