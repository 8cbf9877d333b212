import pytest

from kloosterman.errors import UnsupportedFieldError
from kloosterman.field import (
    MODULUS_TABLE,
    FieldCtx,
    is_irreducible,
    make_field,
    poly_degree,
    poly_str,
)


def test_modulus_table_entries_are_irreducible_of_right_degree():
    assert sorted(MODULUS_TABLE) == list(range(1, 13))
    for r, modulus in MODULUS_TABLE.items():
        assert poly_degree(modulus) == r
        assert is_irreducible(modulus)


def test_poly_str():
    assert poly_str(0b11) == "x+1"
    assert poly_str(0b1011) == "x^3+x+1"
    assert poly_str(0) == "0"
    assert poly_str(1) == "1"


def test_make_field_shares_instances():
    assert make_field(3) is make_field(3)
    assert make_field(3) is not make_field(3, 0b1101)
    assert make_field(3) == FieldCtx(3)
    assert make_field(3) != make_field(4)


def test_rejects_bad_degrees_and_moduli():
    with pytest.raises(UnsupportedFieldError):
        FieldCtx(0)
    with pytest.raises(UnsupportedFieldError):
        FieldCtx(13)
    with pytest.raises(UnsupportedFieldError):
        FieldCtx(3, 0b1111)  # x^3+x^2+x+1 = (x+1)(x^2+1): reducible
    with pytest.raises(UnsupportedFieldError):
        FieldCtx(3, 0b111)  # wrong degree


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_arithmetic_axioms_exhaustive(r):
    ctx = make_field(r)
    q = ctx.q
    for x in range(q):
        for y in range(q):
            assert ctx.mul(x, y) == ctx.mul(y, x)
            assert ctx.add(x, y) == x ^ y
            for z in range(0, q, 3):
                assert ctx.mul(x, y ^ z) == ctx.mul(x, y) ^ ctx.mul(x, z)
    for x in range(1, q):
        assert ctx.mul(x, ctx.inv(x)) == 1
        assert ctx.inv(x) == ctx.pow(x, q - 2)
        assert ctx.pow(x, q - 1) == 1


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_trace_and_character(r):
    ctx = make_field(r)
    q = ctx.q
    zeros = 0
    for x in range(q):
        assert ctx.trace(x) in (0, 1)
        assert ctx.frobenius(x) == ctx.mul(x, x) == ctx.square(x)
        assert ctx.trace(ctx.frobenius(x)) == ctx.trace(x)
        assert ctx.lam(x) == (-1) ** ctx.trace(x)
        zeros += ctx.trace(x) == 0
        for y in range(q):
            assert ctx.trace(x ^ y) == ctx.trace(x) ^ ctx.trace(y)
    assert zeros == q // 2


@pytest.mark.parametrize("r", list(range(1, 9)))
def test_artin_schreier_image_is_trace_kernel(r):
    ctx = make_field(r)
    image = ctx.artin_schreier_image()
    assert image == {ctx.square(x) ^ x for x in range(ctx.q)}
    assert image == {x for x in range(ctx.q) if ctx.trace(x) == 0}


def test_alternative_modulus_gives_isomorphic_field():
    ctx = make_field(3, 0b1101)  # x^3+x^2+1
    assert ctx.q == 8
    assert sum(ctx.trace(x) == 0 for x in range(8)) == 4
    for x in range(1, 8):
        assert ctx.mul(x, ctx.inv(x)) == 1


def test_inv_table_matches_inv():
    ctx = make_field(6)
    table = ctx.inv_table()
    assert table[0] is None or table[0] == 0  # index 0 is a placeholder
    assert all(table[x] == ctx.inv(x) for x in range(1, ctx.q))


def test_large_field_trace_is_additive():
    ctx = make_field(12)
    pairs = [(5, 9), (100, 2000), (4095, 1), (1234, 987)]
    for x, y in pairs:
        assert ctx.trace(x ^ y) == ctx.trace(x) ^ ctx.trace(y)
