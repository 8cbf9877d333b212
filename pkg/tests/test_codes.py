import numpy as np
import pytest

from kloosterman.codes import (
    DEGENERATE_CASES,
    WeightDistribution,
    build_code,
    dual_codeword,
    dual_dimension,
    dual_distribution,
    dual_kernel,
    dual_weight,
    expected_dual_dimension,
    macwilliams_distribution,
    verify_delsarte,
    weight_distribution,
)
from kloosterman.field import make_field


def test_build_code_fields():
    code = build_code(make_field(3), "minus", 1)
    assert (code.q, code.scale, code.reduced_length, code.length) == (8, 8, 7, 56)
    assert code.coset_index == 0
    assert sum(code.histogram) == 56
    assert code.histogram == (8, 0, 0, 16, 0, 16, 0, 16)
    plus = build_code(make_field(1), "plus", 2)
    assert (plus.length, plus.coset_index) == (48, 0)


def test_build_code_validation():
    ctx = make_field(2)
    with pytest.raises(ValueError):
        build_code(ctx, "zero", 1)
    with pytest.raises(ValueError):
        build_code(ctx, "minus", 2)
    with pytest.raises(ValueError):
        build_code(ctx, "plus", 3)
    with pytest.raises(ValueError):
        build_code(ctx, "minus", 1, histogram="sampled")
    with pytest.raises(ValueError):
        build_code(ctx, "minus", 1, histogram="predicted", coordinates=True)


DUAL_DIMENSIONS = {
    ("minus", 1, 1): 0,
    ("minus", 1, 2): 1,
    ("minus", 1, 3): 3,
    ("minus", 3, 1): 1,
    ("plus", 2, 1): 0,
    ("plus", 2, 2): 2,
}


def test_dual_dimensions():
    for (family, n, r_exp), expected in DUAL_DIMENSIONS.items():
        ctx = make_field(r_exp)
        code = build_code(ctx, family, n)
        assert dual_dimension(code) == expected
        assert expected == expected_dual_dimension(family, n, ctx.q)
        kernel = dual_kernel(code)
        assert 0 in kernel
        assert len(kernel) == 2 ** (ctx.r - expected)
    assert ("minus", 1, 4) in DEGENERATE_CASES
    assert expected_dual_dimension("minus", 1, 16) == 4
    assert expected_dual_dimension("minus", 1, 4) == 1


def test_dual_weights_and_distribution():
    code = build_code(make_field(3), "minus", 1)
    for a in range(8):
        assert dual_weight(code, a) == dual_weight(code, a, mode="predicted")
    assert sum(dual_weight(code, a) for a in range(8)) == 192
    assert dual_distribution(code) == {0: 1, 16: 3, 32: 3, 48: 1}
    with pytest.raises(ValueError):
        dual_weight(code, 8)
    with pytest.raises(ValueError):
        dual_weight(code, 1, mode="estimated")


def test_dual_codewords_need_coordinates():
    plain = build_code(make_field(3), "minus", 1)
    with pytest.raises(ValueError):
        dual_codeword(plain, 1)
    code = build_code(make_field(3), "minus", 1, coordinates=True)
    for a in range(8):
        word = dual_codeword(code, a)
        assert len(word) == 56
        assert int(word.sum()) == dual_weight(code, a)
    # c(a) + c(b) = c(a+b): the map is additive
    s = dual_codeword(code, 3) ^ dual_codeword(code, 5)
    assert np.array_equal(s, dual_codeword(code, 6))


def test_verify_delsarte_small_cases():
    for family, n, r_exp in (
        ("minus", 1, 1),
        ("minus", 1, 2),
        ("minus", 1, 3),
        ("plus", 2, 1),
        ("plus", 2, 2),
    ):
        code = build_code(make_field(r_exp), family, n, coordinates=True)
        assert verify_delsarte(code)


def test_weight_distribution_frozen():
    code = build_code(make_field(3), "minus", 1)
    for method in ("direct", "closed_form", "macwilliams"):
        dist = weight_distribution(code, 4, method=method)
        assert isinstance(dist, WeightDistribution)
        assert dist.counts == (1, 8, 388, 2936, 58810)
        assert not dist.complete
    full = weight_distribution(code, 56)
    assert full.complete
    assert sum(full.counts) == 2**53
    # C_j = C_{N-j} for the minus family
    for j in range(57):
        assert full[j] == full[56 - j]


def test_weight_distribution_interface():
    code = build_code(make_field(2), "minus", 1)
    dist = weight_distribution(code, 3)
    assert len(dist) == 4
    assert dist.j_max == 3
    assert dist[0] == 1
    assert list(dist) == list(dist.counts)
    with pytest.raises(ValueError):
        weight_distribution(code, 3, method="sampled")
    # j_max clamps to the block length
    clamped = weight_distribution(code, code.length + 5)
    assert clamped.complete and clamped.j_max == code.length


def test_macwilliams_truncation_is_prefix():
    code = build_code(make_field(1), "plus", 2)
    full = macwilliams_distribution(code, code.length)
    short = macwilliams_distribution(code, 5)
    assert short == full[:6]
    assert weight_distribution(code, 5, method="direct").counts == short


def test_histogram_source_independence():
    ctx = make_field(2)
    enumerated = build_code(ctx, "minus", 1, histogram="enumerated")
    predicted = build_code(ctx, "minus", 1, histogram="predicted")
    assert enumerated.histogram == predicted.histogram
    assert enumerated.histogram_source == "enumerated"
    assert predicted.histogram_source == "predicted"
    a = weight_distribution(enumerated, 6).counts
    b = weight_distribution(predicted, 6).counts
    assert a == b
