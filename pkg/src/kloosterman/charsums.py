"""Kloosterman sums over GF(2^r), their GL(t,q) relatives, and power moments.

Everything here is exact integer arithmetic.  The canonical character is
lambda(x) = (-1)^trace(x); a twist lambda_c(x) = lambda(cx) is available
throughout via the ``c`` argument.  Values for all a at fixed (m, c) are
cached on the field context, since the moment and histogram routines keep
coming back for them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .budget import Budget, default_budget
from .errors import InternalInconsistencyError
from .field import FieldCtx

GL_MAX_DIM = 6

# mul-row tables get big quadratically; above this, scalar ops or the
# vectorized path take over
_TABLE_Q_LIMIT = 256


def _mul_rows(ctx: FieldCtx) -> list[tuple[int, ...]]:
    def build():
        q = ctx.q
        return [tuple(ctx.mul(x, y) for y in range(q)) for x in range(q)]

    return ctx.memo("mul_rows", build)


def _lam_twist(ctx: FieldCtx, c: int) -> tuple[int, ...]:
    """Table x -> lambda(c x)."""
    def build():
        return tuple(ctx.lam(ctx.mul(c, x)) for x in range(ctx.q))

    return ctx.memo(("lam_twist", c), build)


def _check_nonzero(ctx: FieldCtx, value: int, name: str) -> None:
    if not 1 <= value < ctx.q:
        raise ValueError(f"{name} must be a nonzero element of GF({ctx.q})")


def kloosterman_m(
    ctx: FieldCtx, m: int, a: int, c: int = 1, budget: Budget | None = None
) -> int:
    """m-dimensional Kloosterman sum K_m(lambda_c; a) by direct summation.

    Sums lambda_c(a_1 + ... + a_m + a * (a_1 ... a_m)^{-1}) over nonzero
    m-tuples: (q-1)^m terms.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_nonzero(ctx, a, "a")
    _check_nonzero(ctx, c, "c")
    budget = budget or default_budget()
    q = ctx.q
    budget.check_loops((q - 1) ** m, f"K_{m} over GF({q})")
    if q > _TABLE_Q_LIMIT:
        if m != 1:
            raise NotImplementedError(f"m >= 2 needs q <= {_TABLE_Q_LIMIT}")
        return int(kloosterman_all(ctx, 1, c, budget)[a])

    mul = _mul_rows(ctx)
    inv = ctx.inv_table()
    lamc = _lam_twist(ctx, c)
    arow = mul[a]
    nz = range(1, q)
    total = 0
    for head in itertools.product(nz, repeat=m - 1):
        s, p = 0, 1
        for t in head:
            s ^= t
            p = mul[p][t]
        prow = mul[p]
        total += sum(lamc[s ^ alpha ^ arow[inv[prow[alpha]]]] for alpha in nz)
    return total


def kloosterman(ctx: FieldCtx, a: int, c: int = 1, budget: Budget | None = None) -> int:
    """Classical case m = 1."""
    return kloosterman_m(ctx, 1, a, c, budget)


def _gf_scalar_mul_vec(ctx: FieldCtx, s: int, vec: np.ndarray) -> np.ndarray:
    """s * vec elementwise in GF(2^r), Horner over the bits of s."""
    r, mod = ctx.r, ctx.modulus
    acc = np.zeros_like(vec)
    for bit in range(s.bit_length() - 1, -1, -1):
        acc <<= 1
        acc ^= mod * (acc >> r & 1)
        if s >> bit & 1:
            acc ^= vec
    return acc


def _kloosterman_all_vec(ctx: FieldCtx, c: int) -> tuple:
    """All K(lambda_c; a) at once for large q, vectorized over alpha."""
    q = ctx.q
    alpha = np.arange(1, q, dtype=np.int64)
    inv = np.array(ctx.inv_table(), dtype=np.int64)[alpha]
    lamc = np.array(_lam_twist(ctx, c), dtype=np.int64)
    vals = [None]
    for a in range(1, q):
        beta = alpha ^ _gf_scalar_mul_vec(ctx, a, inv)
        vals.append(int(lamc[beta].sum()))
    return tuple(vals)


def kloosterman_all(
    ctx: FieldCtx, m: int = 1, c: int = 1, budget: Budget | None = None
) -> tuple:
    """K_m(lambda_c; a) for every nonzero a, as a tuple indexed by a.

    Index 0 holds None; the sum is only defined for nonzero a.  Results are
    cached per (m, c) on the context.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_nonzero(ctx, c, "c")
    budget = budget or default_budget()
    q = ctx.q
    budget.check_loops((q - 1) ** (m + 1), f"K_{m} for all a over GF({q})")

    def build():
        if q > _TABLE_Q_LIMIT and m == 1:
            return _kloosterman_all_vec(ctx, c)
        return tuple([None] + [kloosterman_m(ctx, m, a, c, budget) for a in range(1, q)])

    return ctx.memo(("kloosterman_all", m, c), build)


def moment(
    ctx: FieldCtx, m: int, h: int, c: int = 1, budget: Budget | None = None
) -> int:
    """Power moment MK_m^h = sum over nonzero a of K_m(lambda_c; a)^h.

    h = 0 returns q - 1, one term per nonzero a.
    """
    if h < 0:
        raise ValueError("h must be >= 0")
    vals = kloosterman_all(ctx, m, c, budget)
    return sum(v**h for v in vals[1:])


@dataclass(frozen=True)
class MomentTable:
    """Power moments of a fixed Kloosterman family.

    values[i] holds MK_m^(h_step * i) for i = 0..h_max; the stride h_step
    is 2 for tables produced by the even-exponent recursion.  values[0] is
    always q - 1 (the empty-power convention: one term per nonzero a).
    """

    m: int
    h_max: int
    values: tuple[int, ...]
    source: str
    h_step: int = 1


def moment_table(
    ctx: FieldCtx, m: int, h_max: int, c: int = 1, budget: Budget | None = None
) -> MomentTable:
    """Brute-force moment table for h = 0..h_max."""
    vals = tuple(moment(ctx, m, h, c, budget) for h in range(h_max + 1))
    return MomentTable(m=m, h_max=h_max, values=vals, source="brute")


def allowed_values(q: int) -> list[int]:
    """All integers t with t = -1 (mod 4) and t^2 < 4q, sorted."""
    bound = isqrt(4 * q - 1)
    return [t for t in range(-bound, bound + 1) if t % 4 == 3]


def value_histogram(ctx: FieldCtx, budget: Budget | None = None) -> Counter:
    """Histogram of K(lambda; a) over nonzero a.

    Needs r >= 2: over GF(2) the lone value K = 1 falls outside the
    congruence class the histogram checks are built around.
    """
    if ctx.r < 2:
        raise ValueError("value histogram needs r >= 2")
    vals = kloosterman_all(ctx, 1, 1, budget)
    return Counter(vals[1:])


def _chain_sum(q: int, t: int, length: int) -> int:
    """Sum over chains t+1 >= j_1 >= ... >= j_{length-1} >= 2*length-1 of
    prod_v (q^(j_v - 2v) - 1); empty chains contribute 1."""
    def rec(v: int, upper: int, acc: int) -> int:
        if v == length:
            return acc
        return sum(
            rec(v + 1, j, acc * (q ** (j - 2 * v) - 1))
            for j in range(2 * length - 1, upper + 1)
        )

    return rec(1, t + 1, 1)


def gl_kloosterman(
    ctx: FieldCtx,
    t: int,
    a: int = 1,
    c: int = 1,
    method: str = "recursive",
    budget: Budget | None = None,
) -> int:
    """Kloosterman sum over GL(t,q): sum of lambda_c(Tr(g + a g^{-1})).

    Never enumerates the group.  method="recursive" runs the two-step
    recurrence seeded by K_GL(0) = 1; method="closed" evaluates the explicit
    chain-sum expansion (exact rationals inside, integer out).  t = 0 gives
    the empty-product value 1.
    """
    if not 0 <= t <= GL_MAX_DIM:
        raise ValueError(f"t must be in 0..{GL_MAX_DIM}")
    if t == 0:
        return 1
    q = ctx.q
    k1 = kloosterman_m(ctx, 1, a, c, budget)
    if method == "recursive":
        vals = [1]
        for s in range(1, t + 1):
            v = q ** (s - 1) * k1 * vals[s - 1]
            if s >= 2:
                v += q ** (2 * s - 2) * (q ** (s - 1) - 1) * vals[s - 2]
            vals.append(v)
        return vals[t]
    if method == "closed":
        pref = Fraction(q) ** ((t - 2) * (t + 1) // 2)
        total = 0
        for length in range(1, (t + 2) // 2 + 1):
            total += q**length * k1 ** (t + 2 - 2 * length) * _chain_sum(q, t, length)
        out = pref * total
        if out.denominator != 1:
            raise InternalInconsistencyError("closed GL sum is not an integer")
        return int(out)
    raise ValueError(f"unknown method {method!r}")


def twisted_sum(
    ctx: FieldCtx, m: int, beta: int, budget: Budget | None = None
) -> tuple[int, int]:
    """(measured, predicted) for sum over nonzero a of lambda(a*beta) K_m(lambda; a).

    The prediction is q*K_{m-1}(lambda; beta^{-1}) + (-1)^(m+1) for nonzero
    beta (with K_0(lambda; x) read as lambda(x)) and (-1)^(m+1) at beta = 0.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= beta < ctx.q:
        raise ValueError("beta must be a field element")
    vals = kloosterman_all(ctx, m, 1, budget)
    lam = ctx.lam
    mul = ctx.mul
    measured = sum(lam(mul(a, beta)) * vals[a] for a in range(1, ctx.q))
    sign = (-1) ** (m + 1)
    if beta == 0:
        predicted = sign
    else:
        b_inv = ctx.inv(beta)
        if m == 1:
            predicted = ctx.q * lam(b_inv) + sign
        else:
            predicted = ctx.q * kloosterman_m(ctx, m - 1, b_inv, 1, budget) + sign
    return measured, predicted


def artin_schreier_char_sum(
    ctx: FieldCtx,
    beta: int,
    variant: str = "a",
    b_param: int | None = None,
    budget: Budget | None = None,
) -> tuple[int, int]:
    """(measured, predicted) character sums over an Artin-Schreier fiber.

    Variant "a": sum of lambda(beta / (x^2 + x)) over x outside {0, 1},
    predicted K(lambda; beta) - 1.  Variant "b": sum of
    lambda(beta / (x^2 + x + b_param)) over all x, predicted
    -K(lambda; beta) - 1; needs b_param outside the image of x^2 + x
    (else the denominator has roots and the sum is a different object).
    """
    _check_nonzero(ctx, beta, "beta")
    if variant == "a":
        if b_param is not None:
            raise ValueError("variant 'a' takes no b_param")
        offset = None
    elif variant == "b":
        if b_param is None:
            raise ValueError("variant 'b' requires b_param")
        if not 0 <= b_param < ctx.q:
            raise ValueError("b_param must be a field element")
        if b_param in ctx.artin_schreier_image():
            raise ValueError("b_param must lie outside the image of x^2 + x")
        offset = b_param
    else:
        raise ValueError(f"unknown variant {variant!r}")
    mul, inv, lam = ctx.mul, ctx.inv, ctx.lam
    k1 = kloosterman_m(ctx, 1, beta, 1, budget)
    total = 0
    for x in range(ctx.q):
        den = mul(x, x) ^ x
        if offset is not None:
            den ^= offset
        elif den == 0:
            continue
        total += lam(mul(beta, inv(den)))
    predicted = (k1 - 1) if offset is None else (-k1 - 1)
    return total, predicted
