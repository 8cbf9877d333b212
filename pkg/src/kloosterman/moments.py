"""Power-moment machinery: the Pless identity and the recursions it yields.

The recursions express MK^h (resp. MK_2^h, MK^{2h}) through lower moments
plus an exactly-divisible correction assembled from a code's weight
distribution.  Intermediate values are exact rationals; a non-integral
result raises, since it can only mean the inputs were inconsistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .budget import Budget
from .charsums import MomentTable, moment
from .codes import CodeInstance, WeightDistribution, dual_weight, weight_distribution
from .errors import InternalInconsistencyError


def binom(b: int, a: int) -> int:
    """Binomial with the source's convention: 0 whenever a < 0 or a > b."""
    if a < 0 or a > b:
        return 0
    return comb(b, a)


def stirling2(h: int, t: int) -> int:
    """Stirling number of the second kind, by finite differences of j^h."""
    if h < 0 or t < 0:
        raise ValueError("h and t must be >= 0")
    total = sum((-1) ** (t - j) * comb(t, j) * j**h for j in range(t + 1))
    out, rem = divmod(total, factorial(t))
    if rem:
        raise InternalInconsistencyError("Stirling division failed")
    return out


def pless_sides(
    length: int,
    dim: int,
    weights: dict[int, int],
    dual_weights: dict[int, int],
    h: int,
) -> tuple[int, int]:
    """Both sides of the binary Pless power-moment identity at exponent h.

    For a binary [length, dim] code with weight counts B_j and dual counts
    B_j^perp: sum of j^h B_j against the Stirling/binomial expansion over
    the dual counts.
    """
    lhs = sum(j**h * cnt for j, cnt in weights.items())
    rhs = 0
    for j, cnt in dual_weights.items():
        if j > min(length, h):
            continue
        inner = sum(
            factorial(t)
            * stirling2(h, t)
            * 2 ** (dim - t)
            * binom(length - j, length - t)
            for t in range(j, h + 1)
        )
        rhs += (-1) ** j * cnt * inner
    return lhs, rhs


def pless_check(
    code_weights_B: WeightDistribution,
    dual_weights: list[int],
    k: int,
    h: int,
) -> bool:
    """Both sides of the identity agree at exponent h for a binary [N, k]
    code with full distribution code_weights_B and dual codeword weights
    dual_weights (one entry per dual codeword, the zero word included)."""
    if isinstance(code_weights_B, WeightDistribution):
        if not code_weights_B.complete:
            raise ValueError("pless_check needs the complete distribution of B")
        counts = code_weights_B.counts
    else:
        counts = tuple(code_weights_B)
    length = len(counts) - 1
    weights = {j: cnt for j, cnt in enumerate(counts) if cnt}
    dual_counts: dict[int, int] = {}
    for w in dual_weights:
        dual_counts[w] = dual_counts.get(w, 0) + 1
    lhs, rhs = pless_sides(length, k, weights, dual_counts, h)
    return lhs == rhs


# ----------------------------------------------------------------------
# the recursions


@dataclass(frozen=True)
class RecursionInput:
    """What the recursion needs of a code: its parameters and the weight
    counts C_j for j = 0..j_cap (j_cap >= min(length, h_max))."""

    family: str
    n: int
    q: int
    scale: int
    reduced_length: int
    length: int
    weights: tuple[int, ...]
    h_max: int


def recursion_input_from_code(
    code: CodeInstance,
    h_max: int,
    method: str = "closed_form",
    budget: Budget | None = None,
) -> RecursionInput:
    j_cap = min(code.length, h_max)
    return RecursionInput(
        family=code.family,
        n=code.n,
        q=code.q,
        scale=code.scale,
        reduced_length=code.reduced_length,
        length=code.length,
        weights=weight_distribution(code, j_cap, method, budget).counts,
        h_max=h_max,
    )


WHICH = ("mk_minus", "mk2_plus", "mk_even_plus")


def _admissible(inp: RecursionInput, which: str) -> bool:
    if which == "mk_minus":
        return inp.family == "minus" and (
            (inp.n >= 3 and inp.n % 2) or (inp.n == 1 and inp.q >= 8)
        )
    if which in ("mk2_plus", "mk_even_plus"):
        return inp.family == "plus" and inp.n >= 2 and inp.n % 2 == 0 and inp.q >= 4
    raise ValueError(f"unknown recursion {which!r}")


def recursive_moments(
    inp: RecursionInput,
    which: str,
    h_max: int | None = None,
    allow_degenerate: bool = False,
) -> MomentTable:
    """Run a recursion up to h_max (default: the input's own h_max).

    which="mk_minus": moments MK^h of the Kloosterman sum (minus family).
    which="mk2_plus": moments MK_2^h of the 2-dimensional sum (plus family).
    which="mk_even_plus": even moments MK^{2h} (plus family; the returned
    table has stride 2).

    Outside the admissible (family, n, q) range the recursion still
    evaluates but carries no guarantee (the dual dimension drops there);
    allow_degenerate=True runs it anyway for diagnostics.
    """
    if h_max is None:
        h_max = inp.h_max
    if not _admissible(inp, which) and not allow_degenerate:
        raise ValueError(
            f"recursion {which!r} is not admissible for "
            f"(family={inp.family}, n={inp.n}, q={inp.q}); "
            "pass allow_degenerate=True to evaluate it regardless"
        )
    if inp.weights[0] != 1 or inp.length != inp.scale * inp.reduced_length:
        raise ValueError("inconsistent recursion input")
    if len(inp.weights) < min(inp.length, h_max) + 1:
        raise ValueError("weights are truncated below min(length, h_max)")
    q, scale, length = inp.q, inp.scale, inp.length
    if which == "mk_minus":
        base = inp.reduced_length
    elif which == "mk2_plus":
        base = inp.reduced_length - q**2
    else:
        base = inp.reduced_length - q**2 + q
    values = [q - 1]
    for h in range(1, h_max + 1):
        total = Fraction(0)
        for l in range(h):
            total += (-1) ** (h + l + 1) * comb(h, l) * base ** (h - l) * values[l]
        correction = 0
        for j in range(min(length, h) + 1):
            inner = sum(
                factorial(t)
                * stirling2(h, t)
                * 2 ** (h - t)
                * binom(length - j, length - t)
                for t in range(j, h + 1)
            )
            correction += (-1) ** (h + j) * inp.weights[j] * inner
        total += Fraction(q, scale**h) * correction
        if total.denominator != 1:
            raise InternalInconsistencyError(
                f"recursion produced a non-integer at h={h}"
            )
        values.append(int(total))
    m = 2 if which == "mk2_plus" else 1
    step = 2 if which == "mk_even_plus" else 1
    return MomentTable(
        m=m, h_max=h_max, values=tuple(values), source="recursion", h_step=step
    )


def brute_moment_table(
    code_or_ctx, m: int, h_max: int, step: int = 1, budget: Budget | None = None
) -> MomentTable:
    """Brute-force counterpart shaped like a recursion table."""
    ctx = code_or_ctx.ctx if isinstance(code_or_ctx, CodeInstance) else code_or_ctx
    values = tuple(moment(ctx, m, step * i, budget=budget) for i in range(h_max + 1))
    return MomentTable(m=m, h_max=h_max, values=values, source="brute", h_step=step)


# ----------------------------------------------------------------------
# dual-weight power sums


def moment_expansion_values(
    code: CodeInstance, h: int, budget: Budget | None = None
) -> dict[str, int]:
    """sum over nonzero a of w(c(a))^h, measured and re-expanded in moments.

    The minus family expands through MK^l; the plus family two ways,
    through MK^{2l} and through MK_2^l.  All entries must coincide.
    """
    ctx = code.ctx
    q = code.q
    measured = sum(dual_weight(code, a, "measured") ** h for a in range(1, q))
    out = {"measured": measured}
    half_scale = Fraction(code.scale, 2) ** h

    def expand(base: int, mk) -> int:
        total = sum(
            (-1) ** l * comb(h, l) * base ** (h - l) * mk(l) for l in range(h + 1)
        )
        value = half_scale * total
        if value.denominator != 1:
            raise InternalInconsistencyError("moment expansion is not an integer")
        return int(value)

    if code.family == "minus":
        out["via_mk"] = expand(
            code.reduced_length, lambda l: moment(ctx, 1, l, budget=budget)
        )
    else:
        out["via_mk_even"] = expand(
            code.reduced_length - q**2 + q,
            lambda l: moment(ctx, 1, 2 * l, budget=budget),
        )
        out["via_mk2"] = expand(
            code.reduced_length - q**2, lambda l: moment(ctx, 2, l, budget=budget)
        )
    return out


def moment_expansion_check(code: CodeInstance, h: int, budget: Budget | None = None) -> bool:
    vals = moment_expansion_values(code, h, budget)
    return len(set(vals.values())) == 1
