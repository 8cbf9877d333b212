"""The acceptance suite: every headline identity checked end to end.

Each criterion function returns a list of Checks, where a Check is a named
(expected, actual) pair and passes exactly when the two are equal; nothing
is compared with a tolerance.  Enumerated data always sits on the `actual`
side, closed forms on `expected`, except where a criterion pins explicit
literal values.  The registry at the bottom carries the documented
per-criterion runtime budgets (seconds, generous) so callers can flag
regressions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .budget import Budget, default_budget
from .charsums import (
    allowed_values,
    artin_schreier_char_sum,
    gl_kloosterman,
    kloosterman_all,
    twisted_sum,
    value_histogram,
)
from .codes import (
    DELSARTE_LENGTH_LIMIT,
    build_code,
    dual_distribution,
    dual_dimension,
    dual_weight,
    expected_dual_dimension,
    verify_delsarte,
    weight_distribution,
)
from .field import make_field
from .moments import (
    binom,
    brute_moment_table,
    pless_sides,
    recursion_input_from_code,
    recursive_moments,
    stirling2,
)
from .symplectic import (
    dc_character_sum,
    double_coset_keys,
    enumerate_parabolic,
    family_coset,
    family_coset_sum,
    gauss_sum_sp,
    predicted_sizes,
    sp_count_by_filter,
    trace_histogram,
    transversal,
)


def _canon(value):
    """Fold equivalent containers together so equality is structural."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return tuple(sorted((_canon(k), _canon(v)) for k, v in value.items()))
    if isinstance(value, (list, tuple, np.ndarray)):
        return tuple(_canon(v) for v in value)
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


@dataclass(frozen=True)
class Check:
    """One named comparison; passes iff expected == actual, exactly."""

    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


def check(name: str, expected, actual) -> Check:
    return Check(name=name, expected=_canon(expected), actual=_canon(actual))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    checks: tuple[Check, ...]
    elapsed: float
    limit: float

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)


# ----------------------------------------------------------------------
# the criteria

# the six code cases: the three with full-rank duals first, then the
# three degenerate ones whose dual drops a dimension
CODE_CASES = (
    ("minus", 1, 3),
    ("minus", 3, 1),
    ("plus", 2, 2),
    ("minus", 1, 1),
    ("minus", 1, 2),
    ("plus", 2, 1),
)

# (n, r_exp) pairs small enough to enumerate every double coset
ENUMERABLE_GROUPS = ((1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1))


def carlitz_identity(budget: Budget) -> list[Check]:
    """K_2(lambda;a) = K(lambda;a)^2 - q for every nonzero a, q <= 64."""
    out = []
    for r in range(1, 7):
        ctx = make_field(r)
        k1 = kloosterman_all(ctx, 1, 1, budget)
        k2 = kloosterman_all(ctx, 2, 1, budget)
        out.append(
            check(
                f"carlitz q={ctx.q}",
                [k1[a] ** 2 - ctx.q for a in range(1, ctx.q)],
                [k2[a] for a in range(1, ctx.q)],
            )
        )
    return out


def frobenius_and_weil(budget: Budget) -> list[Check]:
    """Frobenius invariance of K and the Weil bound, exhaustively.

    For the canonical character the printed form K(lambda;a^2) =
    K(lambda;a) holds as is; a twisted character moves with the argument,
    K(lambda_{c^2};a^2) = K(lambda_c;a) (the fixed-twist form fails, e.g.
    q=4, c=g, a=g gives 3 vs -1).
    """
    out = []
    for r in range(1, 7):
        ctx = make_field(r)
        vals = kloosterman_all(ctx, 1, 1, budget)
        out.append(
            check(
                f"frobenius invariance q={ctx.q}",
                [vals[a] for a in range(1, ctx.q)],
                [vals[ctx.frobenius(a)] for a in range(1, ctx.q)],
            )
        )
        weil_bad = sum(
            1
            for c in range(1, ctx.q)
            for a in range(1, ctx.q)
            if kloosterman_all(ctx, 1, c, budget)[a] ** 2 > 4 * ctx.q
        )
        out.append(check(f"weil violations q={ctx.q}, all twists", 0, weil_bad))
    for r in range(1, 5):
        ctx = make_field(r)
        frob_bad = 0
        for c in range(1, ctx.q):
            lhs = kloosterman_all(ctx, 1, ctx.square(c), budget)
            rhs = kloosterman_all(ctx, 1, c, budget)
            frob_bad += sum(
                1 for a in range(1, ctx.q) if lhs[ctx.square(a)] != rhs[a]
            )
        out.append(
            check(f"equivariant frobenius violations q={ctx.q}, all twists", 0, frob_bad)
        )
    return out


def gl_two_methods(budget: Budget) -> list[Check]:
    """Recursive GL Kloosterman sums equal the closed-form chain sums."""
    out = []
    for r in (1, 2, 3, 4):
        ctx = make_field(r)
        for t in range(1, 5):
            out.append(
                check(
                    f"gl t={t} q={ctx.q}",
                    [
                        gl_kloosterman(ctx, t, a, method="recursive", budget=budget)
                        for a in range(1, ctx.q)
                    ],
                    [
                        gl_kloosterman(ctx, t, a, method="closed", budget=budget)
                        for a in range(1, ctx.q)
                    ],
                )
            )
    return out


def twisted_and_artin_schreier(budget: Budget) -> list[Check]:
    """The twisted-sum reduction and the two Artin-Schreier evaluations."""
    out = []
    for r in range(1, 6):
        ctx = make_field(r)
        for m in (1, 2):
            pairs = [twisted_sum(ctx, m, b, budget) for b in range(ctx.q)]
            out.append(
                check(
                    f"twisted m={m} q={ctx.q}",
                    [p for _, p in pairs],
                    [v for v, _ in pairs],
                )
            )
    for r in range(1, 7):
        ctx = make_field(r)
        pairs = [
            artin_schreier_char_sum(ctx, b, "a", budget=budget)
            for b in range(1, ctx.q)
        ]
        out.append(
            check(
                f"artin-schreier a q={ctx.q}",
                [p for _, p in pairs],
                [v for v, _ in pairs],
            )
        )
        image = ctx.artin_schreier_image()
        b_param = next(x for x in range(ctx.q) if x not in image)
        pairs = [
            artin_schreier_char_sum(ctx, b, "b", b_param, budget)
            for b in range(1, ctx.q)
        ]
        out.append(
            check(
                f"artin-schreier b q={ctx.q}",
                [p for _, p in pairs],
                [v for v, _ in pairs],
            )
        )
    return out


def group_cardinalities(budget: Budget) -> list[Check]:
    """Enumerated group data against the closed-form cardinalities."""
    out = [check("brute |Sp(4,2)|", 720, sp_count_by_filter(make_field(1), 2, budget))]
    for n, r_exp in ENUMERABLE_GROUPS:
        ctx = make_field(r_exp)
        rep = predicted_sizes(ctx, n)
        out.append(
            check(
                f"|P({2*n},{ctx.q})|",
                rep.parabolic_order,
                len(enumerate_parabolic(ctx, n, budget)),
            )
        )
        out.append(
            check(
                f"transversal sizes n={n} q={ctx.q}",
                rep.transversal_sizes,
                [len(transversal(ctx, n, r, budget)) for r in range(n + 1)],
            )
        )
        keys = [double_coset_keys(ctx, n, r, budget) for r in range(n + 1)]
        out.append(
            check(
                f"coset orders n={n} q={ctx.q}",
                rep.coset_orders,
                [len(k) for k in keys],
            )
        )
        out.append(
            check(
                f"cosets partition Sp({2*n},{ctx.q})",
                rep.sp_order,
                len(np.unique(np.concatenate(keys))),
            )
        )
    return out


def trace_histograms(budget: Budget) -> list[Check]:
    """Enumerated trace counts against the closed forms, all six cases."""
    out = []
    for family, n, r_exp in CODE_CASES:
        ctx = make_field(r_exp)
        r = family_coset(family, n)
        out.append(
            check(
                f"trace histogram {family} n={n} q={ctx.q}",
                trace_histogram(ctx, n, r, "predicted", budget),
                trace_histogram(ctx, n, r, "enumerated", budget),
            )
        )
    ctx2 = make_field(1)
    plus22 = trace_histogram(ctx2, 2, 0, "enumerated", budget)
    out.append(check("N_DC+(2,2)(0)", 48, plus22[0]))
    out.append(check("N_DC+(2,2)(1)", 0, plus22[1]))
    return out


def exponential_sums(budget: Budget) -> list[Check]:
    """Double-coset character sums and the full-group Gauss sum."""
    out = []
    for n, r_exp in ENUMERABLE_GROUPS:
        ctx = make_field(r_exp)
        for r in range(n + 1):
            predicted = [
                dc_character_sum(ctx, n, r, a, "predicted", budget)
                for a in range(1, ctx.q)
            ]
            if r % 2:
                out.append(
                    check(
                        f"odd-coset sums vanish n={n} r={r} q={ctx.q}",
                        [0] * (ctx.q - 1),
                        predicted,
                    )
                )
            out.append(
                check(
                    f"coset sums n={n} r={r} q={ctx.q}",
                    predicted,
                    [
                        dc_character_sum(ctx, n, r, a, "enumerated", budget)
                        for a in range(1, ctx.q)
                    ],
                )
            )
    for family, n, r_exp in CODE_CASES:
        ctx = make_field(r_exp)
        r = family_coset(family, n)
        out.append(
            check(
                f"family sum {family} n={n} q={ctx.q}",
                [family_coset_sum(ctx, family, n, a) for a in range(1, ctx.q)],
                [
                    dc_character_sum(ctx, n, r, a, "enumerated", budget)
                    for a in range(1, ctx.q)
                ],
            )
        )
    for n, r_exp in ENUMERABLE_GROUPS:
        if n > 2:
            continue
        ctx = make_field(r_exp)
        out.append(
            check(
                f"gauss sum n={n} q={ctx.q}",
                [gauss_sum_sp(ctx, n, a, "predicted", budget=budget) for a in range(1, ctx.q)],
                [gauss_sum_sp(ctx, n, a, "enumerated", budget=budget) for a in range(1, ctx.q)],
            )
        )
    return out


def code_duality(budget: Budget) -> list[Check]:
    """Dual dimensions and dual weights for all six code cases."""
    out = []
    for family, n, r_exp in CODE_CASES:
        ctx = make_field(r_exp)
        code = build_code(ctx, family, n, "enumerated", coordinates=False, budget=budget)
        out.append(
            check(
                f"dual dimension {family} n={n} q={ctx.q}",
                expected_dual_dimension(family, n, ctx.q),
                dual_dimension(code),
            )
        )
        out.append(
            check(
                f"dual weights {family} n={n} q={ctx.q}",
                [dual_weight(code, a, "predicted") for a in range(ctx.q)],
                [dual_weight(code, a, "measured") for a in range(ctx.q)],
            )
        )
        if code.length <= DELSARTE_LENGTH_LIMIT:
            bitcode = build_code(
                ctx, family, n, "enumerated", coordinates=True, budget=budget
            )
            out.append(
                check(
                    f"delsarte {family} n={n} q={ctx.q}",
                    True,
                    verify_delsarte(bitcode, budget),
                )
            )
    return out


def weight_distributions(budget: Budget) -> list[Check]:
    """Three routes to C_j agree; full-distribution symmetry; spot values."""
    out = []
    for family, n, r_exp in (("minus", 1, 3), ("plus", 2, 2)):
        ctx = make_field(r_exp)
        code = build_code(ctx, family, n, "enumerated", budget=budget)
        direct = weight_distribution(code, 10, "direct", budget)
        out.append(
            check(
                f"direct=closed_form j<=10 {family} n={n} q={ctx.q}",
                direct.counts,
                weight_distribution(code, 10, "closed_form", budget).counts,
            )
        )
        out.append(
            check(
                f"direct=macwilliams j<=10 {family} n={n} q={ctx.q}",
                direct.counts,
                weight_distribution(code, 10, "macwilliams", budget).counts,
            )
        )
    ctx8 = make_field(3)
    code8 = build_code(ctx8, "minus", 1, "enumerated", budget=budget)
    full = weight_distribution(code8, method="macwilliams", budget=budget)
    out.append(check("full distribution complete (-,1,8)", True, full.complete))
    out.append(
        check("symmetry C_j = C_(N-j) (-,1,8)", full.counts, full.counts[::-1])
    )
    out.append(check("C_1 (-,1,8)", 8, full.counts[1]))
    out.append(check("C_2 (-,1,8)", 388, full.counts[2]))
    return out


def moment_recursions(budget: Budget) -> list[Check]:
    """The recursions reproduce brute-force power moments exactly."""
    out = []
    for n, r_exp, h_max in ((1, 3, 8), (1, 4, 8), (3, 1, 8)):
        ctx = make_field(r_exp)
        code = build_code(ctx, "minus", n, budget=budget)
        inp = recursion_input_from_code(code, h_max, budget=budget)
        out.append(
            check(
                f"MK^h h<={h_max} n={n} q={ctx.q}",
                brute_moment_table(ctx, 1, h_max, budget=budget).values,
                recursive_moments(inp, "mk_minus").values,
            )
        )
    ctx4 = make_field(2)
    code4 = build_code(ctx4, "plus", 2, budget=budget)
    inp4 = recursion_input_from_code(code4, 6, budget=budget)
    out.append(
        check(
            "MK_2^h h<=6 n=2 q=4",
            brute_moment_table(ctx4, 2, 6, budget=budget).values,
            recursive_moments(inp4, "mk2_plus").values,
        )
    )
    out.append(
        check(
            "MK^2h h<=6 n=2 q=4",
            brute_moment_table(ctx4, 1, 6, step=2, budget=budget).values,
            recursive_moments(inp4, "mk_even_plus").values,
        )
    )

    # the hand-checkable decomposition of MK^1 at q=8: the h=1 recursion
    # is (reduced * MK^0) + (q/scale) * (C_0 and C_1 terms) = 49 - 48
    ctx8 = make_field(3)
    code8 = build_code(ctx8, "minus", 1, budget=budget)
    inp8 = recursion_input_from_code(code8, 1, budget=budget)
    lead_term = inp8.reduced_length * (ctx8.q - 1)
    length = inp8.length
    correction = 0
    for j in range(min(length, 1) + 1):
        inner = sum(
            stirling2(1, t) * 2 ** (1 - t) * binom(length - j, length - t)
            for t in range(j, 2)
        )
        correction += (-1) ** (1 + j) * inp8.weights[j] * inner
    pless_term = Fraction(ctx8.q, inp8.scale) * correction
    out.append(check("MK^1 q=8 lead term", 49, lead_term))
    out.append(check("MK^1 q=8 pless term", -48, int(pless_term)))
    out.append(
        check(
            "MK^1 q=8",
            1,
            recursive_moments(inp8, "mk_minus").values[1],
        )
    )
    return out


def value_range(budget: Budget) -> list[Check]:
    """Kloosterman values hit exactly the residue class allowed by the range
    bound, for q in {8,16,32,64}; and the explicit q=8 histogram."""
    out = []
    for r in (3, 4, 5, 6):
        ctx = make_field(r)
        hist = value_histogram(ctx, budget)
        out.append(
            check(
                f"value range + attainment q={ctx.q}",
                allowed_values(ctx.q),
                sorted(hist),
            )
        )
    out.append(
        check(
            "value histogram q=8",
            {-5: 1, -1: 3, 3: 3},
            dict(value_histogram(make_field(3), budget)),
        )
    )
    return out


def pless_engine(budget: Budget) -> list[Check]:
    """Pless power-moment identity on the two fully enumerable codes,
    h <= 4, both sides evaluated literally."""
    out = []
    for family, n, r_exp in (("minus", 1, 2), ("plus", 2, 1)):
        ctx = make_field(r_exp)
        code = build_code(ctx, family, n, "enumerated", coordinates=True, budget=budget)
        dist = weight_distribution(code, budget=budget)
        weights = {j: c for j, c in enumerate(dist.counts) if c}
        duals = dual_distribution(code)
        k = code.length - dual_dimension(code)
        out.append(
            check(
                f"code size {family} n={n} q={ctx.q}",
                2**k,
                sum(dist.counts),
            )
        )
        for h in range(5):
            lhs, rhs = pless_sides(code.length, k, weights, duals, h)
            out.append(check(f"pless {family} n={n} q={ctx.q} h={h}", lhs, rhs))
    return out


# ----------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    limit: float
    run: Callable[[Budget], list[Check]]


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "carlitz-identity", 5.0, carlitz_identity),
    Criterion(2, "frobenius-and-weil", 5.0, frobenius_and_weil),
    Criterion(3, "gl-two-methods", 10.0, gl_two_methods),
    Criterion(4, "twisted-and-artin-schreier", 30.0, twisted_and_artin_schreier),
    Criterion(5, "group-cardinalities", 120.0, group_cardinalities),
    Criterion(6, "trace-histograms", 120.0, trace_histograms),
    Criterion(7, "exponential-sums", 120.0, exponential_sums),
    Criterion(8, "code-duality", 60.0, code_duality),
    Criterion(9, "weight-distributions", 60.0, weight_distributions),
    Criterion(10, "moment-recursions", 60.0, moment_recursions),
    Criterion(11, "value-range", 5.0, value_range),
    Criterion(12, "pless-engine", 60.0, pless_engine),
)


def run_criterion(crit: Criterion, budget: Budget | None = None) -> CriterionResult:
    budget = budget or default_budget()
    start = time.perf_counter()
    checks = crit.run(budget)
    elapsed = time.perf_counter() - start
    return CriterionResult(
        number=crit.number,
        name=crit.name,
        checks=tuple(checks),
        elapsed=elapsed,
        limit=crit.limit,
    )


def run_criteria(
    numbers: list[int] | None = None, budget: Budget | None = None
) -> list[CriterionResult]:
    """Run the selected criteria (default: all twelve) in order."""
    wanted = set(numbers) if numbers is not None else None
    results = []
    for crit in CRITERIA:
        if wanted is not None and crit.number not in wanted:
            continue
        results.append(run_criterion(crit, budget))
    return results
