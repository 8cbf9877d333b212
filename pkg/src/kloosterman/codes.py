"""Binary codes attached to the double-coset trace vectors.

A coset DC of size N gives the q-ary vector v = (Tr g_1, ..., Tr g_N) over
a fixed enumeration order, the binary code C = {u : sum u_j v_j = 0 in
GF(q)}, and (Delsarte) the dual C^perp = {c(a) = (tr(a Tr g_j))_j}.  All
weight data depends only on the trace histogram N(b) = #{j : Tr g_j = b},
so a CodeInstance carries the histogram and (optionally) the per-element
traces for the coordinate-level checks.

Weight distributions come from three independent routes that must agree:
a parity DP over the histogram, the same DP over the closed-form histogram,
and the MacWilliams transform of the dual's weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .budget import Budget, default_budget
from .charsums import kloosterman_all
from .errors import InternalInconsistencyError
from .field import FieldCtx
from .symplectic import (
    FAMILIES,
    double_coset_order,
    enumerate_parabolic,
    family_constants,
    family_coset,
    iter_double_coset_batches,
    make_sigma,
    mat_mul,
    mat_transpose,
    predicted_trace_histogram,
    trace_histogram,
    transversal,
    _np_tables,
)

DELSARTE_LENGTH_LIMIT = 20000

# (family, n, q) whose dual drops to dimension r - 1: the trace vector's
# entries span a proper subfield-like subset and one parity row collapses
DEGENERATE_CASES = {("minus", 1, 2), ("minus", 1, 4), ("plus", 2, 2)}


@dataclass(frozen=True)
class WeightDistribution:
    """Counts C_j for j = 0..j_max; complete means j_max is the length."""

    counts: tuple[int, ...]
    complete: bool

    @property
    def j_max(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, j: int) -> int:
        return self.counts[j]

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)


@dataclass(eq=False)
class CodeInstance:
    """A double-coset trace code, reduced to its weight-determining data.

    histogram[b] counts coset elements of trace b in the canonical
    element order; element_traces (optional) lists the traces themselves
    in enumeration order, one uint8 per coordinate.
    """

    ctx: FieldCtx
    family: str
    n: int
    q: int
    scale: int
    reduced_length: int
    length: int
    histogram: tuple[int, ...]
    histogram_source: str
    element_traces: np.ndarray | None = None

    @property
    def coset_index(self) -> int:
        return family_coset(self.family, self.n)


def build_code(
    ctx: FieldCtx,
    family: str,
    n: int,
    histogram: str = "auto",
    coordinates: bool = False,
    budget: Budget | None = None,
) -> CodeInstance:
    """Assemble a CodeInstance for the family's coset at this n.

    histogram: "enumerated" walks the coset, "predicted" uses the closed
    forms, "auto" enumerates exactly when the coset fits the matrix budget.
    coordinates=True additionally stores per-element traces (forces
    enumeration).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    budget = budget or default_budget()
    q = ctx.q
    r = family_coset(family, n)
    scale, reduced = family_constants(family, n, q)
    length = scale * reduced
    if length != double_coset_order(n, r, q):
        raise InternalInconsistencyError("family constants disagree with coset order")

    if histogram == "auto":
        histogram = "enumerated" if length <= budget.matrix_limit else "predicted"
    if histogram not in ("enumerated", "predicted"):
        raise ValueError(f"unknown histogram source {histogram!r}")
    if coordinates and histogram != "enumerated":
        raise ValueError("coordinates require an enumerated histogram")

    traces = None
    if coordinates:
        budget.check_matrices(length, "coordinate-level code build")
        mul, _ = _np_tables(ctx)
        p = enumerate_parabolic(ctx, n, budget)
        sigma = make_sigma(n, r)
        parts = []
        for t in transversal(ctx, n, r, budget):
            m_t = mat_transpose(mat_mul(ctx, sigma, t))
            cells = mul[p, m_t[None]]
            parts.append(np.bitwise_xor.reduce(cells.reshape(len(p), -1), axis=1))
        traces = np.concatenate(parts)
        hist = [int(x) for x in np.bincount(traces, minlength=q)]
    elif histogram == "enumerated":
        hist = trace_histogram(ctx, n, r, "enumerated", budget)
    else:
        hist = predicted_trace_histogram(ctx, family, n)

    if sum(hist) != length:
        raise InternalInconsistencyError("histogram does not cover the coset")
    return CodeInstance(
        ctx=ctx,
        family=family,
        n=n,
        q=q,
        scale=scale,
        reduced_length=reduced,
        length=length,
        histogram=tuple(hist),
        histogram_source=histogram,
        element_traces=traces,
    )


# ----------------------------------------------------------------------
# the dual code


def dual_codeword(code: CodeInstance, a: int) -> np.ndarray:
    """c(a) = (tr(a Tr g_j))_j as a uint8 bit vector (needs coordinates)."""
    if code.element_traces is None:
        raise ValueError("code was built without coordinates")
    ctx = code.ctx
    if not 0 <= a < code.q:
        raise ValueError("a must be a field element")
    arow = np.array([ctx.trace(ctx.mul(a, x)) for x in range(code.q)], dtype=np.uint8)
    return arow[code.element_traces]

def dual_weight(code: CodeInstance, a: int, mode: str = "measured") -> int:
    """Hamming weight of c(a).

    "measured" counts histogram mass on {b : tr(ab) = 1}; "predicted"
    evaluates the closed forms: scale/2 * (reduced - K(lambda;a)) for the
    minus family and scale/2 * (reduced - q^2 + q - K(lambda;a)^2) for
    plus.  a = 0 gives the zero word either way.
    """
    ctx = code.ctx
    if not 0 <= a < code.q:
        raise ValueError("a must be a field element")
    if a == 0:
        return 0
    if mode == "measured":
        return sum(
            cnt
            for b, cnt in enumerate(code.histogram)
            if ctx.trace(ctx.mul(a, b)) == 1
        )
    if mode != "predicted":
        raise ValueError(f"unknown mode {mode!r}")
    k1 = kloosterman_all(ctx, 1)[a]
    if code.family == "minus":
        num = code.scale * (code.reduced_length - k1)
    else:
        num = code.scale * (code.reduced_length - code.q**2 + code.q - k1 * k1)
    weight, rem = divmod(num, 2)
    if rem:
        raise InternalInconsistencyError("predicted dual weight is not an integer")
    return weight


def dual_kernel(code: CodeInstance) -> list[int]:
    """The a with c(a) = 0: everything orthogonal to the histogram support."""
    ctx = code.ctx
    support = [b for b, cnt in enumerate(code.histogram) if cnt]
    return [
        a
        for a in range(code.q)
        if all(ctx.trace(ctx.mul(a, b)) == 0 for b in support)
    ]


def dual_dimension(code: CodeInstance) -> int:
    """dim C^perp over GF(2): r minus the kernel dimension of a -> c(a)."""
    kernel = len(dual_kernel(code))
    if kernel & (kernel - 1):
        raise InternalInconsistencyError("dual kernel size is not a power of two")
    return code.ctx.r - (kernel.bit_length() - 1)


def expected_dual_dimension(family: str, n: int, q: int) -> int:
    """r, except r - 1 in the three known degenerate (family, n, q) cases."""
    family_coset(family, n)
    r = q.bit_length() - 1
    if (family, n, q) in DEGENERATE_CASES:
        return r - 1
    return r


def dual_distribution(code: CodeInstance) -> dict[int, int]:
    """Weight distribution of the dual code itself (kernel collapsed)."""
    kernel = len(dual_kernel(code))
    counts: dict[int, int] = {}
    for a in range(code.q):
        w = dual_weight(code, a, "measured")
        counts[w] = counts.get(w, 0) + 1
    out = {}
    for w, cnt in counts.items():
        words, rem = divmod(cnt, kernel)
        if rem:
            raise InternalInconsistencyError("dual multiplicities not kernel-divisible")
        out[w] = words
    return out


# ----------------------------------------------------------------------
# weight distributions of the code itself


def _parity_rows(count: int, j_max: int) -> tuple[list[int], list[int]]:
    even = [comb(count, v) if v % 2 == 0 else 0 for v in range(j_max + 1)]
    odd = [comb(count, v) if v % 2 else 0 for v in range(j_max + 1)]
    return even, odd


def _poly_mul(a: list[int], b: list[int], j_max: int) -> list[int]:
    out = [0] * (j_max + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if i + j > j_max:
                break
            if y:
                out[i + j] += x * y
    return out


def _distribution_from_histogram(
    ctx: FieldCtx, hist, j_max: int, budget: Budget
) -> tuple[int, ...]:
    """C_j for j <= j_max from the trace histogram.

    Counts coordinate subsets summing to zero in the field: a DP over
    beta whose state is the partial field sum, exploiting that in
    characteristic 2 only each nu_beta's parity moves the state.
    """
    q = ctx.q
    support = [(b, cnt) for b, cnt in enumerate(hist) if cnt]
    budget.check_loops(
        (len(support) + 1) * q * (j_max + 1) ** 2, "weight distribution DP"
    )
    states: dict[int, list[int]] = {0: [1] + [0] * j_max}
    for b, cnt in support:
        even, odd = _parity_rows(cnt, j_max)
        nxt: dict[int, list[int]] = {}
        for s, poly in states.items():
            for shift, row in ((0, even), (b, odd)):
                target = s ^ shift
                term = _poly_mul(poly, row, j_max)
                if target in nxt:
                    acc = nxt[target]
                    for i, v in enumerate(term):
                        acc[i] += v
                else:
                    nxt[target] = term
        states = nxt
    return tuple(states.get(0, [0] * (j_max + 1)))


def weight_distribution(
    code: CodeInstance,
    j_max: int | None = None,
    method: str = "direct",
    budget: Budget | None = None,
) -> WeightDistribution:
    """C_0..C_{j_max}; j_max defaults to the full length.

    method="direct" runs the DP on the instance histogram;
    method="closed_form" runs it on the closed-form histogram;
    method="macwilliams" transforms the measured dual weights instead.
    """
    budget = budget or default_budget()
    if j_max is None:
        j_max = code.length
    j_max = min(j_max, code.length)
    if method == "direct":
        counts = _distribution_from_histogram(code.ctx, code.histogram, j_max, budget)
    elif method == "closed_form":
        hist = predicted_trace_histogram(code.ctx, code.family, code.n)
        counts = _distribution_from_histogram(code.ctx, hist, j_max, budget)
    elif method == "macwilliams":
        counts = macwilliams_distribution(code, j_max, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return WeightDistribution(counts=counts, complete=j_max == code.length)


def macwilliams_distribution(
    code: CodeInstance, j_max: int, budget: Budget | None = None
) -> tuple[int, ...]:
    """C_j for j <= j_max via MacWilliams over the measured dual weights.

    C_j = (1/q) [y^j] sum over a in F_q of (1+y)^(N-w(a)) (1-y)^w(a);
    the kernel multiplicity cancels against 1/q, so the degenerate duals
    need no special casing.
    """
    budget = budget or default_budget()
    n = code.length
    budget.check_loops(code.q * (j_max + 1) ** 2, "MacWilliams transform")
    acc = [0] * (j_max + 1)
    for a in range(code.q):
        w = dual_weight(code, a, "measured")
        plus = [comb(n - w, i) for i in range(j_max + 1)]
        minus = [(-1) ** i * comb(w, i) for i in range(j_max + 1)]
        term = _poly_mul(plus, minus, j_max)
        for i, v in enumerate(term):
            acc[i] += v
    out = []
    for v in acc:
        c, rem = divmod(v, code.q)
        if rem:
            raise InternalInconsistencyError("MacWilliams sum not divisible by q")
        out.append(c)
    return tuple(out)


# ----------------------------------------------------------------------
# Delsarte duality at the coordinate level


def verify_delsarte(code: CodeInstance, budget: Budget | None = None) -> bool:
    """Check C^perp = {c(a)} as literal bit vectors.

    Builds the r binary parity rows of the defining GF(q) constraint
    (row i = bit i of the trace vector), spans them, and compares the
    span with {c(a) : a in F_q}; the common rank must match
    expected_dual_dimension.
    """
    if code.element_traces is None:
        raise ValueError("code was built without coordinates")
    if code.length > DELSARTE_LENGTH_LIMIT:
        raise ValueError(f"delsarte check is limited to length {DELSARTE_LENGTH_LIMIT}")
    ctx = code.ctx
    traces = code.element_traces
    rows = []
    for bit in range(ctx.r):
        packed = 0
        for j, b in enumerate(traces):
            if b >> bit & 1:
                packed |= 1 << j
        rows.append(packed)
    span = {0}
    for row in rows:
        span |= {v ^ row for v in span}
    words = set()
    for a in range(code.q):
        packed = 0
        for j, bit in enumerate(dual_codeword(code, a)):
            if bit:
                packed |= 1 << j
        words.add(packed)
    rank = (len(span) - 1).bit_length()
    expected = expected_dual_dimension(code.family, code.n, code.q)
    return span == words and rank == expected and dual_dimension(code) == expected
