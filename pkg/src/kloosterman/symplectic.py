"""Symplectic groups Sp(2n,q) over GF(2^r): the maximal parabolic subgroup,
its double cosets, and their trace statistics and exponential sums.

Matrices are numpy uint8 arrays of field-element encodings.  The form is
J = [[0, I], [I, 0]], so the parabolic P consists of the symplectic
matrices with vanishing lower-left block: [[A, AB], [0, A^-T]] with A
invertible and B symmetric.  A double coset P s P is enumerated as the
products p * (s t), p over P and t over a right-transversal of
(P intersect s P s) in P; each element appears exactly once, and the key
packing lets that be asserted cheaply.

Closed-form counts live alongside the enumerators so callers can ask for
either side of every comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .budget import Budget, default_budget
from .charsums import gl_kloosterman, kloosterman_all
from .errors import InternalInconsistencyError
from .field import FieldCtx

# a q x q multiplication table backs the batched matrix ops
_MATRIX_Q_LIMIT = 256

FAMILIES = ("minus", "plus")


# ----------------------------------------------------------------------
# batched matrix arithmetic


def _np_tables(ctx: FieldCtx):
    def build():
        if ctx.q > _MATRIX_Q_LIMIT:
            raise InternalInconsistencyError(
                f"matrix ops are limited to q <= {_MATRIX_Q_LIMIT}"
            )
        q = ctx.q
        mul = np.empty((q, q), dtype=np.uint8)
        for x in range(q):
            for y in range(q):
                mul[x, y] = ctx.mul(x, y)
        lam = np.array([ctx.lam(x) for x in range(q)], dtype=np.int64)
        return mul, lam

    return ctx.memo("np_tables", build)


def mat_mul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Field matrix product, broadcasting over leading batch axes."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if ctx.q == 2:
        prod = a.astype(np.int64) @ b.astype(np.int64)
        return (prod & 1).astype(np.uint8)
    mul, _ = _np_tables(ctx)
    k = a.shape[-1]
    acc = None
    for t in range(k):
        term = mul[a[..., :, t][..., None], b[..., t, :][..., None, :]]
        acc = term if acc is None else acc ^ term
    return acc


def mat_transpose(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(m, -1, -2)


def mat_trace(ctx: FieldCtx, m: np.ndarray) -> np.ndarray:
    """Field-sum of the diagonal, over leading batch axes."""
    diag = np.diagonal(np.asarray(m), axis1=-2, axis2=-1)
    return np.bitwise_xor.reduce(diag, axis=-1)


def mat_inv(ctx: FieldCtx, m: np.ndarray) -> np.ndarray:
    """Inverse of a single matrix by Gauss-Jordan elimination."""
    n = m.shape[0]
    a = [[int(x) for x in row] for row in np.asarray(m)]
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        out[col], out[piv] = out[piv], out[col]
        s = ctx.inv(a[col][col])
        a[col] = [ctx.mul(s, x) for x in a[col]]
        out[col] = [ctx.mul(s, x) for x in out[col]]
        for i in range(n):
            f = a[i][col]
            if i == col or f == 0:
                continue
            a[i] = [x ^ ctx.mul(f, y) for x, y in zip(a[i], a[col])]
            out[i] = [x ^ ctx.mul(f, y) for x, y in zip(out[i], out[col])]
    return np.array(out, dtype=np.uint8)


def pack_keys(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """One uint64 per matrix: row-major entries, first entry most significant.

    Integer order of keys equals lexicographic order of entry sequences.
    """
    mats = np.asarray(mats, dtype=np.uint64)
    cells = mats.shape[-1] * mats.shape[-2]
    if cells * ctx.r > 64:
        raise ValueError("matrix does not fit in a 64-bit key")
    flat = mats.reshape(mats.shape[:-2] + (cells,))
    key = np.zeros(mats.shape[:-2], dtype=np.uint64)
    width = np.uint64(ctx.r)
    for i in range(cells):
        key = (key << width) | flat[..., i]
    return key


# ----------------------------------------------------------------------
# the group, the form, the Weyl elements


def j_form(n: int) -> np.ndarray:
    """The symplectic form [[0, I], [I, 0]] (characteristic 2: signs vanish)."""
    j = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for i in range(n):
        j[i, n + i] = 1
        j[n + i, i] = 1
    return j


def make_sigma(n: int, r: int, ctx: FieldCtx | None = None) -> np.ndarray:
    """Weyl representative: swaps e_i <-> e_{n+i} for i < r, fixes the rest.

    Entries are 0/1, valid in every field; ctx is accepted for interface
    uniformity but not consulted.
    """
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    s = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for i in range(n):
        if i < r:
            s[i, n + i] = 1
            s[n + i, i] = 1
        else:
            s[i, i] = 1
            s[n + i, n + i] = 1
    return s


def is_symplectic(ctx: FieldCtx, w: np.ndarray):
    """Whether w^T J w = J; a bool for one matrix, a bool array for a batch."""
    w = np.asarray(w, dtype=np.uint8)
    n = w.shape[-1] // 2
    j = j_form(n)
    g = mat_mul(ctx, mat_transpose(w), mat_mul(ctx, j, w))
    ok = np.all(g == j, axis=(-2, -1))
    return bool(ok) if w.ndim == 2 else ok


def sp_count_by_filter(ctx: FieldCtx, n: int, budget: Budget | None = None) -> int:
    """|Sp(2n,q)| by testing every 2n x 2n matrix against the form."""
    budget = budget or default_budget()
    q, m = ctx.q, 2 * n
    total = q ** (m * m)
    budget.check_loops(total, f"brute filter of all {m}x{m} matrices")
    idx = np.arange(total, dtype=np.int64)
    count = 0
    step = 1 << 16
    for lo in range(0, total, step):
        chunk = idx[lo : lo + step]
        digits = (chunk[:, None] // q ** np.arange(m * m - 1, -1, -1, dtype=np.int64)) % q
        mats = digits.astype(np.uint8).reshape(-1, m, m)
        count += int(np.count_nonzero(is_symplectic(ctx, mats)))
    return count


# ----------------------------------------------------------------------
# closed-form counts


def q_binomial(n: int, r: int, q: int) -> int:
    """Gaussian binomial [n r]_q, exact."""
    if r < 0 or r > n:
        return 0
    out = Fraction(1)
    for j in range(r):
        out *= Fraction(q ** (n - j) - 1, q ** (r - j) - 1)
    if out.denominator != 1:
        raise InternalInconsistencyError("q-binomial must be an integer")
    return int(out)


def gl_order(n: int, q: int) -> int:
    out = q ** comb(n, 2)
    for j in range(1, n + 1):
        out *= q**j - 1
    return out


def sp_order(n: int, q: int) -> int:
    out = q ** (n * n)
    for j in range(1, n + 1):
        out *= q ** (2 * j) - 1
    return out


def parabolic_order(n: int, q: int) -> int:
    return q ** comb(n + 1, 2) * gl_order(n, q)


def a_r_order(n: int, r: int, q: int) -> int:
    out = (
        Fraction(gl_order(r, q) * gl_order(n - r, q))
        * q ** comb(n + 1, 2)
        * Fraction(q) ** (r * (2 * n - 3 * r - 1) // 2)
    )
    if out.denominator != 1:
        raise InternalInconsistencyError("|A_r| must be an integer")
    return int(out)


def transversal_size(n: int, r: int, q: int) -> int:
    return q ** comb(r + 1, 2) * q_binomial(n, r, q)


def double_coset_order(n: int, r: int, q: int) -> int:
    p = parabolic_order(n, q)
    size, rem = divmod(p * p, a_r_order(n, r, q))
    if rem:
        raise InternalInconsistencyError("|P|^2 not divisible by |A_r|")
    return size


def alternating_count_formula(q: int, r: int, as_printed: bool = False) -> int:
    """Number of nonsingular r x r alternating matrices over GF(q).

    The default evaluates product terms q^(2j-1) - 1, the form consistent
    with direct enumeration and the double-coset sums.  as_printed=True
    drops the -1 (a circulating typo) for side-by-side reporting.
    """
    if r == 0:
        return 1
    if r % 2:
        return 0
    half = r // 2
    out = q ** (half * (half - 1))
    for j in range(1, half + 1):
        out *= q ** (2 * j - 1) if as_printed else q ** (2 * j - 1) - 1
    return out


def count_alternating(ctx: FieldCtx, r: int, budget: Budget | None = None) -> int:
    """Enumerate r x r alternating (zero-diagonal symmetric) nonsingular
    matrices by brute force."""
    budget = budget or default_budget()
    q = ctx.q
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    budget.check_loops(q ** len(pairs) * r * r, f"alternating {r}x{r} scan")
    count = 0
    for vals in itertools.product(range(q), repeat=len(pairs)):
        m = [[0] * r for _ in range(r)]
        for (i, j), v in zip(pairs, vals):
            m[i][j] = v
            m[j][i] = v
        if _rank(ctx, m) == r:
            count += 1
    return count


def _rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        s = ctx.inv(m[rank][col])
        m[rank] = [ctx.mul(s, x) for x in m[rank]]
        for i in range(len(m)):
            f = m[i][col]
            if i == rank or f == 0:
                continue
            m[i] = [x ^ ctx.mul(f, y) for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def family_coset(family: str, n: int) -> int:
    """The Weyl index of the family's double coset: n-1 (minus, odd n) or
    n-2 (plus, even n)."""
    if family == "minus":
        if n < 1 or n % 2 == 0:
            raise ValueError("minus family needs odd n >= 1")
        return n - 1
    if family == "plus":
        if n < 2 or n % 2:
            raise ValueError("plus family needs even n >= 2")
        return n - 2
    raise ValueError(f"unknown family {family!r}")


def family_constants(family: str, n: int, q: int) -> tuple[int, int]:
    """(scale, reduced_length) for the family's coset.

    The coset has size scale * reduced_length; its exponential sums all
    carry the factor scale, and the associated dual code weights are
    scale/2 times (reduced_length - Kloosterman data).
    """
    family_coset(family, n)  # validates the (family, n) pairing
    if family == "minus":
        scale = q ** ((5 * n * n - 1) // 4) * q_binomial(n, 1, q)
        for j in range(1, (n - 1) // 2 + 1):
            scale *= q ** (2 * j - 1) - 1
        reduced = q ** ((n - 1) ** 2 // 4) * (q**n - 1)
        for j in range(1, (n - 1) // 2 + 1):
            reduced *= q ** (2 * j) - 1
    else:
        scale = q ** ((5 * n * n - 2 * n) // 4) * q_binomial(n, 2, q)
        for j in range(1, (n - 2) // 2 + 1):
            scale *= q ** (2 * j - 1) - 1
        reduced = q ** ((n - 2) ** 2 // 4) * (q**n - 1) * (q ** (n - 1) - 1)
        for j in range(1, (n - 2) // 2 + 1):
            reduced *= q ** (2 * j) - 1
    return scale, reduced


@dataclass(frozen=True)
class SizeReport:
    """Closed-form cardinalities for Sp(2n,q) and its coset decomposition.

    Lists are indexed by the Weyl index r = 0..n.  Constructed only by
    predicted_sizes, which cross-checks the internal identities.
    """

    n: int
    q: int
    gl_order: int
    sp_order: int
    parabolic_order: int
    q_binomials: tuple[int, ...]
    a_r_orders: tuple[int, ...]
    transversal_sizes: tuple[int, ...]
    coset_orders: tuple[int, ...]
    alternating_counts: tuple[int, ...]
    alternating_counts_printed: tuple[int, ...]


def predicted_sizes(ctx: FieldCtx, n: int) -> SizeReport:
    """All the closed-form counts at once, with consistency assertions:
    the cosets partition the group, the transversal sizes sum to
    prod(q^j + 1) (the q-binomial theorem at x = -q), and the family
    constants multiply out to their coset's order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = ctx.q
    rep = SizeReport(
        n=n,
        q=q,
        gl_order=gl_order(n, q),
        sp_order=sp_order(n, q),
        parabolic_order=parabolic_order(n, q),
        q_binomials=tuple(q_binomial(n, r, q) for r in range(n + 1)),
        a_r_orders=tuple(a_r_order(n, r, q) for r in range(n + 1)),
        transversal_sizes=tuple(transversal_size(n, r, q) for r in range(n + 1)),
        coset_orders=tuple(double_coset_order(n, r, q) for r in range(n + 1)),
        alternating_counts=tuple(
            alternating_count_formula(q, r) for r in range(n + 1)
        ),
        alternating_counts_printed=tuple(
            alternating_count_formula(q, r, as_printed=True) for r in range(n + 1)
        ),
    )
    if sum(rep.coset_orders) != rep.sp_order:
        raise InternalInconsistencyError("cosets do not partition Sp(2n,q)")
    expected = 1
    for j in range(1, n + 1):
        expected *= q**j + 1
    if sum(rep.transversal_sizes) != expected:
        raise InternalInconsistencyError("transversal sizes fail the x=-q identity")
    for r in range(n + 1):
        quot, rem = divmod(rep.parabolic_order, rep.a_r_orders[r])
        if rem or quot != rep.transversal_sizes[r]:
            raise InternalInconsistencyError("|P| / |A_r| != transversal size")
    family = "minus" if n % 2 else "plus"
    scale, reduced = family_constants(family, n, q)
    if scale * reduced != rep.coset_orders[family_coset(family, n)]:
        raise InternalInconsistencyError("family constants mismatch coset order")
    return rep


# ----------------------------------------------------------------------
# enumeration


def enumerate_gl(ctx: FieldCtx, n: int, budget: Budget | None = None) -> np.ndarray:
    """All of GL(n,q) as a (g, n, n) array, ordered by packed row encoding."""
    budget = budget or default_budget()
    q = ctx.q
    budget.check_matrices(gl_order(n, q), f"GL({n},{q})")

    def build():
        vectors = list(itertools.product(range(q), repeat=n))
        out: list[tuple] = []

        def reduce(v, echelon):
            v = list(v)
            for pivot_col, row in echelon:
                f = v[pivot_col]
                if f:
                    v = [x ^ ctx.mul(f, y) for x, y in zip(v, row)]
            return v

        def extend(rows, echelon):
            if len(rows) == n:
                out.append(rows)
                return
            for v in vectors:
                red = reduce(v, echelon)
                pivot = next((i for i, x in enumerate(red) if x), None)
                if pivot is None:
                    continue
                s = ctx.inv(red[pivot])
                extend(rows + (v,), echelon + [(pivot, [ctx.mul(s, x) for x in red])])

        extend((), [])
        return np.array(out, dtype=np.uint8)

    return ctx.memo(("gl", n), build)


def symmetric_matrices(ctx: FieldCtx, n: int, budget: Budget | None = None) -> np.ndarray:
    """All symmetric n x n matrices, ordered by their upper-triangle entries."""
    budget = budget or default_budget()
    q = ctx.q
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    budget.check_matrices(q ** len(slots), f"symmetric {n}x{n} matrices")

    def build():
        mats = np.zeros((q ** len(slots), n, n), dtype=np.uint8)
        for idx, vals in enumerate(itertools.product(range(q), repeat=len(slots))):
            for (i, j), v in zip(slots, vals):
                mats[idx, i, j] = v
                mats[idx, j, i] = v
        return mats

    return ctx.memo(("symmetric", n), build)


def enumerate_parabolic(ctx: FieldCtx, n: int, budget: Budget | None = None) -> np.ndarray:
    """The parabolic P(2n,q) as a (|P|, 2n, 2n) array.

    Built as [[A, AB], [0, A^-T]] over A in GL(n,q), B symmetric; the
    factorization is unique, so no dedup pass is needed.
    """
    budget = budget or default_budget()
    q = ctx.q
    budget.check_matrices(parabolic_order(n, q), f"P({2 * n},{q})")

    def build():
        gl = enumerate_gl(ctx, n, budget)
        syms = symmetric_matrices(ctx, n, budget)
        s = len(syms)
        blocks = np.zeros((len(gl) * s, 2 * n, 2 * n), dtype=np.uint8)
        for i, a in enumerate(gl):
            ainv_t = mat_transpose(mat_inv(ctx, a))
            chunk = blocks[i * s : (i + 1) * s]
            chunk[:, :n, :n] = a
            chunk[:, :n, n:] = mat_mul(ctx, a[None], syms)
            chunk[:, n:, n:] = ainv_t
        return blocks

    return ctx.memo(("parabolic", n), build)


def stabilizer_members(ctx: FieldCtx, n: int, r: int, budget: Budget | None = None) -> np.ndarray:
    """A_r = P intersect sigma_r P sigma_r, filtered out of the parabolic."""
    def build():
        p = enumerate_parabolic(ctx, n, budget)
        s = make_sigma(n, r)
        conj = mat_mul(ctx, s[None], mat_mul(ctx, p, s[None]))
        mask = ~np.any(conj[:, n:, :n], axis=(1, 2))
        members = p[mask]
        if len(members) != a_r_order(n, r, ctx.q):
            raise InternalInconsistencyError("A_r filter count disagrees with formula")
        return members

    return ctx.memo(("stabilizer", n, r), build)


def transversal(ctx: FieldCtx, n: int, r: int, budget: Budget | None = None) -> np.ndarray:
    """Right-transversal of A_r in P: smallest-key representative per coset.

    Sweeps P in key order, marking each chosen representative's whole coset
    A_r * t as covered; total work is one product per element of P.
    """
    def build():
        p = enumerate_parabolic(ctx, n, budget)
        members = stabilizer_members(ctx, n, r, budget)
        keys = pack_keys(ctx, p)
        order = np.argsort(keys)
        sorted_keys = keys[order]
        if len(np.unique(sorted_keys)) != len(sorted_keys):
            raise InternalInconsistencyError("duplicate parabolic elements")
        covered = np.zeros(len(p), dtype=bool)
        reps = []
        for pos in range(len(p)):
            if covered[pos]:
                continue
            w = p[order[pos]]
            reps.append(w)
            prod_keys = pack_keys(ctx, mat_mul(ctx, members, w[None]))
            loc = np.searchsorted(sorted_keys, prod_keys)
            if not np.array_equal(sorted_keys[loc], prod_keys):
                raise InternalInconsistencyError("A_r * t left the parabolic")
            covered[loc] = True
        reps = np.stack(reps)
        if len(reps) != transversal_size(n, r, ctx.q):
            raise InternalInconsistencyError("transversal size disagrees with formula")
        return reps

    return ctx.memo(("transversal", n, r), build)


def iter_double_coset_batches(ctx: FieldCtx, n: int, r: int, budget: Budget | None = None):
    """Yield P sigma_r P in |P|-sized batches, one per transversal element."""
    budget = budget or default_budget()
    budget.check_matrices(
        double_coset_order(n, r, ctx.q), f"double coset r={r} of Sp({2*n},{ctx.q})"
    )
    p = enumerate_parabolic(ctx, n, budget)
    sigma = make_sigma(n, r)
    for t in transversal(ctx, n, r, budget):
        yield mat_mul(ctx, p, mat_mul(ctx, sigma, t)[None])


def enumerate_double_coset(ctx: FieldCtx, n: int, r: int, budget: Budget | None = None):
    """Generator over the individual elements of P sigma_r P."""
    for batch in iter_double_coset_batches(ctx, n, r, budget):
        yield from batch


def double_coset_keys(ctx: FieldCtx, n: int, r: int, budget: Budget | None = None) -> np.ndarray:
    """Sorted packed keys of P sigma_r P, asserting every product is distinct."""
    chunks = [
        pack_keys(ctx, batch) for batch in iter_double_coset_batches(ctx, n, r, budget)
    ]
    keys = np.unique(np.concatenate(chunks))
    if len(keys) != double_coset_order(n, r, ctx.q):
        raise InternalInconsistencyError("double coset enumeration hit a duplicate")
    return keys


# ----------------------------------------------------------------------
# trace statistics and exponential sums


def trace_histogram(
    ctx: FieldCtx, n: int, r: int, mode: str = "enumerated", budget: Budget | None = None
) -> list[int]:
    """counts[b] = #{w in P sigma_r P : Tr w = b}.

    mode="enumerated" walks the coset; mode="predicted" evaluates the
    closed forms, which exist for the two named families only.
    """
    if mode == "predicted":
        return predicted_trace_histogram(ctx, _family_from_coset(n, r), n)
    if mode != "enumerated":
        raise ValueError(f"unknown mode {mode!r}")

    def build():
        q = ctx.q
        (budget or default_budget()).check_matrices(
            double_coset_order(n, r, q), "trace histogram"
        )
        mul, _ = _np_tables(ctx)
        p = enumerate_parabolic(ctx, n, budget)
        sigma = make_sigma(n, r)
        counts = np.zeros(q, dtype=np.int64)
        # Tr(p m) via the entrywise pairing sum_{i,k} p[i,k] m[k,i]: no
        # full matrix product is needed.
        for t in transversal(ctx, n, r, budget):
            m_t = mat_transpose(mat_mul(ctx, sigma, t))
            cells = mul[p, m_t[None]]
            traces = np.bitwise_xor.reduce(cells.reshape(len(p), -1), axis=1)
            counts += np.bincount(traces, minlength=q)
        return [int(x) for x in counts]

    return ctx.memo(("trace_hist", n, r), build)


def _family_from_coset(n: int, r: int) -> str:
    if n % 2 and r == n - 1:
        return "minus"
    if n % 2 == 0 and r == n - 2:
        return "plus"
    raise ValueError(f"no closed-form trace data for coset r={r} at n={n}")


def predicted_trace_histogram(ctx: FieldCtx, family: str, n: int) -> list[int]:
    """Closed-form counts[b] for the family coset at this n."""
    q = ctx.q
    scale, reduced = family_constants(family, n, q)
    lead, rem = divmod(scale, q)
    if rem:
        raise InternalInconsistencyError("scale must be divisible by q")
    counts = [0] * q
    if family == "minus":
        counts[0] = lead * (reduced + 1)
        for b in range(1, q):
            if ctx.trace(ctx.inv(b)) == 0:
                counts[b] = lead * (reduced + q + 1)
            else:
                counts[b] = lead * (reduced - q + 1)
    else:
        k1 = kloosterman_all(ctx, 1)
        counts[0] = lead * (reduced + q**3 - q**2 - 1)
        for b in range(1, q):
            counts[b] = lead * (reduced + q * k1[ctx.inv(b)] - q**2 - 1)
    if sum(counts) != scale * reduced:
        raise InternalInconsistencyError("predicted histogram does not sum to |coset|")
    return counts


def dc_character_sum(
    ctx: FieldCtx,
    n: int,
    r: int,
    a: int,
    mode: str = "enumerated",
    budget: Budget | None = None,
) -> int:
    """sum over w in P sigma_r P of lambda(a Tr w).

    mode="enumerated" sums the trace histogram against the character;
    mode="predicted" evaluates the closed form: zero for odd r, and for
    even r a power of q times a Gaussian binomial, the alternating-matrix
    product, and a GL Kloosterman sum twisted by a.
    """
    if not 1 <= a < ctx.q:
        raise ValueError("a must be a nonzero field element")
    q = ctx.q
    if mode == "enumerated":
        hist = trace_histogram(ctx, n, r, "enumerated", budget)
        lam, mul = ctx.lam, ctx.mul
        return sum(hist[b] * lam(mul(a, b)) for b in range(q))
    if mode != "predicted":
        raise ValueError(f"unknown mode {mode!r}")
    if r % 2:
        return 0
    coef = q ** comb(n + 1, 2) * q ** (r * n - r * r // 4) * q_binomial(n, r, q)
    for j in range(1, r // 2 + 1):
        coef *= q ** (2 * j - 1) - 1
    return coef * gl_kloosterman(ctx, n - r, a=1, c=a, budget=budget)


def family_coset_sum(ctx: FieldCtx, family: str, n: int, a: int) -> int:
    """The family's closed-form coset sum: scale * K(lambda;a) for minus,
    scale * (K(lambda;a)^2 + q^2 - q) for plus."""
    if not 1 <= a < ctx.q:
        raise ValueError("a must be a nonzero field element")
    q = ctx.q
    scale, _ = family_constants(family, n, q)
    k1 = kloosterman_all(ctx, 1)[a]
    if family == "minus":
        return scale * k1
    return scale * (k1 * k1 + q * q - q)


def gauss_sum_sp(
    ctx: FieldCtx,
    n: int,
    a: int = 1,
    mode: str = "predicted",
    corrected: bool = True,
    budget: Budget | None = None,
) -> int:
    """sum over all of Sp(2n,q) of lambda(a Tr w).

    mode="predicted" assembles the Bruhat decomposition's closed form from
    transversal sizes, alternating-matrix counts and GL Kloosterman sums;
    corrected=False swaps in the as-printed alternating counts.
    mode="enumerated" sums the enumerated coset sums across the Bruhat
    partition; mode="filtered" brute-filters the whole matrix space (tiny
    cases only).
    """
    if not 1 <= a < ctx.q:
        raise ValueError("a must be a nonzero field element")
    q = ctx.q
    if mode == "enumerated":
        return sum(
            dc_character_sum(ctx, n, r, a, "enumerated", budget) for r in range(n + 1)
        )
    if mode == "filtered":
        budget = budget or default_budget()
        m = 2 * n
        total = q ** (m * m)
        budget.check_loops(total, f"brute Gauss sum over all {m}x{m} matrices")
        _, lam = _np_tables(ctx)
        acc = 0
        idx = np.arange(total, dtype=np.int64)
        step = 1 << 16
        arow = np.array([ctx.mul(a, x) for x in range(q)], dtype=np.int64)
        for lo in range(0, total, step):
            chunk = idx[lo : lo + step]
            digits = (
                chunk[:, None] // q ** np.arange(m * m - 1, -1, -1, dtype=np.int64)
            ) % q
            mats = digits.astype(np.uint8).reshape(-1, m, m)
            keep = is_symplectic(ctx, mats)
            traces = mat_trace(ctx, mats[keep])
            acc += int(lam[arow[traces]].sum())
        return acc
    if mode != "predicted":
        raise ValueError(f"unknown mode {mode!r}")
    total = 0
    for r in range(n + 1):
        a_count = alternating_count_formula(q, r, as_printed=not corrected)
        if a_count == 0:
            continue
        total += (
            transversal_size(n, r, q)
            * q ** (r * (n - r))
            * a_count
            * gl_kloosterman(ctx, n - r, a=1, c=a, budget=budget)
        )
    return q ** comb(n + 1, 2) * total
