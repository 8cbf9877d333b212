"""Exact arithmetic in the binary fields GF(2^r), r = 1..12.

Field elements are plain ints in [0, 2^r): bit i holds the coefficient of
x^i in the polynomial residue.  The integer value doubles as the canonical
element ordering, so ``range(q)`` enumerates the field deterministically.
Every result downstream is representation independent; the modulus only
fixes which bit pattern names which element.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import UnsupportedFieldError

MAX_DEGREE = 12

# One irreducible modulus per supported degree, as a little-endian bit mask
# (bit i = coefficient of x^i).  Construction re-verifies irreducibility, so
# an alternative modulus of the same degree may be passed explicitly.
MODULUS_TABLE = {
    1: 0b11,             # x + 1
    2: 0b111,            # x^2 + x + 1
    3: 0b1011,           # x^3 + x + 1
    4: 0b10011,          # x^4 + x + 1
    5: 0b100101,         # x^5 + x^2 + 1
    6: 0b1000011,        # x^6 + x + 1
    7: 0b10000011,       # x^7 + x + 1
    8: 0b100011011,      # x^8 + x^4 + x^3 + x + 1
    9: 0b1000000011,     # x^9 + x + 1
    10: 0b10000001001,   # x^10 + x^3 + 1
    11: 0b100000000101,  # x^11 + x^2 + 1
    12: 0b1000000001001, # x^12 + x^3 + 1
}


def poly_degree(p: int) -> int:
    """Degree of a bit-mask polynomial (-1 for the zero polynomial)."""
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of bit-mask polynomial a modulo b over GF(2)."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division of a bit-mask polynomial by everything of half degree."""
    deg = poly_degree(p)
    if deg <= 0:
        return False
    if p & 1 == 0:
        return p == 0b10  # x itself; every other multiple of x splits
    for d in range(1, deg // 2 + 1):
        for div in range(1 << d, 1 << (d + 1)):
            if poly_mod(p, div) == 0:
                return False
    return True


def poly_str(p: int) -> str:
    """Human-readable form of a bit-mask polynomial, e.g. ``x^3+x+1``."""
    if p == 0:
        return "0"
    terms = []
    for i in range(poly_degree(p), -1, -1):
        if p >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return "+".join(terms)


class FieldCtx:
    """Arithmetic context for GF(2^r) under a fixed irreducible modulus.

    Immutable once built.  The trace and character tables are precomputed;
    the inverse table is filled on first use.  Contexts compare and hash by
    (r, modulus), and carry a private memo dict that the other modules use
    to cache per-field artifacts (multiplication tables, enumerated groups,
    Kloosterman values).

    Parameters
    ----------
    r : int
        Extension degree, 1 <= r <= 12.
    modulus : int, optional
        Bit-mask modulus overriding the stock table entry.  Must be
        irreducible of degree exactly r.
    """

    __slots__ = ("r", "q", "modulus", "_trace", "_lam", "_inv", "_memo")

    def __init__(self, r: int, modulus: int | None = None):
        if not isinstance(r, int) or not 1 <= r <= MAX_DEGREE:
            raise UnsupportedFieldError(
                f"degree r={r} outside the supported range 1..{MAX_DEGREE}"
            )
        if modulus is None:
            modulus = MODULUS_TABLE[r]
        if poly_degree(modulus) != r:
            raise UnsupportedFieldError(
                f"modulus {poly_str(modulus)} does not have degree {r}"
            )
        if not is_irreducible(modulus):
            raise UnsupportedFieldError(f"modulus {poly_str(modulus)} is reducible")
        self.r = r
        self.q = 1 << r
        self.modulus = modulus
        self._trace = tuple(self._trace_slow(x) for x in range(self.q))
        self._lam = tuple(1 - 2 * t for t in self._trace)
        self._inv = None
        self._memo = {}

    # ------------------------------------------------------------------
    # element arithmetic

    @staticmethod
    def add(x: int, y: int) -> int:
        return x ^ y

    def mul(self, x: int, y: int) -> int:
        """Product in GF(2^r): carry-less multiply with modular reduction."""
        r, mod = self.r, self.modulus
        acc = 0
        while y:
            if y & 1:
                acc ^= x
            y >>= 1
            x <<= 1
            if x >> r & 1:
                x ^= mod
        return acc

    def square(self, x: int) -> int:
        return self.mul(x, x)

    def pow(self, x: int, e: int) -> int:
        """x**e for e >= 0, by square and multiply."""
        if e < 0:
            raise ValueError("negative exponent; use inv() first")
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            e >>= 1
        return acc

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._inv is None:
            # Fermat: x^(q-2).  Built once, table lookups afterwards.
            self._inv = tuple(
                0 if v == 0 else self.pow(v, self.q - 2) for v in range(self.q)
            )
        return self._inv[x]

    def inv_table(self) -> tuple[int, ...]:
        """Full inverse table (index 0 holds a placeholder 0)."""
        if self._inv is None:
            self.inv(1)
        return self._inv

    def frobenius(self, x: int) -> int:
        return self.mul(x, x)

    # ------------------------------------------------------------------
    # trace and the canonical additive character

    def _trace_slow(self, x: int) -> int:
        acc, t = 0, x
        for _ in range(self.r):
            acc ^= t
            t = self.mul(t, t)
        if acc not in (0, 1):
            raise AssertionError("trace escaped the prime subfield")
        return acc

    def trace(self, x: int) -> int:
        """Absolute trace GF(2^r) -> GF(2), as an int in {0, 1}."""
        return self._trace[x]

    def lam(self, x: int) -> int:
        """Canonical additive character lambda(x) = (-1)^trace(x)."""
        return self._lam[x]

    def artin_schreier_image(self) -> frozenset[int]:
        """The image {a^2 + a : a in GF(2^r)}, i.e. the trace kernel."""
        return self.memo(
            "artin_schreier",
            lambda: frozenset(self.mul(a, a) ^ a for a in range(self.q)),
        )

    # ------------------------------------------------------------------
    # enumeration and plumbing

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def memo(self, key, build):
        """Per-context cache for derived tables; key must be hashable."""
        try:
            return self._memo[key]
        except KeyError:
            value = build()
            self._memo[key] = value
            return value

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.r == other.r
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.r, self.modulus))

    def __repr__(self):
        return f"FieldCtx(r={self.r}, modulus={poly_str(self.modulus)})"


@lru_cache(maxsize=None)
def make_field(r: int, modulus: int | None = None) -> FieldCtx:
    """Shared FieldCtx factory; equal arguments return the same object.

    Sharing matters: enumerated groups and cached character sums live on the
    context, so repeated calls across modules reuse the heavy tables.
    """
    return FieldCtx(r, modulus)
