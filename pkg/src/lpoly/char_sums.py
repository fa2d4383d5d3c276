"""Exact character sums over finite fields and the L-polynomials built from them.

Everything here returns elements of Z[zeta_p, zeta_d], never floats.  The
enumeration runs over the whole extension field, so values are exact by
construction; the cost is O(q^r * terms), guarded by a configurable cap.

The inner loop is vectorized: a cached table holds the absolute trace of
every power of the lex-smallest generator G of the extension, and a sum
becomes a histogram of (trace exponent, character exponent) pairs walked
with numpy index arithmetic.  A per-element reference implementation lives
in the test suite and pins this engine down on small instances.
"""
from __future__ import annotations

from math import gcd

import numpy as np

from .cyclotomic import CycloElem, CycloRing, embed_into, exact_div_int, make_ring
from .errors import (
    BadParameters,
    EmptyInput,
    EnumerationBound,
    InternalInconsistency,
    NonVanishingTail,
    NotCoprime,
    NotDivisible,
    OrderMismatch,
    RingMismatch,
    ZeroLeading,
)
from .finite_field import (
    FieldElement,
    FieldSpec,
    dlog,
    embed,
    make_field,
    multiplication_matrix,
    primitive_root,
)

MAX_ENUM_DEFAULT = 1 << 24
_CHUNK = 1 << 20
_BLOCK = 1 << 15


class PolySpec:
    """Monic polynomial X^e + a_{e-1} X^{e-1} + ... + a_1 X over F_q.

    Constant term is identically zero and the degree is prime to p; coeffs
    holds a_1 .. a_{e-1} in that order (empty when e = 1).
    """

    __slots__ = ("base", "e", "coeffs")

    def __init__(self, base: FieldSpec, e: int, coeffs=()):
        if e < 1:
            raise BadParameters("degree must be at least 1")
        if e % base.p == 0:
            raise BadParameters(f"degree {e} is divisible by p = {base.p}")
        coeffs = tuple(coeffs)
        if len(coeffs) != e - 1:
            raise BadParameters(f"expected {e - 1} lower coefficients, got {len(coeffs)}")
        for a in coeffs:
            if not isinstance(a, FieldElement) or a.owner != base:
                raise BadParameters("coefficients must live in the base field")
        self.base = base
        self.e = e
        self.coeffs = coeffs

    def full_coeffs(self) -> tuple:
        """All coefficients of degrees 0..e, low to high."""
        return (self.base.zero(),) + self.coeffs + (self.base.one(),)

    def terms(self):
        """(degree, coefficient) pairs with nonzero coefficient; includes the top."""
        out = [(i + 1, a) for i, a in enumerate(self.coeffs) if not a.is_zero()]
        out.append((self.e, self.base.one()))
        return out

    def key(self) -> tuple:
        return (self.base.p, self.base.n, self.e, tuple(a.to_int() for a in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, PolySpec):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PolySpec(q={self.base.order}, e={self.e}, coeffs={[a.to_int() for a in self.coeffs]})"


def poly_from_ints(base: FieldSpec, e: int, ints) -> PolySpec:
    return PolySpec(base, e, tuple(base.element_from_int(v) for v in ints))


def embed_poly(P: PolySpec, target: FieldSpec) -> PolySpec:
    """The same polynomial with coefficients pushed into an extension field."""
    em = embed(P.base, target)
    return PolySpec(target, P.e, tuple(em(a) for a in P.coeffs))


class TwistSpec:
    """Multiplicative twist: the kappa-th power of a fixed order-d character."""

    __slots__ = ("d", "kappa")

    def __init__(self, d: int, kappa: int):
        d, kappa = int(d), int(kappa)
        if d < 1:
            raise BadParameters("character order must be positive")
        if not 0 <= kappa < d:
            raise BadParameters(f"kappa must lie in [0, {d - 1}]")
        self.d = d
        self.kappa = kappa

    def __repr__(self):
        return f"TwistSpec(d={self.d}, kappa={self.kappa})"


class _TraceTable:
    """Absolute traces of G^k for the lex-smallest generator G of F_{p^n}."""

    __slots__ = ("spec", "gen", "order", "traces")

    def __init__(self, p: int, n: int):
        spec = make_field(p, n)
        G = primitive_root(spec)
        M = spec.order - 1
        # column-convention matrix; transpose for the row-vector walk below
        mg = np.array(multiplication_matrix(G), dtype=np.int64).T
        btr = np.array(spec.basis_traces(), dtype=np.int64)
        T = np.empty(M, dtype=np.int8)
        first = min(_BLOCK, M)
        block = np.empty((first, n), dtype=np.int64)
        cur = np.zeros(n, dtype=np.int64)
        cur[0] = 1
        for i in range(first):
            block[i] = cur
            cur = (cur @ mg) % p
        T[:first] = (block @ btr % p).astype(np.int8)
        if M > first:
            mgB = _matpow_mod(mg, _BLOCK, p)
            k = first
            while k < M:
                block = (block @ mgB) % p
                size = min(_BLOCK, M - k)
                T[k : k + size] = (block[:size] @ btr % p).astype(np.int8)
                k += size
        self.spec = spec
        self.gen = G
        self.order = M
        self.traces = T


def _matpow_mod(mat, k, p):
    n = mat.shape[0]
    acc = np.eye(n, dtype=np.int64)
    base = mat % p
    while k:
        if k & 1:
            acc = (acc @ base) % p
        base = (base @ base) % p
        k >>= 1
    return acc


_trace_tables: dict = {}


def _trace_table(p: int, n: int) -> _TraceTable:
    key = (p, n)
    if key not in _trace_tables:
        _trace_tables[key] = _TraceTable(p, n)
    return _trace_tables[key]


def _check_enum(total: int, max_enum: int):
    if total > max_enum:
        raise EnumerationBound(
            f"enumeration of {total} field elements exceeds the cap {max_enum}"
        )


def _term_shifts(P: PolySpec, tab: _TraceTable, em) -> list:
    """(degree, dlog of embedded coefficient) for each nonzero term of P."""
    return [(i, dlog(em(a), tab.gen)) for i, a in P.terms()]


def _psi_counts(P: PolySpec, stride: int, r: int, max_enum: int):
    """Histogram of trace values of P(x^stride) over nonzero x in k_r."""
    base = P.base
    p, m = base.p, base.n
    _check_enum(base.order**r, max_enum)
    tab = _trace_table(p, m * r)
    em = embed(base, tab.spec)
    shifts = _term_shifts(P, tab, em)
    M = tab.order
    T = tab.traces
    counts = np.zeros(p, dtype=np.int64)
    for start in range(0, M, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, M), dtype=np.int64)
        acc = np.zeros(k.shape, dtype=np.int16)
        for i, ja in shifts:
            acc += T[(ja + i * stride * k) % M]
        counts += np.bincount(acc % p, minlength=p)
    return counts


_sum_cache: dict = {}


def twisted_sum(P: PolySpec, twist: TwistSpec, r: int, max_enum: int = MAX_ENUM_DEFAULT) -> CycloElem:
    """S_r of P against the kappa-th power of the pinned order-d character.

    The character chi sends the lex-smallest generator g of F_q^* to zeta_d
    and is evaluated on x through the norm down to F_q.  Exact element of
    Z[zeta_p, zeta_d].
    """
    base = P.base
    p, m, q = base.p, base.n, base.order
    d, kappa = twist.d, twist.kappa
    if kappa == 0:
        raise BadParameters("kappa = 0 is the additive case; use additive_sum")
    if (q - 1) % d:
        raise OrderMismatch(f"character order {d} does not divide q - 1 = {q - 1}")
    if gcd(p, d) != 1:
        raise NotCoprime(f"character order {d} shares a factor with p = {p}")
    if r < 1:
        raise BadParameters("r must be at least 1")
    key = ("twisted", P.key(), d, kappa, r)
    if key in _sum_cache:
        _check_enum(q**r, max_enum)
        return _sum_cache[key]
    _check_enum(q**r, max_enum)
    tab = _trace_table(p, m * r)
    em = embed(base, tab.spec)
    shifts = _term_shifts(P, tab, em)
    M = tab.order
    T = tab.traces
    # the norm of G^k lands at exponent k of the embedded base generator,
    # up to the unit w below: emb(g) = G^(s*w) with s = (q^r-1)/(q-1)
    s = M // (q - 1)
    k0 = dlog(em(primitive_root(base)), tab.gen)
    if k0 % s:
        raise InternalInconsistency("embedded generator escaped the norm image")
    w_inv = pow(k0 // s, -1, q - 1)
    mul = (kappa * w_inv) % d
    counts = np.zeros(p * d, dtype=np.int64)
    for start in range(0, M, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, M), dtype=np.int64)
        acc = np.zeros(k.shape, dtype=np.int16)
        for i, ja in shifts:
            acc += T[(ja + i * k) % M]
        code = (acc % p).astype(np.int64) * d + (mul * k) % d
        counts += np.bincount(code, minlength=p * d)
    ring = make_ring(p, d)
    val = ring.from_raw(counts.reshape(p, d).tolist())
    _sum_cache[key] = val
    return val


def additive_sum(P: PolySpec, r: int, max_enum: int = MAX_ENUM_DEFAULT) -> CycloElem:
    """Sum of zeta_p^Tr(P(x)) over every x in k_r, the zero included."""
    if r < 1:
        raise BadParameters("r must be at least 1")
    key = ("additive", P.key(), r)
    if key in _sum_cache:
        _check_enum(P.base.order**r, max_enum)
        return _sum_cache[key]
    counts = _psi_counts(P, 1, r, max_enum)
    counts[0] += 1  # P(0) = 0
    ring = make_ring(P.base.p, 1)
    val = ring.from_raw(counts.reshape(-1, 1).tolist())
    _sum_cache[key] = val
    return val


def power_sum(P: PolySpec, d: int, r: int, max_enum: int = MAX_ENUM_DEFAULT) -> CycloElem:
    """Sum of zeta_p^Tr(P(x^d)) over every x in k_r."""
    if gcd(P.base.p, d) != 1:
        raise NotCoprime(f"d = {d} shares a factor with p = {P.base.p}")
    if r < 1:
        raise BadParameters("r must be at least 1")
    key = ("power", P.key(), d, r)
    if key in _sum_cache:
        _check_enum(P.base.order**r, max_enum)
        return _sum_cache[key]
    counts = _psi_counts(P, d, r, max_enum)
    counts[0] += 1
    ring = make_ring(P.base.p, 1)
    val = ring.from_raw(counts.reshape(-1, 1).tolist())
    _sum_cache[key] = val
    return val


def gauss_sum(qspec: FieldSpec, d: int, kappa: int, max_enum: int = MAX_ENUM_DEFAULT) -> CycloElem:
    """Gauss sum of the pinned order-d character's kappa-th power over F_q."""
    if not 1 <= kappa <= d - 1:
        raise BadParameters(f"kappa must lie in [1, {d - 1}]")
    if (qspec.order - 1) % d:
        raise OrderMismatch(f"character order {d} does not divide q - 1")
    return twisted_sum(PolySpec(qspec, 1), TwistSpec(d, kappa), 1, max_enum)


class CharSumSeries:
    """A finite run S_1 .. S_R of exact sums sharing one coefficient ring."""

    __slots__ = ("sums", "ring")

    def __init__(self, sums):
        sums = tuple(sums)
        if not sums:
            raise EmptyInput("a series needs at least one sum")
        ring = sums[0].ring
        for s in sums:
            if s.ring != ring:
                raise RingMismatch("series sums live in different rings")
        self.sums = sums
        self.ring = ring

    def __len__(self):
        return len(self.sums)


def twisted_series(P: PolySpec, twist: TwistSpec, count: int, max_enum: int = MAX_ENUM_DEFAULT) -> CharSumSeries:
    return CharSumSeries([twisted_sum(P, twist, r, max_enum) for r in range(1, count + 1)])


def additive_series(P: PolySpec, count: int, max_enum: int = MAX_ENUM_DEFAULT) -> CharSumSeries:
    return CharSumSeries([additive_sum(P, r, max_enum) for r in range(1, count + 1)])


def power_series(P: PolySpec, d: int, count: int, max_enum: int = MAX_ENUM_DEFAULT) -> CharSumSeries:
    return CharSumSeries([power_sum(P, d, r, max_enum) for r in range(1, count + 1)])


class LPolynomial:
    """Polynomial with CycloElem coefficients, constant term 1."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CycloRing, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise EmptyInput("no coefficients")
        if coeffs[0] != ring.one():
            raise BadParameters("constant term must be 1")
        for c in coeffs:
            if c.ring != ring:
                raise RingMismatch("coefficient outside the stated ring")
        self.ring = ring
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"LPolynomial(ring={self.ring}, degree={self.degree})"


def l_polynomial(series: CharSumSeries, degree: int) -> LPolynomial:
    """Assemble exp(sum S_r T^r / r) and certify it is a polynomial of the
    stated degree.

    Uses the recurrence n*c_n = sum_{r<=n} S_r c_{n-r} with exact integer
    division at every step.  The coefficient past the claimed degree must
    vanish and the leading one must not; both failures indicate either a
    wrong degree or a broken sum upstream.
    """
    if degree < 0:
        raise BadParameters("degree must be nonnegative")
    if len(series) < degree + 1:
        raise BadParameters(
            f"need at least {degree + 1} sums to certify degree {degree}, have {len(series)}"
        )
    ring = series.ring
    coeffs = [ring.one()]
    for n in range(1, degree + 2):
        tot = ring.zero()
        for r in range(1, n + 1):
            tot = tot + series.sums[r - 1] * coeffs[n - r]
        coeffs.append(exact_div_int(tot, n))
    if not coeffs[degree + 1].is_zero():
        raise NonVanishingTail(f"coefficient {degree + 1} is nonzero; degree {degree} is wrong")
    if coeffs[degree].is_zero():
        raise ZeroLeading(f"leading coefficient at degree {degree} vanishes")
    return LPolynomial(ring, coeffs[: degree + 1])


def lpoly_mul(A: LPolynomial, B: LPolynomial) -> LPolynomial:
    if A.ring != B.ring:
        raise RingMismatch("L-polynomial product needs a common ring")
    ring = A.ring
    out = [ring.zero() for _ in range(A.degree + B.degree + 1)]
    for i, a in enumerate(A.coeffs):
        if not a.is_zero():
            for j, b in enumerate(B.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
    return LPolynomial(ring, out)


def lpoly_inflate(A: LPolynomial, c: int) -> LPolynomial:
    """Substitute T -> T^c."""
    if c < 1:
        raise BadParameters("inflation factor must be positive")
    out = [A.ring.zero() for _ in range(c * A.degree + 1)]
    for i, a in enumerate(A.coeffs):
        out[c * i] = a
    return LPolynomial(A.ring, out)


def lpoly_map_ring(A: LPolynomial, target: CycloRing) -> LPolynomial:
    """Push coefficients along Z[zeta_p, zeta_d'] -> Z[zeta_p, zeta_d]."""
    return LPolynomial(target, [embed_into(c, target) for c in A.coeffs])
