"""Exact p-adic valuations of cyclotomic integers, normalized so v(p) = 1.

The ambient local field is Q_p(zeta_d, zeta_p): an unramified layer of
degree f = ord_d(p), generated by a root y of a lifted irreducible factor
of the d-th cyclotomic polynomial, followed by the totally ramified layer
of degree p - 1 generated by pi = zeta_p - 1.  In the integral basis
{y^i pi^j} the valuation of an element is the minimum over coordinates of
v_p(coefficient) + j/(p-1): the fractional parts of the pi-exponents are
distinct, so no cancellation can hide the minimum.  Working modulo p^N is
exact whenever anything survives the reduction; if everything dies, the
precision doubles and the computation reruns, up to a hard cap.

Which factor of Phi_d is lifted fixes which place above p gets measured.
The default is the lex-smallest factor.  aligned_context instead picks the
factor vanishing on g^((q-1)/d) for the deterministic generator g of F_q,
which ties the place to the same character convention the sum engine pins
(chi(g) = zeta_d); per-twist valuations match the digit combinatorics only
under that alignment, and that is the context the verification commands
use.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from .char_sums import LPolynomial
from .cyclotomic import CycloElem, cyclotomic_polynomial
from .errors import (
    BadParameters,
    InternalInconsistency,
    NotCoprime,
    NotPrime,
    OrderMismatch,
    PrecisionExhausted,
    RingMismatch,
)
from .finite_field import FieldSpec, _is_prime, make_field, primitive_root
from .polygon import NewtonPolygon


def _mult_order(p: int, d: int) -> int:
    if d == 1:
        return 1
    t, k = p % d, 1
    while t != 1:
        t = (t * p) % d
        k += 1
    return k


def _zmul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % mod
    return out


def _zdivmod_monic(num, den, mod):
    num = [c % mod for c in num]
    dn = len(den) - 1
    if len(num) <= dn:
        return [0], num
    quo = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            quo[k - dn] = c
            for j in range(dn + 1):
                num[k - dn + j] = (num[k - dn + j] - c * den[j]) % mod
    return quo, num[:dn] if dn else [0]


def _ptrim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _p_ext_gcd(a, b, p):
    """(g, s, t) over F_p[y] with s a + t b = g, g monic."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        q, r = _zdivmod_monic_nonmonic(r0, r1, p)
        r0, r1 = r1, _ptrim(r)
        s0, s1 = s1, _ptrim(_sub(s0, _zmul(q, s1, p), p))
        t0, t1 = t1, _ptrim(_sub(t0, _zmul(q, t1, p), p))
    lead = r0[-1]
    inv = pow(lead, -1, p)
    scale = lambda v: [(c * inv) % p for c in v]
    return scale(r0), scale(s0), scale(t0)


def _sub(a, b, mod):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [(x - y) % mod for x, y in zip(a, b)]


def _zdivmod_monic_nonmonic(num, den, p):
    """Division over F_p by a possibly non-monic divisor."""
    inv = pow(den[-1], -1, p)
    mon = [(c * inv) % p for c in den]
    q, r = _zdivmod_monic(num, mon, p)
    return [(c * inv) % p for c in q], r


@lru_cache(maxsize=None)
def phi_d_factors_mod_p(p: int, d: int) -> tuple:
    """All monic irreducible factors of Phi_d over F_p, each of degree
    ord_d(p), sorted by their integer encoding.  Coefficients low to high."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if gcd(p, d) != 1:
        raise NotCoprime(f"p = {p} and d = {d} are not coprime")
    f = _mult_order(p, d)
    F = make_field(p, f)
    G = primitive_root(F)
    xi = G ** ((F.order - 1) // d)
    seen = set()
    factors = []
    for j in range(d):
        if gcd(j, d) != 1 or j in seen:
            continue
        orbit = [j]
        t = (j * p) % d
        while t != j:
            orbit.append(t)
            t = (t * p) % d
        seen.update(orbit)
        poly = [F.one()]
        for t in orbit:
            root = xi**t
            shifted = [F.zero()] + poly
            poly = [shifted[k] - root * poly[k] if k < len(poly) else shifted[k] for k in range(len(shifted))]
        ints = []
        for c in poly:
            cs = c.coeffs
            if any(cs[1:]):
                raise InternalInconsistency("factor coefficient escaped the prime field")
            ints.append(cs[0])
        if len(ints) != f + 1:
            raise InternalInconsistency("factor degree mismatch")
        factors.append(tuple(ints))
    factors.sort(key=lambda c: sum(ci * p**i for i, ci in enumerate(c)))
    return tuple(factors)


def _hensel_lift(p: int, d: int, factor, N: int):
    """Lift a factor of Phi_d mod p to a monic divisor of Phi_d mod p^N."""
    phi = [int(c) for c in cyclotomic_polynomial(d)]
    h0 = [c % p for c in factor]
    g0, rem = _zdivmod_monic([c % p for c in phi], h0, p)
    if any(rem):
        raise BadParameters("not a factor of the cyclotomic polynomial mod p")
    if len(g0) == 1 and g0[0] == 1:
        # the factor is the whole of Phi_d; it lifts to itself
        return tuple(c % p**N for c in phi)
    g_, a, b = _p_ext_gcd(h0, g0, p)
    if g_ != [1]:
        raise InternalInconsistency("cyclotomic polynomial not separable mod p")
    pm = p**N
    h = [c % pm for c in h0]
    g = [c % pm for c in g0]
    for k in range(1, N):
        pk = p**k
        prod = [0] * len(phi)
        for i, x in enumerate(h):
            if x:
                for j, y in enumerate(g):
                    prod[i + j] += x * y
        delta = []
        for c_phi, c_prod in zip(phi, prod):
            diff = c_phi - c_prod
            if diff % pk:
                raise InternalInconsistency("lifting lost a precision level")
            delta.append((diff // pk) % p)
        _, u = _zdivmod_monic(_zmul(b, delta, p), h0, p)
        corr = _sub(delta, _zmul(u, g0, p), p)
        v, vr = _zdivmod_monic(corr, h0, p)
        if any(vr):
            raise InternalInconsistency("cofactor correction not divisible")
        h = [(x + pk * y) % pm for x, y in zip(h, u + [0] * (len(h) - len(u)))]
        v = v + [0] * (len(g) - len(v))
        g = [(x + pk * y) % pm for x, y in zip(g, v)]
    check = [0] * len(phi)
    for i, x in enumerate(h):
        for j, y in enumerate(g):
            check[i + j] = (check[i + j] + x * y) % pm
    if [c % pm for c in phi] != check:
        raise InternalInconsistency("lifted factors do not multiply back")
    return tuple(h)


class LocalContext:
    """Frozen description of one place of Q_p(zeta_d, zeta_p) at precision p^N."""

    __slots__ = ("p", "d", "N", "f", "factor_mod_p", "htilde", "E", "_ypow", "_binom")

    def __init__(self, p: int, d: int, N: int, factor_mod_p):
        self.p = p
        self.d = d
        self.N = N
        self.f = len(factor_mod_p) - 1
        self.factor_mod_p = tuple(factor_mod_p)
        self.htilde = _hensel_lift(p, d, factor_mod_p, N)
        # E(pi) = ((1+pi)^p - 1)/pi; never used to rewrite anything (the
        # expansions below stop at pi^(p-2)) but kept as the defining
        # relation of the ramified layer
        self.E = tuple(comb(p, j + 1) for j in range(p))
        pm = p**N
        phi_d = len(cyclotomic_polynomial(self.d)) - 1
        ypow = []
        cur = [1] + [0] * (self.f - 1)
        for t in range(phi_d):
            ypow.append(tuple(cur))
            cur = [0] + cur
            _, cur = _zdivmod_monic(cur, list(self.htilde), pm)
            cur = cur + [0] * (self.f - len(cur))
        self._ypow = tuple(ypow)
        self._binom = tuple(tuple(comb(a, j) for j in range(a + 1)) for a in range(p - 1))

    def __repr__(self):
        return f"LocalContext(p={self.p}, d={self.d}, N={self.N}, f={self.f})"


@lru_cache(maxsize=None)
def _context_cached(p, d, N, factor):
    return LocalContext(p, d, N, factor)


def make_context(p: int, d: int, N: int, factor=None) -> LocalContext:
    """Context for the place given by an irreducible factor of Phi_d mod p.

    factor defaults to the lex-smallest one; when supplied it must be a
    monic degree-f coefficient tuple from phi_d_factors_mod_p.
    """
    if N < 1:
        raise BadParameters("precision must be at least 1")
    factors = phi_d_factors_mod_p(p, d)
    if factor is None:
        factor = factors[0]
    else:
        factor = tuple(int(c) % p for c in factor)
        if factor not in factors:
            raise BadParameters("not an irreducible factor of Phi_d mod p")
    return _context_cached(p, d, N, factor)


def aligned_context(qspec: FieldSpec, d: int, N: int) -> LocalContext:
    """Context whose residue of zeta_d is g^((q-1)/d) for the deterministic
    generator g of F_q; matches the pinned character chi(g) = zeta_d, so
    per-twist valuations line up with the digit combinatorics."""
    q = qspec.order
    if d >= 2 and (q - 1) % d:
        raise OrderMismatch(f"{d} does not divide q - 1 = {q - 1}")
    p = qspec.p
    g = primitive_root(qspec)
    ghat = g ** ((q - 1) // d)
    orbit = [ghat]
    cur = ghat**p
    while cur != ghat:
        orbit.append(cur)
        cur = cur**p
    poly = [qspec.one()]
    for root in orbit:
        shifted = [qspec.zero()] + poly
        poly = [shifted[k] - root * poly[k] if k < len(poly) else shifted[k] for k in range(len(shifted))]
    ints = []
    for c in poly:
        cs = c.coeffs
        if any(cs[1:]):
            raise InternalInconsistency("aligned factor escaped the prime field")
        ints.append(cs[0])
    return make_context(p, d, N, factor=tuple(ints))


def _int_val(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        v += 1
        c //= p
    return v


def _try_valuation(x: CycloElem, ctx: LocalContext):
    p, f = ctx.p, ctx.f
    pm = p**ctx.N
    coords = [[0] * f for _ in range(p - 1)]
    for a in range(p - 1):
        row = x.coeffs[a]
        for b, cab in enumerate(row):
            if cab:
                yb = ctx._ypow[b]
                binrow = ctx._binom[a]
                for j in range(a + 1):
                    t = binrow[j] * cab
                    cj = coords[j]
                    for i in range(f):
                        cj[i] = (cj[i] + t * yb[i]) % pm
    best = None
    for j in range(p - 1):
        for c in coords[j]:
            if c:
                tot = Fraction(_int_val(c, p)) + Fraction(j, p - 1)
                if best is None or tot < best:
                    best = tot
    return best


def valuation(x: CycloElem, ctx: LocalContext):
    """p-adic valuation of x at the context's place, v(p) = 1.

    Returns a Fraction, or None for the zero element.  Escalates precision
    by doubling when x is nonzero but reduces to zero mod p^N.
    """
    if x.ring.p != ctx.p or x.ring.d != ctx.d:
        raise RingMismatch("element ring does not match the context")
    if x.is_zero():
        return None
    cap = 16 * ctx.N
    cur = ctx
    while True:
        v = _try_valuation(x, cur)
        if v is not None:
            return v
        if cur.N >= cap:
            raise PrecisionExhausted(
                f"no nonzero reduction up to precision exponent {cur.N}"
            )
        cur = make_context(ctx.p, ctx.d, min(2 * cur.N, cap), ctx.factor_mod_p)


def q_newton_polygon(L: LPolynomial, m: int, ctx: LocalContext) -> NewtonPolygon:
    """Lower hull of (n, v(c_n)/m), the polygon with respect to q = p^m."""
    if m < 1:
        raise BadParameters("m must be at least 1")
    pts = []
    for n, c in enumerate(L.coeffs):
        v = valuation(c, ctx)
        pts.append((n, None if v is None else v / m))
    return NewtonPolygon.from_points(pts)


def default_precision(m: int, degree: int) -> int:
    """Guard-digit default: coefficient n of a degree-D L-function over F_(p^m)
    has v_p at most m*D, plus four digits of slack."""
    return m * degree + 4
