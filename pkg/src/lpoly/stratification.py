"""Orbit, digit-sequence, and polygon combinatorics for twisted sums.

Everything here is exact integer and rational arithmetic: orbits of a
multiplier acting on Z/dZ with their mean statistics, the carry-digit
sequences attached to a twist class, the permutation-indexed minima
that govern generic q-adic slopes, the predicted polygons (Hodge-style
lower bound and generic value) in both the twisted and the power
substitution settings, and evaluation of the coefficient polynomials
whose non-vanishing detects generic slope behaviour.

The per-twist tables are deliberately small objects; degrees past a
dozen are outside desk scale, so quantities are recomputed from the
stored digit sequences rather than cached across instances.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .char_sums import PolySpec, TwistSpec
from .errors import (
    BadParameters,
    CapExceeded,
    InternalInconsistency,
    NonConvex,
    NotCoprime,
)
from .finite_field import FieldElement
from .polygon import NewtonPolygon

SIGMA_CAP_DEFAULT = 8


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _mult_order(t: int, d: int) -> int:
    if d == 1:
        return 1
    if gcd(t, d) != 1:
        raise NotCoprime(f"multiplier {t} shares a factor with modulus {d}")
    k, cur = 1, t % d
    while cur != 1:
        cur = (cur * t) % d
        k += 1
    return k


class Orbit:
    """One orbit of the multiplier acting on Z/dZ.

    mu is the orbit mean divided by d: (sum of members)/(d * size).
    For the zero orbit this is 0; for the others it lies in (0, 1).
    """

    __slots__ = ("rep", "members", "size", "mu")

    def __init__(self, members, d: int):
        ms = tuple(sorted(members))
        self.rep = ms[0]
        self.members = frozenset(ms)
        self.size = len(ms)
        self.mu = Fraction(sum(ms), d * len(ms))

    def __repr__(self):
        return f"Orbit(rep={self.rep}, size={self.size}, mu={self.mu})"


class OrbitDecomposition:
    """Partition of Z/dZ into orbits of multiplication by t."""

    __slots__ = ("modulus", "multiplier", "orbits", "_where")

    def __init__(self, modulus: int, multiplier: int, orbits):
        self.modulus = modulus
        self.multiplier = multiplier
        self.orbits = orbits
        where = {}
        for idx, orb in enumerate(orbits):
            for mem in orb.members:
                where[mem] = idx
        self._where = where

    def orbit_of(self, kappa: int) -> Orbit:
        return self.orbits[self._where[kappa % self.modulus]]

    def mu_of(self, kappa: int) -> Fraction:
        return self.orbit_of(kappa).mu

    def nonzero_reps(self) -> tuple:
        return tuple(o.rep for o in self.orbits if o.rep != 0)

    def __repr__(self):
        return f"OrbitDecomposition(d={self.modulus}, t={self.multiplier}, orbits={len(self.orbits)})"


def orbit_decomposition(d: int, t: int) -> OrbitDecomposition:
    """Partition Z/dZ into orbits of multiplication by t, with mu values."""
    if d < 1:
        raise BadParameters(f"modulus must be positive, got {d}")
    t = t % d
    if gcd(t, d) != 1:
        raise NotCoprime(f"multiplier {t} shares a factor with modulus {d}")
    seen = [False] * d
    orbits = []
    for start in range(d):
        if seen[start]:
            continue
        orb = []
        cur = start
        while not seen[cur]:
            seen[cur] = True
            orb.append(cur)
            cur = (cur * t) % d
        orbits.append(Orbit(orb, d))
    orbits.sort(key=lambda o: o.rep)
    return OrbitDecomposition(d, t, tuple(orbits))


class TwistCombinatorics:
    """Carry digits and minimum tables for one twist class.

    kappas[s] is the least positive residue solving p^s * kappas[s] = kappa
    mod d, for s = 0..m; K[s] = (p*kappas[s+1] - kappas[s])/d is the carry
    digit, always in [0, p-1].  The digit sequence is periodic with period
    equal to the orbit size of kappa under multiplication by p.

    With a degree e supplied the object also serves the j/B/Y tables:
    j_i is forced mod e by the column index, B_n collects the rows whose
    forced column fits inside the leading n-by-n block, and Y_n_s is the
    minimum of sum nu(k, sigma(k), s) over all permutations sigma of [1,n].
    """

    __slots__ = ("p", "d", "kappa", "m", "e", "kappas", "K", "period")

    def __init__(self, p: int, d: int, kappa: int, m: int, e=None):
        if d < 2 or not 1 <= kappa <= d - 1:
            raise BadParameters(f"twist class needs 1 <= kappa <= d-1, got kappa={kappa} d={d}")
        if p < 2 or gcd(p, d) != 1:
            raise NotCoprime(f"{p} is not invertible mod {d}")
        if m < 1 or pow(p, m, d) != 1:
            raise BadParameters(f"need d | p^m - 1, got p={p} d={d} m={m}")
        if e is not None:
            if e < 1:
                raise BadParameters(f"degree must be positive, got {e}")
            if gcd(p, e) != 1:
                raise NotCoprime(f"degree {e} shares a factor with {p}")
        self.p, self.d, self.kappa, self.m, self.e = p, d, kappa, m, e

        kappas = []
        for s in range(m + 1):
            inv = pow(pow(p, s, d), -1, d)
            kappas.append((kappa * inv) % d)
        self.kappas = tuple(kappas)

        digits = []
        for s in range(m):
            num = p * kappas[s + 1] - kappas[s]
            if num % d != 0:
                raise InternalInconsistency("carry digit is not integral")
            ks = num // d
            if not 0 <= ks <= p - 1:
                raise InternalInconsistency(f"carry digit {ks} out of range")
            digits.append(ks)
        self.K = tuple(digits)
        if sum(ks * p**s for s, ks in enumerate(digits)) * d != (p**m - 1) * kappa:
            raise InternalInconsistency("digit expansion does not sum to (q-1)kappa/d")

        period = 1
        cur = (kappa * p) % d
        while cur != kappa:
            cur = (cur * p) % d
            period += 1
        self.period = period

    def _need_e(self) -> int:
        if self.e is None:
            raise BadParameters("this table needs the degree e, construct with e=...")
        return self.e

    def nu(self, i: int, j: int, s: int) -> int:
        e = self._need_e()
        if not (1 <= i <= e and 1 <= j <= e):
            raise BadParameters(f"indices must lie in [1, {e}]")
        return _ceil_div(self.p * i - self.K[s % self.m] - j, e)

    def j_and_B(self, n: int, s: int):
        """Forced-column table and its in-block row set for the leading n block."""
        e = self._need_e()
        if not 1 <= n <= e:
            raise BadParameters(f"block size must lie in [1, {e}]")
        ks = self.K[s % self.m]
        jt = tuple((self.p * i - ks - 1) % e + 1 for i in range(1, e + 1))
        bn = frozenset(i for i in range(1, n + 1) if jt[i - 1] <= n)
        return jt, bn

    def Y_n_s(self, n: int, s: int) -> int:
        e = self._need_e()
        if not 1 <= n <= e:
            raise BadParameters(f"block size must lie in [1, {e}]")
        ks = self.K[s % self.m]
        total = sum(_ceil_div(self.p * k - ks, e) for k in range(1, n + 1))
        _, bn = self.j_and_B(n, s)
        return total - len(bn)

    def Y(self, n: int) -> int:
        # aggregate over one full period of the digit sequence
        return sum(self.Y_n_s(n, s) for s in range(self.period))

    def sigma_set(self, n: int, s: int, cap: int = SIGMA_CAP_DEFAULT):
        """All permutations of [1,n] attaining the minimum: sigma(i) >= j_i on B_n."""
        jt, bn = self.j_and_B(n, s)
        if n > cap:
            raise CapExceeded(f"permutation enumeration for n={n} exceeds cap {cap}")
        out = []
        for perm in itertools.permutations(range(1, n + 1)):
            if all(perm[i - 1] >= jt[i - 1] for i in bn):
                out.append(perm)
        if not out:
            raise InternalInconsistency("constraint set admits no permutation")
        return tuple(out)

    def to_json_dict(self) -> dict:
        out = {
            "p": self.p,
            "d": self.d,
            "kappa": self.kappa,
            "m": self.m,
            "kappas": list(self.kappas),
            "K": list(self.K),
            "period": self.period,
        }
        if self.e is not None:
            e = self.e
            out["e"] = e
            out["j_tables"] = [list(self.j_and_B(e, s)[0]) for s in range(self.m)]
            out["Y_per_s"] = [[self.Y_n_s(n, s) for n in range(1, e + 1)] for s in range(self.m)]
            out["Y"] = [self.Y(n) for n in range(1, e + 1)]
        return out

    def __repr__(self):
        return f"TwistCombinatorics(p={self.p}, d={self.d}, kappa={self.kappa}, m={self.m}, e={self.e})"


def kappa_K_sequences(p: int, d: int, kappa: int, m: int) -> TwistCombinatorics:
    """Digit sequences only; supply e to the constructor for the block tables."""
    return TwistCombinatorics(p, d, kappa, m)


class AdditiveTables:
    """Zero-twist specialization of the block tables: all carry digits
    vanish and there is a single Frobenius step.  Row indices run over
    [1, e-1], the basis size for sums over the whole field."""

    __slots__ = ("p", "e")

    def __init__(self, p: int, e: int):
        if e < 1:
            raise BadParameters(f"degree must be positive, got {e}")
        if p < 2 or gcd(p, e) != 1:
            raise NotCoprime(f"degree {e} shares a factor with {p}")
        self.p, self.e = p, e

    def nu(self, i: int, j: int) -> int:
        return _ceil_div(self.p * i - j, self.e)

    def j_and_B(self, n: int):
        if not 1 <= n <= self.e - 1:
            raise BadParameters(f"block size must lie in [1, {self.e - 1}]")
        jt = tuple((self.p * i - 1) % self.e + 1 for i in range(1, self.e))
        bn = frozenset(i for i in range(1, n + 1) if jt[i - 1] <= n)
        return jt, bn

    def Y(self, n: int) -> int:
        if n == 0:
            return 0
        total = sum(_ceil_div(self.p * k, self.e) for k in range(1, n + 1))
        _, bn = self.j_and_B(n)
        return total - len(bn)

    def sigma_set(self, n: int, cap: int = SIGMA_CAP_DEFAULT):
        jt, bn = self.j_and_B(n)
        if n > cap:
            raise CapExceeded(f"permutation enumeration for n={n} exceeds cap {cap}")
        out = []
        for perm in itertools.permutations(range(1, n + 1)):
            if all(perm[i - 1] >= jt[i - 1] for i in bn):
                out.append(perm)
        if not out:
            raise InternalInconsistency("constraint set admits no permutation")
        return tuple(out)


def hs_twisted(d: int, e: int, r: int, kappa: int) -> NewtonPolygon:
    """Hodge-style lower bound for a twisted sum: unit segments of slope
    (i + mu_{d-kappa})/e for i = 0..e-1, mu taken for multiplication by r."""
    if e < 1:
        raise BadParameters(f"degree must be positive, got {e}")
    if d < 2 or not 1 <= kappa <= d - 1:
        raise BadParameters(f"twist class needs 1 <= kappa <= d-1, got kappa={kappa} d={d}")
    dec = orbit_decomposition(d, r)
    mu = dec.mu_of(d - kappa)
    return NewtonPolygon.from_slopes([(Fraction(i, e) + mu / e, 1) for i in range(e)])


def gnp_twisted(p: int, d: int, e: int, kappa: int, m=None) -> NewtonPolygon:
    """Generic polygon for a twisted sum: vertices (n, Y_n/((p-1)*period)).

    The result depends only on p mod d and e; any m with d | p^m - 1 gives
    the same polygon, and m=None picks the multiplicative order.  For
    p >= 2de the vertex sequence must be strictly convex, so a convexity
    failure there raises rather than silently returning the hull.
    """
    if e < 1 or d < 2 or not 1 <= kappa <= d - 1:
        raise BadParameters(f"bad polygon parameters d={d} e={e} kappa={kappa}")
    if gcd(p, d * e) != 1:
        raise NotCoprime(f"{p} shares a factor with de = {d * e}")
    if m is None:
        m = _mult_order(p, d)
    tc = TwistCombinatorics(p, d, kappa, m, e=e)
    den = (p - 1) * tc.period
    pts = [(0, Fraction(0))] + [(n, Fraction(tc.Y(n), den)) for n in range(1, e + 1)]
    poly = NewtonPolygon.from_points(pts)
    if p >= 2 * d * e:
        on_hull = all(poly.ordinate_at(n) == y for n, y in pts)
        flat = poly.slopes_flat()
        strict = all(flat[i] < flat[i + 1] for i in range(len(flat) - 1))
        if not (on_hull and strict):
            raise NonConvex(f"vertex sequence not strictly convex at p={p} d={d} e={e} kappa={kappa}")
    return poly


def hs_power(d: int, e: int, r: int) -> NewtonPolygon:
    """Hodge-style lower bound for the degree-de power substitution sum.

    Unit segments j/e for j = 1..e-1 plus, per nonzero orbit of
    multiplication by r mod d, segments (j + mu)/e of length the orbit
    size for j = 0..e-1.  Total length de - 1; for r = 1 mod d this is
    the classical equidistributed polygon of length de - 1.
    """
    if d < 1 or e < 1:
        raise BadParameters(f"bad polygon parameters d={d} e={e}")
    if d * e < 2:
        raise BadParameters("length would be zero")
    dec = orbit_decomposition(d, r)
    segs = [(Fraction(j, e), 1) for j in range(1, e)]
    for rep in dec.nonzero_reps():
        orb = dec.orbit_of(rep)
        segs.extend(((Fraction(j) + orb.mu) / e, orb.size) for j in range(e))
    return NewtonPolygon.from_slopes(segs)


def gnp_power(p: int, d: int, e: int) -> NewtonPolygon:
    """Generic polygon for the power substitution sum: slope differences of
    the zero-twist Y on [1, e-1], then per nonzero orbit of multiplication
    by p the e successive Y differences scaled by (p-1) times orbit size."""
    if d < 1 or e < 1:
        raise BadParameters(f"bad polygon parameters d={d} e={e}")
    if d * e < 2:
        raise BadParameters("length would be zero")
    if gcd(p, d * e) != 1:
        raise NotCoprime(f"{p} shares a factor with de = {d * e}")
    segs = []
    if e > 1:
        add = AdditiveTables(p, e)
        segs.extend((Fraction(add.Y(j) - add.Y(j - 1), p - 1), 1) for j in range(1, e))
    if d > 1:
        m = _mult_order(p, d)
        dec = orbit_decomposition(d, p)
        for rep in dec.nonzero_reps():
            orb = dec.orbit_of(rep)
            tc = TwistCombinatorics(p, d, rep, m, e=e)
            if tc.period != orb.size:
                raise InternalInconsistency("digit period disagrees with orbit size")
            den = (p - 1) * orb.size
            ys = [0] + [tc.Y(n) for n in range(1, e + 1)]
            segs.extend((Fraction(ys[j + 1] - ys[j], den), orb.size) for j in range(e))
    return NewtonPolygon.from_slopes(segs)


def poly_power_coeff(P: PolySpec, power: int, t: int) -> FieldElement:
    """Coefficient of X^t in P(X)^power over the base field of P.

    Out-of-range t just gives zero.  Products are truncated at degree t,
    so the cost stays proportional to power * t * e.
    """
    if power < 0:
        raise BadParameters(f"exponent must be nonnegative, got {power}")
    F = P.base
    if t < 0 or t > power * P.e:
        return F.zero()
    full = P.full_coeffs()
    res = [F.one()]
    for _ in range(power):
        new = [F.zero()] * min(len(res) + P.e, t + 1)
        for i, c in enumerate(res):
            if c.is_zero():
                continue
            for jj, a in enumerate(full):
                if i + jj > t:
                    break
                if not a.is_zero():
                    new[i + jj] = new[i + jj] + c * a
        res = new
    return res[t] if t < len(res) else F.zero()


def _perm_sign(perm) -> int:
    inv = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inv += 1
    return -1 if inv & 1 else 1


def hasse_twisted_eval(P: PolySpec, n: int, twist: TwistSpec, cap: int = SIGMA_CAP_DEFAULT) -> FieldElement:
    """Value at P of the twisted coefficient polynomial for block size n.

    Product over one digit period of signed sums: each permutation sigma
    in the minimum set contributes sgn(sigma) times the product over i of
    the coefficient of degree p*i - sigma(i) - K_s in P^nu(i, sigma(i), s).
    Nonzero value certifies the generic slope at abscissa n.
    """
    F = P.base
    p = F.p
    if twist.kappa == 0:
        raise BadParameters("zero twist class has no twisted coefficient polynomial")
    if not 1 <= n <= P.e:
        raise BadParameters(f"block size must lie in [1, {P.e}]")
    tc = TwistCombinatorics(p, twist.d, twist.kappa, _mult_order(p, twist.d), e=P.e)
    acc = F.one()
    for s in range(tc.period):
        ks = tc.K[s]
        term = F.zero()
        for perm in tc.sigma_set(n, s, cap):
            prod = F.one() if _perm_sign(perm) == 1 else -F.one()
            for i in range(1, n + 1):
                if prod.is_zero():
                    break
                prod = prod * poly_power_coeff(P, tc.nu(i, perm[i - 1], s), p * i - perm[i - 1] - ks)
            term = term + prod
        acc = acc * term
    return acc


def hasse_additive_eval(P: PolySpec, n: int, cap: int = SIGMA_CAP_DEFAULT) -> FieldElement:
    """Zero-twist analogue of hasse_twisted_eval, for block sizes up to e-1."""
    F = P.base
    p = F.p
    if not 1 <= n <= P.e - 1:
        raise BadParameters(f"block size must lie in [1, {P.e - 1}]")
    at = AdditiveTables(p, P.e)
    term = F.zero()
    for perm in at.sigma_set(n, cap):
        prod = F.one() if _perm_sign(perm) == 1 else -F.one()
        for i in range(1, n + 1):
            if prod.is_zero():
                break
            prod = prod * poly_power_coeff(P, at.nu(i, perm[i - 1]), p * i - perm[i - 1])
        term = term + prod
    return term


def hasse_full_eval(P: PolySpec, d: int, cap: int = SIGMA_CAP_DEFAULT) -> FieldElement:
    """Product of every coefficient polynomial relevant to degree-d power
    substitution: zero-twist blocks 1..e-1 and, per nonzero orbit of
    multiplication by p mod d, twisted blocks 1..e.  Nonzero exactly on
    the open stratum where the substituted sum attains its generic polygon."""
    F = P.base
    p = F.p
    if d < 1:
        raise BadParameters(f"modulus must be positive, got {d}")
    if gcd(p, d) != 1:
        raise NotCoprime(f"{p} shares a factor with modulus {d}")
    acc = F.one()
    for n in range(1, P.e):
        acc = acc * hasse_additive_eval(P, n, cap)
    for rep in orbit_decomposition(d, p).nonzero_reps():
        tw = TwistSpec(d, rep)
        for n in range(1, P.e + 1):
            acc = acc * hasse_twisted_eval(P, n, tw, cap)
    return acc
