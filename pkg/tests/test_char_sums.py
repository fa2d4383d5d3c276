import pytest

from lpoly.char_sums import (
    CharSumSeries,
    LPolynomial,
    PolySpec,
    TwistSpec,
    additive_series,
    additive_sum,
    embed_poly,
    gauss_sum,
    l_polynomial,
    lpoly_inflate,
    lpoly_map_ring,
    lpoly_mul,
    poly_from_ints,
    power_series,
    power_sum,
    twisted_series,
    twisted_sum,
)
from lpoly.cyclotomic import embed_into, make_ring
from lpoly.errors import (
    BadParameters,
    EnumerationBound,
    NonVanishingTail,
    NotDivisible,
    OrderMismatch,
    ZeroLeading,
)
from lpoly.finite_field import make_field

from oracles import brute_additive_sum, brute_power_sum, brute_twisted_sum


def X(base):
    return PolySpec(base, 1)


def test_polyspec_validation():
    f7 = make_field(7, 1)
    with pytest.raises(BadParameters):
        PolySpec(f7, 7)  # degree divisible by p
    with pytest.raises(BadParameters):
        PolySpec(f7, 3, (f7.one(),))  # wrong coefficient count
    P = poly_from_ints(f7, 2, [3])
    assert [a.to_int() for a in P.full_coeffs()] == [0, 3, 1]
    assert P.terms() == [(1, f7.element_from_int(3)), (2, f7.one())]


def test_quadratic_gauss_sum_f3():
    # two-term sum: x = 1 -> zeta_3, x = 2 -> -zeta_3^2
    f3 = make_field(3, 1)
    ring = make_ring(3, 2)
    want = ring.zeta_pow("p", 1) - ring.zeta_pow("p", 2)
    got = twisted_sum(X(f3), TwistSpec(2, 1), 1)
    assert got == want
    assert gauss_sum(f3, 2, 1) == want
    assert got * got == ring.from_int(-3)


def test_gauss_sum_f4_matches_brute():
    f4 = make_field(2, 2)
    assert gauss_sum(f4, 3, 1) == brute_twisted_sum(X(f4), 3, 1, 1)
    assert gauss_sum(f4, 3, 2) == brute_twisted_sum(X(f4), 3, 2, 1)


def test_twisted_sum_matches_brute_f7():
    f7 = make_field(7, 1)
    P = poly_from_ints(f7, 2, [1])  # X^2 + X
    for r in (1, 2):
        assert twisted_sum(P, TwistSpec(3, 1), r) == brute_twisted_sum(P, 3, 1, r)
    assert twisted_sum(P, TwistSpec(6, 5), 1) == brute_twisted_sum(P, 6, 5, 1)


def test_twisted_sum_matches_brute_extension_base():
    f9 = make_field(3, 2)
    P = poly_from_ints(f9, 2, [4])
    for kappa in (1, 3):
        assert twisted_sum(P, TwistSpec(8, kappa), 1) == brute_twisted_sum(P, 8, kappa, 1)
    assert twisted_sum(P, TwistSpec(4, 1), 2) == brute_twisted_sum(P, 4, 1, 2)


def test_twisted_sum_errors():
    f7 = make_field(7, 1)
    with pytest.raises(OrderMismatch):
        twisted_sum(X(f7), TwistSpec(4, 1), 1)
    with pytest.raises(BadParameters):
        twisted_sum(X(f7), TwistSpec(3, 0), 1)
    with pytest.raises(EnumerationBound):
        twisted_sum(X(f7), TwistSpec(3, 1), 4, max_enum=100)


def test_additive_sum_full_character_vanishes():
    f5 = make_field(5, 1)
    assert additive_sum(X(f5), 1).is_zero()


def test_additive_sum_square_f3():
    f3 = make_field(3, 1)
    ring = make_ring(3, 1)
    P = PolySpec(f3, 2, (f3.zero(),))  # X^2
    assert additive_sum(P, 1) == ring.one() + 2 * ring.zeta_pow("p", 1)


def test_additive_sum_matches_brute():
    f9 = make_field(3, 2)
    P = poly_from_ints(f9, 4, [2, 7, 0])
    for r in (1, 2):
        assert additive_sum(P, r) == brute_additive_sum(P, r)


def test_power_sum_basics():
    f3 = make_field(3, 1)
    ring = make_ring(3, 1)
    assert power_sum(X(f3), 2, 1) == ring.one() + 2 * ring.zeta_pow("p", 1)
    P = poly_from_ints(f3, 2, [1])
    for r in (1, 2, 3):
        assert power_sum(P, 1, r) == additive_sum(P, r)


def test_power_sum_matches_brute():
    f5 = make_field(5, 1)
    P = poly_from_ints(f5, 2, [3])
    for r in (1, 2):
        assert power_sum(P, 4, r) == brute_power_sum(P, 4, r)
    f7 = make_field(7, 1)
    assert power_sum(poly_from_ints(f7, 3, [0, 2]), 2, 2) == brute_power_sum(
        poly_from_ints(f7, 3, [0, 2]), 2, 2
    )


def test_frobenius_invariance_on_extension_characters():
    # P over F_3, chi of order 8 on the quadratic extension: x -> x^3 permutes
    # the sum's terms, so S(chi^kappa) = S(chi^(3 kappa))
    f3 = make_field(3, 1)
    P9 = embed_poly(poly_from_ints(f3, 2, [2]), make_field(3, 2))
    for kappa in (1, 2, 5):
        a = twisted_sum(P9, TwistSpec(8, kappa), 1)
        b = twisted_sum(P9, TwistSpec(8, (3 * kappa) % 8), 1)
        assert a == b


def test_power_sum_splits_into_twisted_sums():
    # gcd(d, q^r - 1) characters of the r-th extension carve up the power sum
    f3 = make_field(3, 1)
    P = poly_from_ints(f3, 2, [2])
    d = 8
    for r in (1, 2):
        delta = __import__("math").gcd(d, 3**r - 1)
        kr = make_field(3, r)
        Pr = embed_poly(P, kr)
        ring = make_ring(3, delta)
        total = ring.from_int(1)
        total = total + embed_into(additive_sum(Pr, 1) - make_ring(3, 1).one(), ring)
        for kappa in range(1, delta):
            total = total + twisted_sum(Pr, TwistSpec(delta, kappa), 1)
        assert embed_into(power_sum(P, d, r), ring) == total


def test_l_polynomial_small_cases():
    ring = make_ring(5, 1)
    s = ring.from_int(3)
    # L = 1 + sT has S_r = -(-s)^r, so S_2 = -s^2
    series = CharSumSeries([s, -(s * s)])
    L = l_polynomial(series, 1)
    assert L.coeffs == (ring.one(), s)
    # (1+T)^2 has S_r = (-1)^(r+1) * 2; checks c_2 = (S_1^2 + S_2)/2 = 1
    series = CharSumSeries([ring.from_int(2), ring.from_int(-2), ring.from_int(2)])
    L = l_polynomial(series, 2)
    assert L.coeffs == (ring.one(), ring.from_int(2), ring.from_int(1))


def test_l_polynomial_failure_modes():
    ring = make_ring(5, 1)
    one = ring.one()
    with pytest.raises(NotDivisible):
        l_polynomial(CharSumSeries([one, ring.zero()]), 1)
    # S_r = 1 for all r is the series of 1/(1-T): not a degree-1 polynomial
    with pytest.raises(NonVanishingTail):
        l_polynomial(CharSumSeries([one, ring.from_int(1), one]), 1)
    with pytest.raises(ZeroLeading):
        l_polynomial(CharSumSeries([ring.zero(), ring.zero()]), 1)
    with pytest.raises(BadParameters):
        l_polynomial(CharSumSeries([one]), 1)


def test_gauss_sum_l_function_degree_one():
    f3 = make_field(3, 1)
    series = twisted_series(X(f3), TwistSpec(2, 1), 2)
    L = l_polynomial(series, 1)
    assert L.coeffs[1] == gauss_sum(f3, 2, 1)


def test_twisted_l_has_degree_e():
    f7 = make_field(7, 1)
    P = poly_from_ints(f7, 2, [1])
    L = l_polynomial(twisted_series(P, TwistSpec(3, 1), 3), 2)
    assert L.degree == 2
    P3 = poly_from_ints(f7, 3, [2, 0])
    L3 = l_polynomial(twisted_series(P3, TwistSpec(2, 1), 4), 3)
    assert L3.degree == 3


def test_additive_l_has_degree_e_minus_one():
    f5 = make_field(5, 1)
    P = poly_from_ints(f5, 2, [1])
    L = l_polynomial(additive_series(P, 2), 1)
    assert L.degree == 1


def test_power_l_has_degree_de_minus_one():
    f3 = make_field(3, 1)
    P = poly_from_ints(f3, 2, [1])
    L = l_polynomial(power_series(P, 2, 4), 3)
    assert L.degree == 3


def test_lpoly_mul_and_inflate():
    ring = make_ring(3, 1)
    a = LPolynomial(ring, (ring.one(), ring.from_int(2)))
    b = LPolynomial(ring, (ring.one(), ring.from_int(-1)))
    prod = lpoly_mul(a, b)
    assert prod.coeffs == (ring.one(), ring.from_int(1), ring.from_int(-2))
    infl = lpoly_inflate(a, 3)
    assert infl.degree == 3
    assert infl.coeffs[3] == ring.from_int(2)
    assert infl.coeffs[1].is_zero() and infl.coeffs[2].is_zero()


def test_product_factorization_split_orbits():
    # q = 7, d = 3: multiplication by q fixes every residue, so the power
    # L-function splits as (additive part) * twisted(kappa=1) * twisted(kappa=2)
    f7 = make_field(7, 1)
    P = poly_from_ints(f7, 2, [3])
    lhs = l_polynomial(power_series(P, 3, 6), 5)
    ring = make_ring(7, 3)
    add = lpoly_map_ring(l_polynomial(additive_series(P, 2), 1), ring)
    t1 = l_polynomial(twisted_series(P, TwistSpec(3, 1), 3), 2)
    t2 = l_polynomial(twisted_series(P, TwistSpec(3, 2), 3), 2)
    rhs = lpoly_mul(lpoly_mul(add, t1), t2)
    assert lpoly_map_ring(lhs, ring) == rhs


def test_product_factorization_joint_orbit():
    # q = 3, d = 4: orbit {1, 3} needs a quadratic extension and T -> T^2
    f3 = make_field(3, 1)
    P = poly_from_ints(f3, 2, [1])
    lhs = l_polynomial(power_series(P, 4, 8), 7)
    ring = make_ring(3, 4)
    add = lpoly_map_ring(l_polynomial(additive_series(P, 2), 1), ring)
    f9 = make_field(3, 2)
    P9 = embed_poly(P, f9)
    t13 = lpoly_inflate(l_polynomial(twisted_series(P9, TwistSpec(4, 1), 3), 2), 2)
    t2 = l_polynomial(twisted_series(P, TwistSpec(2, 1), 3), 2)
    rhs = lpoly_mul(lpoly_mul(add, t13), lpoly_map_ring(t2, ring))
    assert lpoly_map_ring(lhs, ring) == rhs


def test_sum_cache_consistency():
    f7 = make_field(7, 1)
    P = poly_from_ints(f7, 2, [4])
    a = twisted_sum(P, TwistSpec(3, 2), 2)
    b = twisted_sum(P, TwistSpec(3, 2), 2)
    assert a == b
