from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zcc.errors import ValidationError
from zcc.ffield import make_field
from zcc.polyarith import (Factorization, MonicPoly, cycle_type_of, factorize,
                           format_poly, gcd, mul, parse_poly, poly_arith,
                           radical_n, rem, squarefree_decomposition)

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)
F5 = make_field(5)


def P(field, text):
    return parse_poly(field, text)


def test_gcd_examples():
    assert gcd(P(F3, "x^2+2*x+1"), P(F3, "x^2+2")) == P(F3, "x+1")
    one = MonicPoly.one(F3)
    for f in (P(F3, "x^3+x+2"), P(F3, "x+1"), one):
        assert gcd(f, one) == one


def test_mul_example():
    assert mul(P(F3, "x+1"), P(F3, "x+2")) == P(F3, "x^2+2")


def test_rem_degenerate_divisor():
    # remainder mod the constant 1 collapses to the degree-0 polynomial
    assert rem(P(F3, "x^2+1"), MonicPoly.one(F3)) == MonicPoly.one(F3)
    assert rem(P(F3, "x^2+2*x+1"), P(F3, "x+1")) == MonicPoly.one(F3)
    assert rem(P(F3, "x^2+1"), P(F3, "x+1")) == MonicPoly.one(F3)  # 2 normalized monic


def test_poly_arith_dispatch_and_mixed_fields():
    assert poly_arith(P(F3, "x+1"), P(F3, "x+2"), "mul") == P(F3, "x^2+2")
    with pytest.raises(ValidationError, match="mixed fields"):
        gcd(P(F3, "x+1"), P(F2, "x+1"))
    with pytest.raises(ValidationError):
        poly_arith(P(F3, "x"), P(F3, "x"), "quo")


def test_squarefree_decomposition_examples():
    f = mul(P(F3, "x^2+2*x+1"), P(F3, "x+2"))  # (x+1)^2 (x+2)
    assert squarefree_decomposition(f) == [(P(F3, "x+2"), 1), (P(F3, "x+1"), 2)]
    assert squarefree_decomposition(P(F2, "x^3")) == [(P(F2, "x"), 3)]
    g = P(F3, "x^2+1")
    assert squarefree_decomposition(g) == [(g, 1)]


def test_squarefree_derivative_vanishing_case():
    # f = (x^2+1)^3 over F_3 has f' = 0
    f = P(F3, "x^2+1")
    cube = mul(mul(f, f), f)
    assert squarefree_decomposition(cube) == [(f, 3)]


def test_factorize_examples():
    f = P(F2, "x^4+x+1")
    assert factorize(f).factors == ((f, 1),)
    mixed = mul(P(F3, "x^2+1"), P(F3, "x^2+2*x+1"))
    assert factorize(mixed).factors == ((P(F3, "x+1"), 2), (P(F3, "x^2+1"), 1))
    assert factorize(MonicPoly.one(F3)).factors == ()


def test_factorize_deterministic_and_seed_invariant():
    f = mul(mul(P(F5, "x^2+2"), P(F5, "x^2+3")), P(F5, "x+1"))
    base = factorize(f)
    assert factorize(f) == base
    assert factorize(f, seed=12345).factors == base.factors


def test_factorize_round_trip_exhaustive():
    for F, maxdeg in ((F2, 5), (F3, 5), (F4, 3)):
        for deg in range(0, maxdeg + 1):
            for coeffs in product(range(F.q), repeat=deg):
                f = MonicPoly(F, coeffs)
                fact = factorize(f)
                assert fact.expand() == f
                assert all(m >= 1 for _g, m in fact.factors)
                assert fact.degree == deg


def test_squarefree_split_count_matches_binomial():
    # squarefree totally split monic polynomials of degree d number C(q, d)
    from math import comb
    for F in (F2, F3, F5):
        for d in range(1, 4):
            count = 0
            for coeffs in product(range(F.q), repeat=d):
                fact = factorize(MonicPoly(F, coeffs))
                if all(m == 1 and g.degree == 1 for g, m in fact.factors):
                    count += 1
            assert count == comb(F.q, d)


def test_radical_examples():
    f = mul(P(F3, "x^2+2*x+1"), P(F3, "x+2"))
    assert radical_n(f, 2) == P(F3, "x+1")
    assert radical_n(f, 1) == mul(P(F3, "x+1"), P(F3, "x+2"))
    assert radical_n(P(F3, "x^2+1"), 2) == MonicPoly.one(F3)
    with pytest.raises(ValidationError):
        radical_n(f, 0)


def test_radical_properties():
    for coeffs in product(range(3), repeat=4):
        f = MonicPoly(F3, coeffs)
        rad1 = radical_n(f, 1)
        for n in (2, 3, 4):
            radn = radical_n(f, n)
            assert rem(rad1, radn) == MonicPoly.one(F3) or radn.degree == 0
            # divisibility: rad1 = radn * something
            assert gcd(rad1, radn) == radn
        assert radical_n(f, f.degree + 1) == MonicPoly.one(F3)


def test_cycle_type_examples():
    mixed = mul(P(F3, "x^2+1"), P(F3, "x^2+2*x+1"))
    assert cycle_type_of(factorize(mixed)) == (2, 1, 1)
    assert cycle_type_of(factorize(P(F2, "x^4+x+1"))) == (4,)
    split = mul(mul(P(F3, "x"), P(F3, "x+1")), P(F3, "x+2"))
    assert cycle_type_of(factorize(split)) == (1, 1, 1)


def test_cycle_type_sums_to_degree():
    for coeffs in product(range(2), repeat=6):
        f = MonicPoly(F2, coeffs)
        assert sum(cycle_type_of(factorize(f))) == 6


def test_format_parse_round_trip():
    for text in ("x^2+2*x+1", "x^3+2", "x", "1", "x^4+x+1"):
        f = P(F3 if "2" in text else F2, text)
        assert parse_poly(f.field, format_poly(f)) == f


def test_parse_extension_coefficients():
    f = parse_poly(F4, "x^2+(1,1)*x+(0,1)")
    assert f.degree == 2
    assert format_poly(f) == "x^2+(1,1)*x+(0,1)"
    assert parse_poly(F4, format_poly(f)) == f


def test_parse_rejects_non_monic():
    with pytest.raises(ValidationError, match="monic"):
        parse_poly(F3, "2*x^2+1")


@given(st.lists(st.integers(0, 4), min_size=0, max_size=6))
@settings(max_examples=100, deadline=None)
def test_factorize_round_trip_random_f5(coeffs):
    f = MonicPoly(F5, tuple(coeffs))
    fact = factorize(f)
    assert fact.expand() == f
    # factors are pairwise distinct and individually irreducible of degree >= 1
    polys = [g for g, _m in fact.factors]
    assert len(set(polys)) == len(polys)
    assert all(g.degree >= 1 for g in polys)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=4),
       st.lists(st.integers(0, 2), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_gcd_divides_both(c1, c2):
    f, g = MonicPoly(F3, tuple(c1)), MonicPoly(F3, tuple(c2))
    h = gcd(f, g)
    if h.degree > 0:
        assert rem(f, h) == MonicPoly.one(F3)
        assert rem(g, h) == MonicPoly.one(F3)
