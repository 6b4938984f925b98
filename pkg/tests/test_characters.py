import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from modvertex.characters import (AffineWeight, CharSeries, affine_positive_real_roots,
                                  denominator_product, fock_character, mathieu_product,
                                  steinberg_factor, verify_series_identities, verma_denominator)
from modvertex.fock import heisenberg_module, weyl_module
from modvertex.pcenter import restricted_quotient
from modvertex.rootdata import sl2

DATA = sl2()
X, Q = sympy.symbols("x q")
SHIFT = 400


def sympy_mathieu(p, depth):
    """Oracle: expand the truncated product with x = e^alpha, q = e^-delta."""
    expr = sum(X ** (-k) for k in range(p))
    for n in range(1, depth + 1):
        for s in (1, -1):
            expr *= sum((X ** (-s) * Q ** n) ** k for k in range(p) if k * n <= depth)
    poly = sympy.Poly(sympy.expand(expr * X ** SHIFT), X, Q)
    return {((a - SHIFT,), d): int(c) for (a, d), c in poly.terms() if d <= depth}


# frozen from the sympy oracle above
MATHIEU_P2 = {
    0: {(-1,): 1, (0,): 1},
    1: {(-2,): 1, (-1,): 1, (0,): 1, (1,): 1},
    2: {(-2,): 1, (-1,): 2, (0,): 2, (1,): 1},
}
MATHIEU_P3 = {
    0: {(-2,): 1, (-1,): 1, (0,): 1},
    1: {(-3,): 1, (-2,): 1, (-1,): 2, (0,): 1, (1,): 1},
}


def test_frozen_tables_match_oracle():
    o2, o3 = sympy_mathieu(2, 2), sympy_mathieu(3, 1)
    for d, row in MATHIEU_P2.items():
        assert {a: c for (a, dd), c in o2.items() if dd == d} == row
    for d, row in MATHIEU_P3.items():
        assert {a: c for (a, dd), c in o3.items() if dd == d} == row


def test_mathieu_reference_values():
    m2 = mathieu_product(2, 2)
    for d, row in MATHIEU_P2.items():
        assert m2.at_depth(d) == row
    m3 = mathieu_product(3, 1)
    for d, row in MATHIEU_P3.items():
        assert m3.at_depth(d) == row
    assert m2.rho_shift == -1


@pytest.mark.parametrize("p,depth", [(2, 6), (3, 5), (5, 4)])
def test_mathieu_matches_oracle(p, depth):
    assert mathieu_product(p, depth).terms == sympy_mathieu(p, depth)


def test_positive_real_roots():
    roots = affine_positive_real_roots(DATA, 1)
    assert set(roots) == {AffineWeight((1,), 0), AffineWeight((-1,), 1), AffineWeight((1,), 1)}
    for n in range(6):
        assert len(affine_positive_real_roots(DATA, n)) == 2 * n + 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_series_identities(p):
    rep = verify_series_identities(p, 10)
    assert rep.passed
    assert rep.details["window"] == 44


def test_product_identity_is_sensitive():
    m = mathieu_product(3, 4)
    wrong = steinberg_factor(2, 4)
    assert not (m * denominator_product(4)).same_coefficients(wrong)


def test_fock_characters_of_weyl_modules():
    full = fock_character(weyl_module(DATA, 2), 0, alpha_bound=5)
    assert full.at_depth(0) == {(-k,): 1 for k in range(6)}
    quotient = fock_character(restricted_quotient(weyl_module(DATA, 2)), 0)
    assert quotient.at_depth(0) == {(0,): 1, (-1,): 1}
    with pytest.raises(ValueError):
        fock_character(weyl_module(DATA, 2), 0)


def test_fock_character_counts_partitions():
    ch = fock_character(heisenberg_module(DATA, 5, 1), 6)
    assert [ch.coeff((0,), d) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_verma_denominator_inverts_denominator_product():
    depth = 3
    prod = verma_denominator(depth, 30) * denominator_product(depth)
    inner = prod.restrict(alpha_min=-20, alpha_max=20)
    assert inner.terms == {((0,), 0): 1}


def test_json_round_trip():
    m = mathieu_product(3, 3)
    back = CharSeries.loads(m.dumps())
    assert back == m
    assert m.to_json()[0] == {"alpha_coeffs": [-2], "delta_deg": 0, "coeff": 1}


series = st.dictionaries(st.tuples(st.tuples(st.integers(-4, 4)), st.integers(0, 3)),
                         st.integers(-3, 3), max_size=6)


@given(series, series, series)
def test_series_ring_axioms(a, b, c):
    A, B, C = (CharSeries(t, 3) for t in (a, b, c))
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A
    assert A * CharSeries.one(3) == A


@given(series, series)
def test_vectorized_product_matches_dict_product(a, b):
    A, B = CharSeries(a, 3), CharSeries(b, 3)
    want = {}
    for (x, d1), c1 in A.terms.items():
        for (y, d2), c2 in B.terms.items():
            if d1 + d2 <= 3:
                k = ((x[0] + y[0],), d1 + d2)
                want[k] = want.get(k, 0) + c1 * c2
    assert (A * B).terms == {k: v for k, v in want.items() if v}


@given(st.sampled_from([2, 3, 5]), st.integers(0, 6))
def test_mathieu_coefficients_are_nonnegative(p, depth):
    m = mathieu_product(p, depth)
    assert all(c > 0 for c in m.terms.values())
    # the depth-0 part is the finite factor 1 + e^-alpha + ... + e^-(p-1)alpha
    assert m.at_depth(0) == {(-k,): 1 for k in range(p)}


@given(st.sampled_from([2, 3]), st.integers(0, 4))
def test_character_is_multiplicative_over_tensor_products(p, depth):
    from modvertex.fock import wakimoto_fock
    pieces = (fock_character(restricted_quotient(weyl_module(DATA, p)), depth)
              * fock_character(restricted_quotient(heisenberg_module(DATA, p, 1)), depth))
    whole = fock_character(restricted_quotient(wakimoto_fock(DATA, p, 1)), depth)
    assert pieces.same_coefficients(whole)
