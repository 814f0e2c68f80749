from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drinfeld_torsion.exactalg import (GF, APoly, BivarPoly, FFElem, PadicTrunc, Poly, TPoly, hd_poly, lucas_binom,
                                       monic_irreducibles, padic_expand, parse_poly, prime_roots, rank_mod_p,
                                       solve_mod_p)

F3 = GF(3)
F9 = GF(3, 2)


def apoly(cs, q=3):
    return APoly(GF(q), cs)


# -- finite fields -----------------------------------------------------------


def test_field_orders_and_generator():
    assert F9.order == 9
    g = F9.gen()
    powers = {(g**k).v for k in range(8)}
    assert len(powers) == 8
    assert g**8 == F9(1)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 2)])
def test_frobenius_is_field_automorphism(p, n):
    F = GF(p, n)
    for a in range(F.order):
        for b in (1, F.order - 1):
            x, y = FFElem(F, a), FFElem(F, b)
            assert (x * y).frob(1) == x.frob(1) * y.frob(1)
            assert (x + y).frob(1) == x.frob(1) + y.frob(1)
        assert FFElem(F, a).frob(n) == FFElem(F, a)


def test_embedding_respects_arithmetic():
    emb = F9.embedding(GF(3, 4))
    for a in range(9):
        for b in range(9):
            assert emb((FFElem(F9, a) * FFElem(F9, b)).v) == emb(a) * emb(b)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_field_axioms_f9(a, b, c):
    x, y, z = FFElem(F9, a), FFElem(F9, b), FFElem(F9, c)
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    if b:
        assert (x / y) * y == x


# -- polynomials --------------------------------------------------------------


def test_parse_poly_examples():
    assert parse_poly("theta^2+1", 3) == apoly([1, 0, 1])
    assert parse_poly("2*θ^3 - θ", 3) == apoly([0, 2, 0, 2])
    with pytest.raises(ValueError):
        parse_poly("theta^^2", 3)


polys = st.lists(st.integers(0, 2), min_size=0, max_size=7).map(lambda cs: apoly(cs))


@given(polys, polys.filter(lambda b: bool(b)))
def test_divmod_identity(a, b):
    quo, rem = divmod(a, b)
    assert quo * b + rem == a
    assert not rem or rem.degree < b.degree


@given(polys, polys, st.integers(0, 4))
def test_hyperderivative_leibniz(h, g, n):
    lhs = hd_poly(h * g, n)
    rhs = APoly(GF(3), [])
    for k in range(n + 1):
        rhs = rhs + hd_poly(h, k) * hd_poly(g, n - k)
    assert lhs == rhs


def test_hyperderivative_examples_over_f2():
    t3 = TPoly(GF(2), [0, 0, 0, 1])
    assert hd_poly(t3, 1) == TPoly(GF(2), [0, 0, 1])
    assert hd_poly(TPoly(GF(2), [0, 0, 1]), 1) == TPoly(GF(2), [])
    assert hd_poly(t3, 0) == t3


@given(st.integers(0, 60), st.integers(0, 60))
def test_lucas_matches_binomial(i, n):
    want = math.comb(i, n) % 3 if n <= i else 0
    assert lucas_binom(i, n, 3) == want


def test_monic_irreducible_counts():
    # necklace counts: (1/d) sum_{k|d} mu(k) q^(d/k)
    assert len(monic_irreducibles(2, 3)) == 2
    assert len(monic_irreducibles(3, 2)) == 3
    assert len(monic_irreducibles(3, 3)) == 8


def test_prime_roots_form_frobenius_cycle():
    p = parse_poly("theta^2+1", 3)
    roots = prime_roots(p)
    assert len(roots) == 2
    assert roots[1] == roots[0].frob(1)
    for z in roots:
        assert z * z == FFElem(z.field, 2)
    with pytest.raises(ValueError):
        prime_roots(parse_poly("theta^2+2*theta+1", 3))


def test_bivariate_reduction_and_evaluation():
    p = parse_poly("theta^2+1", 3)
    F = GF(3)
    B = BivarPoly(F, [apoly([1]), apoly([0, 1]), apoly([2]), apoly([1])])
    R = B.mod_monic(TPoly(F, p.c))
    for z in prime_roots(p):
        assert R.eval_T(z) == B.eval_T(z)


# -- linear algebra mod p -----------------------------------------------------


def test_rank_and_solve_mod_p():
    assert rank_mod_p([[1, 2], [2, 1]], 3) == 1
    x = solve_mod_p([[1, 1], [0, 2]], [2, 1], 3)
    assert [(x[0] + x[1]) % 3, (2 * x[1]) % 3] == [2, 1]


# -- p-adic truncations -------------------------------------------------------


def test_padic_digits_and_reconstruction():
    p = parse_poly("theta^2+1", 3)
    a = parse_poly("theta^5+2*theta+1", 3)
    x = padic_expand(a, p, 4)
    assert x.to_poly() == a % p**4
    assert all(b.degree < 2 for b in x.digits)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=8), st.lists(st.integers(0, 2), min_size=1, max_size=8))
def test_padic_ring_operations(cs1, cs2):
    p = parse_poly("theta^2+1", 3)
    a, b = apoly(cs1), apoly(cs2)
    M = 3
    A, B = PadicTrunc.from_poly(a, p, M), PadicTrunc.from_poly(b, p, M)
    mod = p**M
    assert (A * B).to_poly() == (a * b) % mod
    assert (A + B).to_poly() == (a + b) % mod
    if A.is_unit():
        assert (A * A.inverse()).to_poly() == apoly([1])


def test_padic_reduce_rejects_raising_level():
    p = parse_poly("theta", 3)
    x = PadicTrunc.from_poly(apoly([1, 1]), p, 2)
    assert x.reduce(1).to_poly() == apoly([1])
    with pytest.raises(ValueError):
        x.reduce(3)
