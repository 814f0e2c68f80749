from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drinfeld_torsion.cinfty import CInfty
from drinfeld_torsion.exactalg import GF, APoly, FFElem, PadicTrunc, TPoly, parse_poly, prime_roots
from drinfeld_torsion.tate import (TateTrunc, TaylorTrunc, act_twisted, coeffs_at_roots, evaluate, hd_tate,
                                   padic_taylor, padic_untaylor, rho, rho_at, rho_multiplicative_exact,
                                   taylor_at, twist, twist_hyperderivative_residual, twist_padic_taylor_exact,
                                   twist_taylor_residual)

C = CInfty(3, 2, prec=32, guard=16)
P2 = parse_poly("theta^2+1", 3)
ROOTS = prime_roots(P2, C.field)
F3 = GF(3)


def tpoly(cs):
    return TPoly(F3, cs)


def series(seed, T=12, decay=1):
    rng = np.random.default_rng(seed)
    cs = [C.random_element(rng, val_range=(decay * i, decay * i + 2)) for i in range(T)]
    return TateTrunc(C, cs, decay * T)


def test_twist_examples():
    h = series(1)
    assert twist(h, 0) is h
    t = TateTrunc.from_tpoly(C, tpoly([0, 1]))
    assert twist(t, 3).residual(t) == math.inf
    c = TateTrunc(C, [C.const(C.field.gen())], math.inf)
    assert (twist(c, 1).coeffs[0] - C.const(C.field.gen() ** 3)).is_zero()
    assert twist(h, 2).tail_val == h.tail_val * 9


def test_act_twisted_examples():
    h = series(2)

    class F:
        coeffs = [C.zero(), C.one()]

    assert act_twisted(F, h).residual(twist(h, 1)) >= C.prec
    F.coeffs = [C.theta(2)]
    assert act_twisted(F, h).residual(h * C.theta(2)) >= C.prec


def test_hyperderivative_examples_over_f2():
    C2 = CInfty(2, 1, prec=16, guard=8)
    t3 = TateTrunc.from_tpoly(C2, TPoly(GF(2), [0, 0, 0, 1]))
    assert hd_tate(t3, 1).residual(TateTrunc.from_tpoly(C2, TPoly(GF(2), [0, 0, 1]))) == math.inf
    t2 = TateTrunc.from_tpoly(C2, TPoly(GF(2), [0, 0, 1]))
    assert all(c.is_zero() for c in hd_tate(t2, 1).coeffs)


def test_evaluation_examples():
    z = FFElem(C.field, C.field.gen().v)
    t2 = TateTrunc.from_tpoly(C, tpoly([0, 0, 1]))
    assert (evaluate(t2, z) - C.const(z * z)).is_zero()
    h = series(3)
    assert evaluate(h, 0).approx_eq(h.coeffs[0])
    with pytest.raises(ValueError):
        evaluate(h, C.theta())


def test_evaluation_folds_tail_bound():
    h = series(4, T=6, decay=1)
    v = evaluate(h, ROOTS[0])
    assert v.precision() <= h.tail_val


def test_coeffs_at_roots_examples():
    t = TateTrunc.from_tpoly(C, tpoly([0, 1]))
    f = coeffs_at_roots(t, P2, ROOTS)
    assert f[0].is_zero() and (f[1] - C.one()).is_zero()
    t2 = TateTrunc.from_tpoly(C, tpoly([0, 0, 1]))
    f = coeffs_at_roots(t2, P2, ROOTS)
    assert (f[0] - C.const(2)).is_zero() and f[1].is_zero()


def test_coeffs_at_roots_reconstruct_values():
    h = series(5)
    f = coeffs_at_roots(h, P2, ROOTS)
    for z in ROOTS:
        recon = f[0] + f[1].scale(z)
        assert recon.approx_eq(evaluate(h, z))


def test_taylor_at_examples():
    z = ROOTS[0]
    D = taylor_at(tpoly([0, 1]), z, 3)
    assert D.coeffs[:2] == [z, FFElem(z.field, 1)] and not D.coeffs[2]
    D = taylor_at(TPoly(F3, P2.c), z, 4)
    assert D.coeffs == [FFElem(z.field, 0), z * 2, FFElem(z.field, 1), FFElem(z.field, 0)]


def test_taylor_at_is_multiplicative():
    h, g = series(6, decay=4), series(7, decay=4)
    z = ROOTS[1]
    lhs = taylor_at(h * g, z, 5)
    rhs = taylor_at(h, z, 5) * taylor_at(g, z, 5)
    assert lhs.residual(rhs) >= C.prec - C.slack


def test_taylor_inverse():
    D = taylor_at(tpoly([1, 1, 2]), ROOTS[0], 6)
    one = D * D.inverse()
    assert one.coeffs[0] == FFElem(ROOTS[0].field, 1)
    assert all(not c for c in one.coeffs[1:])


def test_padic_taylor_examples():
    z = ROOTS[0]
    theta = PadicTrunc.from_poly(APoly(F3, [0, 1]), P2, 3)
    assert padic_taylor(theta, z).coeffs == [z, FFElem(z.field, 1), FFElem(z.field, 0)]
    one = PadicTrunc.from_poly(APoly(F3, [1]), P2, 2)
    assert padic_taylor(one, z).coeffs == [FFElem(z.field, 1), FFElem(z.field, 0)]
    p = PadicTrunc(P2, 2, [APoly(F3, []), APoly(F3, [1])])
    assert padic_taylor(p, z).coeffs == [FFElem(z.field, 0), z * 2]


def test_padic_taylor_rejects_wrong_truncation():
    x = PadicTrunc.from_poly(APoly(F3, [0, 1]), P2, 2)
    with pytest.raises(ValueError):
        padic_taylor(x, ROOTS[0], 5)


digit_lists = st.lists(st.lists(st.integers(0, 2), min_size=2, max_size=2), min_size=6, max_size=6)


@settings(max_examples=60, deadline=None)
@given(digit_lists, digit_lists)
def test_padic_taylor_ring_homomorphism_and_inverse(d1, d2):
    a = PadicTrunc(P2, 6, [APoly(F3, r) for r in d1])
    b = PadicTrunc(P2, 6, [APoly(F3, r) for r in d2])
    for z in ROOTS:
        assert padic_taylor(a * b, z) == padic_taylor(a, z) * padic_taylor(b, z)
        assert padic_taylor(a + b, z) == padic_taylor(a, z) + padic_taylor(b, z)
        assert padic_untaylor(padic_taylor(a, z), P2, z) == a
        assert twist_padic_taylor_exact(a, z)


def test_twist_identities_on_series():
    h = series(8, decay=4)
    assert twist_hyperderivative_residual(h, 5) >= C.prec - C.slack
    assert twist_taylor_residual(h, ROOTS[0], 5) >= C.prec - C.slack


def test_rho_examples():
    R = rho(tpoly([0, 1]), 2).to_matrix()
    assert R == [[tpoly([0, 1]), tpoly([1])], [tpoly([]), tpoly([0, 1])]]
    I = rho(tpoly([1]), 3).to_matrix()
    assert all(I[i][j] == (tpoly([1]) if i == j else tpoly([])) for i in range(3) for j in range(3))
    R = rho(tpoly([0, 0, 1]), 2).to_matrix()
    assert R[0][1] == tpoly([0, 2])


@given(st.lists(st.integers(0, 2), max_size=6), st.lists(st.integers(0, 2), max_size=6), st.integers(1, 5))
def test_rho_multiplicative(h, g, n):
    assert rho_multiplicative_exact(tpoly(h), tpoly(g), n)


def test_rho_at_matches_taylor():
    h = tpoly([2, 1, 0, 1])
    z = ROOTS[1]
    R = rho_at(h, 4, z)
    D = taylor_at(h, z, 4)
    assert [R[0][j] for j in range(4)] == D.coeffs
    assert R[3][0] == FFElem(z.field, 0)
