from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drinfeld_torsion.exactalg import GF, APoly, monic_irreducibles, parse_poly
from drinfeld_torsion.torsion import (ModularPoint, QnConsistencyError, check_basis_change, check_weight_scaling,
                                      exhaustive_independence, moore_det, moore_det_elimination,
                                      moore_independence, qn, qn_closed_form, qn_eval_check, qn_interpolation,
                                      qn_remainder, qn_span_rank, random_congruence_matrix, route_agreement,
                                      torsion_checks)

F3 = GF(3)


def ap(cs):
    return APoly(F3, cs)


def test_qn_degree_two_examples():
    p = parse_poly("theta^2+1", 3)
    assert qn(p, 0).coeffs == (ap([0, 1]), ap([1]))
    assert qn(p, 1).coeffs == (ap([2, 0, 1]), ap([0, 2]))


def test_qn_theta_is_power_of_theta():
    p = parse_poly("theta", 3)
    for n in range(4):
        assert qn(p, n).coeffs == (ap([1]),)


def test_qn_closed_form_level_zero():
    for p in monic_irreducibles(2, 3):
        assert tuple(qn_remainder(p, 0).coeffs) == qn_closed_form(p)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(q, d) for q in (2, 3) for d in (1, 2, 3)]), st.integers(0, 3), st.data())
def test_qn_routes_agree(qd, n, data):
    q, d = qd
    p = data.draw(st.sampled_from(monic_irreducibles(q, d)))
    a, b = qn_interpolation(p, n), qn_remainder(p, n)
    assert a.coeffs == b.coeffs
    assert qn_eval_check(b)
    assert qn_span_rank(b) == d


def test_qn_rejects_reducible_prime():
    with pytest.raises(ValueError):
        qn(parse_poly("theta^2+2*theta+1", 3), 0)


def test_route_agreement_and_membership(carlitz_theta):
    case = carlitz_theta
    ta, tb, tc = case.table("a"), case.table("b"), case.table("c")
    assert route_agreement(ta, tb) >= case.floor
    assert route_agreement(tb, tc) >= case.floor
    for rec in torsion_checks(tb, case.phi):
        assert rec["membership"] and rec["strict"]


def test_moore_product_matches_elimination(carlitz_deg2):
    vals = carlitz_deg2.table("b").all_values()
    a, b = moore_det(vals), moore_det_elimination(vals)
    assert a.val() == b.val()
    assert a.approx_eq(b, slack=a.parent.prec // 2)


def test_moore_detects_dependence(carlitz_deg2):
    vals = carlitz_deg2.table("b").all_values()
    dep = vals[:2] + [vals[0] + vals[1].scale(2)]
    assert moore_independence(dep)["verdict"] == "dependent"
    assert not exhaustive_independence(dep)
    assert exhaustive_independence(vals[:3])


def test_moore_basis_certificate_rank2(rank2_deg2):
    case = rank2_deg2
    vals = case.table("b").all_values()
    out = moore_independence(vals, case.rank * case.d * (case.n + 1))
    assert out["basis"] and out["count"] == 8


def test_modular_point_requires_carlitz_period(rank2_theta):
    C = rank2_theta.C
    ModularPoint(C, rank2_theta.lattice.basis)
    with pytest.raises(ValueError):
        ModularPoint(C, [rank2_theta.lattice.basis[1], rank2_theta.lattice.basis[0]])


def test_congruence_matrices(rank2_theta):
    import numpy as np

    p = rank2_theta.p
    rng = np.random.default_rng(5)
    for _ in range(5):
        B = random_congruence_matrix(rng, 2, p, 1)
        det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
        assert det == ap([1])
        mod = p ** 2
        assert all(((B[i][j] - (1 if i == j else 0)) % mod) == ap([]) for i in range(2) for j in range(2))


def test_weight_scaling_and_basis_change(rank2_theta):
    case = rank2_theta
    C = case.C
    module = (case.phi, case.E)
    res = check_weight_scaling(case.lattice, C.theta() + C.one(), case.p, case.n, module)
    assert res["pass"]
    B = [[ap([1]), case.p ** 2], [ap([]), ap([1])]]
    assert check_basis_change(case.lattice, B, case.p, case.n, module)["pass"]
    with pytest.raises(ValueError):
        check_basis_change(case.lattice, [[ap([1]), case.p], [ap([]), ap([1])]], case.p, case.n, module)
