from __future__ import annotations

import numpy as np
import pytest

from drinfeld_torsion.exactalg import GF, APoly, PadicTrunc
from drinfeld_torsion.galois import (GaloisMatrix, check_composition, check_galois_on_hyperderivatives,
                                     check_galois_on_taylor, check_galois_on_twisted_taylor,
                                     check_level_compatibility, check_module_compatibility, check_phi_matrix,
                                     check_rho_matches_taylor, check_upsilon, check_well_defined, phi_matrix,
                                     sigma_on_root_values, sigma_on_torsion, upsilon)


def test_random_matrix_is_invertible_and_reproducible(rank2_deg2):
    p = rank2_deg2.p
    A = GaloisMatrix.random(np.random.default_rng(3), 2, p, 3)
    B = GaloisMatrix.random(np.random.default_rng(3), 2, p, 3)
    assert A.det_is_unit()
    assert A.to_json() == B.to_json()
    assert 0 <= A.s < p.degree


def test_identity_acts_trivially(carlitz_theta):
    case = carlitz_theta
    I = GaloisMatrix.identity(1, case.p, case.n + 2)
    vals = case.table("b").level(1)
    assert sigma_on_torsion(I, case.phi, vals, 1)[0].approx_eq(vals[0])


def test_rank_one_unit_is_phi_action(carlitz_deg2):
    case = carlitz_deg2
    F = case.p.field
    u = APoly(F, [2, 1, 1])
    A = GaloisMatrix([[PadicTrunc.from_poly(u, case.p, 3)]], 0, case.p)
    x = case.table("b")[(1, 1, 0)]
    want = case.phi.apply(u % case.p ** 2, x)
    assert sigma_on_torsion(A, case.phi, [x], 1)[0].approx_eq(want)


def test_level_overflow_rejected(carlitz_theta):
    case = carlitz_theta
    A = GaloisMatrix.identity(1, case.p, 2)
    with pytest.raises(ValueError):
        sigma_on_torsion(A, case.phi, [case.C.one()], 2)


def test_pure_conjugate_shift(carlitz_deg2):
    case = carlitz_deg2
    A = GaloisMatrix.identity(1, case.p, case.n + 2, s=1)
    z = case.roots[0]
    vals = sigma_on_root_values(case, A, z, case.n + 1)
    direct = case.agf_values(z.frob(1), case.n + 1)
    for m in range(case.n + 1):
        assert vals[0][m].approx_eq(direct[0][m])


@pytest.mark.parametrize("name", ["carlitz_theta", "rank2_deg2"])
def test_galois_identities_random(name, request):
    case = request.getfixturevalue(name)
    rng = np.random.default_rng(11)
    for _ in range(3):
        A = GaloisMatrix.random(rng, case.rank, case.p, case.n + 2)
        for z in case.roots:
            assert check_galois_on_hyperderivatives(case, A, z)["pass"]
            assert check_galois_on_taylor(case, A, z)["pass"]
            assert check_galois_on_twisted_taylor(case, A, z)["pass"]
            assert check_rho_matches_taylor(A, z, case.n + 1)


def test_composition_order(rank2_theta):
    case = rank2_theta
    rng = np.random.default_rng(2)
    A = GaloisMatrix.random(rng, 2, case.p, case.n + 2)
    B = GaloisMatrix.random(rng, 2, case.p, case.n + 2)
    assert check_composition(case, A, B, rng)["pass"]
    assert (B @ A).s == (A.s + B.s) % case.d


def test_structural_properties(rank2_deg2):
    case = rank2_deg2
    rng = np.random.default_rng(4)
    A = GaloisMatrix.random(rng, 2, case.p, case.n + 2)
    assert check_module_compatibility(case, A, APoly(GF(3), [1, 0, 1]), rng)["pass"]
    assert check_well_defined(case, A, rng)["pass"]
    assert check_level_compatibility(case, A, 0)["pass"]


def test_phi_matrix_shapes(carlitz_theta, rank2_theta):
    M = phi_matrix(carlitz_theta.phi)
    assert len(M) == 1 and len(M[0][0].num) == 2
    t_coeffs = M[0][0].coefficients()
    C = carlitz_theta.C
    assert t_coeffs[0].approx_eq(-C.theta()) and t_coeffs[1].approx_eq(C.one())
    M2 = phi_matrix(rank2_theta.phi)
    assert len(M2) == 2 and M2[0][0].is_zero()
    assert check_phi_matrix(rank2_theta.phi)["pass"]


def test_upsilon(carlitz_deg2, rank2_theta):
    U = upsilon(carlitz_deg2.omegas)
    assert len(U) == 1 and U[0][0] is carlitz_deg2.omegas[0]
    out = check_upsilon(rank2_theta)
    assert out["det_nonzero"] and out["pass"]
