"""Acceptance suite: eight criteria, each with its tolerance and runtime budget.

Every criterion builds its own cases so its timing covers the whole pipeline.
One summary line per criterion is printed at the end of the pytest run.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from drinfeld_torsion.case import build_case, default_rank2_lattice
from drinfeld_torsion.drinfeld import functional_residual, hyperderivative_residual
from drinfeld_torsion.exactalg import GF, APoly, PadicTrunc, TPoly, monic_irreducibles, parse_poly
from drinfeld_torsion.galois import (GaloisMatrix, check_composition, check_galois_on_hyperderivatives,
                                     check_galois_on_taylor, check_galois_on_twisted_taylor)
from drinfeld_torsion.pipeline import load_config, report_json, run
from drinfeld_torsion.tate import (padic_taylor, padic_untaylor, rho_multiplicative_exact,
                                   twist_hyperderivative_residual, twist_padic_taylor_exact, twist_taylor_residual)
from drinfeld_torsion.torsion import (check_basis_change, check_weight_scaling, moore_independence, qn_closed_form,
                                      qn_eval_check, qn_interpolation, qn_remainder, qn_span_rank,
                                      random_congruence_matrix, route_agreement, torsion_checks)

FLOOR = 56
CONFIGS = [
    ("carlitz θ", "theta", 2, {"module": "carlitz"}),
    ("carlitz θ²+1", "theta^2+1", 1, {"module": "carlitz"}),
    ("rank-2 θ²+1", "theta^2+1", 1, {"lattice": default_rank2_lattice}),
    ("rank-2 θ", "theta", 1, {"lattice": default_rank2_lattice}),
]


def fresh(p, n, kw):
    return build_case(3, parse_poly(p, 3), n, **kw)


def report(log, label, ok, elapsed, budget, detail=""):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    log.append(f"{status}  {label}: {detail} ({elapsed:.1f} s, budget {budget} s)")
    return status == "PASS"


def test_exact_interpolation_polynomials(acceptance_log):
    t0 = time.perf_counter()
    failures, total = [], 0
    for q in (2, 3):
        for d in (1, 2, 3):
            for p in monic_irreducibles(q, d):
                for n in range(4):
                    total += 1
                    a, b = qn_interpolation(p, n), qn_remainder(p, n)
                    ok = a.coeffs == b.coeffs and qn_eval_check(b) and qn_span_rank(b) == d
                    if n == 0:
                        ok = ok and tuple(b.coeffs) == qn_closed_form(p)
                    if not ok:
                        failures.append((q, str(p), n))
    elapsed = time.perf_counter() - t0
    assert report(acceptance_log, "exact interpolation polynomials", not failures, elapsed, 10,
                  f"{total} cases, {len(failures)} failures"), failures


def test_carlitz_theta_adic_torsion(acceptance_log):
    t0 = time.perf_counter()
    case = fresh("theta", 2, {"module": "carlitz"})
    ta, tb, tc = case.table("a"), case.table("b"), case.table("c")
    agree = min(route_agreement(ta, tb), route_agreement(ta, tc), route_agreement(tb, tc))
    checks = torsion_checks(tb, case.phi, floor=FLOOR)
    members = all(c["membership"] for c in checks)
    strict = all(c["strict"] for c in checks)
    levels = sorted({c["key"][1] for c in checks})
    elapsed = time.perf_counter() - t0
    ok = agree >= FLOOR and members and strict and levels == [0, 1, 2]
    assert report(acceptance_log, "Carlitz theta-adic torsion", ok, elapsed, 10,
                  f"route residual {agree}, membership {members}, strictness {strict}")


def test_degree_two_prime_torsion_basis(acceptance_log):
    t0 = time.perf_counter()
    details, ok = [], True
    for label, p, n, kw in CONFIGS[1:3]:
        case = fresh(p, n, kw)
        ta, tb, tc = case.table("a"), case.table("b"), case.table("c")
        agree = min(route_agreement(ta, tb), route_agreement(ta, tc), route_agreement(tb, tc))
        expected = case.rank * case.d * (case.n + 1)
        cert = moore_independence(tb.all_values(), expected)
        ok = ok and agree >= FLOOR and bool(cert["basis"])
        details.append(f"{label}: residual {agree}, Moore count {cert['count']}/{expected} {cert['verdict']}")
    elapsed = time.perf_counter() - t0
    assert report(acceptance_log, "degree-2 prime torsion and basis", ok, elapsed, 60, "; ".join(details))


def test_agf_functional_equations(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_f, worst_h = float("inf"), float("inf")
    for label, p, n, kw in CONFIGS:
        case = fresh(p, n, kw)
        polys = [APoly(GF(3), [int(c) for c in rng.integers(0, 3, size=4)]) for _ in range(10)]
        for a in polys:
            for om in case.omegas:
                worst_f = min(worst_f, functional_residual(case.phi, om, a))
                worst_h = min(worst_h, hyperderivative_residual(case.phi, om, a, case.n))
    elapsed = time.perf_counter() - t0
    ok = worst_f >= FLOOR and worst_h >= FLOOR
    assert report(acceptance_log, "AGF functional equations", ok, elapsed, 30,
                  f"functional residual {worst_f}, hyperderivative form {worst_h}")


def test_taylor_and_twist_calculus(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    case = fresh("theta^2+1", 1, {"module": "carlitz"})
    p, F = case.p, case.p.field
    om = case.omegas[0]
    twist_hd = twist_hyperderivative_residual(om, 16)
    twist_taylor = min(twist_taylor_residual(om, z, 16) for z in case.roots)
    exact_conj, trips = 0, 0
    for _ in range(100):
        digits = rng.integers(0, 3, size=(6, p.degree))
        a = PadicTrunc(p, 6, [APoly(F, [int(c) for c in row]) for row in digits])
        z = case.roots[0]
        trips += padic_untaylor(padic_taylor(a, z), p, z) == a
        exact_conj += all(twist_padic_taylor_exact(a, zz) for zz in case.roots)
    rho_ok = 0
    for _ in range(200):
        h = TPoly(F, [int(c) for c in rng.integers(0, 3, size=6)])
        g = TPoly(F, [int(c) for c in rng.integers(0, 3, size=6)])
        rho_ok += rho_multiplicative_exact(h, g, 5)
    elapsed = time.perf_counter() - t0
    ok = (twist_hd >= FLOOR and twist_taylor >= FLOOR and exact_conj == 100 and trips == 100 and rho_ok == 200)
    assert report(acceptance_log, "Taylor and twist calculus", ok, elapsed, 10,
                  f"twist/hyperderivative {twist_hd}, twist/Taylor {twist_taylor}, conjugate cycle "
                  f"{exact_conj}/100, round trips {trips}/100, rho {rho_ok}/200")


def test_galois_identities(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(31)
    worst = {"hyperderivatives": float("inf"), "taylor": float("inf"), "twisted": float("inf"),
             "composition": float("inf")}
    for label, p, n, kw in CONFIGS:
        case = fresh(p, n, kw)
        M = case.n + 2
        for _ in range(20):
            A = GaloisMatrix.random(rng, case.rank, case.p, M)
            for z in case.roots:
                worst["hyperderivatives"] = min(worst["hyperderivatives"],
                                                check_galois_on_hyperderivatives(case, A, z)["residual"])
                worst["taylor"] = min(worst["taylor"], check_galois_on_taylor(case, A, z)["residual"])
        for _ in range(10):
            A = GaloisMatrix.random(rng, case.rank, case.p, M)
            for z in case.roots:
                worst["twisted"] = min(worst["twisted"], check_galois_on_twisted_taylor(case, A, z)["residual"])
        for _ in range(3):
            A = GaloisMatrix.random(rng, case.rank, case.p, M)
            B = GaloisMatrix.random(rng, case.rank, case.p, M)
            worst["composition"] = min(worst["composition"], check_composition(case, A, B, rng)["residual"])
    elapsed = time.perf_counter() - t0
    ok = all(v >= FLOOR for v in worst.values())
    assert report(acceptance_log, "Galois identities", ok, elapsed, 120,
                  ", ".join(f"{k} {v}" for k, v in worst.items()))


def test_modular_properties(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst_w, worst_b = float("inf"), float("inf")
    module_ok = True
    for label, p, n, kw in CONFIGS:
        case = fresh(p, n, kw)
        C = case.C
        module = (case.phi, case.E)
        for c in (C.theta() + C.one(), C.theta(-1)):
            assert c.val() != 0
            res = check_weight_scaling(case.lattice, c, case.p, case.n, module)
            worst_w = min(worst_w, res["residual"])
            module_ok = module_ok and res["pass"]
        for _ in range(5):
            B = random_congruence_matrix(rng, case.rank, case.p, case.n)
            worst_b = min(worst_b, check_basis_change(case.lattice, B, case.p, case.n, module)["residual"])
    elapsed = time.perf_counter() - t0
    ok = worst_w >= FLOOR and worst_b >= FLOOR and module_ok
    assert report(acceptance_log, "modular properties", ok, elapsed, 60,
                  f"weight scaling {worst_w}, basis change {worst_b}")


@pytest.mark.parametrize("name", ["carlitz-theta"])
def test_determinism(acceptance_log, name):
    t0 = time.perf_counter()
    first = report_json(run(load_config(name), seed=12345))
    second = report_json(run(load_config(name), seed=12345))
    elapsed = time.perf_counter() - t0
    assert report(acceptance_log, "deterministic reports", first == second, elapsed, 60,
                  f"{name}, {len(first)} bytes, identical={first == second}")
