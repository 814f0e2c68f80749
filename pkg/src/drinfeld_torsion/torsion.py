"""p-power torsion from interpolation polynomials and AGF values at roots of p."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .cinfty import CElem, CInfty
from .drinfeld import (DrinfeldModule, ExpSeries, Lattice, agf, carlitz_period, exp_coeffs, exp_eval, exp_reduced,
                       module_from_lattice)
from .exactalg import (GF, APoly, BivarPoly, FFElem, Poly, TPoly, prime_roots, rank_mod_p)
from .tate import TateTrunc, coeffs_at_roots, hd_tate

__all__ = [
    "QnPoly",
    "qn",
    "qn_interpolation",
    "qn_remainder",
    "qn_closed_form",
    "qn_eval_check",
    "qn_span_rank",
    "TorsionTable",
    "torsion_coeffs",
    "torsion_checks",
    "moore_matrix",
    "moore_det",
    "moore_det_elimination",
    "moore_independence",
    "exhaustive_independence",
    "ModularPoint",
    "modular_agf",
    "random_congruence_matrix",
    "check_basis_change",
    "check_weight_scaling",
    "route_agreement",
    "QnConsistencyError",
]

INF = math.inf


class QnConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class QnPoly:
    """q_(n)(θ, T) = sum_l coeffs[l](θ) T^l with deg_T < d."""

    p: APoly
    n: int
    coeffs: tuple

    def as_bivar(self) -> BivarPoly:
        return BivarPoly(self.p.field, list(self.coeffs))

    def __getitem__(self, l):
        return self.coeffs[l]

    def __len__(self):
        return len(self.coeffs)


def _pad(coeffs, d, field):
    cs = list(coeffs) + [APoly(field, [])] * (d - len(coeffs))
    return tuple(APoly(field, c.c) for c in cs)


def qn_remainder(p: APoly, n: int) -> QnPoly:
    """Remainder of ((p(θ) - p(T)) / (θ - T))^(n+1) on division by p(T)."""
    F = p.field
    base = BivarPoly(F, qn_closed_form(p))
    rem = (base ** (n + 1)).mod_monic(TPoly(F, p.c))
    return QnPoly(p, n, _pad(rem.coeffs, p.degree, F))


def qn_closed_form(p: APoly) -> tuple:
    """q_(0),l = sum_{k=l+1}^{d} α_k θ^(k-l-1)."""
    F = p.field
    d = p.degree
    return tuple(APoly(F, [p[k] for k in range(l + 1, d + 1)]) for l in range(d))


def qn_interpolation(p: APoly, n: int) -> QnPoly:
    """Lagrange form sum_k p(θ)^(n+1)/(θ-ζ_k)^(n+1) · p(T)/((T-ζ_k) p'(ζ_k)) over F_{q^d}."""
    Fq = p.field
    roots = prime_roots(p)
    Fd = roots[0].field
    d = p.degree
    pl = p.lift(Fd)
    dp = pl.derivative()
    total = [Poly(Fd, [], "θ") for _ in range(d)]
    for z in roots:
        lin = Poly(Fd, [(-z).v, 1], "θ")
        y = pl.exact_div(lin) ** (n + 1)          # p(θ)^(n+1) / (θ - ζ)^(n+1)
        basis = pl.exact_div(lin)                 # p(T) / (T - ζ), same coefficients
        w = dp(z).inverse()
        for l in range(d):
            coef = FFElem(Fd, basis.c[l] if l < len(basis.c) else 0) * w
            if coef:
                total[l] = total[l] + y.scale(coef.v)
    out = []
    for poly in total:
        # prime-field elements are exactly the encodings below p
        if any(c >= Fq.p for c in poly.c):
            raise QnConsistencyError("interpolation coefficients are not F_q-rational")
        out.append(APoly(Fq, poly.c))
    return QnPoly(p, n, _pad(out, d, Fq))


def qn(p: APoly, n: int) -> QnPoly:
    """q_(n) computed by both routes; disagreement raises QnConsistencyError."""
    a = qn_interpolation(p, n)
    b = qn_remainder(p, n)
    if a.coeffs != b.coeffs:
        raise QnConsistencyError(f"interpolation and remainder routes disagree for p={p}, n={n}")
    return b


def qn_eval_check(Q: QnPoly) -> bool:
    """q_(n)(θ, ζ_k) (θ - ζ_k)^(n+1) == p(θ)^(n+1) in F_{q^d}[θ], for every root."""
    p = Q.p
    roots = prime_roots(p)
    Fd = roots[0].field
    target = p.lift(Fd) ** (Q.n + 1)
    for z in roots:
        val = Q.as_bivar().eval_T(z)
        lin = Poly(Fd, [(-z).v, 1], "θ")
        if Poly(Fd, (val * lin ** (Q.n + 1)).c) != Poly(Fd, target.c):
            return False
    return True


def qn_span_rank(Q: QnPoly) -> int:
    """F_q-rank of the residues q_(n),l mod p."""
    p = Q.p
    d = p.degree
    rows = []
    for c in Q.coeffs:
        r = c % p
        rows.append([r[i] if i < len(r.c) else 0 for i in range(d)])
    return rank_mod_p(rows, p.field.p)


# ---------------------------------------------------------------------------
# torsion tables


@dataclass
class TorsionTable:
    """Values c_{j,(m),l} keyed by (j, m, l) with j starting at 1."""

    p: APoly
    n: int
    rank: int
    values: dict = field(default_factory=dict)
    route: str = "b"

    def keys(self):
        return sorted(self.values)

    def __getitem__(self, key):
        return self.values[key]

    def level(self, m):
        return [self.values[k] for k in self.keys() if k[1] == m]

    def all_values(self):
        return [self.values[k] for k in self.keys()]

    def to_json(self):
        return [{"j": j, "m": m, "l": l, "route": self.route,
                 "value": self.values[(j, m, l)].render(),
                 "celem": self.values[(j, m, l)].to_json()} for (j, m, l) in self.keys()]


def torsion_coeffs(phi: DrinfeldModule, lattice: Lattice, E: ExpSeries, p: APoly, n: int,
                   route: str = "b", T: int | None = None, omegas=None, qns=None) -> TorsionTable:
    """c_{j,(m),l} for 0 <= m <= n by route a (AGF values), b (exp) or c (φ_q on exp)."""
    C = phi.parent
    table = TorsionTable(p, n, lattice.rank, route=route)
    qns = qns or [qn(p, m) for m in range(n + 1)]
    if route == "a":
        roots = prime_roots(p, C.field)
        if omegas is None:
            T = T or C.prec + 16
            omegas = [agf(phi, E, z, T) for z in lattice.basis]
        for j, om in enumerate(omegas, 1):
            for m in range(n + 1):
                vals = coeffs_at_roots(hd_tate(om, m), p, roots)
                for l, v in enumerate(vals):
                    table.values[(j, m, l)] = v
        return table
    if route not in ("b", "c"):
        raise ValueError(f"unknown route {route!r}")
    for j, z in enumerate(lattice.basis, 1):
        for m in range(n + 1):
            pm = C.from_poly(p ** (m + 1))
            if route == "c":
                base = exp_eval(E, z / pm)
            for l, ql in enumerate(qns[m].coeffs):
                if route == "b":
                    table.values[(j, m, l)] = exp_eval(E, z * C.from_poly(ql) / pm)
                else:
                    table.values[(j, m, l)] = phi.phi_of(ql)(base)
    return table


def route_agreement(t1: TorsionTable, t2: TorsionTable):
    """Worst residual valuation over matching entries."""
    return min((t1[k] - t2[k]).val() for k in t1.keys())


def torsion_checks(table: TorsionTable, phi: DrinfeldModule, floor=None):
    """Membership φ_{p^(m+1)}(c) ≈ 0 and strictness φ_{p^m}(c) numerically nonzero.

    φ_{p^k} is applied as k successive applications of φ_p (each evaluated
    through images under φ_θ): the same map, but without the huge cancelling
    coefficients of the expanded τ-polynomial.
    Membership requires val ≥ floor (default N - slack) as well as ≈ 0.
    """
    C = phi.parent
    floor = C.prec - C.slack if floor is None else floor
    def phi_p(x):
        return phi.apply(table.p, x)

    records = []
    for key in table.keys():
        c = table[key]
        m = key[1]
        below = c
        for _ in range(m):
            below = phi_p(below)
        img = phi_p(below)
        records.append({
            "key": list(key),
            "membership_residual": img.val(),
            "membership": img.approx_eq(C.zero()) and img.val() >= floor,
            "strict_valuation": below.val(),
            "strict_relative_precision": below.rel_prec(),
            "strict": below.is_nonzero(),
        })
    return records


# ---------------------------------------------------------------------------
# Moore determinants


def moore_matrix(values):
    k = len(values)
    rows = []
    for x in values:
        row = [x]
        for _ in range(k - 1):
            row.append(row[-1].frobenius(1))
        rows.append(row)
    return rows


def moore_det(values) -> CElem:
    """Moore determinant via prod_i prod_{v in span(x_1..x_{i-1})} (x_i + v).

    The product formula only multiplies, so it keeps far more relative
    precision than elimination on the Frobenius-power matrix.
    """
    if not values:
        raise ValueError("empty value list")
    C = values[0].parent
    q = C.q
    acc = C.one()
    span = [C.zero()]
    for x in values:
        for v in span:
            acc = acc * (x + v)
        span = [v + x.scale(c) for c in range(q) for v in span]
    return acc


def moore_det_elimination(values) -> CElem:
    """det(x_i^(q^(j-1))) by Gaussian elimination with largest-absolute-value pivots."""
    M = moore_matrix(values)
    C = values[0].parent
    k = len(M)
    det = C.one()
    sign = 1
    for col in range(k):
        candidates = [r for r in range(col, k) if not M[r][col].is_zero()]
        if not candidates:
            return C.zero_to(min(M[r][col].precision() for r in range(col, k)))
        piv = min(candidates, key=lambda r: M[r][col].val())
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        pv = M[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, k):
            if M[r][col].is_zero():
                continue
            f = M[r][col] * inv
            M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det if sign == 1 else -det


def moore_independence(values, expected_count: int | None = None) -> dict:
    """Verdict 'independent' iff the Moore determinant is numerically nonzero."""
    if any(v.is_zero() for v in values):
        return {"verdict": "dependent", "count": len(values), "det_valuation": None,
                "basis": False}
    det = moore_det(values)
    ok = det.is_nonzero()
    out = {"verdict": "independent" if ok else "dependent", "count": len(values),
           "det_valuation": det.val(), "det_relative_precision": det.rel_prec()}
    if expected_count is not None:
        out["expected_count"] = expected_count
        out["basis"] = ok and len(values) == expected_count
    return out


def exhaustive_independence(values) -> bool:
    """No nontrivial F_q-combination is numerically zero (small cases only)."""
    C = values[0].parent
    for combo in itertools.product(range(C.q), repeat=len(values)):
        if not any(combo):
            continue
        s = C.zero()
        for c, v in zip(combo, values):
            if c:
                s = s + v.scale(c)
        if not s.is_nonzero():
            return False
    return True


# ---------------------------------------------------------------------------
# lattice-varying AGF values


class ModularPoint:
    """A lattice basis (z_1, ..., z_r) whose last entry is the Carlitz period."""

    def __init__(self, parent: CInfty, basis, pi=None):
        pi = carlitz_period(parent) if pi is None else pi
        basis = [parent(z) for z in basis]
        if not basis[-1].approx_eq(pi):
            raise ValueError("last coordinate of a modular point must be the Carlitz period")
        self.parent = parent
        self.basis = basis
        self.lattice = Lattice(parent, basis)

    @property
    def rank(self):
        return len(self.basis)


def modular_agf(lattice: Lattice, j: int, n: int, p: APoly, module=None, qpoly: QnPoly | None = None):
    """sum_l exp_Λ(z_j q_(n),l / p^(n+1)) ζ_k^l for every root ζ_k (module rebuilt from Λ)."""
    C = lattice.parent
    if module is None:
        phi, E0 = module_from_lattice(lattice)
        E = exp_coeffs(phi, len(E0.coeffs) - 1)
    else:
        phi, E = module
    Q = qpoly or qn(p, n)
    z = lattice.basis[j - 1]
    pm = C.from_poly(p ** (n + 1))
    cs = [exp_reduced(phi, E, z * C.from_poly(ql) / pm) for ql in Q.coeffs]
    out = []
    for zeta in prime_roots(p, C.field):
        acc = C.zero()
        for l, c in enumerate(cs):
            acc = acc + c.scale(zeta**l)
        out.append(acc)
    return out


def random_congruence_matrix(rng, r: int, p: APoly, n: int, steps: int = 3):
    """Random B ∈ GL_r(A) with B ≡ Id mod p^(n+1), as a product of elementary matrices.

    Draw order per step: row i, column j != i, degree k ∈ {0, 1}, unit c ∈ F_q^×.
    """
    F = p.field
    one, zero = APoly(F, [1]), APoly(F, [])
    B = [[one if i == j else zero for j in range(r)] for i in range(r)]
    if r == 1:
        return B
    mod = p ** (n + 1)
    for _ in range(steps):
        i = int(rng.integers(0, r))
        j = int(rng.integers(0, r - 1))
        j += j >= i
        k = int(rng.integers(0, 2))
        c = int(rng.integers(1, F.p))
        x = mod * APoly(F, [0] * k + [c])
        # left-multiply by Id + x E_ij: row i += x * row j
        B[i] = [B[i][l] + x * B[j][l] for l in range(r)]
    return B


def _modular_values(lattice: Lattice, n: int, p: APoly, module):
    return [modular_agf(lattice, j + 1, n, p, module=module) for j in range(lattice.rank)]


def check_basis_change(lattice: Lattice, B, p: APoly, n: int, module) -> dict:
    """Modular AGF values are unchanged under z -> B z with B ≡ Id mod p^(n+1)."""
    C = lattice.parent
    mod = p ** (n + 1)
    r = lattice.rank
    for i in range(r):
        for j in range(r):
            if (B[i][j] - (1 if i == j else 0)) % mod:
                raise ValueError("basis change is not congruent to the identity mod p^(n+1)")
    new_basis = []
    for row in B:
        acc = C.zero()
        for b, z in zip(row, lattice.basis):
            acc = acc + z * C.from_poly(b)
        new_basis.append(acc)
    moved = Lattice(C, new_basis)
    before = _modular_values(lattice, n, p, module)
    after = _modular_values(moved, n, p, module)
    worst = min((a - b).val() for xs, ys in zip(before, after) for a, b in zip(xs, ys))
    return {"residual": worst, "pass": worst >= C.prec - C.slack}


def check_weight_scaling(lattice: Lattice, c: CElem, p: APoly, n: int, module) -> dict:
    """Weight -1: the values for cΛ (module rebuilt from cΛ) equal c times those for Λ."""
    C = lattice.parent
    scaled = Lattice(C, [z * c for z in lattice.basis])
    phi_c, E0 = module_from_lattice(scaled)
    E_c = exp_coeffs(phi_c, len(E0.coeffs) - 1)
    before = _modular_values(lattice, n, p, module)
    after = _modular_values(scaled, n, p, (phi_c, E_c))
    worst = min((b - a * c).val() for xs, ys in zip(before, after) for a, b in zip(xs, ys))
    phi = module[0]
    # the rebuilt module must match the rescaled one: g_i -> c^(q^i - 1) g_i
    expected = phi.scaled(c)
    coeff = min((x - y).val() - y.val() for x, y in zip(phi_c.g, expected.g))
    return {"residual": worst, "module_relative_residual": coeff,
            "pass": worst >= C.prec - C.slack and coeff >= C.prec - C.slack}
