"""Simulated Galois action on p-power torsion and on AGF values at roots of p.

A simulated element σ is a pair (A, s): A ∈ GL_r(A_p) truncated at level M,
and s the shift of its action on F_q(ζ), σ(ζ) = ζ^(q^s).  On torsion,

    σ(exp(z_j b / p^(m+1))) = sum_k φ_{a_jk mod p^(m+1)}(exp(z_k b / p^(m+1))),

for any b ∈ A.  With this row convention σ_A ∘ σ_B has matrix B·A.
"""

from __future__ import annotations

import itertools
import math

from .cinfty import CElem
from .drinfeld import DrinfeldModule, exp_eval
from .exactalg import APoly, FFElem, PadicTrunc, chi_t
from .tate import TateTrunc, TaylorTrunc, act_twisted, evaluate, matmul, padic_taylor, rho_at, taylor_at, twist

__all__ = [
    "GaloisMatrix",
    "sigma_on_torsion",
    "sigma_on_root_values",
    "check_galois_on_hyperderivatives",
    "check_galois_on_taylor",
    "check_galois_on_twisted_taylor",
    "check_composition",
    "check_module_compatibility",
    "check_well_defined",
    "check_level_compatibility",
    "check_rho_matches_taylor",
    "RationalEntry",
    "phi_matrix",
    "check_phi_matrix",
    "upsilon",
    "check_upsilon",
]

INF = math.inf


def _worst(pairs):
    return min(((a - b).val() for a, b in pairs), default=INF)


class GaloisMatrix:
    """r×r matrix over A_p / p^M together with a constant-field shift s."""

    def __init__(self, entries, s: int, p: APoly):
        self.entries = [list(row) for row in entries]
        self.p = p
        self.M = self.entries[0][0].M
        self.s = s % p.degree

    @property
    def r(self):
        return len(self.entries)

    @classmethod
    def identity(cls, r: int, p: APoly, M: int, s: int = 0) -> "GaloisMatrix":
        F = p.field
        ent = [[PadicTrunc.from_poly(APoly(F, [1 if i == j else 0]), p, M) for j in range(r)] for i in range(r)]
        return cls(ent, s, p)

    @classmethod
    def random(cls, rng, r: int, p: APoly, M: int) -> "GaloisMatrix":
        """Draw order: digits of shape (r, r, M, d) in one call, then s; redraw until det is a unit."""
        F = p.field
        d = p.degree
        while True:
            raw = rng.integers(0, F.p, size=(r, r, M, d))
            s = int(rng.integers(0, d))
            ent = [[PadicTrunc(p, M, [APoly(F, [int(c) for c in raw[i, j, k]]) for k in range(M)])
                    for j in range(r)] for i in range(r)]
            A = cls(ent, s, p)
            if A.det_is_unit():
                return A

    def poly(self, j: int, k: int, level: int | None = None) -> APoly:
        """Entry (j, k) (0-based) as a polynomial reduced mod p^level."""
        level = self.M if level is None else level
        if level > self.M:
            raise ValueError(f"level {level} exceeds the matrix level {self.M}")
        return self.entries[j][k].reduce(level).to_poly()

    def det_is_unit(self) -> bool:
        p = self.p
        mat = [[self.poly(i, j, 1) for j in range(self.r)] for i in range(self.r)]
        return bool(_det(mat) % p)

    def __matmul__(self, other: "GaloisMatrix") -> "GaloisMatrix":
        """Matrix product (shifts add)."""
        r = self.r
        ent = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, r):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            ent.append(row)
        return GaloisMatrix(ent, self.s + other.s, self.p)

    def sigma_zeta(self, zeta: FFElem) -> FFElem:
        return zeta.frob(self.s)

    def to_json(self):
        return {"s": self.s, "entries": [[str(self.poly(i, j)) for j in range(self.r)] for i in range(self.r)]}


def sigma_on_torsion(A: GaloisMatrix, phi: DrinfeldModule, values, m: int):
    """σ on the family values[k] = exp(z_k b / p^(m+1)), returned per j."""
    if m + 1 > A.M:
        raise ValueError(f"torsion level {m + 1} exceeds the matrix level {A.M}")
    out = []
    for j in range(A.r):
        acc = phi.parent.zero()
        for k, v in enumerate(values):
            acc = acc + phi.apply(A.poly(j, k, m + 1), v)
        out.append(acc)
    return out


def sigma_on_root_values(case, A: GaloisMatrix, zeta: FFElem, levels: int):
    """σ(ω_j^(m)(ζ)) for m < levels, from σ on the torsion coefficients.

    ω_j^(m)(ζ) = sum_i c_{j,(m),i} ζ^i, so σ of it is sum_i σ(c_{j,(m),i}) σ(ζ)^i.
    """
    tbl = case.table("b")
    sz = A.sigma_zeta(zeta)
    out = [[None] * levels for _ in range(A.r)]
    for m in range(levels):
        for i in range(case.d):
            fam = [tbl[(k + 1, m, i)] for k in range(A.r)]
            moved = sigma_on_torsion(A, case.phi, fam, m)
            for j in range(A.r):
                term = moved[j].scale(sz**i)
                out[j][m] = term if out[j][m] is None else out[j][m] + term
    return out


def check_galois_on_hyperderivatives(case, A: GaloisMatrix, zeta: FFElem) -> dict:
    """σ(X_ζ) = (ρ_{σζ}(a_jk))_{j,k} X_{σζ}, with X_ζ = (ω_j^(n), ..., ω_j)|_{t=ζ} stacked over j."""
    n = case.n
    sz = A.sigma_zeta(zeta)
    lhs = sigma_on_root_values(case, A, zeta, n + 1)
    X = case.agf_values(sz, n + 1)
    worst = INF
    for j in range(A.r):
        rhs = None
        for k in range(A.r):
            rho = rho_at(chi_t(A.poly(j, k, n + 1)), n + 1, sz)
            block = [[X[k][n - i]] for i in range(n + 1)]
            part = matmul(rho, block)
            rhs = part if rhs is None else [[a[0] + b[0]] for a, b in zip(rhs, part)]
        left = [lhs[j][n - i] for i in range(n + 1)]
        worst = min(worst, _worst(zip(left, [row[0] for row in rhs])))
    return {"residual": worst, "pass": worst >= case.floor}


def check_galois_on_taylor(case, A: GaloisMatrix, zeta: FFElem, M_X: int | None = None) -> dict:
    """σ(D_ζ(ω)) = D_{σζ}(A) · D_{σζ}(ω) truncated at X^M_X (M_X <= n+1)."""
    M_X = case.n + 1 if M_X is None else M_X
    if M_X > case.n + 1:
        raise ValueError("Taylor truncation exceeds the computed torsion levels")
    sz = A.sigma_zeta(zeta)
    lhs = sigma_on_root_values(case, A, zeta, M_X)
    X = case.agf_values(sz, M_X)
    worst = INF
    for j in range(A.r):
        rhs = None
        for k in range(A.r):
            Da = padic_taylor(A.entries[j][k].reduce(M_X), sz)
            part = Da * TaylorTrunc(X[k])
            rhs = part if rhs is None else rhs + part
        worst = min(worst, TaylorTrunc(lhs[j]).residual(rhs))
    return {"residual": worst, "pass": worst >= case.floor}


def check_galois_on_twisted_taylor(case, A: GaloisMatrix, zeta: FFElem, M_X: int | None = None) -> dict:
    """σ(D_ζ(Υ^τ)) = D_{σζ}(A) · D_{σζ}(Υ^τ), column by column.

    Column i holds ω^(τ^i); its left side is (σ(D_{ζ^(q^-i)}(ω)))^(τ^i), computed
    from torsion, while the right side evaluates the twisted AGFs directly.
    """
    M_X = case.n + 1 if M_X is None else M_X
    sz = A.sigma_zeta(zeta)
    worst = INF
    for i in range(1, A.r + 1):
        zi = zeta.frob(-i)
        base = sigma_on_root_values(case, A, zi, M_X)
        tw = [twist(om, i) for om in case.omegas]
        D = [taylor_at(h, sz, M_X) for h in tw]
        for j in range(A.r):
            lhs = TaylorTrunc(base[j]).twist(i)
            rhs = None
            for k in range(A.r):
                part = padic_taylor(A.entries[j][k].reduce(M_X), sz) * D[k]
                rhs = part if rhs is None else rhs + part
            worst = min(worst, lhs.residual(rhs))
    return {"residual": worst, "pass": worst >= case.floor}


# ---------------------------------------------------------------------------
# structural properties of the simulated action


def _basis_torsion(case, m: int):
    C = case.C
    pm = C.from_poly(case.p ** (m + 1))
    return [exp_eval(case.E, z / pm) for z in case.lattice.basis]


def _act_coords(case, A: GaloisMatrix, coords, m: int, base):
    """Value of σ_A applied to sum_k φ_{coords_k}(base_k)."""
    moved = sigma_on_torsion(A, case.phi, base, m)
    acc = case.C.zero()
    for b, v in zip(coords, moved):
        acc = acc + case.phi.apply(b, v)
    return acc


def _row_times(coords, A: GaloisMatrix, p, m):
    mod = p ** (m + 1)
    out = []
    for l in range(A.r):
        acc = APoly(p.field, [])
        for k, b in enumerate(coords):
            acc = acc + b * A.poly(k, l, m + 1)
        out.append(acc % mod)
    return out


def check_composition(case, A: GaloisMatrix, B: GaloisMatrix, rng, m: int | None = None) -> dict:
    """σ_A(σ_B(x)) = σ_{BA}(x) for a random torsion point x, plus the exp-route value."""
    m = case.n if m is None else m
    p = case.p
    F = p.field
    deg = p.degree * (m + 1)
    coords = [APoly(F, [int(c) for c in rng.integers(0, F.p, size=deg)]) for _ in range(A.r)]
    base = _basis_torsion(case, m)
    once = _row_times(coords, B, p, m)
    lhs = _act_coords(case, A, once, m, base)
    rhs = _act_coords(case, B @ A, coords, m, base)
    final = _row_times(once, A, p, m)
    C = case.C
    pm = C.from_poly(p ** (m + 1))
    arg = C.zero()
    for b, z in zip(final, case.lattice.basis):
        arg = arg + z * C.from_poly(b)
    direct = exp_eval(case.E, arg / pm)
    worst = min((lhs - rhs).val(), (lhs - direct).val())
    shift_ok = (B @ A).s == (A.s + B.s) % p.degree
    return {"residual": worst, "pass": worst >= case.floor and shift_ok}


def check_module_compatibility(case, A: GaloisMatrix, a: APoly, rng, m: int | None = None) -> dict:
    """σ(φ_a(x)) = φ_a(σ(x)) for a random torsion point x."""
    m = case.n if m is None else m
    p = case.p
    F = p.field
    coords = [APoly(F, [int(c) for c in rng.integers(0, F.p, size=p.degree * (m + 1))]) for _ in range(A.r)]
    base = _basis_torsion(case, m)
    mod = p ** (m + 1)
    lhs = _act_coords(case, A, [(a * b) % mod for b in coords], m, base)
    rhs = case.phi.apply(a, _act_coords(case, A, coords, m, base))
    worst = (lhs - rhs).val()
    return {"residual": worst, "pass": worst >= case.floor}


def check_well_defined(case, A: GaloisMatrix, rng, m: int | None = None) -> dict:
    """Changing every entry by a multiple of p^(m+1) leaves σ on level-m torsion unchanged."""
    m = case.n if m is None else m
    p = case.p
    F = p.field
    mod = p ** (m + 1)
    base = _basis_torsion(case, m)
    moved = sigma_on_torsion(A, case.phi, base, m)
    alt = []
    for j in range(A.r):
        acc = case.C.zero()
        for k, v in enumerate(base):
            extra = APoly(F, [int(c) for c in rng.integers(0, F.p, size=p.degree)])
            acc = acc + case.phi.apply(A.poly(j, k, m + 1) + extra * mod, v)
        alt.append(acc)
    worst = _worst(zip(moved, alt))
    return {"residual": worst, "pass": worst >= case.floor}


def check_level_compatibility(case, A: GaloisMatrix, m: int) -> dict:
    """φ_p(σ_{m+1}(e)) = σ_m(φ_p(e)) for the level-(m+1) basis torsion e."""
    top = _basis_torsion(case, m + 1)
    down = [case.phi.apply(case.p, v) for v in top]
    lhs = [case.phi.apply(case.p, v) for v in sigma_on_torsion(A, case.phi, top, m + 1)]
    rhs = sigma_on_torsion(A, case.phi, down, m)
    worst = _worst(zip(lhs, rhs))
    return {"residual": worst, "pass": worst >= case.floor}


def check_rho_matches_taylor(A: GaloisMatrix, zeta: FFElem, levels: int) -> bool:
    """ρ_{σζ}(a) is the Toeplitz matrix of the Taylor coefficients of a at σζ, exactly."""
    sz = A.sigma_zeta(zeta)
    for j in range(A.r):
        for k in range(A.r):
            rho = rho_at(chi_t(A.poly(j, k, levels)), levels, sz)
            D = padic_taylor(A.entries[j][k].reduce(levels), sz)
            for a in range(levels):
                for b in range(levels):
                    want = D[b - a] if b >= a else FFElem(sz.field, 0)
                    if rho[a][b] != want:
                        return False
    return True


# ---------------------------------------------------------------------------
# Φ_φ and Υ


class RationalEntry:
    """num(t) / den with num a polynomial in t over C_inf (list of CElem) and den ∈ C_inf."""

    def __init__(self, num, den):
        self.num = list(num)
        self.den = den

    def coefficients(self):
        inv = self.den.inverse()
        return [c * inv for c in self.num]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.num)

    def to_json(self):
        return {"num": [c.to_json() for c in self.num], "den": self.den.to_json()}


def _exact_eq(a, b) -> bool:
    d = a - b
    return d.is_zero() and d.is_exact()


def phi_matrix(phi: DrinfeldModule):
    """Companion matrix of τ^(-1) on the motive.

    Rows 1..r-1 shift; the last row is ((t-θ), -g_1^(q^-1), ..., -g_(r-1)^(q^-(r-1)))
    over the common denominator g_r^(q^-r).
    """
    C = phi.parent
    r = phi.rank
    one, zero = C.one(), C.zero()
    den = phi.g[-1].frobenius(-r)
    rows = [[RationalEntry([one] if j == i + 1 else [zero], one) for j in range(r)] for i in range(r - 1)]
    last = [RationalEntry([-C.theta(), one], den)]
    for i in range(1, r):
        last.append(RationalEntry([-phi.g[i - 1].frobenius(-i)], den))
    rows.append(last)
    return rows


def check_phi_matrix(phi: DrinfeldModule) -> dict:
    """Shape check plus recovery of every g_i by undoing the inverse twists."""
    C = phi.parent
    r = phi.rank
    M = phi_matrix(phi)
    shape = len(M) == r and all(len(row) == r for row in M)
    for i in range(r - 1):
        for j in range(r):
            e = M[i][j]
            want_one = j == i + 1
            shape = shape and len(e.num) == 1 and (_exact_eq(e.num[0], C.one()) if want_one else e.is_zero())
    last = M[-1]
    den = last[0].den
    worst = (den.frobenius(r) - phi.g[-1]).val() - phi.g[-1].val()
    lead = last[0].num
    shape = shape and len(lead) == 2 and _exact_eq(lead[1], C.one()) and _exact_eq(lead[0], -C.theta())
    for i in range(1, r):
        gi = (-last[i].num[0]).frobenius(i)
        worst = min(worst, (gi - phi.g[i - 1]).val() - phi.g[i - 1].val())
        shape = shape and last[i].den is den
    return {"relative_residual": worst, "shape": shape, "pass": shape and worst >= C.prec - C.slack}


def upsilon(omegas):
    """Υ with (j, i) entry ω_j^(τ^i), i = 0..r-1."""
    r = len(omegas)
    return [[twist(om, i) for i in range(r)] for om in omegas]


def _det(mat):
    r = len(mat)
    if r == 1:
        return mat[0][0]
    acc = None
    for perm in itertools.permutations(range(r)):
        sign = 1
        for i in range(r):
            for j in range(i + 1, r):
                if perm[i] > perm[j]:
                    sign = -sign
        term = mat[0][perm[0]]
        for i in range(1, r):
            term = term * mat[i][perm[i]]
        term = term if sign == 1 else -term
        acc = term if acc is None else acc + term
    return acc


def check_upsilon(case) -> dict:
    """det Υ numerically nonzero at 0 and every root; columns obey the shifted AGF relation."""
    U = upsilon(case.omegas)
    C = case.C
    points = [FFElem(C.field, 0)] + list(case.roots)
    dets = []
    for z in points:
        vals = [[evaluate(h, z) for h in row] for row in U]
        dets.append(_det(vals))
    nonzero = all(dv.is_nonzero() for dv in dets)
    # g_r ω^(τ^r) = (t - θ) ω - sum_{i<r} g_i ω^(τ^i), i.e. Υ^τ = Υ·N column-wise
    worst = INF
    phi = case.phi
    r = phi.rank
    for om in case.omegas:
        lhs = twist(om, r) * phi.g[-1]
        t_om = TateTrunc(C, [C.zero()] + om.coeffs, om.tail_val)
        rhs = t_om - om * C.theta()
        for i in range(1, r):
            rhs = rhs - twist(om, i) * phi.g[i - 1]
        worst = min(worst, lhs.residual(rhs))
    return {"det_valuations": [dv.val() for dv in dets], "det_nonzero": nonzero,
            "column_residual": worst, "pass": nonzero and worst >= case.floor}
