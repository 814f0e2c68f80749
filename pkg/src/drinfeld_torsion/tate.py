"""Truncated Tate-algebra calculus in one variable t.

A TateTrunc stores c_0..c_{T-1} and a certified lower bound ``tail_val`` on the
valuation of every omitted coefficient.  Evaluation at |z| = 1 folds that bound
into the precision of the result, so truncation error is never silent.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cinfty import CElem, CInfty
from .exactalg import FFElem, FiniteField, PadicTrunc, Poly, TPoly, hd_poly, lucas_binom, prime_roots

__all__ = [
    "TateTrunc",
    "TaylorTrunc",
    "RhoMatrix",
    "twist",
    "act_twisted",
    "hd_tate",
    "evaluate",
    "coeffs_at_roots",
    "taylor_at",
    "padic_taylor",
    "padic_untaylor",
    "rho",
    "rho_at",
    "vandermonde_inverse",
    "matmul",
    "twist_hyperderivative_residual",
    "twist_taylor_residual",
    "twist_padic_taylor_exact",
    "rho_multiplicative_exact",
]

INF = math.inf


def _tmin(*vals):
    return min(vals)


class TateTrunc:
    """Truncated power series sum c_i t^i over C_∞ with certified tail bound."""

    __slots__ = ("parent", "coeffs", "tail_val")

    def __init__(self, parent: CInfty, coeffs, tail_val):
        self.parent = parent
        self.coeffs = [parent(c) for c in coeffs]
        self.tail_val = tail_val if tail_val == INF else Fraction(tail_val)

    @classmethod
    def from_tpoly(cls, parent: CInfty, h: Poly) -> "TateTrunc":
        """Exact polynomial (tail ∞)."""
        return cls(parent, [parent(FFElem(h.field, c)) if h.field.n > 1 else parent(c) for c in h.c], INF)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def min_val(self):
        """Lower bound for the valuation of every coefficient, tail included."""
        vals = [c.val() for c in self.coeffs]
        return min(vals + [self.tail_val])

    def truncate(self, T: int) -> "TateTrunc":
        if T >= len(self.coeffs):
            return self
        tail = min([self.tail_val] + [c.val() for c in self.coeffs[T:]])
        return TateTrunc(self.parent, self.coeffs[:T], tail)

    def __add__(self, other: "TateTrunc") -> "TateTrunc":
        T = min(len(self), len(other)) if other.tail_val != INF or self.tail_val != INF else max(len(self), len(other))
        zero = self.parent.zero()
        cs = []
        for i in range(T):
            a = self.coeffs[i] if i < len(self) else zero
            b = other.coeffs[i] if i < len(other) else zero
            cs.append(a + b)
        tail = min(self.truncate(T).tail_val, other.truncate(T).tail_val)
        return TateTrunc(self.parent, cs, tail)

    def __neg__(self):
        return TateTrunc(self.parent, [-c for c in self.coeffs], self.tail_val)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "TateTrunc":
        if isinstance(other, (CElem, int, FFElem)):
            other = self.parent(other)
            return TateTrunc(self.parent, [c * other for c in self.coeffs],
                             self.tail_val + other.val() if not other.is_zero() else INF)
        if self.tail_val == INF and other.tail_val == INF:
            T = len(self) + len(other) - 1
        elif self.tail_val == INF:
            T = len(other)
        elif other.tail_val == INF:
            T = len(self)
        else:
            T = min(len(self), len(other))
        zero = self.parent.zero()
        cs = []
        for k in range(max(T, 0)):
            acc = zero
            for i in range(max(0, k - len(other) + 1), min(k + 1, len(self))):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            cs.append(acc)
        tail = min(self.tail_val + other.min_val(), other.tail_val + self.min_val())
        return TateTrunc(self.parent, cs, tail)

    __rmul__ = __mul__

    def residual(self, other: "TateTrunc"):
        """Least valuation among coefficient differences (common truncation)."""
        T = min(len(self), len(other))
        return min((self.coeffs[i] - other.coeffs[i]).val() for i in range(T)) if T else INF

    def approx_eq(self, other: "TateTrunc", slack=None) -> bool:
        T = min(len(self), len(other))
        return all(self.coeffs[i].approx_eq(other.coeffs[i], slack) for i in range(T))

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs],
                "tail_val": "inf" if self.tail_val == INF else str(self.tail_val)}

    def __repr__(self):
        return f"TateTrunc(T={len(self)}, tail_val={self.tail_val})"


def twist(h: TateTrunc, j: int) -> TateTrunc:
    """j-th Anderson twist: coefficient-wise x -> x^(q^j)."""
    if j == 0:
        return h
    q = h.parent.q
    tail = h.tail_val if h.tail_val == INF else h.tail_val * Fraction(q) ** j
    return TateTrunc(h.parent, [c.frobenius(j) for c in h.coeffs], tail)


def act_twisted(f, h: TateTrunc) -> TateTrunc:
    """h^f = sum_i a_i twist(h, i) for f = sum_i a_i τ^i (any object with .coeffs)."""
    out = None
    tail = INF
    for i, a in enumerate(f.coeffs):
        if a.is_zero() and a.is_exact():
            continue
        tw = twist(h, i)
        term = TateTrunc(h.parent, [a * c for c in tw.coeffs], INF)
        tail = min(tail, tw.tail_val + a.val())
        out = term if out is None else out + term
    if out is None:
        return TateTrunc(h.parent, [h.parent.zero()] * len(h), INF)
    out.tail_val = tail
    return out


def hd_tate(h: TateTrunc, n: int) -> TateTrunc:
    """n-th hyperderivative: coefficients C(i, n) c_i shifted down by n."""
    if n == 0:
        return h
    p = h.parent.field.p
    cs = [h.coeffs[i] * lucas_binom(i, n, p) for i in range(n, len(h))]
    return TateTrunc(h.parent, cs, h.tail_val)


def evaluate(h: TateTrunc, z) -> CElem:
    """h(z) for |z| <= 1, with the tail bound folded into the precision."""
    C = h.parent
    z = C(z)
    if z.val() < 0:
        raise ValueError("evaluation point outside the closed unit disc")
    if z.is_exact() and len(z.rows) == 1 and z.v0 == 0:
        c = z.const_value()
        acc = C.zero()
        for coef in reversed(h.coeffs):
            acc = acc.scale(c) + coef
    else:
        acc = C.zero()
        for coef in reversed(h.coeffs):
            acc = acc * z + coef
    if h.tail_val != INF:
        zv = z.val()
        if zv != INF:
            bound = h.tail_val + len(h) * zv
            acc = acc + C.zero_to(bound)
    return acc


def vandermonde_inverse(points: list[FFElem]) -> list[list[FFElem]]:
    """Inverse of V with V[k][l] = points[k]^l, by Gauss-Jordan over the field."""
    d = len(points)
    F = points[0].field
    one, zero = FFElem(F, 1), FFElem(F, 0)
    aug = [[z**l for l in range(d)] + [one if i == k else zero for i in range(d)]
           for k, z in enumerate(points)]
    for col in range(d):
        piv = next(r for r in range(col, d) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [a * inv for a in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                fac = aug[r][col]
                aug[r] = [a - fac * b for a, b in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def coeffs_at_roots(h: TateTrunc, p: Poly, roots: list[FFElem] | None = None) -> list[CElem]:
    """The unique f_0..f_{d-1} with h(ζ_k) = sum_l f_l ζ_k^l for every root ζ_k of p."""
    C = h.parent
    roots = roots or prime_roots(p, C.field)
    values = [evaluate(h, z) for z in roots]
    return solve_vandermonde(C, roots, values)


def solve_vandermonde(C: CInfty, roots, values) -> list[CElem]:
    Vinv = vandermonde_inverse(roots)
    out = []
    for row in Vinv:
        acc = C.zero()
        for a, v in zip(row, values):
            acc = acc + v.scale(a)
        out.append(acc)
    return out


class TaylorTrunc:
    """Power series in X truncated at X^M_X, coefficients CElem or FFElem."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _zero(self):
        c = self.coeffs[0]
        return c.parent.zero() if isinstance(c, CElem) else FFElem(c.field, 0)

    def __add__(self, other):
        n = min(len(self), len(other))
        return TaylorTrunc([self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other):
        n = min(len(self), len(other))
        return TaylorTrunc([self.coeffs[i] - other.coeffs[i] for i in range(n)])

    def __mul__(self, other):
        if not isinstance(other, TaylorTrunc):
            return TaylorTrunc([c * other for c in self.coeffs])
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = None
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                term = _mul_mixed(a, b)
                acc = term if acc is None else acc + term
            out.append(acc)
        return TaylorTrunc(out)

    def twist(self, j: int = 1) -> "TaylorTrunc":
        return TaylorTrunc([c.frobenius(j) if isinstance(c, CElem) else c.frob(j) for c in self.coeffs])

    def inverse(self) -> "TaylorTrunc":
        a0 = self.coeffs[0]
        if isinstance(a0, CElem):
            if not a0.is_nonzero():
                raise ZeroDivisionError("constant term not numerically nonzero")
        elif not a0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = a0.inverse()
        out = [inv0]
        for k in range(1, len(self)):
            acc = None
            for i in range(1, k + 1):
                term = _mul_mixed(self.coeffs[i], out[k - i])
                acc = term if acc is None else acc + term
            out.append(-_mul_mixed(acc, inv0))
        return TaylorTrunc(out)

    def residual(self, other):
        return min((_as_c(self.coeffs[i], other.coeffs[i]) - _as_c(other.coeffs[i], self.coeffs[i])).val()
                   for i in range(min(len(self), len(other))))

    def approx_eq(self, other, slack=None) -> bool:
        for a, b in zip(self.coeffs, other.coeffs):
            if isinstance(a, CElem) or isinstance(b, CElem):
                if not _as_c(a, b).approx_eq(_as_c(b, a), slack):
                    return False
            elif a != b:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, TaylorTrunc):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"TaylorTrunc({self.coeffs!r})"


def _as_c(a, ref):
    if isinstance(a, CElem):
        return a
    if isinstance(ref, CElem):
        return ref.parent(a)
    raise TypeError("exact coefficients have no valuation")


def _mul_mixed(a, b):
    if isinstance(a, CElem) and isinstance(b, FFElem):
        return a.scale(b)
    if isinstance(a, FFElem) and isinstance(b, CElem):
        return b.scale(a)
    return a * b


def taylor_at(h, z, M_X: int) -> TaylorTrunc:
    """D_z(h) = sum_n h^(n)(z) X^n truncated at X^M_X."""
    if isinstance(h, Poly):
        if isinstance(z, FFElem):
            return TaylorTrunc([hd_poly(h, n)(z) for n in range(M_X)])
        raise TypeError("polynomial Taylor expansion needs a constant-field point")
    return TaylorTrunc([evaluate(hd_tate(h, n), z) for n in range(M_X)])


def padic_taylor(a: PadicTrunc, zeta: FFElem, M_X: int | None = None) -> TaylorTrunc:
    """Image of a ∈ A_p under D_ζ∘χ_t, i.e. a(ζ+X) mod X^M_X.

    The level M of ``a`` determines exactly the first M coefficients, since
    D_ζ(p) has X-valuation 1; M_X must therefore equal M.
    """
    M_X = a.M if M_X is None else M_X
    if M_X < a.M:
        raise ValueError(f"M_X={M_X} too small to encode a level-{a.M} p-adic element")
    if M_X > a.M:
        raise ValueError(f"Taylor coefficients beyond X^{a.M} are not determined at level {a.M}")
    poly = TPoly(a.p.field, a.to_poly().c)
    return TaylorTrunc([hd_poly(poly, n)(zeta) for n in range(M_X)])


def padic_untaylor(series: TaylorTrunc, p: Poly, zeta: FFElem) -> PadicTrunc:
    """Inverse of padic_taylor: recover a mod p^M from a(ζ+X) mod X^M."""
    F = zeta.field
    d = p.degree
    M = len(series)
    basis = [(zeta**l).v for l in range(d)]
    Dp = padic_taylor(PadicTrunc.from_poly(p, p, M + 1).reduce(M + 1), zeta, M + 1)
    # unit u with D_ζ(p) = X * u
    u_inv = TaylorTrunc(Dp.coeffs[1:M + 1]).inverse()
    cur = TaylorTrunc([FFElem(F, c.v) for c in series.coeffs])
    digits = []
    Fq = p.field
    for i in range(M):
        coords = F.fq_coords(cur.coeffs[0].v, basis)
        if coords is None:
            raise ValueError("Taylor series is not the image of an element of A_p")
        b = Poly(Fq, coords, "θ")
        digits.append(b)
        if i == M - 1:
            break
        Db = TaylorTrunc([hd_poly(TPoly(Fq, b.c), n)(zeta) for n in range(len(cur))])
        rem = cur - Db
        # divide by X * u
        cur = TaylorTrunc(rem.coeffs[1:]) * TaylorTrunc(u_inv.coeffs[: len(rem) - 1])
    from .exactalg import APoly
    return PadicTrunc(p, M, [APoly(Fq, b.c) for b in digits])


class RhoMatrix:
    """Upper-triangular Toeplitz matrix with bands h, h^(1), ..., h^(n-1)."""

    __slots__ = ("bands", "zero")

    def __init__(self, bands, zero):
        self.bands = list(bands)
        self.zero = zero

    @property
    def size(self):
        return len(self.bands)

    def entry(self, i, j):
        return self.bands[j - i] if j >= i else self.zero

    def to_matrix(self):
        n = self.size
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def __repr__(self):
        return f"RhoMatrix({self.to_matrix()!r})"


def rho(h, n: int) -> RhoMatrix:
    """ρ^[n](h) for a TPoly or TateTrunc h."""
    if isinstance(h, Poly):
        return RhoMatrix([hd_poly(h, k) for k in range(n)], h._new([]))
    return RhoMatrix([hd_tate(h, k) for k in range(n)], TateTrunc(h.parent, [], INF))


def rho_at(h, n: int, z) -> list[list]:
    """ρ^[n]_z(h): ρ^[n](h) evaluated at t = z."""
    if isinstance(h, Poly):
        bands = [hd_poly(h, k)(z) for k in range(n)]
        zero = FFElem(z.field, 0)
    else:
        bands = [evaluate(hd_tate(h, k), z) for k in range(n)]
        zero = h.parent.zero()
    return RhoMatrix(bands, zero).to_matrix()


def matmul(A, B):
    """Plain matrix product of nested lists (entries support + and *)."""
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(k):
                term = _mul_mixed(A[i][l], B[l][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def twist_hyperderivative_residual(h: TateTrunc, n: int, j: int = 1):
    """Worst valuation of twist(h^(k), j) - (twist(h, j))^(k) over k < n."""
    worst = INF
    for k in range(n):
        worst = min(worst, twist(hd_tate(h, k), j).residual(hd_tate(twist(h, j), k)))
    return worst


def twist_taylor_residual(h: TateTrunc, z: FFElem, M_X: int):
    """Worst valuation of twist(D_z(h)) - D_{z^q}(twist(h, 1))."""
    return taylor_at(h, z, M_X).twist(1).residual(taylor_at(twist(h, 1), z.frob(1), M_X))


def twist_padic_taylor_exact(a: PadicTrunc, zeta: FFElem) -> bool:
    """twist(D_ζ(a)) = D_{ζ^q}(a) exactly, for a ∈ A_p with F_q-coefficients."""
    return padic_taylor(a, zeta).twist(1) == padic_taylor(a, zeta.frob(1))


def rho_multiplicative_exact(h: Poly, g: Poly, n: int) -> bool:
    """ρ^[n](hg) = ρ^[n](h) ρ^[n](g) over F_q[t]."""
    lhs = rho(h * g, n).to_matrix()
    rhs = matmul(rho(h, n).to_matrix(), rho(g, n).to_matrix())
    return all(a == b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb))
