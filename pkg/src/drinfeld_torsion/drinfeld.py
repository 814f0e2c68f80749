"""Drinfeld modules over C_∞: twisted polynomials, exponentials, lattices, AGFs.

The canonical workflow is lattice-first: a period lattice is given, its
exponential is approximated by finite F_q-subspaces until the coefficients
stabilise, and the module coefficients g_i are read off from the functional
equation exp(θx) = φ_θ(exp(x)).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .cinfty import CElem, CInfty
from .exactalg import GF, APoly, FFElem, Poly, hd_poly
from .tate import TateTrunc, act_twisted, hd_tate

__all__ = [
    "TwistedPoly",
    "DrinfeldModule",
    "Lattice",
    "ExpSeries",
    "working_degree",
    "exp_coeffs",
    "exp_eval",
    "exp_reduced",
    "hyperderivative_residual",
    "lattice_exp",
    "module_from_lattice",
    "carlitz_period",
    "neg_one_root",
    "agf",
    "agf_pellarin",
    "functional_residual",
    "ConvergenceError",
    "StabilizationError",
]

INF = math.inf


class ConvergenceError(ValueError):
    pass


class StabilizationError(RuntimeError):
    pass


def working_degree(q: int, d: int) -> int:
    """Least multiple of d whose field F_{q^m} contains a (q-1)-th root of -1."""
    m = d
    while not any(GF(q, m).power(a, q - 1) == GF(q, m).neg(1) for a in range(1, q**m)):
        m += d
    return m


class TwistedPoly:
    """f = sum a_i τ^i in C_∞{τ}; product is composition (τ a = a^q τ)."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: CInfty, coeffs):
        self.parent = parent
        cs = [parent(c) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero() and cs[-1].is_exact():
            cs.pop()
        self.coeffs = cs or [parent.zero()]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.parent.zero()
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return TwistedPoly(self.parent, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return TwistedPoly(self.parent, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "TwistedPoly":
        if not isinstance(other, TwistedPoly):
            c = self.parent(other)
            return TwistedPoly(self.parent, [a * c.frobenius(i) for i, a in enumerate(self.coeffs)])
        out = [self.parent.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero() and a.is_exact():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b.frobenius(i)
        return TwistedPoly(self.parent, out)

    def __call__(self, x: CElem) -> CElem:
        """f(x) = sum a_i x^(q^i)."""
        x = self.parent(x)
        acc = self.parent.zero()
        xp = x
        for i, a in enumerate(self.coeffs):
            if i:
                xp = xp.frobenius(1)
            if not (a.is_zero() and a.is_exact()):
                acc = acc + a * xp
        return acc

    def residual(self, other: "TwistedPoly"):
        d = self - other
        return min(c.val() for c in d.coeffs)

    def approx_eq(self, other: "TwistedPoly", slack=None) -> bool:
        d = self - other
        return all(c.approx_eq(self.parent.zero(), slack) for c in d.coeffs)

    def __repr__(self):
        return " + ".join(f"({c.render(3)})τ^{i}" for i, c in enumerate(self.coeffs))


class DrinfeldModule:
    """φ_θ = θ + g_1 τ + ... + g_r τ^r."""

    def __init__(self, parent: CInfty, g, exact: bool | None = None):
        self.parent = parent
        self.g = [parent(x) for x in g]
        if not self.g or not self.g[-1].is_nonzero():
            raise ValueError("leading coefficient g_r must be numerically nonzero")
        self.exact = all(x.is_exact() for x in self.g) if exact is None else exact
        self.phi_theta = TwistedPoly(parent, [parent.theta()] + self.g)
        self._cache: dict = {}

    @classmethod
    def carlitz(cls, parent: CInfty) -> "DrinfeldModule":
        return cls(parent, [parent.one()])

    @property
    def rank(self) -> int:
        return len(self.g)

    @property
    def q(self) -> int:
        return self.parent.q

    def phi_of(self, a: Poly) -> TwistedPoly:
        """φ_a by Horner's rule in φ_θ."""
        key = tuple(a.c)
        if key not in self._cache:
            C = self.parent
            acc = TwistedPoly(C, [C.zero()])
            for c in reversed(a.c):
                acc = acc * self.phi_theta + TwistedPoly(C, [C(_lift_coeff(a, c))])
            self._cache[key] = acc
        return self._cache[key]

    def apply(self, a: Poly, x: CElem) -> CElem:
        """φ_a(x) as sum_k a_k φ_θ^k(x) over successive images of x.

        Same value as phi_of(a)(x), but every intermediate is a point rather
        than a large τ-coefficient, so far less cancellation occurs.
        """
        acc = self.parent.zero()
        y = self.parent(x)
        for k, c in enumerate(a.c):
            if k:
                y = self.phi_theta(y)
            if c:
                acc = acc + y.scale(_lift_coeff(a, c))
        return acc

    def scaled(self, c: CElem) -> "DrinfeldModule":
        """Module of the lattice cΛ: g_i -> c^(1 - q^i) g_i, since φ'_a(x) = c φ_a(x / c)."""
        q = self.q
        return DrinfeldModule(self.parent, [g * (c ** (q ** (i + 1) - 1)).inverse() for i, g in enumerate(self.g)])

    def __repr__(self):
        return f"DrinfeldModule(rank={self.rank}, g={[x.render(3) for x in self.g]})"


def _lift_coeff(a: Poly, c: int):
    return FFElem(a.field, c) if a.field.n > 1 else c


class ExpSeries:
    """Coefficients e_0 = 1, e_1, ..., e_M of exp = sum e_m τ^m.

    When built from a module the series extends itself on demand through the
    functional-equation recursion.
    """

    def __init__(self, parent: CInfty, coeffs, module: DrinfeldModule | None = None, diagnostics=None):
        self.parent = parent
        self.coeffs = list(coeffs)
        self.module = module
        self.diagnostics = diagnostics or {}

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, m):
        self.ensure(m)
        return self.coeffs[m]

    def can_extend(self) -> bool:
        return self.module is not None

    def ensure(self, m: int) -> bool:
        while len(self.coeffs) <= m:
            if self.module is None:
                return False
            self.coeffs.append(_next_exp_coeff(self.module, self.coeffs))
        return True

    def twisted(self, M: int | None = None) -> TwistedPoly:
        M = len(self.coeffs) - 1 if M is None else M
        self.ensure(M)
        return TwistedPoly(self.parent, self.coeffs[: M + 1])


def _next_exp_coeff(phi: DrinfeldModule, e: list) -> CElem:
    C = phi.parent
    m = len(e)
    acc = C.zero()
    for i in range(1, min(m, phi.rank) + 1):
        acc = acc + phi.g[i - 1] * e[m - i].frobenius(i)
    return acc / (C.theta(phi.q**m) - C.theta())


def exp_coeffs(phi: DrinfeldModule, M: int) -> ExpSeries:
    """e_0..e_M from e_m (θ^(q^m) - θ) = sum_{i=1}^{min(m,r)} g_i e_{m-i}^(q^i)."""
    E = ExpSeries(phi.parent, [phi.parent.one()], module=phi)
    E.ensure(M)
    return E


def exp_eval(E: ExpSeries, x: CElem, max_terms: int = 64) -> CElem:
    """sum e_m x^(q^m), stopping once a term lies below the running precision.

    Later terms are certified negligible only while term valuations increase;
    a decreasing tail inside the available window is rejected.
    """
    C = E.parent
    x = C(x)
    if x.is_zero():
        return x
    acc = C.zero()
    xp = x
    vals = []
    for m in range(max_terms):
        if m:
            xp = xp.frobenius(1)
        if not E.ensure(m):
            break
        term = E.coeffs[m] * xp
        v = term.val()
        vals.append(v)
        acc = acc + term
        if m >= 1 and v > vals[-2] and v >= acc.precision():
            return acc
    if len(vals) >= 2 and vals[-1] > vals[-2]:
        # fold the next-term estimate into the precision
        return acc + C.zero_to(vals[-1])
    raise ConvergenceError(
        f"argument outside certified convergence range (val x = {x.val()}, term valuations {vals[-4:]})")


def exp_reduced(phi: DrinfeldModule, E: ExpSeries, x: CElem, floor_val=-2) -> CElem:
    """exp(x) via exp(θ^k y) = φ_{θ^k}(exp(y)) when val x < floor_val.

    Large arguments make the series cancel far below the relative cap; after
    reduction every intermediate stays moderate and Frobenius powers keep
    their relative precision.
    """
    x = phi.parent(x)
    v = x.val()
    if x.is_zero() or v >= floor_val:
        return exp_eval(E, x)
    k = math.ceil(floor_val - v)
    y = exp_eval(E, x.shift(-k))
    return phi.apply(APoly(GF(phi.q), [0] * k + [1]), y)


class Lattice:
    """A_basis z_1..z_r of a discrete A-lattice in C_∞."""

    def __init__(self, parent: CInfty, basis, check_deg: int = 1):
        self.parent = parent
        self.basis = [parent(z) for z in basis]
        self.check_deg = check_deg
        self.diagnostics = self._admissibility()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _admissibility(self):
        C = self.parent
        if any(not z.is_nonzero() for z in self.basis):
            raise ValueError("lattice basis contains a (numerically) zero vector")
        q = C.q
        worst = INF
        count = 0
        # all combinations sum a_j z_j with deg a_j < check_deg, not all zero
        polys = [c for c in itertools.product(range(q), repeat=self.check_deg)]
        for combo in itertools.product(polys, repeat=self.rank):
            if not any(any(c) for c in combo):
                continue
            acc = C.zero()
            for coeffs, z in zip(combo, self.basis):
                for k, c in enumerate(coeffs):
                    if c:
                        acc = acc + z.shift(k).scale(c)
            count += 1
            if not acc.is_nonzero():
                raise ValueError("lattice basis is F_q[θ]-dependent to working precision")
            worst = min(worst, acc.rel_prec())
        return {"combinations_checked": count, "min_relative_precision": _jsonable(worst)}

    def scaled(self, c: CElem) -> "Lattice":
        return Lattice(self.parent, [z * c for z in self.basis], self.check_deg)

    def generators(self, cutoff: int):
        """θ^k z_j for k < cutoff, degree-major."""
        for k in range(cutoff):
            for z in self.basis:
                yield z.shift(k)


def _jsonable(v):
    if v == INF:
        return "inf"
    return str(v) if isinstance(v, Fraction) else v


def _subspace_exp(lattice: Lattice, cutoff: int, M: int) -> list[CElem]:
    """e_0..e_M of the exponential of span_{F_q}{θ^k z_j : k < cutoff}.

    Adding a generator w to V replaces e_V by (1 - ε^(1-q) τ) e_V with ε = e_V(w);
    ε itself is evaluated through the chain of these linear factors.
    """
    C = lattice.parent
    q = C.q
    coeffs = [C.one()] + [C.zero()] * M
    factors: list[CElem] = []
    for w in lattice.generators(cutoff):
        y = w
        for u in factors:
            y = y - u * y.frobenius(1)
        if not y.is_nonzero():
            raise ValueError("lattice generator lies in the span of earlier generators")
        u = y ** (1 - q)
        factors.append(u)
        coeffs = [coeffs[0]] + [coeffs[m] - u * coeffs[m - 1].frobenius(1) for m in range(1, M + 1)]
    return coeffs


def lattice_exp(lattice: Lattice, M: int, cutoff_deg: int | None = None,
                max_cutoff: int = 64) -> ExpSeries:
    """Exponential coefficients of the lattice, certified by stabilisation.

    The subspace cutoff doubles until every e_m (m <= M) changes by less than
    the equality slack; the observed change is folded into the precision.
    """
    C = lattice.parent
    cutoff = cutoff_deg or 4
    prev = _subspace_exp(lattice, cutoff, M)
    history = []
    while True:
        nxt_cut = cutoff * 2
        if nxt_cut > max_cutoff:
            raise StabilizationError(
                f"lattice exponential did not stabilise up to cutoff {max_cutoff}: "
                f"last changes {history[-1] if history else None}")
        cur = _subspace_exp(lattice, nxt_cut, M)
        changes = [(a - b).val() for a, b in zip(cur, prev)]
        history.append([_jsonable(v) for v in changes])
        if all(a.approx_eq(b) for a, b in zip(cur, prev)):
            folded = [a + C.zero_to(ch) if ch != INF else a for a, ch in zip(cur, changes)]
            return ExpSeries(C, folded, diagnostics={"cutoff": nxt_cut, "changes": history})
        cutoff, prev = nxt_cut, cur


def module_from_lattice(lattice: Lattice, cutoff_deg: int | None = None, extra: int = 2):
    """(φ, E): module with period lattice Λ and the lattice exponential.

    g_m = e_m (θ^(q^m) - θ) - sum_{i<m} g_i e_{m-i}^(q^i) for m <= r; the same
    recursion for r < m <= r + extra is checked as a residual.
    """
    C = lattice.parent
    q, r = C.q, lattice.rank
    E = lattice_exp(lattice, r + extra, cutoff_deg)
    e = E.coeffs
    g = []
    for m in range(1, r + 1):
        acc = e[m] * (C.theta(q**m) - C.theta())
        for i in range(1, m):
            acc = acc - g[i - 1] * e[m - i].frobenius(i)
        g.append(acc)
    phi = DrinfeldModule(C, g)
    worst = INF
    for m in range(r + 1, r + extra + 1):
        lhs = e[m] * (C.theta(q**m) - C.theta())
        rhs = C.zero()
        for i in range(1, r + 1):
            rhs = rhs + g[i - 1] * e[m - i].frobenius(i)
        if not lhs.approx_eq(rhs):
            raise StabilizationError(f"functional equation fails at e_{m}: residual {(lhs - rhs).val()}")
        worst = min(worst, (lhs - rhs).val() - lhs.val())
    E.module = phi
    E.diagnostics["relative_residual"] = _jsonable(worst)
    return phi, E


def neg_one_root(field) -> FFElem:
    """Least-encoded ξ with ξ^(q-1) = -1."""
    q = field.p
    target = field.neg(1)
    for a in range(1, field.order):
        if field.power(a, q - 1) == target:
            return FFElem(field, a)
    raise ValueError(f"{field} has no (q-1)-th root of -1")


def carlitz_period(C: CInfty) -> CElem:
    """π̃ = θ (-θ)^(1/(q-1)) prod_{i>=1} (1 - θ^(1-q^i))^(-1)."""
    q = C.q
    xi = neg_one_root(C.field)
    acc = C.monomial(xi, Fraction(q, q - 1))
    i = 1
    while q**i - 1 <= C.cap + 2:
        acc = acc / (C.one() - C.theta(1 - q**i))
        i += 1
    return acc


def agf(phi: DrinfeldModule, E: ExpSeries, z: CElem, T: int) -> TateTrunc:
    """ω(t) = sum_{i<T} exp(z / θ^(i+1)) t^i with certified tail bound."""
    C = phi.parent
    coeffs = [exp_eval(E, z.shift(-(i + 1))) for i in range(T)]
    return TateTrunc(C, coeffs, agf_tail_bound(E, z, T))


def agf_tail_bound(E: ExpSeries, z: CElem, T: int):
    """min_m val(e_m) + q^m (val z + T + 1): bounds exp(z/θ^(i+1)) for i >= T."""
    q = E.parent.q
    base = z.val() + T + 1
    if base <= 0:
        raise ValueError("truncation too short for a certified AGF tail")
    return min(E.coeffs[m].val() + q**m * base for m in range(len(E.coeffs)))


def agf_pellarin(phi: DrinfeldModule, E: ExpSeries, z: CElem, T: int, max_terms: int = 64) -> TateTrunc:
    """ω(t) = sum_m e_m z^(q^m) / (θ^(q^m) - t), expanded in t."""
    C = phi.parent
    q = C.q
    u = []
    zp = z
    # u_m = e_m z^(q^m); coefficient i is sum_m u_m θ^(-q^m (i+1))
    coeffs = []
    for i in range(T):
        acc = C.zero()
        m = 0
        prev = None
        while True:
            if m >= len(u):
                if m >= max_terms or not E.ensure(m):
                    raise ConvergenceError("argument outside certified convergence range")
                if m:
                    zp = zp.frobenius(1)
                u.append(E.coeffs[m] * zp)
            term = u[m].shift(-(q**m) * (i + 1))
            v = term.val()
            acc = acc + term
            if m >= 1 and v > prev and v >= acc.precision():
                break
            prev = v
            m += 1
        coeffs.append(acc)
    return TateTrunc(C, coeffs, agf_tail_bound(E, z, T))


def functional_residual(phi: DrinfeldModule, omega: TateTrunc, a: Poly):
    """Worst valuation of ω^{φ_a} - a(t) ω over the common coefficients."""
    C = phi.parent
    lhs = act_twisted(phi.phi_of(a), omega)
    at = TateTrunc.from_tpoly(C, a)
    rhs = at * omega
    T = min(len(lhs), len(rhs))
    return min((lhs.coeffs[i] - rhs.coeffs[i]).val() for i in range(T))


def hyperderivative_residual(phi: DrinfeldModule, omega: TateTrunc, a: Poly, n: int):
    """Worst valuation of (ω^(k))^{φ_a} - sum_u a(t)^(u) ω^(k-u) over k <= n.

    Row k of ρ^[n+1](a(t)) applied to (ω^(n), ..., ω): the Leibniz form of the
    functional equation after k hyperderivatives.
    """
    C = phi.parent
    f = phi.phi_of(a)
    worst = math.inf
    for k in range(n + 1):
        lhs = act_twisted(f, hd_tate(omega, k))
        rhs = None
        for u in range(k + 1):
            term = TateTrunc.from_tpoly(C, hd_poly(a, u)) * hd_tate(omega, k - u)
            rhs = term if rhs is None else rhs + term
        T = min(len(lhs), len(rhs))
        worst = min(worst, min((lhs.coeffs[i] - rhs.coeffs[i]).val() for i in range(T)))
    return worst
