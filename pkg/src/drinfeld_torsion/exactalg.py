"""Exact arithmetic: finite fields, polynomials over F_q, p-adic digit expansions.

Finite fields F_{p^n} are built over the lexicographically least primitive
polynomial of degree n, so the class of x generates the multiplicative group
and log tables give fast multiplication.  Elements are encoded as integers
sum(c_i * p**i) of their coefficient vectors; the prime subfield is therefore
encoded by 0..p-1 in every extension, which makes lifting polynomials over
F_p into an extension field free.

Only prime q is supported for the base field F_q.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import lru_cache

import numpy as np

__all__ = [
    "FiniteField",
    "FFElem",
    "GF",
    "Poly",
    "APoly",
    "TPoly",
    "BivarPoly",
    "PadicTrunc",
    "chi_t",
    "lucas_binom",
    "hd_poly",
    "prime_roots",
    "padic_expand",
    "monic_irreducibles",
    "parse_poly",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


# ---------------------------------------------------------------------------
# finite fields


class FiniteField:
    """The field F_{p^n} = F_p[x]/(f) with f the least primitive polynomial."""

    def __init__(self, p: int, n: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.n = n
        self.order = p**n
        self.modulus = self._least_primitive()
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    def __reduce__(self):
        return (GF, (self.p, self.n))

    # -- construction -----------------------------------------------------

    def _times_x(self, vec, low):
        # multiply a coefficient vector by x and reduce with x^n = -low
        top = vec[-1]
        out = [0] + vec[:-1]
        if top:
            out = [(a - top * b) % self.p for a, b in zip(out, low)]
        return out

    def _least_primitive(self):
        p, n = self.p, self.n
        for low in itertools.product(range(p), repeat=n):
            low = list(reversed(low))  # lexicographic on (c_{n-1}, ..., c_0)
            if low[0] == 0:
                continue
            vec = [1] + [0] * (n - 1)
            one = list(vec)
            for k in range(1, p**n):
                vec = self._times_x(vec, low)
                if vec == one:
                    break
            if k == p**n - 1:
                return tuple(low) + (1,)
        raise RuntimeError("no primitive polynomial found")  # pragma: no cover

    def _build_tables(self):
        p, n, Q = self.p, self.n, self.order
        low = list(self.modulus[:-1])
        self.vectors = np.zeros((Q, n), dtype=np.int64)
        for a in range(Q):
            self.vectors[a] = self._digits(a)
        self.exp = np.zeros(2 * (Q - 1), dtype=np.int64)
        self.log = np.full(Q, -1, dtype=np.int64)
        vec = [1] + [0] * (n - 1)
        for k in range(Q - 1):
            a = self.encode(vec)
            self.exp[k] = a
            self.log[a] = k
            vec = self._times_x(vec, low)
        self.exp[Q - 1:] = self.exp[: Q - 1]
        weights = p ** np.arange(n, dtype=np.int64)
        self._weights = weights
        sums = (self.vectors[:, None, :] + self.vectors[None, :, :]) % p
        self.add_table = sums @ weights
        self.neg_table = ((-self.vectors) % p) @ weights
        # x^k reduced, for k < 2n - 1, used to fold convolution products
        red = np.zeros((max(2 * n - 1, 1), n), dtype=np.int64)
        vec = [1] + [0] * (n - 1)
        for k in range(2 * n - 1):
            red[k] = vec
            vec = self._times_x(vec, low)
        self.reduction = red
        self._frob_cache = {}

    def _digits(self, a):
        out = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    # -- encoding ---------------------------------------------------------

    def encode(self, vec) -> int:
        v = 0
        for c in reversed(list(vec)):
            v = v * self.p + int(c) % self.p
        return v

    def vec(self, a: int) -> np.ndarray:
        return self.vectors[a]

    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.field is self:
                return value
            if value.field.n == 1 and value.field.p == self.p:
                return FFElem(self, value.v)
            raise ValueError(f"cannot coerce {value!r} into {self}")
        return FFElem(self, int(value) % self.p)

    def gen(self) -> "FFElem":
        """The class of x."""
        return FFElem(self, self.encode([0, 1]) if self.n > 1 else int(self.exp[1]))

    def elements(self):
        return [FFElem(self, a) for a in range(self.order)]

    # -- raw integer arithmetic ----------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return int(self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)])

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero in finite field")
            return 1 if k == 0 else 0
        return int(self.exp[(int(self.log[a]) * k) % (self.order - 1)])

    def frob(self, a: int, j: int = 1) -> int:
        """a^(p^j); negative j gives the inverse Frobenius."""
        return self.power(a, pow(self.p, j % self.n))

    def mul_matrix(self, a: int) -> np.ndarray:
        """Matrix M over F_p with vec(a*b) = M @ vec(b)."""
        cols = [self.vectors[self.mul(a, self.encode(np.eye(self.n, dtype=int)[i]))]
                for i in range(self.n)]
        return np.array(cols, dtype=np.int64).T

    def frob_matrix(self, j: int) -> np.ndarray:
        """Matrix of x -> x^(p^j) acting on coefficient vectors."""
        j %= self.n
        if j not in self._frob_cache:
            basis = np.eye(self.n, dtype=int)
            cols = [self.vectors[self.frob(self.encode(basis[i]), j)] for i in range(self.n)]
            self._frob_cache[j] = np.array(cols, dtype=np.int64).T
        return self._frob_cache[j]

    def embedding(self, other: "FiniteField"):
        """Field embedding self -> other sending x to its least root in other."""
        if other.p != self.p or other.n % self.n:
            raise ValueError(f"{self} does not embed into {other}")
        f = Poly(GF(self.p), list(self.modulus), "x").lift(other)
        root = min(a for a in range(other.order) if f.eval_raw(a) == 0)
        powers = [other.power(root, i) for i in range(self.n)]

        def embed(a):
            a = a.v if isinstance(a, FFElem) else a
            acc = 0
            for c, w in zip(self.vectors[a], powers):
                acc = other.add(acc, other.mul(int(c), w))
            return FFElem(other, acc)

        return embed

    def fq_coords(self, a: int, basis: list[int]) -> list[int] | None:
        """Solve a = sum c_l basis[l] with c_l in F_p; None if unsolvable."""
        mat = np.array([self.vectors[b] for b in basis], dtype=np.int64).T
        sol = solve_mod_p(mat, self.vectors[a].copy(), self.p)
        return None if sol is None else [int(c) for c in sol]


@lru_cache(maxsize=None)
def GF(p: int, n: int = 1) -> FiniteField:
    """Cached finite field constructor (one parent object per (p, n))."""
    return FiniteField(p, n)


def solve_mod_p(mat, rhs, p):
    """Solve mat @ x = rhs over F_p by Gaussian elimination (unique or None)."""
    mat = np.array(mat, dtype=np.int64) % p
    rhs = np.array(rhs, dtype=np.int64) % p
    rows, cols = mat.shape
    aug = np.concatenate([mat, rhs[:, None]], axis=1)
    piv_cols = []
    r = 0
    for c in range(cols):
        nz = [i for i in range(r, rows) if aug[i, c]]
        if not nz:
            continue
        aug[[r, nz[0]]] = aug[[nz[0], r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        piv_cols.append(c)
        r += 1
    if any(aug[i, -1] for i in range(r, rows)):
        return None
    if len(piv_cols) < cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv_cols):
        x[c] = aug[i, -1]
    return x


def rank_mod_p(mat, p) -> int:
    mat = np.array(mat, dtype=np.int64) % p
    rows, cols = mat.shape
    r = 0
    for c in range(cols):
        nz = [i for i in range(r, rows) if mat[i, c]]
        if not nz:
            continue
        mat[[r, nz[0]]] = mat[[nz[0], r]]
        mat[r] = (mat[r] * pow(int(mat[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and mat[i, c]:
                mat[i] = (mat[i] - mat[i, c] * mat[r]) % p
        r += 1
    return r


class FFElem:
    """An element of a finite field, immutable."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is not self.field:
                return self.field(other)
            return other
        if isinstance(other, int):
            return FFElem(self.field, other % self.field.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.field, self.field.add(self.v, other.v))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.v))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.field, self.field.sub(self.v, other.v))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.field, self.field.mul(self.v, other.v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.field, self.field.mul(self.v, self.field.inv(other.v)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        return FFElem(self.field, self.field.power(self.v, k))

    def inverse(self):
        return FFElem(self.field, self.field.inv(self.v))

    def frob(self, j: int = 1) -> "FFElem":
        return FFElem(self.field, self.field.frob(self.v, j))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.field.p
        if isinstance(other, FFElem):
            return self.field is other.field and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __lt__(self, other):
        return self.v < other.v

    def __repr__(self):
        return format_ffelem(self.field, self.v)


def format_ffelem(field: FiniteField, v: int, gen: str = "w") -> str:
    if field.n == 1:
        return str(v)
    terms = []
    for i, c in enumerate(field.vectors[v]):
        if c:
            mon = "" if i == 0 else (gen if i == 1 else f"{gen}^{i}")
            terms.append(str(c) if not mon else (mon if c == 1 else f"{c}*{mon}"))
    return "+".join(reversed(terms)) if terms else "0"


# ---------------------------------------------------------------------------
# polynomials over a finite field


class Poly:
    """Dense univariate polynomial with coefficients in a FiniteField.

    Coefficients are stored as field integer encodings, lowest degree first,
    with no trailing zeros.
    """

    __slots__ = ("field", "c", "var")
    default_var = "x"

    def __init__(self, field: FiniteField, coeffs=(), var: str | None = None):
        self.field = field
        cs = [c.v if isinstance(c, FFElem) else int(c) % field.order if field.n > 1 else int(c) % field.p
              for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)
        self.var = var or self.default_var

    def _new(self, coeffs):
        return type(self)(self.field, coeffs, self.var)

    @classmethod
    def monomial(cls, field, k, coeff=1, var=None):
        return cls(field, [0] * k + [coeff], var)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __len__(self):
        return len(self.c)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._new([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.c == other.c

    def __hash__(self):
        return hash((self.field.order, self.c))

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, FFElem)):
            return self._new([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        n = max(len(self.c), len(other.c))
        return self._new([F.add(self[i], other[i]) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([self.field.neg(a) for a in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.c or not other.c:
            return self._new([])
        F = self.field
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self._new([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.c)
        dq = len(rem) - len(other.c)
        if dq < 0:
            return self._new([]), self
        quo = [0] * (dq + 1)
        inv_lead = F.inv(other.lead)
        for k in range(dq, -1, -1):
            coef = F.mul(rem[k + len(other.c) - 1], inv_lead)
            quo[k] = coef
            if coef:
                for i, b in enumerate(other.c):
                    rem[k + i] = F.sub(rem[k + i], F.mul(coef, b))
        return self._new(quo), self._new(rem[: len(other.c) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        quo, rem = divmod(self, other)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quo

    def monic(self):
        inv = self.field.inv(self.lead)
        return self._new([self.field.mul(a, inv) for a in self.c])

    def scale(self, s):
        s = s.v if isinstance(s, FFElem) else s
        return self._new([self.field.mul(a, s) for a in self.c])

    def shift(self, k: int):
        """Multiply by var^k."""
        return self._new([0] * k + list(self.c)) if self.c else self

    def eval_raw(self, x: int) -> int:
        F = self.field
        acc = 0
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def __call__(self, x):
        if isinstance(x, Poly):
            acc = x._new([])
            for a in reversed(self.c):
                acc = acc * x + a
            return acc
        if isinstance(x, FFElem):
            if x.field is not self.field:
                return self.lift(x.field)(x)
            return FFElem(self.field, self.eval_raw(x.v))
        return FFElem(self.field, self.eval_raw(int(x) % self.field.p))

    def derivative(self):
        F = self.field
        return self._new([F.mul(i % F.p, a) for i, a in enumerate(self.c)][1:])

    def lift(self, field: FiniteField):
        """The same polynomial viewed over an extension of the prime field."""
        if field is self.field:
            return self
        if self.field.n != 1 or field.p != self.field.p:
            raise ValueError(f"cannot lift coefficients of {self.field} into {field}")
        return Poly(field, self.c, self.var)

    def with_var(self, cls):
        return cls(self.field, self.c)

    def pow_mod(self, k: int, mod):
        result = self._new([1])
        base = self % mod
        while k:
            if k & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            k >>= 1
        return result

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def is_irreducible(self) -> bool:
        """Rabin's test over the coefficient field."""
        d = self.degree
        if d < 1:
            return False
        if d == 1:
            return True
        Q = self.field.order
        x = self._new([0, 1])
        primes = [r for r in range(2, d + 1) if d % r == 0 and is_prime(r)]
        for r in primes:
            h = x.pow_mod(Q ** (d // r), self) - x
            if self.gcd(h).degree > 0:
                return False
        return (x.pow_mod(Q**d, self) - x) % self == self._new([])

    def coeff_elems(self):
        return [FFElem(self.field, a) for a in self.c]

    def __repr__(self):
        return format_poly(self.field, self.c, self.var)


class APoly(Poly):
    """Element of A = F_q[θ]."""

    __slots__ = ()
    default_var = "θ"


class TPoly(Poly):
    """Element of F_q[t], the image of chi_t."""

    __slots__ = ()
    default_var = "t"


def chi_t(a: Poly) -> TPoly:
    """The isomorphism A -> F_q[t], θ -> t."""
    return TPoly(a.field, a.c)


def format_poly(field, coeffs, var) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        a = coeffs[i]
        if not a:
            continue
        cs = format_ffelem(field, a)
        if field.n > 1 and "+" in cs:
            cs = f"({cs})"
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mon:
            terms.append(cs)
        elif cs == "1":
            terms.append(mon)
        else:
            terms.append(f"{cs}*{mon}")
    return " + ".join(terms) if terms else "0"


_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+)\s*\*?\s*)?(?P<var>θ|theta|t|x|T)?(?:\s*\^\s*\(?(?P<exp>\d+)\)?)?$"
)


def parse_poly(text: str, q: int, cls=APoly) -> Poly:
    """Parse "c_k*θ^k + ... + c_0" (θ may be written theta, t or x) over F_q."""
    field = GF(q)
    s = text.replace("−", "-").replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for raw in s.split("+"):
        if not raw:
            continue
        sign = 1
        while raw.startswith("-"):
            sign, raw = -sign, raw[1:]
        m = _TERM_RE.match(raw)
        if not m or not raw:
            raise ValueError(f"cannot parse polynomial term {raw!r} in {text!r}")
        coef = int(m.group("coef")) if m.group("coef") else 1
        if m.group("var"):
            k = int(m.group("exp")) if m.group("exp") else 1
        else:
            if m.group("exp"):
                raise ValueError(f"cannot parse polynomial term {raw!r} in {text!r}")
            k = 0
        coeffs[k] = (coeffs.get(k, 0) + sign * coef) % q
    deg = max(coeffs) if coeffs else 0
    return cls(field, [coeffs.get(i, 0) for i in range(deg + 1)])


def monic_irreducibles(q: int, d: int) -> list[APoly]:
    """All monic irreducible polynomials of degree d over F_q, in lexicographic order."""
    F = GF(q)
    out = []
    for low in itertools.product(range(q), repeat=d):
        f = APoly(F, list(reversed(low)) + [1])
        if f.is_irreducible():
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# binomials, hyperderivatives, roots


def lucas_binom(i: int, n: int, p: int) -> int:
    """C(i, n) mod p via the base-p digits of i and n."""
    if n < 0 or i < 0 or n > i:
        return 0
    out = 1
    while n or i:
        i, a = divmod(i, p)
        n, b = divmod(n, p)
        if b > a:
            return 0
        out = out * math.comb(a, b) % p
    return out


def hd_poly(h: Poly, n: int) -> Poly:
    """n-th hyperderivative: coefficient of t^(i-n) is C(i, n) * c_i."""
    F = h.field
    return h._new([F.mul(lucas_binom(i, n, F.p), a) for i, a in enumerate(h.c)][n:])


def prime_roots(p: Poly, field: FiniteField | None = None) -> list[FFElem]:
    """Roots ζ_1..ζ_d of an irreducible monic p with ζ_{k+1} = ζ_k^q.

    ζ_1 is the root with the least integer encoding in ``field``
    (default F_{q^d}).
    """
    q = p.field.p
    d = p.degree
    if p.field.n != 1:
        raise ValueError("prime must have coefficients in the prime field")
    if d < 1 or p.lead != 1:
        raise ValueError(f"{p} is not monic of positive degree")
    if not p.is_irreducible():
        raise ValueError(f"{p} is not irreducible over F_{q}")
    field = field or GF(q, d)
    if field.n % d:
        raise ValueError(f"{field} does not contain the roots of {p}")
    pl = p.lift(field)
    first = min(a for a in range(field.order) if pl.eval_raw(a) == 0)
    roots = [FFElem(field, first)]
    for _ in range(d - 1):
        roots.append(roots[-1].frob(1))
    return roots


# ---------------------------------------------------------------------------
# bivariate polynomials A[T]


class BivarPoly:
    """Polynomial in T with APoly coefficients; coeffs[k] multiplies T^k."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        self.field = field
        cs = [c if isinstance(c, Poly) else APoly(field, c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree_T(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else APoly(self.field, [])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return BivarPoly(self.field, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return BivarPoly(self.field, [])
        out = [APoly(self.field, [])] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BivarPoly(self.field, out)

    def __pow__(self, k: int):
        result = BivarPoly(self.field, [APoly(self.field, [1])])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.coeffs == other.coeffs

    def mod_monic(self, m: Poly) -> "BivarPoly":
        """Remainder modulo a monic polynomial m(T) with F_q coefficients."""
        if m.lead != 1:
            raise ValueError("divisor must be monic")
        d = m.degree
        cs = list(self.coeffs)
        for k in range(len(cs) - 1, d - 1, -1):
            top = cs[k]
            if not top:
                continue
            for i, a in enumerate(m.c):
                cs[k - d + i] = cs[k - d + i] - top.scale(a)
        return BivarPoly(self.field, cs[:d])

    def eval_T(self, z: FFElem) -> Poly:
        """Substitute T = z, giving a polynomial in θ over z's field."""
        F = z.field
        acc = Poly(F, [], "θ")
        for c in reversed(self.coeffs):
            acc = acc * Poly(F, [z.v]) + c.lift(F)
        return Poly(F, acc.c, "θ")

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                mon = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
                parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# truncated p-adic expansions


class PadicTrunc:
    """Element of A_p / p^M stored as digits b_0..b_{M-1} (deg b_i < d)."""

    __slots__ = ("p", "M", "digits")

    def __init__(self, p: APoly, M: int, digits):
        digits = list(digits)
        if len(digits) > M:
            raise ValueError("more digits than the level")
        zero = APoly(p.field, [])
        digits = digits + [zero] * (M - len(digits))
        for b in digits:
            if b.degree >= p.degree:
                raise ValueError("digit degree must be below deg p")
        self.p = p
        self.M = M
        self.digits = tuple(APoly(p.field, b.c) for b in digits)

    @classmethod
    def from_poly(cls, a: Poly, p: APoly, M: int) -> "PadicTrunc":
        return padic_expand(a, p, M)

    def to_poly(self) -> APoly:
        acc = APoly(self.p.field, [])
        for b in reversed(self.digits):
            acc = acc * self.p + b
        return acc

    def modulus(self) -> APoly:
        return self.p**self.M

    def _check(self, other):
        if isinstance(other, Poly):
            return padic_expand(other, self.p, self.M)
        if isinstance(other, int):
            return padic_expand(APoly(self.p.field, [other]), self.p, self.M)
        if other.p != self.p:
            raise ValueError("different primes")
        return other

    def __add__(self, other):
        other = self._check(other)
        M = min(self.M, other.M)
        return padic_expand(self.to_poly() + other.to_poly(), self.p, M)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        M = min(self.M, other.M)
        return padic_expand(self.to_poly() - other.to_poly(), self.p, M)

    def __neg__(self):
        return padic_expand(-self.to_poly(), self.p, self.M)

    def __mul__(self, other):
        other = self._check(other)
        M = min(self.M, other.M)
        return padic_expand(self.to_poly() * other.to_poly(), self.p, M)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return bool(self.digits[0]) if self.M else False

    def inverse(self) -> "PadicTrunc":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in A_p")
        mod = self.modulus()
        # extended Euclid in A: s*a + u*mod = 1
        r0, r1 = mod, self.to_poly()
        s0, s1 = APoly(self.p.field, []), APoly(self.p.field, [1])
        while r1:
            quo, rem = divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, s0 - quo * s1
        if r0.degree != 0:
            raise ZeroDivisionError("not a unit in A_p")  # pragma: no cover
        return padic_expand(s0.scale(self.p.field.inv(r0.lead)), self.p, self.M)

    def reduce(self, M: int) -> "PadicTrunc":
        if M > self.M:
            raise ValueError("cannot raise the p-adic level")
        return PadicTrunc(self.p, M, self.digits[:M])

    def __eq__(self, other):
        if not isinstance(other, PadicTrunc):
            return NotImplemented
        return self.p == other.p and self.M == other.M and self.digits == other.digits

    def __hash__(self):
        return hash((self.p, self.M, self.digits))

    def __repr__(self):
        return f"PadicTrunc({self.p}; {list(self.digits)})"


def padic_expand(a: Poly, p: APoly, M: int) -> PadicTrunc:
    """Canonical digits b_i with sum b_i p^i ≡ a mod p^M and deg b_i < deg p."""
    a = APoly(p.field, a.c)
    digits = []
    for _ in range(M):
        a, b = divmod(a, p)
        digits.append(b)
    return PadicTrunc(p, M, digits)
