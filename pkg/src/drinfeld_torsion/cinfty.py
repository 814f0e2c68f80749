"""Truncated ramified Laurent series as a floating-point model of C_∞.

An element is  sum_i c_i θ^(-(v0+i)/e)  with c_i in a finite field F_{q^m},
known modulo terms of exponent >= prec (in units of 1/e).  Valuations are
normalised so that val(θ) = -1, i.e. |x| = q^(-val x).

Precision is absolute and only ever decreases.  Each parent carries a cap on
relative precision (``prec`` valuation units past the leading term, plus
``guard`` extra units absorbing cancellation); results are truncated to it, which is what keeps Frobenius powers x^(q^k) from
blowing up storage.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .exactalg import FFElem, FiniteField, GF, Poly, format_ffelem

__all__ = ["CInfty", "CElem", "DEFAULT_PREC", "DEFAULT_GUARD", "EQ_SLACK"]

DEFAULT_PREC = 64
DEFAULT_GUARD = 192
EQ_SLACK = 8

INF = math.inf


class CInfty:
    """Parent object: constant field F_{q^m}, relative precision cap, tolerances."""

    def __init__(self, q: int, m: int = 1, prec: int = DEFAULT_PREC,
                 slack: int = EQ_SLACK, nonzero_margin: int | None = None,
                 guard: int = DEFAULT_GUARD):
        self.q = q
        self.m = m
        self.field: FiniteField = GF(q, m)
        self.prec = prec
        self.guard = guard
        # relative precision actually carried: the target plus guard digits
        self.cap = prec + guard
        self.slack = slack
        self.nonzero_margin = prec // 2 if nonzero_margin is None else nonzero_margin

    def __repr__(self):
        return f"CInfty(q={self.q}, m={self.m}, prec={self.prec})"

    # -- constructors -----------------------------------------------------

    def _rows(self, values):
        F = self.field
        return np.array([F.vectors[v] for v in values], dtype=np.int64).reshape(-1, F.n)

    def _raw(self, value) -> int:
        if isinstance(value, FFElem):
            return self.field(value).v
        return int(value) % self.q

    def zero(self) -> "CElem":
        return CElem(self, 1, 0, self._rows([]), INF)

    def zero_to(self, prec_val) -> "CElem":
        """Element known only to be O(θ^-prec_val)."""
        prec_val = Fraction(prec_val)
        e = prec_val.denominator
        return CElem(self, e, 0, self._rows([]), int(prec_val * e))

    def one(self) -> "CElem":
        return self.const(1)

    def const(self, c) -> "CElem":
        return CElem(self, 1, 0, self._rows([self._raw(c)]), INF)

    def monomial(self, c, exponent) -> "CElem":
        """c * θ^exponent, exponent rational."""
        exponent = Fraction(exponent)
        e = exponent.denominator
        return CElem(self, e, int(-exponent * e), self._rows([self._raw(c)]), INF)

    def theta(self, exponent=1) -> "CElem":
        return self.monomial(1, exponent)

    def from_poly(self, a: Poly) -> "CElem":
        """Exact image of a ∈ A (coefficients lifted into the constant field)."""
        if not a:
            return self.zero()
        vals = [self._raw(FFElem(a.field, c)) if a.field.n > 1 else c % self.q for c in reversed(a.c)]
        return CElem(self, 1, -a.degree, self._rows(vals), INF)

    def series(self, e: int, v0: int, coeffs, prec) -> "CElem":
        """sum coeffs[i] θ^(-(v0+i)/e) + O(θ^(-prec/e))."""
        return CElem(self, e, v0, self._rows([self._raw(c) for c in coeffs]), prec)

    def __call__(self, value) -> "CElem":
        if isinstance(value, CElem):
            if value.parent is self:
                return value
            return self.embed(value)
        if isinstance(value, Poly):
            return self.from_poly(value)
        if isinstance(value, (int, FFElem)):
            return self.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to {self}")

    def embed(self, x: "CElem") -> "CElem":
        """Image of x under the constant-field embedding F_{q^m} -> F_{q^m'}."""
        src = x.parent.field
        emb = src.embedding(self.field)
        vals = [emb(src.encode(r)).v for r in x.rows]
        return CElem(self, x.e, x.v0, self._rows(vals), x.prec)

    def random_element(self, rng, val_range=(-3, 6), e: int = 1, length: int | None = None):
        """A random element with given leading valuation range (for tests)."""
        v0 = int(rng.integers(val_range[0] * e, val_range[1] * e + 1))
        length = length or self.prec * e
        vals = [int(v) for v in rng.integers(0, self.field.order, size=length)]
        if vals[0] == 0:
            vals[0] = 1
        return CElem(self, e, v0, self._rows(vals), v0 + length)


def _lcm(a, b):
    return a * b // math.gcd(a, b)


class CElem:
    """Precision-tracked element of C_∞ (see module docstring)."""

    __slots__ = ("parent", "e", "v0", "rows", "prec")

    def __init__(self, parent: CInfty, e: int, v0: int, rows: np.ndarray, prec):
        self.parent = parent
        self.e = e
        self.v0 = v0
        self.rows = rows
        self.prec = prec
        self._normalize()

    # -- normal form --------------------------------------------------------

    def _normalize(self):
        rows = self.rows
        nz = np.flatnonzero(rows.any(axis=1)) if len(rows) else np.array([], dtype=np.int64)
        if len(nz) == 0:
            self.rows = rows[:0]
            self.v0 = self.prec if self.prec != INF else 0
            if self.prec != INF:
                g = math.gcd(self.e, self.prec)
                self.e //= g
                self.prec //= g
                self.v0 = self.prec
            else:
                self.e = 1
            return
        first, last = int(nz[0]), int(nz[-1])
        self.v0 += first
        rows = rows[first:last + 1]
        limit = self.v0 + self.parent.cap * self.e
        if self.prec > limit and (self.prec != INF or len(rows) > limit - self.v0):
            self.prec = limit
        keep = self.prec - self.v0
        if keep < len(rows):
            rows = rows[:max(keep, 0)]
            nz2 = np.flatnonzero(rows.any(axis=1))
            rows = rows[: int(nz2[-1]) + 1] if len(nz2) else rows[:0]
        self.rows = rows
        if not len(rows):
            self._normalize()
            return
        # shrink the ramification index when every exponent allows it
        if self.e > 1:
            g = math.gcd(self.e, self.v0)
            if self.prec != INF:
                g = math.gcd(g, self.prec)
            if g > 1:
                g = math.gcd(g, int(np.gcd.reduce(np.flatnonzero(rows.any(axis=1)))))
            if g > 1:
                self.e //= g
                self.v0 //= g
                self.rows = rows[::g]
                if self.prec != INF:
                    self.prec //= g

    def _new(self, e, v0, rows, prec):
        return CElem(self.parent, e, v0, rows, prec)

    @property
    def field(self) -> FiniteField:
        return self.parent.field

    def is_zero(self) -> bool:
        """True when no nonzero digit is known (zero to precision)."""
        return len(self.rows) == 0

    def is_exact(self) -> bool:
        return self.prec == INF

    def rebase(self, e: int) -> "CElem":
        """Same element with ramification index e (a multiple of self.e)."""
        if e % self.e:
            raise ValueError("can only rebase to a multiple of the ramification index")
        k = e // self.e
        if k == 1:
            return self
        rows = np.zeros(((len(self.rows) - 1) * k + 1 if len(self.rows) else 0, self.field.n), dtype=np.int64)
        rows[::k] = self.rows
        obj = object.__new__(CElem)
        obj.parent, obj.e, obj.v0, obj.rows = self.parent, e, self.v0 * k, rows
        obj.prec = self.prec * k if self.prec != INF else INF
        return obj

    def coefficient(self, exponent) -> FFElem:
        """Coefficient of θ^exponent (exponent rational)."""
        k = -Fraction(exponent) * self.e
        if k.denominator != 1:
            return FFElem(self.field, 0)
        i = int(k) - self.v0
        if k >= self.prec:
            raise ValueError("coefficient beyond known precision")
        if 0 <= i < len(self.rows):
            return FFElem(self.field, self.field.encode(self.rows[i]))
        return FFElem(self.field, 0)

    def digits(self) -> list[int]:
        return [self.field.encode(r) for r in self.rows]

    # -- valuation ----------------------------------------------------------

    def val(self) -> Fraction | float:
        """Valuation v0/e; for zero-to-precision elements the precision floor."""
        if self.is_zero():
            return INF if self.prec == INF else Fraction(self.prec, self.e)
        return Fraction(self.v0, self.e)

    def precision(self) -> Fraction | float:
        return INF if self.prec == INF else Fraction(self.prec, self.e)

    def norm_val(self) -> tuple[Fraction | float, bool]:
        """(valuation, zero_flag): zero-flagged elements report their precision floor."""
        return self.val(), self.is_zero()

    def rel_prec(self):
        if self.prec == INF:
            return INF
        return Fraction(self.prec - self.v0, self.e)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CElem):
            if other.parent is not self.parent:
                raise ValueError("elements from different CInfty parents")
            return other
        if isinstance(other, (int, FFElem, Poly)):
            return self.parent(other)
        return NotImplemented

    @staticmethod
    def _common(x, y):
        e = _lcm(x.e, y.e)
        return x.rebase(e), y.rebase(e), e

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero() and other.prec == INF:
            return self
        if self.is_zero() and self.prec == INF:
            return other
        x, y, e = self._common(self, other)
        prec = min(x.prec, y.prec)
        starts = [z.v0 for z in (x, y) if len(z.rows)]
        if not starts:
            return self._new(e, 0, x.rows[:0], prec)
        start = min(starts)
        end = max(z.v0 + len(z.rows) for z in (x, y) if len(z.rows))
        if prec != INF:
            end = min(end, prec)
        if end <= start:
            return self._new(e, 0, x.rows[:0], prec)
        out = np.zeros((end - start, self.field.n), dtype=np.int64)
        for z in (x, y):
            if len(z.rows):
                lo = z.v0 - start
                n = min(len(z.rows), end - z.v0)
                if n > 0:
                    out[lo:lo + n] += z.rows[:n]
        out %= self.field.p
        return self._new(e, start, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.e, self.v0, (-self.rows) % self.field.p, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FFElem) or isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y, e = self._common(self, other)
        if (x.is_zero() and x.prec == INF) or (y.is_zero() and y.prec == INF):
            return self.parent.zero()
        vx = x.v0 if len(x.rows) else x.prec
        vy = y.v0 if len(y.rows) else y.prec
        prec = min(x.prec + vy, y.prec + vx)
        if x.is_zero() or y.is_zero():
            return self._new(e, 0, x.rows[:0], prec)
        v0 = x.v0 + y.v0
        n = len(x.rows) + len(y.rows) - 1
        limit = self.parent.cap * e
        if prec != INF:
            limit = min(limit, prec - v0)
        limit = max(min(limit, n), 0)
        rows = _convolve(self.field, x.rows[:limit], y.rows[:limit], limit)
        return self._new(e, v0, rows, prec)

    __rmul__ = __mul__

    def scale(self, c) -> "CElem":
        """Multiply by a constant c ∈ F_{q^m}."""
        F = self.field
        c = self.parent._raw(c)
        if c == 0:
            return self.parent.zero()
        if c == 1:
            return self
        mat = F.mul_matrix(c)
        return self._new(self.e, self.v0, (self.rows @ mat.T) % F.p, self.prec)

    def shift(self, k) -> "CElem":
        """Multiply by θ^k (k rational)."""
        k = Fraction(k)
        x = self.rebase(_lcm(self.e, k.denominator))
        s = int(k * x.e)
        return self._new(x.e, x.v0 - s, x.rows, x.prec - s if x.prec != INF else INF)

    def inverse(self) -> "CElem":
        if self.is_zero():
            raise ZeroDivisionError("division by (numerical) zero")
        F = self.field
        e = self.e
        rel = self.prec - self.v0 if self.prec != INF else INF
        if rel == INF and len(self.rows) == 1:
            n = 1
            prec = INF
        else:
            n = int(min(rel, self.parent.cap * e))
            prec = -self.v0 + n
        u = F.encode(self.rows[0])
        uinv = F.inv(u)
        a = (self.rows[:n] @ F.mul_matrix(uinv).T) % F.p
        if len(a) < n:
            a = np.concatenate([a, np.zeros((n - len(a), F.n), dtype=np.int64)])
        b = _series_inverse(F, a, n)
        b = (b @ F.mul_matrix(uinv).T) % F.p
        return self._new(e, -self.v0, b, prec)

    def __truediv__(self, other):
        if isinstance(other, (int, FFElem)):
            return self.scale(self.parent(other).const_value().inverse())
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.parent.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, j: int = 1) -> "CElem":
        """x^(q^j); negative j takes the unique q^|j|-th root."""
        if j == 0:
            return self
        F = self.field
        if j > 0:
            Q = self.parent.q ** j
            mat = F.frob_matrix(j)
            rows = (self.rows @ mat.T) % F.p
            v0 = self.v0 * Q
            prec = self.prec * Q if self.prec != INF else INF
            if not len(rows):
                return self._new(self.e, v0, rows, prec)
            limit = self.parent.cap * self.e
            span = (len(rows) - 1) * Q + 1
            size = min(span, limit)
            if prec != INF:
                size = min(size, prec - v0)
            out = np.zeros((max(size, 0), F.n), dtype=np.int64)
            idx = np.arange(0, size, Q) if size > 0 else np.arange(0)
            out[idx] = rows[: len(idx)]
            if prec == INF and span > limit:
                prec = v0 + limit
            return self._new(self.e, v0, out, prec)
        x = self
        q = self.parent.q
        mat = F.frob_matrix(-1)
        for _ in range(-j):
            offs = np.flatnonzero(x.rows.any(axis=1)) + x.v0 if len(x.rows) else np.array([], dtype=np.int64)
            divisible = all(int(o) % q == 0 for o in offs) and (x.prec == INF or x.prec % q == 0)
            if len(x.rows) == 0:
                prec = x.prec if x.prec == INF else x.prec
                x = x._new(x.e * q, 0, x.rows, prec)
                continue
            if divisible:
                rows = x.rows[::q]
                x = x._new(x.e, x.v0 // q, (rows @ mat.T) % F.p,
                           x.prec // q if x.prec != INF else INF)
            else:
                x = x._new(x.e * q, x.v0, (x.rows @ mat.T) % F.p, x.prec)
        return x

    def const_value(self) -> FFElem:
        """The constant c if this element is exactly c ∈ F_{q^m}."""
        if self.prec != INF or len(self.rows) > 1 or (len(self.rows) and self.v0 != 0):
            raise ValueError("not an exact constant")
        if not len(self.rows):
            return FFElem(self.field, 0)
        return FFElem(self.field, self.field.encode(self.rows[0]))

    # -- comparisons to precision ---------------------------------------------

    def residual(self, other) -> Fraction | float:
        """Valuation of self - other (precision floor when zero to precision)."""
        return (self - other).val()

    def approx_eq(self, other, slack: int | None = None) -> bool:
        diff = self - other
        if diff.is_zero():
            return True
        slack = self.parent.slack if slack is None else slack
        return diff.val() >= diff.precision() - slack

    def is_nonzero(self, margin: int | None = None) -> bool:
        """Numerically nonzero: at least ``margin`` known significant units."""
        if self.is_zero():
            return False
        if self.prec == INF:
            return True
        margin = self.parent.nonzero_margin if margin is None else margin
        return self.rel_prec() >= margin

    # -- output ---------------------------------------------------------------

    def to_json(self):
        """[e, m, v0, [coefficient encodings], prec] with prec "inf" for exact."""
        prec = "inf" if self.prec == INF else int(self.prec)
        return [self.e, self.parent.m, int(self.v0), self.digits(), prec]

    def render(self, terms: int = 8) -> str:
        F = self.field
        parts = []
        for i, r in enumerate(self.rows):
            if len(parts) >= terms:
                parts.append("…")
                break
            if not r.any():
                continue
            c = format_ffelem(F, F.encode(r))
            if "+" in c:
                c = f"({c})"
            ex = Fraction(-(self.v0 + i), self.e)
            mon = "" if ex == 0 else ("θ" if ex == 1 else f"θ^({ex})")
            parts.append(c if not mon else (mon if c == "1" else f"{c}·{mon}"))
        if self.prec != INF:
            parts.append(f"O(θ^({Fraction(-self.prec, self.e)}))")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.render()


def _convolve(F: FiniteField, a: np.ndarray, b: np.ndarray, limit: int) -> np.ndarray:
    """Product of two series with F-coefficients given as vector rows, first `limit` rows."""
    if limit <= 0 or not len(a) or not len(b):
        return np.zeros((0, F.n), dtype=np.int64)
    a = a[:limit]
    b = b[:limit]
    if F.n == 1:
        out = np.convolve(a[:, 0], b[:, 0])[:limit] % F.p
        return out.reshape(-1, 1)
    n = F.n
    out = np.zeros((min(len(a) + len(b) - 1, limit), 2 * n - 1), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            out[:, i + j] += np.convolve(a[:, i], b[:, j])[: len(out)]
    return (out % F.p) @ F.reduction % F.p


def _series_inverse(F: FiniteField, a: np.ndarray, n: int) -> np.ndarray:
    """Inverse of a power series with a[0] = 1, to n terms (Newton iteration)."""
    b = np.zeros((1, F.n), dtype=np.int64)
    b[0, 0] = 1
    k = 1
    two = np.zeros((1, F.n), dtype=np.int64)
    two[0, 0] = 2 % F.p
    while k < n:
        k = min(2 * k, n)
        ab = _convolve(F, a[:k], b, k)
        corr = (-ab) % F.p
        if len(corr) < k:
            corr = np.concatenate([corr, np.zeros((k - len(corr), F.n), dtype=np.int64)])
        corr[0] = (corr[0] + two[0]) % F.p
        b = _convolve(F, b, corr, k)
    return b[:n]
