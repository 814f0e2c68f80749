"""One configured computation: module, lattice, exponential, AGFs and torsion.

Everything expensive is computed lazily and cached, so verification suites
can share a Case without recomputing AGFs or torsion tables.
"""

from __future__ import annotations

from fractions import Fraction

from .cinfty import DEFAULT_GUARD, DEFAULT_PREC, EQ_SLACK, CInfty
from .drinfeld import (DrinfeldModule, Lattice, agf, carlitz_period, exp_coeffs, module_from_lattice,
                       working_degree)
from .exactalg import APoly, FFElem, prime_roots
from .tate import evaluate, hd_tate
from .torsion import TorsionTable, qn, torsion_coeffs

__all__ = ["Case", "build_case"]


class Case:
    """Lattice-first data for a prime p and top level n."""

    def __init__(self, C: CInfty, p: APoly, n: int, phi: DrinfeldModule, lattice: Lattice, E,
                 T: int, name: str = "case", exp_diagnostics=None):
        self.C = C
        self.p = p
        self.n = n
        self.phi = phi
        self.lattice = lattice
        self.E = E
        self.T = T
        self.name = name
        self.exp_diagnostics = exp_diagnostics or {}
        self.roots = prime_roots(p, C.field)
        self.qns = [qn(p, m) for m in range(n + 1)]
        self._omegas = None
        self._tables: dict = {}
        self._agf_values: dict = {}

    @property
    def q(self):
        return self.C.q

    @property
    def d(self):
        return self.p.degree

    @property
    def rank(self):
        return self.lattice.rank

    @property
    def floor(self):
        """Residual valuation every identity must reach: N - slack."""
        return self.C.prec - self.C.slack

    @property
    def omegas(self):
        if self._omegas is None:
            self._omegas = [agf(self.phi, self.E, z, self.T) for z in self.lattice.basis]
        return self._omegas

    def table(self, route: str = "b") -> TorsionTable:
        if route not in self._tables:
            omegas = self.omegas if route == "a" else None
            self._tables[route] = torsion_coeffs(self.phi, self.lattice, self.E, self.p, self.n,
                                                 route=route, omegas=omegas, qns=self.qns)
        return self._tables[route]

    def agf_values(self, zeta: FFElem, levels: int | None = None):
        """[[ω_j^(m)(ζ) for m in 0..levels-1] for each j], evaluated directly."""
        levels = self.n + 1 if levels is None else levels
        key = (zeta.v, levels)
        if key not in self._agf_values:
            self._agf_values[key] = [[evaluate(hd_tate(om, m), zeta) for m in range(levels)]
                                     for om in self.omegas]
        return self._agf_values[key]


def build_case(q: int, p: APoly, n: int, *, lattice=None, module: str | None = None,
               prec: int = DEFAULT_PREC, guard: int = DEFAULT_GUARD, slack: int = EQ_SLACK,
               T: int | None = None, cutoff: int | None = None, name: str = "case") -> Case:
    """Assemble a Case.

    ``lattice`` is a callable C -> list of basis elements (so constants can live
    in the working field); ``module="carlitz"`` uses the exact Carlitz module
    with lattice π̃A.
    """
    C = CInfty(q, working_degree(q, p.degree), prec=prec, slack=slack, guard=guard)
    T = prec + 16 if T is None else T
    if module == "carlitz" and lattice is None:
        phi = DrinfeldModule.carlitz(C)
        L = Lattice(C, [carlitz_period(C)])
        E = exp_coeffs(phi, 4)
        return Case(C, p, n, phi, L, E, T, name)
    if lattice is None:
        raise ValueError("either a lattice or module='carlitz' is required")
    L = Lattice(C, lattice(C))
    phi, E0 = module_from_lattice(L, cutoff)
    E = exp_coeffs(phi, len(E0.coeffs) - 1)
    return Case(C, p, n, phi, L, E, T, name, exp_diagnostics=E0.diagnostics)


def default_rank2_lattice(C: CInfty):
    """(θ^(-1/2) π̃, π̃): a ramified rank-2 lattice normalised by z_2 = π̃."""
    pi = carlitz_period(C)
    return [pi * C.theta(Fraction(-1, 2)), pi]
