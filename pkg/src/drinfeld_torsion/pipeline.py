"""Run configuration, verification suites and deterministic JSON reports.

Config files are flat ``key = value`` text (``#`` comments).  A run builds one
Case lazily and executes the selected suites in a fixed order.  Randomness
comes from ``numpy.random.default_rng([seed, suite_index])``, one generator per
suite, so selecting a subset of suites never changes the draws of the others.
"""

from __future__ import annotations

import configparser
import json
import math
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .case import Case, build_case
from .cinfty import DEFAULT_GUARD, DEFAULT_PREC, EQ_SLACK, CInfty
from .drinfeld import (ConvergenceError, StabilizationError, agf_pellarin, carlitz_period, functional_residual,
                       hyperderivative_residual)
from .exactalg import GF, APoly, PadicTrunc, TPoly, is_prime, monic_irreducibles, parse_poly
from .galois import (GaloisMatrix, check_composition, check_galois_on_hyperderivatives, check_galois_on_taylor,
                     check_galois_on_twisted_taylor, check_level_compatibility, check_module_compatibility,
                     check_phi_matrix, check_rho_matches_taylor, check_upsilon, check_well_defined)
from .tate import (padic_taylor, padic_untaylor, rho_multiplicative_exact, twist_hyperderivative_residual,
                   twist_padic_taylor_exact, twist_taylor_residual)
from .torsion import (ModularPoint, QnConsistencyError, check_basis_change, check_weight_scaling, qn,
                      qn_closed_form, qn_eval_check, qn_interpolation, qn_remainder, qn_span_rank,
                      random_congruence_matrix, route_agreement, moore_independence, torsion_checks)

__all__ = [
    "SCHEMA",
    "SUITES",
    "ConfigError",
    "RunConfig",
    "parse_config",
    "load_config",
    "bundled_configs",
    "parse_lattice_literal",
    "run",
    "report_json",
]

SCHEMA = "drinfeld-torsion-report/1"
SUITES = ("qn", "torsion", "agf", "calculus", "galois", "modular")
INF = math.inf


class ConfigError(ValueError):
    """Invalid configuration or usage; reported with its source location."""


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    name: str = "run"
    q: int = 3
    p: str = "theta"
    n: int = 1
    module: str = "carlitz"
    lattice: list = field(default_factory=list)
    prec: int = DEFAULT_PREC
    guard: int = DEFAULT_GUARD
    slack: int = EQ_SLACK
    trunc: int | None = None
    cutoff: int | None = None
    taylor_terms: int = 16
    suites: list = field(default_factory=lambda: list(SUITES))
    seed: int = 0
    galois_samples: int = 20
    twisted_samples: int = 10
    functional_samples: int = 10
    functional_degree: int = 3
    basis_changes: int = 5
    weight_constants: list = field(default_factory=lambda: ["theta+1", "theta^(-1)"])
    qn_fields: list = field(default_factory=lambda: [2, 3])
    qn_max_degree: int = 3
    qn_max_level: int = 3
    source: str = "<string>"

    @property
    def prime(self) -> APoly:
        return parse_poly(self.p, self.q)

    @property
    def T(self) -> int:
        return self.prec + 16 if self.trunc is None else self.trunc

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("source")
        out["p"] = str(self.prime)
        out["trunc"] = self.T
        return out


_INT_KEYS = {"q", "n", "prec", "guard", "slack", "trunc", "cutoff", "taylor_terms", "seed", "galois_samples",
             "twisted_samples", "functional_samples", "functional_degree", "basis_changes", "qn_max_degree",
             "qn_max_level"}
_LIST_KEYS = {"suites": ",", "lattice": ";", "weight_constants": ";", "qn_fields": ","}
_STR_KEYS = {"name", "p", "module"}


def _line_of(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return i
    return 0


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse and validate a flat key=value config; fails fast with file:line."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    cfg = RunConfig(source=source)
    for key, raw in cp["run"].items():
        where = f"{source}:{_line_of(text, key)}"
        raw = raw.strip()
        if key in _INT_KEYS:
            try:
                setattr(cfg, key, int(raw))
            except ValueError:
                raise ConfigError(f"{where}: {key} must be an integer, got {raw!r}") from None
        elif key in _LIST_KEYS:
            items = [s.strip() for s in raw.split(_LIST_KEYS[key]) if s.strip()]
            if key == "qn_fields":
                try:
                    items = [int(s) for s in items]
                except ValueError:
                    raise ConfigError(f"{where}: qn_fields must list integers") from None
            setattr(cfg, key, items)
        elif key in _STR_KEYS:
            setattr(cfg, key, raw)
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    validate(cfg, text)
    return cfg


def validate(cfg: RunConfig, text: str = "") -> None:
    def fail(key, msg):
        raise ConfigError(f"{cfg.source}:{_line_of(text, key)}: {msg}")

    if not is_prime(cfg.q):
        fail("q", f"q = {cfg.q} must be a prime (prime-power constant fields are not supported)")
    try:
        p = cfg.prime
    except ValueError as exc:
        fail("p", str(exc))
    if p.degree < 1 or p.lead != 1:
        fail("p", f"p = {p} must be monic of positive degree")
    if not p.is_irreducible():
        fail("p", f"p = {p} is reducible over F_{cfg.q}")
    if cfg.n < 0:
        fail("n", "n must be nonnegative")
    if cfg.module not in ("carlitz", "lattice"):
        fail("module", f"module must be 'carlitz' or 'lattice', got {cfg.module!r}")
    if cfg.module == "carlitz" and cfg.lattice:
        fail("lattice", "module = carlitz takes no lattice (its lattice is π̃A)")
    if cfg.module == "lattice" and not cfg.lattice:
        fail("lattice", "module = lattice needs a lattice basis")
    for lit in cfg.lattice + cfg.weight_constants:
        try:
            _parse_expr(lit)
        except ConfigError as exc:
            fail("lattice" if lit in cfg.lattice else "weight_constants", str(exc))
    unknown = [s for s in cfg.suites if s not in SUITES]
    if unknown:
        fail("suites", f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    for key in ("prec", "taylor_terms"):
        if getattr(cfg, key) < 1:
            fail(key, f"{key} must be positive")
    if cfg.guard < 0 or cfg.slack < 0:
        fail("guard", "guard and slack must be nonnegative")
    if cfg.T < 8:
        fail("trunc", "trunc must be at least 8")
    if cfg.functional_degree < 0:
        fail("functional_degree", "functional_degree must be nonnegative")
    for f in cfg.qn_fields:
        if not is_prime(f):
            fail("qn_fields", f"qn_fields entry {f} is not prime")


def bundled_configs() -> dict:
    base = resources.files("drinfeld_torsion") / "configs"
    return {Path(str(p.name)).stem: p for p in base.iterdir() if p.name.endswith(".cfg")}


def load_config(source: str) -> RunConfig:
    """Load a config by path, or by bundled name (e.g. ``carlitz-theta``)."""
    path = Path(source)
    if path.is_file():
        return parse_config(path.read_text(), str(path))
    bundled = bundled_configs()
    if source in bundled:
        return parse_config(bundled[source].read_text(), f"{source}.cfg")
    raise ConfigError(f"no config file or bundled config named {source!r} (bundled: {sorted(bundled)})")


# ---------------------------------------------------------------------------
# lattice literals: sums of products of integers, w, theta^(a/b) and pi~

_TOKEN = re.compile(r"\s*(pi~|theta|w|\d+|[-+*/^()])")


def _tokens(text: str):
    pos, out = 0, []
    text = text.replace("π̃", "pi~").replace("θ", "theta").replace("−", "-")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ConfigError(f"cannot parse {text!r} at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _parse_expr(text: str):
    """Parse into a list of (sign, [factor, ...]) terms; factors are tuples."""
    toks = _tokens(text)
    if not toks:
        raise ConfigError(f"empty literal {text!r}")
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def integer():
        tok = take() if peek() is not None else None
        if tok is None or not tok.isdigit():
            raise ConfigError(f"expected an integer in {text!r}")
        return int(tok)

    def exponent():
        if peek() == "(":
            take()
            sign = -1 if peek() == "-" else 1
            if peek() in "+-":
                take()
            num = sign * integer()
            den = 1
            if peek() == "/":
                take()
                den = integer()
            if take() != ")":
                raise ConfigError(f"missing ')' in {text!r}")
            if den == 0:
                raise ConfigError(f"zero denominator in {text!r}")
            return Fraction(num, den)
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        return Fraction(sign * integer())

    def factor():
        tok = take() if peek() is not None else None
        if tok is None:
            raise ConfigError(f"unexpected end of {text!r}")
        if tok.isdigit():
            return ("int", int(tok))
        if tok == "pi~":
            return ("pi", 1)
        if tok in ("theta", "w"):
            e = Fraction(1)
            if peek() == "^":
                take()
                e = exponent()
            if tok == "w" and e.denominator != 1:
                raise ConfigError(f"w needs an integer exponent in {text!r}")
            return (tok, e)
        raise ConfigError(f"unexpected {tok!r} in {text!r}")

    terms = []
    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    while True:
        facs = [factor()]
        while peek() == "*":
            take()
            facs.append(factor())
        terms.append((sign, facs))
        if peek() is None:
            break
        op = take()
        if op not in "+-":
            raise ConfigError(f"unexpected {op!r} in {text!r}")
        sign = -1 if op == "-" else 1
    return terms


def parse_lattice_literal(text: str, C: CInfty):
    """Evaluate a literal such as ``theta^(-1/2)*pi~`` or ``(w+1)``-free sums in C."""
    acc = C.zero()
    pi = None
    for sign, facs in _parse_expr(text):
        val = C.const(sign % C.q)
        for kind, arg in facs:
            if kind == "int":
                val = val.scale(arg % C.q)
            elif kind == "theta":
                val = val.shift(arg)
            elif kind == "w":
                val = val.scale(C.field.gen() ** int(arg))
            else:
                pi = carlitz_period(C) if pi is None else pi
                val = val * pi
        acc = acc + val
    return acc


# ---------------------------------------------------------------------------
# records


def _record(name: str, prop: str, passed: bool, residual=None, **details) -> dict:
    rec = {"name": name, "property": prop, "status": "pass" if passed else "fail"}
    if residual is not None:
        rec["worst_residual"] = residual
    if details:
        rec["details"] = details
    return rec


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def report_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _min(vals):
    return min(vals, default=INF)


# ---------------------------------------------------------------------------
# suites


def suite_qn(cfg: RunConfig, case_fn, rng) -> list:
    """Exact interpolation polynomials: both routes, evaluation, span, closed form."""
    p = cfg.prime
    recs = []
    for m in range(cfg.n + 1):
        try:
            Q = qn(p, m)
            routes = True
        except QnConsistencyError:
            Q, routes = qn_remainder(p, m), False
        recs.append(_record(f"qn-level-{m}", "interpolation-equals-remainder", routes,
                            coefficients=[str(c) for c in Q.coeffs]))
        recs.append(_record(f"qn-eval-level-{m}", "interpolation-values-at-roots", qn_eval_check(Q)))
        rank = qn_span_rank(Q)
        recs.append(_record(f"qn-span-level-{m}", "residues-span-A-mod-p", rank == p.degree, rank=rank))
    closed = qn_closed_form(p)
    recs.append(_record("qn-closed-form", "level-zero-closed-form", tuple(qn(p, 0).coeffs) == closed))
    # sweep over all small primes
    total, bad = 0, []
    for q in cfg.qn_fields:
        for d in range(1, cfg.qn_max_degree + 1):
            for pp in monic_irreducibles(q, d):
                for m in range(cfg.qn_max_level + 1):
                    total += 1
                    a, b = qn_interpolation(pp, m), qn_remainder(pp, m)
                    ok = (a.coeffs == b.coeffs and qn_eval_check(b) and qn_span_rank(b) == d
                          and (m > 0 or tuple(b.coeffs) == qn_closed_form(pp)))
                    if not ok:
                        bad.append(f"q={q} p={pp} n={m}")
    recs.append(_record("qn-sweep", "exact-qn-suite", not bad, cases=total, failures=bad))
    return recs


def suite_torsion(cfg: RunConfig, case_fn, rng) -> list:
    """Route agreement, membership/strictness per level, Moore basis certificate."""
    case: Case = case_fn()
    floor = case.floor
    recs = []
    ta, tb, tc = case.table("a"), case.table("b"), case.table("c")
    for x, y, tx, ty in (("a", "b", ta, tb), ("a", "c", ta, tc), ("b", "c", tb, tc)):
        res = route_agreement(tx, ty)
        recs.append(_record(f"routes-{x}-{y}", "torsion-route-agreement", res >= floor, res))
    checks = torsion_checks(tb, case.phi)
    for m in range(cfg.n + 1):
        lvl = [c for c in checks if c["key"][1] == m]
        res = _min(c["membership_residual"] for c in lvl)
        recs.append(_record(f"membership-level-{m}", "killed-by-p-power", all(c["membership"] for c in lvl), res))
        recs.append(_record(f"strict-level-{m}", "not-killed-by-lower-p-power", all(c["strict"] for c in lvl),
                            None, min_relative_precision=_min(c["strict_relative_precision"] for c in lvl)))
    expected = case.rank * case.d * (cfg.n + 1)
    mi = moore_independence(tb.all_values(), expected)
    recs.append(_record("moore-basis", "torsion-values-form-basis", bool(mi.get("basis")), None,
                        count=mi["count"], expected_count=expected, det_valuation=mi.get("det_valuation"),
                        det_relative_precision=mi.get("det_relative_precision")))
    recs.append(_record("torsion-values", "torsion-table", True, None,
                        values=[{"key": [j, m, l], "value": tb[(j, m, l)].render(6)} for (j, m, l) in tb.keys()]))
    return recs


def _random_poly(rng, q: int, deg: int) -> APoly:
    """Coefficients c_0..c_deg drawn in one call (degree at most deg)."""
    return APoly(GF(q), [int(c) for c in rng.integers(0, q, size=deg + 1)])


def suite_agf(cfg: RunConfig, case_fn, rng) -> list:
    """Functional equations, their hyperderivative form, and the Pellarin route.

    Draw order: functional_samples polynomials of degree <= functional_degree.
    """
    case: Case = case_fn()
    floor = case.floor
    phi = case.phi
    recs = []
    for j, (z, om) in enumerate(zip(case.lattice.basis, case.omegas), 1):
        alt = agf_pellarin(phi, case.E, z, case.T)
        res = om.residual(alt)
        recs.append(_record(f"pellarin-route-{j}", "agf-route-agreement", res >= floor, res))
    theta = APoly(GF(case.q), [0, 1])
    polys = [theta] + [_random_poly(rng, case.q, cfg.functional_degree) for _ in range(cfg.functional_samples)]
    worst_f, worst_h = INF, INF
    for a in polys:
        for om in case.omegas:
            worst_f = min(worst_f, functional_residual(phi, om, a))
            worst_h = min(worst_h, hyperderivative_residual(phi, om, a, cfg.n))
    recs.append(_record("functional-equation", "agf-functional-equation", worst_f >= floor, worst_f,
                        polynomials=[str(a) for a in polys]))
    recs.append(_record("hyperderivative-functional-equation", "agf-hyperderivative-leibniz-form",
                        worst_h >= floor, worst_h, levels=cfg.n + 1))
    return recs


def suite_calculus(cfg: RunConfig, case_fn, rng) -> list:
    """Taylor maps, twists and ρ.

    Draw order: 100 PadicTrunc digit arrays at level 6, then 200 pairs of
    polynomials in t of degree <= 5.
    """
    case: Case = case_fn()
    floor = case.floor
    p = case.p
    F = p.field
    recs = []
    worst = _min(twist_hyperderivative_residual(om, cfg.taylor_terms) for om in case.omegas)
    recs.append(_record("twist-hyperderivative-commute", "twist-commutes-with-hyperderivatives",
                        worst >= floor, worst))
    worst = _min(twist_taylor_residual(om, z, cfg.taylor_terms) for om in case.omegas for z in case.roots)
    recs.append(_record("twist-taylor-at-roots", "twist-of-taylor-expansion", worst >= floor, worst))
    trips, twists = 0, 0
    M = 6
    for _ in range(100):
        digits = rng.integers(0, F.p, size=(M, p.degree))
        a = PadicTrunc(p, M, [APoly(F, [int(c) for c in row]) for row in digits])
        for z in case.roots:
            trips += padic_untaylor(padic_taylor(a, z), p, z) == a
            twists += twist_padic_taylor_exact(a, z)
    n_roots = len(case.roots)
    recs.append(_record("padic-taylor-round-trip", "padic-taylor-isomorphism", trips == 100 * n_roots,
                        None, exact=trips, trials=100 * n_roots))
    recs.append(_record("padic-taylor-conjugates", "twist-of-padic-taylor", twists == 100 * n_roots,
                        None, exact=twists, trials=100 * n_roots))
    good = 0
    for _ in range(200):
        h = TPoly(F, [int(c) for c in rng.integers(0, F.p, size=6)])
        g = TPoly(F, [int(c) for c in rng.integers(0, F.p, size=6)])
        good += rho_multiplicative_exact(h, g, 5)
    recs.append(_record("rho-multiplicative", "rho-is-multiplicative", good == 200, None, exact=good, trials=200))
    return recs


def suite_galois(cfg: RunConfig, case_fn, rng) -> list:
    """Simulated Galois action.

    Draw order: galois_samples matrices, twisted_samples matrices, then for
    each of 3 rounds a pair (A, B) and composition coordinates, a multiplier
    a with its coordinates, and well-definedness perturbations.
    """
    case: Case = case_fn()
    floor = case.floor
    p, r, n = case.p, case.rank, case.n
    M = n + 2
    recs = []
    ident = GaloisMatrix.identity(r, p, M)
    shifted = GaloisMatrix.identity(r, p, M, s=1)
    for tag, A in (("identity", ident), ("conjugate-shift", shifted)):
        worst = _min(check_galois_on_hyperderivatives(case, A, z)["residual"] for z in case.roots)
        recs.append(_record(f"hyperderivatives-{tag}", "galois-on-hyperderivative-values", worst >= floor, worst))
    mats = [GaloisMatrix.random(rng, r, p, M) for _ in range(cfg.galois_samples)]
    w_hd, w_tay, rho_ok = INF, INF, True
    for A in mats:
        for z in case.roots:
            w_hd = min(w_hd, check_galois_on_hyperderivatives(case, A, z)["residual"])
            w_tay = min(w_tay, check_galois_on_taylor(case, A, z)["residual"])
            rho_ok = rho_ok and check_rho_matches_taylor(A, z, n + 1)
    shifts = [A.s for A in mats]
    recs.append(_record("hyperderivatives-random", "galois-on-hyperderivative-values", w_hd >= floor, w_hd,
                        samples=len(mats), shifts=shifts))
    recs.append(_record("taylor-random", "galois-on-taylor-expansions", w_tay >= floor, w_tay, samples=len(mats)))
    recs.append(_record("rho-matches-padic-taylor", "rho-equals-taylor-of-matrix", rho_ok))
    tw = [GaloisMatrix.random(rng, r, p, M) for _ in range(cfg.twisted_samples)]
    w_tw = INF
    for A in [ident] + tw:
        for z in case.roots:
            w_tw = min(w_tw, check_galois_on_twisted_taylor(case, A, z)["residual"])
    recs.append(_record("twisted-taylor-random", "galois-on-twisted-agf-matrix", w_tw >= floor, w_tw,
                        samples=len(tw) + 1))
    w_comp, w_mod, w_wd = INF, INF, INF
    comp_ok = True
    for _ in range(3):
        A = GaloisMatrix.random(rng, r, p, M)
        B = GaloisMatrix.random(rng, r, p, M)
        res = check_composition(case, A, B, rng)
        w_comp = min(w_comp, res["residual"])
        comp_ok = comp_ok and res["pass"]
        a = _random_poly(rng, case.q, 2)
        w_mod = min(w_mod, check_module_compatibility(case, A, a, rng)["residual"])
        w_wd = min(w_wd, check_well_defined(case, A, rng)["residual"])
    recs.append(_record("composition", "action-of-BA-is-A-after-B", comp_ok, w_comp))
    recs.append(_record("module-compatibility", "action-commutes-with-phi", w_mod >= floor, w_mod))
    recs.append(_record("well-defined", "action-independent-of-lift", w_wd >= floor, w_wd))
    w_lvl = _min(check_level_compatibility(case, mats[0] if mats else ident, m)["residual"] for m in range(n))
    recs.append(_record("level-compatibility", "action-compatible-across-levels", w_lvl >= floor, w_lvl))
    pm = check_phi_matrix(case.phi)
    recs.append(_record("phi-matrix", "companion-matrix-round-trip", pm["pass"], pm["relative_residual"],
                        shape=pm["shape"]))
    up = check_upsilon(case)
    recs.append(_record("upsilon-determinant", "upsilon-invertible-on-unit-disc", up["det_nonzero"], None,
                        det_valuations=up["det_valuations"]))
    recs.append(_record("upsilon-columns", "upsilon-twisted-column-relation", up["column_residual"] >= floor,
                        up["column_residual"]))
    return recs


def suite_modular(cfg: RunConfig, case_fn, rng) -> list:
    """Weight -1 scaling and invariance under B ≡ Id mod p^(n+1).

    Draw order: basis_changes congruence matrices (see random_congruence_matrix).
    """
    case: Case = case_fn()
    C = case.C
    floor = case.floor
    recs = []
    try:
        ModularPoint(C, case.lattice.basis)
        recs.append(_record("modular-point", "last-coordinate-is-carlitz-period", True))
    except ValueError as exc:
        recs.append(_record("modular-point", "last-coordinate-is-carlitz-period", False, None, message=str(exc)))
    module = (case.phi, case.E)
    for lit in cfg.weight_constants:
        c = parse_lattice_literal(lit, C)
        res = check_weight_scaling(case.lattice, c, case.p, case.n, module)
        recs.append(_record(f"weight-scaling[{lit}]", "weight-minus-one", res["pass"], res["residual"],
                            module_relative_residual=res["module_relative_residual"], constant_valuation=c.val()))
    worst, mats = INF, []
    for _ in range(cfg.basis_changes):
        B = random_congruence_matrix(rng, case.rank, case.p, case.n)
        mats.append([[str(x) for x in row] for row in B])
        worst = min(worst, check_basis_change(case.lattice, B, case.p, case.n, module)["residual"])
    recs.append(_record("basis-change", "congruence-subgroup-invariance", worst >= floor, worst, matrices=mats))
    return recs


_SUITE_FUNCS = {"qn": suite_qn, "torsion": suite_torsion, "agf": suite_agf, "calculus": suite_calculus,
                "galois": suite_galois, "modular": suite_modular}


def make_case(cfg: RunConfig) -> Case:
    p = cfg.prime
    if cfg.module == "carlitz":
        return build_case(cfg.q, p, cfg.n, module="carlitz", prec=cfg.prec, guard=cfg.guard, slack=cfg.slack,
                          T=cfg.T, name=cfg.name)
    lits = list(cfg.lattice)
    return build_case(cfg.q, p, cfg.n, lattice=lambda C: [parse_lattice_literal(s, C) for s in lits],
                      prec=cfg.prec, guard=cfg.guard, slack=cfg.slack, T=cfg.T, cutoff=cfg.cutoff, name=cfg.name)


def run(cfg: RunConfig, suites=None, seed: int | None = None) -> dict:
    """Execute the selected suites (in canonical order) and assemble the report."""
    seed = cfg.seed if seed is None else seed
    selected = list(cfg.suites if suites is None else suites)
    unknown = [s for s in selected if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    cache = {}

    def case_fn():
        if "case" not in cache:
            cache["case"] = make_case(cfg)
        return cache["case"]

    sections = []
    for idx, name in enumerate(SUITES):
        if name not in selected:
            continue
        rng = np.random.default_rng([seed, idx])
        try:
            recs = _SUITE_FUNCS[name](cfg, case_fn, rng)
        except (ConvergenceError, StabilizationError, ZeroDivisionError, ValueError) as exc:
            recs = [_record(f"{name}-error", "suite-completed", False, None,
                            error=f"{type(exc).__name__}: {exc}")]
        sections.append({"suite": name, "records": recs})
    failed = [f"{s['suite']}/{r['name']}" for s in sections for r in s["records"] if r["status"] != "pass"]
    total = sum(len(s["records"]) for s in sections)
    report = {"schema": SCHEMA, "version": __version__, "config": cfg.echo(), "seed": seed,
              "suites": sections, "summary": {"checks": total, "failed": failed},
              "verdict": "pass" if not failed else "fail"}
    if "case" in cache:
        case = cache["case"]
        report["case"] = {"rank": case.rank, "working_degree": case.C.m, "floor": case.floor,
                          "g": [g.render(4) for g in case.phi.g],
                          "exp_diagnostics": case.exp_diagnostics}
    return report
