"""Canned models of the moduli spaces M10 and M6 and the end-to-end verification suite.

``m10()`` is the ten-dimensional space over a K3 surface of degree 2 and
``m6()`` the six-dimensional one over an abelian surface of degree 2. Both
ledgers are NS-only: the Donaldson block has rank one, spanned by the class
of ``H``.

Every number that enters a model is listed in :data:`MODEL_CONSTANTS` with a
short description of where it comes from.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from . import ledger, mukai
from .errors import InputError, LedgerError
from .ledger import CartierFact, CurveClass, GammaPrime, ResolutionModel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelConstant:
    """One literature value stored in a canned model."""

    model: str
    path: str
    value: int
    citation: str


_CURVES_10 = "intersection numbers of the exceptional and Brill-Noether type divisors on the resolution of M10"
_BEAUVILLE_10 = "Beauville form of the resolution of M10 on its exceptional block"
_CURVES_6 = "intersection numbers of A and B~ on the resolution of M6"
_BEAUVILLE_6 = "Beauville form of the resolution of M6 on its exceptional block"

MODEL_CONSTANTS: tuple[ModelConstant, ...] = (
    ModelConstant("m10", "curves.delta.Sigma~", -2, _CURVES_10),
    ModelConstant("m10", "curves.delta.B~", 1, _CURVES_10),
    ModelConstant("m10", "curves.gamma.Sigma~", 3, _CURVES_10),
    ModelConstant("m10", "curves.gamma.B~", -2, _CURVES_10),
    ModelConstant("m10", "gram.Sigma~.Sigma~", -6, _BEAUVILLE_10),
    ModelConstant("m10", "gram.Sigma~.B~", 3, _BEAUVILLE_10),
    ModelConstant("m10", "gram.B~.B~", -2, _BEAUVILLE_10),
    ModelConstant("m10", "gram.mu(H).mu(H)", 2, "the Donaldson map is an isometry onto its image; H.H = 2"),
    ModelConstant("m10", "exceptional.Sigma~", 1, "the exceptional divisor of the resolution is Sigma~"),
    ModelConstant("m6", "curves.delta.A", -1, _CURVES_6),
    ModelConstant("m6", "curves.delta.B~", 1, _CURVES_6),
    ModelConstant("m6", "curves.gamma.A", 1, _CURVES_6),
    ModelConstant("m6", "curves.gamma.B~", -2, _CURVES_6),
    ModelConstant("m6", "gram.A.A", -2, _BEAUVILLE_6),
    ModelConstant("m6", "gram.A.B~", 2, _BEAUVILLE_6),
    ModelConstant("m6", "gram.B~.B~", -4, _BEAUVILLE_6),
    ModelConstant("m6", "gram.mu(H).mu(H)", 2, "the Donaldson map is an isometry onto its image; c1(H)^2 = 2"),
    ModelConstant("m6", "exceptional.A", 2, "the exceptional divisor is twice the line bundle A"),
)

FACT_CITATIONS = {
    "m10": "twice the Brill-Noether divisor B is the determinant line bundle of u2(1)",
    "m6": "B + tD is the determinant line bundle of u2(1) for some t in Z/2",
}


def constants_for(name: str) -> tuple[ModelConstant, ...]:
    return tuple(c for c in MODEL_CONSTANTS if c.model == name)


def _build(name: str, basis: tuple[str, ...]) -> ResolutionModel:
    idx = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    gram = [[0] * n for _ in range(n)]
    curves: dict[str, list[int]] = {}
    exc = [0] * n
    for c in constants_for(name):
        kind, *rest = c.path.split(".")
        if kind == "gram":
            i, j = idx[rest[0]], idx[rest[1]]
            gram[i][j] = gram[j][i] = c.value
        elif kind == "curves":
            curves.setdefault(rest[0], [0] * n)[idx[rest[1]]] = c.value
        elif kind == "exceptional":
            exc[idx[rest[0]]] = c.value
    return ResolutionModel(
        name=name,
        mu_rank=1,
        divisor_basis=basis,
        beauville_gram=gram,
        exceptional=tuple(exc),
        curves=(
            CurveClass("delta", tuple(curves["delta"]), True),
            CurveClass("gamma", tuple(curves["gamma"]), False),
        ),
        gamma_prime=GammaPrime("gamma", "delta"),
    )


def m10() -> tuple[mukai.SurfaceModel, ResolutionModel]:
    """K3 of degree 2 and the ledger of the resolution of M10."""
    basis = ("mu(H)", "Sigma~", "B~")
    model = _build("m10", basis)
    n = len(basis)
    model = replace(
        model,
        known_cartier_facts=(CartierFact((("B", 2),), 1, FACT_CITATIONS["m10"]),),
        proper_transforms=(("lambda(u1(H))", ledger._unit(0, n)), ("B", ledger._unit(2, n))),
    )
    return mukai.k3_surface(), model


def m6() -> tuple[mukai.SurfaceModel, ResolutionModel]:
    """Abelian surface of degree 2 and the ledger of the resolution of M6.

    The Cartier fact is recorded as ``B`` alone; the torsion shift ``t·D`` is
    left to :func:`ledger.resolve_fact`.
    """
    basis = ("mu(H)", "A", "B~")
    model = _build("m6", basis)
    n = len(basis)
    model = replace(
        model,
        known_cartier_facts=(CartierFact((("B", 1),), 1, FACT_CITATIONS["m6"]),),
        proper_transforms=(("lambda6(H)", ledger._unit(0, n)), ("B", ledger._unit(2, n)),
                           ("D", ledger._unit(1, n))),
    )
    return mukai.abelian_surface(), model


CANNED: dict[str, Callable[[], tuple[mukai.SurfaceModel, ResolutionModel]]] = {"m10": m10, "m6": m6}


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    citation: str
    expected: str
    computed: str
    verdict: str
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {"name": self.name, "citation": self.citation, "expected": self.expected,
                "computed": self.computed, "verdict": self.verdict}


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checks: tuple[Check, ...]
    summary: tuple[tuple[str, str], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        # Timings are left out so serialized reports are reproducible.
        return {"suite": self.suite, "verdict": self.verdict,
                "checks": [c.as_dict() for c in self.checks],
                "summary": dict(self.summary)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"suite {self.suite}"]
        w = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"  [{mark}] {c.name.ljust(w)}  {c.computed}"
            if not c.passed:
                line += f"  (expected {c.expected})"
            lines.append(line)
            lines.append(f"         {' ' * w}  cite: {c.citation}")
        lines.append(f"verdict: {self.verdict}")
        for k, v in self.summary:
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"


def render(x) -> str:
    """Exact rendering: integers, ``a/b`` fractions, tuples in parentheses."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(render(y) for y in x) + ")"
    return str(x)


def combo(vec: Sequence, labels: Sequence[str]) -> str:
    """``2*B~ + Sigma~`` style rendering of a coordinate vector."""
    terms = []
    for c, lab in zip(vec, labels):
        c = Fraction(c)
        if c == 0:
            continue
        mag = abs(c)
        body = lab if mag == 1 else f"{render(mag)}*{lab}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for s, b in terms[1:]:
        out += f" {s} {b}"
    return out


# -- expectations ----------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Expected values of a suite, keyed by check name, with citations."""

    name: str
    kind: mukai.SurfaceKind
    sheaf_chern: tuple[int, int, int]
    expected: dict[str, tuple[str, str]]


_P10 = {
    "validate": ("valid", "canned ledger is well formed"),
    "mukai vector": ("(2, 0, -2)", "rank 2, c1 = 0, c2 = 4 on the K3 surface"),
    "mukai self-pairing": ("8", "v.v = c.c - 2rs for v = (2, 0, -2)"),
    "hilbert polynomial": ("2n^2", "Riemann-Roch for a sheaf with v = (2, 0, -2)"),
    "reduced hilbert O vs E": ("greater", "p(O_X, n) = n^2 + 2 exceeds p(E, n) = n^2"),
    "descent membership": ("u1(H): true, u2(1): true, (1,0,0): false",
                           "characterization of e-perp inside {1,h,h^2}-double-perp"),
    "u-map": ("u(H,0) = (0, -1, 0), u(0,1) = (1, 0, 1)", "Mukai vectors of u1(L) and u2(n)"),
    "v-perp": ("basis ((1, 0, 1), (0, 1, 0)), gram ((-2, 0), (0, 2))", "v-perp consists of the (r, c, r)"),
    "pullback obstruction": ("m(n) = n/2 for n = 1..4; Cartier iff n even",
                             "projection formula against delta for pi^*(nB)"),
    "curve decomposition l": ("3/2", "pi^*(gamma') = gamma + l delta with E.pi^*(gamma') = 0"),
    "base intersections": ("c1(2B).g' = -1, lambda(u1(H)).g' = 0, lambda(u2(1)).g' = -1",
                           "degrees on gamma' by the projection formula"),
    "u2 degree cross-check": ("-1 = -1", "degree of lambda(u2(1)) on gamma' from the Uhlenbeck fibre"),
    "class group": ("Z^2; free: lambda(u1(H)), B", "A1(M10) is generated freely by lambda(u1(H)) and B"),
    "cartier subgroup": ("mu(H); Sigma~ + 2*B~", "Pic is the delta-orthogonal part of Pic of the resolution"),
    "cartier fact": ("surviving shifts: 0; leading coefficient 2; index 2 for every shift",
                     FACT_CITATIONS["m10"]),
    "factoriality index": ("2", "M10 is 2-factorial"),
    "isometry f": ("isometry; f(1,0,1) = Sigma~ + 2*B~; q = -2", "v-perp is Hodge isometric to H2 of the resolution"),
    "exceptional divisibility": ("p = 2, q = 1; no divisibility", "pullback of lambda(u2(1)) with Sigma~ as coordinate"),
    "torsion": ("none", "A1(M10) is torsion free"),
    "b2": ("24", "second Betti number of the resolution of M10"),
}

_P6 = {
    "validate": ("valid", "canned ledger is well formed"),
    "mukai vector": ("(2, 0, -2)", "rank 2, c1 = 0, c2 = 2 on the abelian surface"),
    "mukai self-pairing": ("8", "v.v = c.c - 2rs for v = (2, 0, -2)"),
    "hilbert polynomial": ("2n^2 - 2", "Riemann-Roch with trivial Todd class"),
    "reduced hilbert O vs E": ("greater", "p(O_J, n) = n^2 exceeds p(E, n) = n^2 - 1"),
    "descent membership": ("u1(H): true, u2(1): true, (1,0,0): false",
                           "ch2 = rank characterization on the abelian surface"),
    "u-map": ("u(H,0) = (0, -1, 0), u(0,1) = (1, 0, 1)", "u2(n) = n[O_J] + n[pt]"),
    "v-perp": ("basis ((1, 0, 1), (0, 1, 0)), gram ((-2, 0), (0, 2))", "v-perp consists of the (r, c, r)"),
    "pullback obstruction": ("D: m = -1/2, not Cartier", "D is a Weil divisor that is not Cartier"),
    "curve decomposition l": ("1", "A.gamma + l A.delta = 0"),
    "base intersections": ("c1(B).g' = -1, lambda6(H).g' = 0, lambda(u2(1)).g' = -1",
                           "degrees on gamma' by the projection formula"),
    "u2 degree cross-check": ("-1 = -1", "degree of lambda6,2(1) on gamma'"),
    "class group": ("Z^2 + Z/2; free: lambda6(H), B; torsion: D (2)", "A1(M6) = lambda6(NS) + Z B + Z/2 D"),
    "cartier subgroup": ("mu(H); A + B~", "Pic is the delta-orthogonal part of Pic of the resolution"),
    "cartier fact": ("surviving shifts: D; leading coefficient 1; index 2 for every shift",
                     FACT_CITATIONS["m6"]),
    "factoriality index": ("2", "M6 is 2-factorial"),
    "isometry f": ("isometry; f(1,0,1) = A + B~; q = -2", "v-perp is isometric to H2 of the resolution of M6"),
    "exceptional divisibility": ("p = 1, q = 1/2; E divisible by 2",
                                 "half-integral coefficient forces Sigma~ = 2A"),
    "torsion": ("D: order 2, not Cartier", "2D = 0 and D is not Cartier"),
    "b2": ("8", "second Betti number of the resolution of M6"),
}

PROFILES: dict[str, Profile] = {
    "m10": Profile("m10", mukai.SurfaceKind.K3, (2, 0, 4), _P10),
    "m6": Profile("m6", mukai.SurfaceKind.ABELIAN, (2, 0, 2), _P6),
}


def profile_for(model: ResolutionModel, override: str | None = None) -> Profile:
    key = override or model.name
    if key not in PROFILES:
        raise InputError(f"no expectation profile for {key!r}; pass one of {sorted(PROFILES)}")
    return PROFILES[key]


# -- checks ----------------------------------------------------------------

def _surface(profile: Profile, full: bool = False) -> mukai.SurfaceModel:
    return mukai.surface_by_name(profile.kind.value, full)


def _mu_label(model: ResolutionModel) -> str:
    return next((k for k, v in model.proper_transforms if v in model.mu_vectors), "mu")


def _c_validate(model, profile):
    rep = ledger.validate(model)
    if rep.ok:
        return "valid"
    return "; ".join(f"{v.invariant}: {v.detail} [{v.citation}]" for v in rep.violations)


def _c_mukai_vector(model, profile):
    s = _surface(profile)
    r, c1, c2 = profile.sheaf_chern
    return str(mukai.mukai_vector_of(s, r, (c1,), c2))


def _c_self_pairing(model, profile):
    s = _surface(profile)
    r, c1, c2 = profile.sheaf_chern
    v = mukai.mukai_vector_of(s, r, (c1,), c2)
    return str(mukai.mukai_pairing(v, v))


def _c_hilbert(model, profile):
    s = _surface(profile)
    return str(mukai.hilbert_polynomial(s, mukai.sheaf_class(s)))


def _c_reduced(model, profile):
    s = _surface(profile)
    return mukai.compare_reduced_hp(s, mukai.structure_sheaf(s), mukai.sheaf_class(s))


def _c_descent(model, profile):
    s = _surface(profile)
    a = mukai.perp_double_perp_member(s, mukai.u1(s, (1,)))
    b = mukai.perp_double_perp_member(s, mukai.u2(s, 1))
    c = mukai.perp_double_perp_member(s, mukai.MukaiVector(s, 1, (0,), 0))
    return f"u1(H): {render(a)}, u2(1): {render(b)}, (1,0,0): {render(c)}"


def _c_umap(model, profile):
    s = _surface(profile)
    return f"u(H,0) = {mukai.u_map(s, (1,), 0)}, u(0,1) = {mukai.u_map(s, (0,), 1)}"


def _c_vperp(model, profile):
    s = _surface(profile)
    vp = mukai.v_perp(s, mukai.sheaf_class(s))
    return f"basis {render(vp.basis)}, gram {render(vp.gram.entries)}"


def _c_pullback(model, profile):
    if profile.name == "m6":
        pb = ledger.pullback_coefficient(model, "D", 1)
        return f"D: m = {render(pb.m)}, {'Cartier' if pb.cartier else 'not Cartier'}"
    ms, cart = [], []
    for n in range(1, 5):
        pb = ledger.pullback_coefficient(model, "B", n)
        ms.append(pb.m)
        if pb.cartier:
            cart.append(n)
    if all(m == Fraction(n, 2) for n, m in zip(range(1, 5), ms)) and cart == [2, 4]:
        return "m(n) = n/2 for n = 1..4; Cartier iff n even"
    return f"m = {render(tuple(ms))}; Cartier for n in {cart}"


def _c_l(model, profile):
    return render(ledger.curve_pullback_decomposition(model))


def _c_base(model, profile):
    mu = _mu_label(model)
    fact = model.known_cartier_facts[0]
    res = ledger.resolve_fact(model, fact)
    lead = fact.expression[0][0]
    b = ledger.base_intersection(model, {lead: 1}, int(res.leading) if res.leading else 1)
    mu_deg = ledger.base_intersection(model, {mu: 1}, 1)
    fact_deg = _fact_degree(model, fact, res)
    nb = f"{render(res.leading)}{lead}" if res.leading not in (None, 1) else lead
    return f"c1({nb}).g' = {render(b)}, {mu}.g' = {render(mu_deg)}, lambda(u2(1)).g' = {render(fact_deg)}"


def _fact_degree(model, fact, res) -> Fraction:
    return ledger.lift_intersection(model, ledger.surviving_lift(model, fact)) / fact.free_part


def _c_u2_cross(model, profile):
    res = ledger.resolve_fact(model, model.known_cartier_facts[0])
    ledger_side = _fact_degree(model, model.known_cartier_facts[0], res)
    mukai_side = mukai.LAMBDA_U2_ON_GAMMA.value(1)
    return f"{render(ledger_side)} = {render(mukai_side)}" if ledger_side == mukai_side else \
        f"{render(ledger_side)} != {render(mukai_side)}"


def _c_group(model, profile):
    g = ledger.weil_class_group(model)
    out = g.structure()
    free = [f.label for f in g.decomposition if f.order == 0]
    if free:
        out += "; free: " + ", ".join(free)
    if g.torsion_generators:
        out += "; torsion: " + ", ".join(f"{f.label} ({f.order})" for f in g.torsion_generators)
    return out


def _c_cartier(model, profile):
    return "; ".join(combo(v, model.divisor_basis) for v in ledger.cartier_subgroup(model))


def _c_fact(model, profile):
    res = ledger.resolve_fact(model, model.known_cartier_facts[0])
    labels = ", ".join(res.surviving_labels(model)) or "none"
    idx = {i for _, i in res.index_by_shift}
    idx_s = f"index {idx.pop()} for every shift" if len(idx) == 1 else \
        "index " + ", ".join(f"{render(t)}: {i}" for t, i in res.index_by_shift)
    lead = render(res.leading) if res.leading is not None else "undetermined"
    return f"surviving shifts: {labels}; leading coefficient {lead}; {idx_s}"


def _c_index(model, profile):
    return str(ledger.factoriality_index(model))


def _c_isometry(model, profile):
    rep = ledger.verify_isometry_f(model, _surface(profile))
    f101 = combo(rep.images[next(i for i, w in enumerate(rep.source_basis) if w[0] == 1)], model.divisor_basis)
    if rep.ok:
        return f"isometry; f(1,0,1) = {f101}; q = {rep.self_pairing}"
    ck = rep.check
    return (f"not an isometry at {ck.witness}: source {ck.source_value}, image {ck.target_value}; "
            f"f(1,0,1) = {f101}; q = {rep.self_pairing}")


def _c_divisibility(model, profile):
    d = ledger.exceptional_divisibility(model)
    flag = f"E divisible by {d.divisor}" if d.flagged else "no divisibility"
    return f"p = {render(d.p)}, q = {render(d.q)}; {flag}"


def _c_torsion(model, profile):
    rep = ledger.torsion_report(model)
    if not rep:
        return "none"
    return "; ".join(f"{t.label}: order {t.order}, {'Cartier' if t.cartier else 'not Cartier'}" for t in rep)


def _c_b2(model, profile):
    rep = ledger.validate(model, _surface(profile, full=True))
    return str(rep.b2)


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("validate", _c_validate),
    ("mukai vector", _c_mukai_vector),
    ("mukai self-pairing", _c_self_pairing),
    ("hilbert polynomial", _c_hilbert),
    ("reduced hilbert O vs E", _c_reduced),
    ("descent membership", _c_descent),
    ("u-map", _c_umap),
    ("v-perp", _c_vperp),
    ("pullback obstruction", _c_pullback),
    ("curve decomposition l", _c_l),
    ("base intersections", _c_base),
    ("u2 degree cross-check", _c_u2_cross),
    ("class group", _c_group),
    ("cartier subgroup", _c_cartier),
    ("cartier fact", _c_fact),
    ("factoriality index", _c_index),
    ("isometry f", _c_isometry),
    ("exceptional divisibility", _c_divisibility),
    ("torsion", _c_torsion),
    ("b2", _c_b2),
)


def _run_one(name: str, fn: Callable, model: ResolutionModel, profile: Profile) -> Check:
    expected, citation = profile.expected[name]
    t0 = time.perf_counter()
    try:
        computed = fn(model, profile)
    except LedgerError as exc:
        computed = f"error: {type(exc).__name__}: {exc}"
    except Exception as exc:  # collect-all: one broken check must not stop the suite
        log.exception("check %s crashed", name)
        computed = f"error: {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - t0
    verdict = "pass" if computed == expected else "fail"
    log.debug("%s: %s (%.4fs)", name, verdict, elapsed)
    return Check(name, citation, expected, computed, verdict, elapsed)


def verify_model(model: ResolutionModel, profile: Profile | str | None = None,
                 workers: int = 1) -> VerificationReport:
    """Run every check against ``model`` and collect the results in order."""
    prof = profile if isinstance(profile, Profile) else profile_for(model, profile)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(lambda nc: _run_one(nc[0], nc[1], model, prof), CHECKS))
    else:
        checks = [_run_one(n, f, model, prof) for n, f in CHECKS]
    idx = next(c for c in checks if c.name == "factoriality index")
    summary = (("factoriality index", idx.computed),)
    return VerificationReport(model.name, tuple(checks), summary)


def run_suite(which: str = "all", workers: int = 1) -> list[VerificationReport]:
    """Suites for ``"m10"``, ``"m6"`` or ``"all"`` (both, in that order)."""
    if which == "all":
        names = ["m10", "m6"]
    elif which in CANNED:
        names = [which]
    else:
        raise InputError(f"unknown suite {which!r}")
    return [verify_model(CANNED[n]()[1], n, workers) for n in names]
