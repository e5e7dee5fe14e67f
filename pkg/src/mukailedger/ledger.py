"""Divisor-class ledger of a singular moduli space M with a symplectic resolution.

A :class:`ResolutionModel` records ``Pic(M̃)`` in a fixed basis together with
its Beauville form, the intersection numbers of a few curve classes and the
exceptional class ``E``. From those numbers alone the ledger recovers:

* pullback coefficients ``π*(D) = D̃ + m·E`` by the projection formula,
* the Cartier subgroup, modelled as the saturated sublattice orthogonal to
  every curve contracted by ``π``,
* the Weil class group ``A¹(M) = Pic(M̃)/⟨E⟩`` and its torsion,
* the factoriality index (exponent of ``A¹(M)/Pic(M)``),
* the isometry from ``v⊥`` onto ``H²(M̃)``.

Divisors on ``M`` are named by *base labels* (``"B"``, ``"D"``, ...); each
base label has a registered proper transform in ``Pic(M̃)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import mukai
from .abgroup import FgAbelianGroup, from_presentation, quotient_by
from .errors import ComputationFault, InputError, ModelError
from .exactalg import ExactMatrix, as_matrix, det, kernel_basis, solve_integral, solve_rational
from .lattice import IntegralLattice, LatticeMap, is_isometry, IsometryCheck

Vector = tuple[int, ...]
QVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class CurveClass:
    name: str
    pairings: Vector
    contracted: bool = False


@dataclass(frozen=True)
class GammaPrime:
    """``π*(γ') = resolved_curve + l·against`` with ``l`` to be solved."""

    resolved_curve: str
    against: str


@dataclass(frozen=True)
class CartierFact:
    """``expression`` (base labels) equals ``λ(u₂(free_part))`` and is Cartier.

    On spaces whose class group has torsion the fact is only known up to a
    torsion class; the ledger finds which torsion shifts are compatible.
    """

    expression: tuple[tuple[str, int], ...]
    free_part: int
    citation: str = ""

    def as_dict(self) -> dict[str, int]:
        return dict(self.expression)


@dataclass(frozen=True)
class ResolutionModel:
    name: str
    mu_rank: int
    divisor_basis: tuple[str, ...]
    beauville_gram: ExactMatrix
    exceptional: Vector
    curves: tuple[CurveClass, ...]
    gamma_prime: GammaPrime | None = None
    known_cartier_facts: tuple[CartierFact, ...] = ()
    proper_transforms: tuple[tuple[str, Vector], ...] = ()
    mu_vectors: tuple[Vector, ...] = field(default=())

    def __post_init__(self):
        n = len(self.divisor_basis)
        object.__setattr__(self, "divisor_basis", tuple(self.divisor_basis))
        object.__setattr__(self, "beauville_gram", as_matrix(self.beauville_gram))
        object.__setattr__(self, "exceptional", tuple(int(x) for x in self.exceptional))
        if not self.mu_vectors:
            units = tuple(_unit(i, n) for i in range(min(self.mu_rank, n)))
            object.__setattr__(self, "mu_vectors", units)

    @property
    def rank(self) -> int:
        return len(self.divisor_basis)

    @property
    def extra_rank(self) -> int:
        return self.rank - self.mu_rank

    @property
    def lattice(self) -> IntegralLattice:
        return IntegralLattice(self.beauville_gram, self.divisor_basis)

    @property
    def has_exceptional(self) -> bool:
        return bool(self.exceptional)

    def curve(self, name: str) -> CurveClass:
        for c in self.curves:
            if c.name == name:
                return c
        raise ModelError(f"model {self.name!r} has no curve named {name!r}")

    @property
    def contracted(self) -> tuple[CurveClass, ...]:
        return tuple(c for c in self.curves if c.contracted)

    def transform(self, label: str) -> Vector:
        for k, v in self.proper_transforms:
            if k == label:
                return v
        raise InputError(f"no proper transform registered for {label!r}")

    def lift(self, expression: Mapping[str, int]) -> Vector:
        """Sum of proper transforms of a base-label expression."""
        out = [0] * self.rank
        for label, k in expression.items():
            for i, x in enumerate(self.transform(label)):
                out[i] += int(k) * x
        return tuple(out)

    def base_labels(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.proper_transforms)


def _unit(i: int, n: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def transform_basis(model: ResolutionModel, p) -> ResolutionModel:
    """Rewrite the model in the basis given by the rows of a unimodular matrix ``p``.

    New basis vector ``i`` is ``sum_j p[i][j] * old_j``; Gram and curve
    pairings transform covariantly, class coordinates contravariantly.
    """
    p = as_matrix(p)
    n = model.rank
    if p.shape != (n, n) or abs(det(p)) != 1:
        raise InputError("basis change must be a unimodular square matrix")
    from .abgroup import _unimodular_inverse

    pinv = _unimodular_inverse(p)

    def coords(v: Vector) -> Vector:
        return tuple(_dot(v, pinv.col(j)) for j in range(n))

    gram = p @ model.beauville_gram @ p.transpose()
    curves = tuple(CurveClass(c.name, p @ c.pairings, c.contracted) for c in model.curves)
    return ResolutionModel(
        name=model.name,
        mu_rank=model.mu_rank,
        divisor_basis=tuple(f"b{i}" for i in range(n)),
        beauville_gram=gram,
        exceptional=coords(model.exceptional) if model.exceptional else (),
        curves=curves,
        gamma_prime=model.gamma_prime,
        known_cartier_facts=model.known_cartier_facts,
        proper_transforms=tuple((k, coords(v)) for k, v in model.proper_transforms),
        mu_vectors=tuple(coords(v) for v in model.mu_vectors),
    )


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    invariant: str
    detail: str
    citation: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    b2: int | None

    @property
    def ok(self) -> bool:
        return not self.violations


_CITE_SYMMETRIC = "Beauville form is a symmetric bilinear form"
_CITE_BLOCK = "Donaldson classes are Beauville-orthogonal to the exceptional classes"
_CITE_EXCEPTIONAL = "the exceptional divisor of a resolution of a singular space is nonzero"
_CITE_CURVES_MU = "Donaldson classes pull back from the base and so pair trivially with contracted and fibre curves"
_CITE_SHAPE = "every class is a vector over the divisor basis"


def validate(model: ResolutionModel, surface: mukai.SurfaceModel | None = None) -> ValidationReport:
    """Check structural invariants; optionally compute ``b₂`` against a surface."""
    out: list[Violation] = []
    n = model.rank
    g = model.beauville_gram

    def bad(inv, detail, cite):
        out.append(Violation(inv, detail, cite))

    if len(set(model.divisor_basis)) != n:
        bad("basis-labels", "divisor basis labels are not distinct", _CITE_SHAPE)
    if not 0 <= model.mu_rank <= n:
        bad("mu-rank", f"mu_rank {model.mu_rank} outside 0..{n}", _CITE_SHAPE)
    if g.shape != (n, n):
        bad("gram-shape", f"Gram is {g.rows}x{g.cols} for {n} basis classes", _CITE_SHAPE)
        return ValidationReport(tuple(out), None)
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] != g[j, i]:
                bad("gram-symmetric", f"q({model.divisor_basis[i]},{model.divisor_basis[j]}) = {g[i, j]} "
                    f"but q({model.divisor_basis[j]},{model.divisor_basis[i]}) = {g[j, i]}", _CITE_SYMMETRIC)
    if model.exceptional:
        if len(model.exceptional) != n:
            bad("exceptional-shape", f"exceptional has {len(model.exceptional)} entries", _CITE_SHAPE)
        elif not any(model.exceptional):
            bad("exceptional-nonzero", "exceptional vector is zero", _CITE_EXCEPTIONAL)
    for c in model.curves:
        if len(c.pairings) != n:
            bad("curve-shape", f"curve {c.name} has {len(c.pairings)} pairings", _CITE_SHAPE)
    names = [c.name for c in model.curves]
    if len(set(names)) != len(names):
        bad("curve-names", "curve names are not distinct", _CITE_SHAPE)
    for k, v in model.proper_transforms:
        if len(v) != n:
            bad("transform-shape", f"proper transform of {k} has {len(v)} entries", _CITE_SHAPE)
    if out:
        return ValidationReport(tuple(out), None)

    lat = model.lattice
    mus = model.mu_vectors
    units = all(v == _unit(i, n) for i, v in enumerate(mus))
    extra = range(model.mu_rank, n) if units else ()
    for i, m in enumerate(mus):
        for j in extra:
            if lat.pair(m, _unit(j, n)):
                bad("gram-block", f"q({model.divisor_basis[i]},{model.divisor_basis[j]}) = {lat.pair(m, _unit(j, n))}",
                    _CITE_BLOCK)
        if model.exceptional and lat.pair(m, model.exceptional):
            bad("gram-block", f"mu class {i} pairs to {lat.pair(m, model.exceptional)} with E", _CITE_BLOCK)
        for c in model.curves:
            if _dot(m, c.pairings):
                bad("curve-mu", f"curve {c.name} meets mu class {i} in {_dot(m, c.pairings)}", _CITE_CURVES_MU)
    if model.gamma_prime is not None:
        for nm in (model.gamma_prime.resolved_curve, model.gamma_prime.against):
            if nm not in names:
                bad("gamma-prime", f"gamma_prime refers to unknown curve {nm!r}", _CITE_SHAPE)
    for f in model.known_cartier_facts:
        for lab in f.as_dict():
            if lab not in model.base_labels():
                bad("fact-labels", f"fact mentions {lab!r} with no proper transform", _CITE_SHAPE)

    b2 = None
    if surface is not None:
        base = surface.full_h2.rank if surface.full_h2 is not None else surface.kind.b2
        b2 = base + model.extra_rank
    return ValidationReport(tuple(out), b2)


# -- pullbacks and the curve γ' --------------------------------------------

@dataclass(frozen=True)
class Pullback:
    """``π*(X) = lift + m·E``; ``cartier`` iff ``m`` is an integer."""

    m: Fraction
    vector: QVector
    cartier: bool


def _require_exceptional(model: ResolutionModel) -> Vector:
    if not model.exceptional:
        raise ModelError(f"model {model.name!r} has no exceptional divisor")
    return model.exceptional


def pullback(model: ResolutionModel, expression: Mapping[str, int]) -> Pullback:
    """Solve ``(lift + m·E)·c = 0`` for every contracted curve ``c``."""
    return _pullback_vector(model, model.lift(expression))


def _pullback_vector(model: ResolutionModel, lift: Sequence[int]) -> Pullback:
    lift = tuple(int(x) for x in lift)
    curves = model.contracted
    if not curves:
        return Pullback(Fraction(0), tuple(Fraction(x) for x in lift), True)
    e = _require_exceptional(model)
    col = [[_dot(e, c.pairings)] for c in curves]
    rhs = [-_dot(lift, c.pairings) for c in curves]
    if not any(r[0] for r in col):
        raise ModelError("exceptional class meets no contracted curve; pullback undetermined")
    sol = solve_rational(ExactMatrix(col, cols=1), rhs)
    if sol is None:
        raise ModelError(f"no pullback coefficient satisfies all contracted curves for {lift}")
    m = sol.x[0]
    vec = tuple(Fraction(a) + m * b for a, b in zip(lift, e))
    return Pullback(m, vec, m.denominator == 1)


def pullback_coefficient(model: ResolutionModel, label: str, n: int) -> Pullback:
    """``π*(nD) = n·D̃ + m·E``."""
    return pullback(model, {label: n})


def curve_pullback_decomposition(model: ResolutionModel) -> Fraction:
    """``l`` with ``π*(γ') = γ + l·δ``, from ``E·π*(γ') = 0``."""
    gp = model.gamma_prime
    if gp is None:
        raise ModelError(f"model {model.name!r} has no gamma_prime relation")
    e = _require_exceptional(model)
    gamma, delta = model.curve(gp.resolved_curve), model.curve(gp.against)
    e_delta = _dot(e, delta.pairings)
    if e_delta == 0:
        raise ModelError("exceptional class does not meet the correcting curve; l undetermined")
    return Fraction(-_dot(e, gamma.pairings), e_delta)


def base_intersection(model: ResolutionModel, expression: Mapping[str, int], n: int = 1) -> Fraction:
    """``(n·X)·γ'`` via the projection formula, evaluated two ways."""
    return n * lift_intersection(model, model.lift(expression))


def lift_intersection(model: ResolutionModel, lift: Sequence[int]) -> Fraction:
    """``X·γ'`` for the Weil class of ``lift``, as ``X̃·γ + l·X̃·δ`` and as ``π*X·γ``."""
    l = curve_pullback_decomposition(model)
    gp = model.gamma_prime
    gamma, delta = model.curve(gp.resolved_curve), model.curve(gp.against)
    via_curve = _dot(lift, gamma.pairings) + l * _dot(lift, delta.pairings)
    if delta.contracted:
        via_divisor = _dot(_pullback_vector(model, lift).vector, gamma.pairings)
        if via_divisor != via_curve:
            raise ComputationFault(f"projection formula paths disagree: {via_curve} != {via_divisor}")
    return via_curve


# -- groups ----------------------------------------------------------------

def cartier_subgroup(model: ResolutionModel) -> list[Vector]:
    """Saturated basis of the classes orthogonal to every contracted curve."""
    curves = model.contracted
    n = model.rank
    if not curves:
        return [_unit(i, n) for i in range(n)]
    return kernel_basis(ExactMatrix([c.pairings for c in curves], cols=n))


def generator_names(model: ResolutionModel) -> tuple[str, ...]:
    """Basis labels with proper transforms renamed to their base labels."""
    names = list(model.divisor_basis)
    for label, vec in model.proper_transforms:
        nz = [i for i, x in enumerate(vec) if x]
        if len(nz) == 1 and vec[nz[0]] == 1:
            names[nz[0]] = label
    return tuple(names)


def weil_class_group(model: ResolutionModel) -> FgAbelianGroup:
    """``A¹(M) = Pic(M̃)/⟨E⟩``."""
    rel = [model.exceptional] if model.exceptional else []
    return from_presentation(generator_names(model), ExactMatrix(rel, cols=model.rank))


def cartier_quotient(model: ResolutionModel, cartier: Sequence[Vector] | None = None) -> FgAbelianGroup:
    """``A¹(M)/Pic(M)``."""
    gens = cartier_subgroup(model) if cartier is None else cartier
    return quotient_by(weil_class_group(model), gens)


def factoriality_index(model: ResolutionModel, cartier: Sequence[Vector] | None = None) -> int:
    """Exponent of ``A¹(M)/Pic(M)``, the least ``n`` making every Weil divisor ``n``-Cartier."""
    e = cartier_quotient(model, cartier).exponent()
    if not isinstance(e, int):
        raise ModelError(f"model {model.name!r} is not n-factorial for any n")
    return e


def is_cartier_class(model: ResolutionModel, x: Sequence[int]) -> bool:
    """Whether the Weil class of ``x`` (a vector over the basis) is Cartier."""
    span = list(cartier_subgroup(model))
    if model.exceptional:
        span.append(model.exceptional)
    return solve_integral(span, x) is not None


# -- facts and their torsion ambiguity -------------------------------------

@dataclass(frozen=True)
class FactResolution:
    """Torsion shifts ``τ`` for which ``fact + τ`` is Cartier, with the index for each shift."""

    fact: CartierFact
    surviving: tuple[Vector, ...]
    index_by_shift: tuple[tuple[Vector, int], ...]
    leading: Fraction | None

    def surviving_labels(self, model: ResolutionModel) -> tuple[str, ...]:
        g = weil_class_group(model)
        return tuple(g._label(t) if any(t) else "0" for t in self.surviving)


def resolve_fact(model: ResolutionModel, fact: CartierFact) -> FactResolution:
    """Test ``fact + τ`` for every torsion class ``τ`` of ``A¹(M)``.

    ``index_by_shift`` gives, for every ``τ``, the exponent of ``A¹(M)`` modulo
    the Donaldson classes and ``fact + τ``; ``leading`` is the coefficient of
    the fact's first label forced by ``(n·X)·γ' = λ(u₂(free_part))·γ'``.
    """
    g = weil_class_group(model)
    lift = model.lift(fact.as_dict())
    surviving, indices = [], []
    for tau in g.torsion_elements():
        x = tuple(a + b for a, b in zip(lift, tau))
        if is_cartier_class(model, x):
            surviving.append(tau)
        q = quotient_by(g, list(model.mu_vectors) + [x]).exponent()
        indices.append((tau, q if isinstance(q, int) else 0))
    leading = None
    if model.gamma_prime is not None and fact.expression:
        label, _ = fact.expression[0]
        unit = base_intersection(model, {label: 1})
        if unit != 0:
            target = mukai.LAMBDA_U2_ON_GAMMA.value(fact.free_part)
            leading = Fraction(target) / unit
    return FactResolution(fact, tuple(surviving), tuple(indices), leading)


def surviving_lift(model: ResolutionModel, fact: CartierFact) -> Vector:
    """Lift of ``fact + τ`` for the first torsion shift that makes it Cartier."""
    res = resolve_fact(model, fact)
    if not res.surviving:
        raise ModelError(f"fact {fact.as_dict()} is not Cartier for any torsion shift")
    return tuple(a + b for a, b in zip(model.lift(fact.as_dict()), res.surviving[0]))


def fact_pullback(model: ResolutionModel, fact: CartierFact) -> QVector:
    """``π*λ(u₂(1))`` in the basis, derived from a surviving torsion shift of the fact."""
    if fact.free_part == 0:
        raise ModelError("fact has zero free part")
    vec = _pullback_vector(model, surviving_lift(model, fact)).vector
    return tuple(v / fact.free_part for v in vec)


# -- the isometry f ---------------------------------------------------------

@dataclass(frozen=True)
class IsometryReport:
    check: IsometryCheck
    images: tuple[Vector, ...]
    source_basis: tuple[Vector, ...]
    self_pairing: int

    @property
    def ok(self) -> bool:
        return self.check.ok


def build_f(model: ResolutionModel, surface: mukai.SurfaceModel) -> LatticeMap:
    """``f(r, c, r) = μ̃(c) + r·π*λ(u₂(1))`` on ``v⊥`` for ``v = (2, 0, -2)``."""
    if not model.known_cartier_facts:
        raise ModelError("isometry needs a Cartier fact for lambda(u2(1))")
    vp = mukai.v_perp(surface, mukai.sheaf_class(surface))
    if not vp.rcr:
        raise ModelError("v-perp is not of the form (r, c, r)")
    if surface.h2.rank != model.mu_rank:
        raise ModelError(f"surface H2 rank {surface.h2.rank} != mu_rank {model.mu_rank}")
    unit = fact_pullback(model, model.known_cartier_facts[0])
    if any(x.denominator != 1 for x in unit):
        raise ModelError(f"pullback of lambda(u2(1)) is not integral: {unit}")
    unit_z = tuple(int(x) for x in unit)
    images = []
    for w in vp.basis:
        c, r = vp.to_h2_plus_z(w)
        img = [r * x for x in unit_z]
        for k, ck in enumerate(c):
            for i, x in enumerate(model.mu_vectors[k]):
                img[i] += ck * x
        images.append(tuple(img))
    return LatticeMap.from_images(vp.sublattice.as_lattice(), model.lattice, images)


def verify_isometry_f(model: ResolutionModel, surface: mukai.SurfaceModel) -> IsometryReport:
    f = build_f(model, surface)
    vp = mukai.v_perp(surface, mukai.sheaf_class(surface))
    idx = next(i for i, w in enumerate(vp.basis) if vp.to_h2_plus_z(w)[1] == 1 and not any(w[1:-1]))
    img = f.image(idx)
    return IsometryReport(
        is_isometry(f), tuple(f.image(i) for i in range(f.source.rank)), vp.basis,
        model.lattice.norm(img),
    )


# -- divisibility of the exceptional class ---------------------------------

@dataclass(frozen=True)
class Divisibility:
    """Coefficients of a Cartier pullback with ``E`` itself as a basis direction."""

    coefficients: tuple[tuple[str, Fraction], ...]
    p: Fraction
    q: Fraction
    divisor: int

    @property
    def flagged(self) -> bool:
        return self.divisor > 1


def exceptional_divisibility(model: ResolutionModel, gamma_degree: int | None = None,
                             along_exceptional: bool = True) -> Divisibility:
    """Solve for ``π*λ(u₂(1)) = μ̃(β) + Σ p_j·X_j + q·E`` using the contracted and resolved curves.

    The exceptional class replaces the basis direction supporting it. The
    right-hand sides are ``0`` on contracted curves and ``λ(u₂(1))·γ'`` on the
    resolved curve. A non-integral ``q`` for an integral class means ``E``
    is divisible by ``denominator(q)`` in ``H²(M̃, Z)``. With
    ``along_exceptional=False`` the original basis direction is kept instead.
    """
    e = _require_exceptional(model)
    gp = model.gamma_prime
    if gp is None:
        raise ModelError("divisibility needs the resolved curve from gamma_prime")
    support = [i for i, x in enumerate(e) if x]
    if len(support) != 1:
        raise ModelError("exceptional class must lie along one basis direction")
    k = support[0]
    if gamma_degree is None:
        gamma_degree = mukai.LAMBDA_U2_ON_GAMMA.value(1)
    extras = [i for i in range(model.rank) if not any(v[i] for v in model.mu_vectors)]
    use_e = along_exceptional
    cols = [e if (i == k and use_e) else _unit(i, model.rank) for i in extras]
    curves = list(model.contracted) + [model.curve(gp.resolved_curve)]
    targets = [0] * len(model.contracted) + [gamma_degree]
    m = ExactMatrix([[_dot(col, c.pairings) for col in cols] for c in curves], cols=len(cols))
    sol = solve_rational(m, targets)
    if sol is None or sol.nullity:
        raise ModelError("divisibility system has no unique solution")
    key = "E" if use_e else model.divisor_basis[k]
    names = [(key if i == k else model.divisor_basis[i]) for i in extras]
    coeffs = tuple(zip(names, sol.x))
    q = dict(coeffs)[key]
    others = [x for nm, x in coeffs if nm != key]
    p = others[0] if others else Fraction(0)
    return Divisibility(coeffs, p, q, q.denominator if use_e else 1)


# -- torsion ---------------------------------------------------------------

@dataclass(frozen=True)
class TorsionEntry:
    label: str
    order: int
    cartier: bool


def torsion_report(model: ResolutionModel) -> list[TorsionEntry]:
    """Nonzero torsion Weil classes by cyclic generator; all must be non-Cartier."""
    g = weil_class_group(model)
    out = []
    for fac in g.torsion_generators:
        cart = is_cartier_class(model, fac.generator)
        if cart:
            raise ModelError(f"torsion class {fac.label} lies in the Cartier subgroup")
        out.append(TorsionEntry(fac.label, fac.order, cart))
    for tau in g.torsion_elements():
        if any(tau) and not g.is_zero(tau) and is_cartier_class(model, tau):
            raise ModelError(f"torsion class {g._label(tau)} lies in the Cartier subgroup")
    return out


# -- JSON ------------------------------------------------------------------

_FIELDS = (
    "name", "mu_rank", "divisor_basis", "beauville_gram", "exceptional", "curves",
    "gamma_prime", "known_cartier_facts", "proper_transforms",
)
_REQUIRED = set(_FIELDS) - {"gamma_prime"}


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    return x


def _ints(xs: Any, where: str) -> Vector:
    if not isinstance(xs, list):
        raise InputError(f"{where}: expected an array of integers")
    return tuple(_int(x, f"{where}[{i}]") for i, x in enumerate(xs))


def _str(x: Any, where: str) -> str:
    if not isinstance(x, str):
        raise InputError(f"{where}: expected a string, got {x!r}")
    return x


def _obj(x: Any, where: str, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(x, dict):
        raise InputError(f"{where}: expected an object")
    unknown = set(x) - allowed
    if unknown:
        raise InputError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(x)
    if missing:
        raise InputError(f"{where}: missing field(s) {sorted(missing)}")
    return x


def model_from_dict(data: Any) -> ResolutionModel:
    """Parse the JSON schema; raises :class:`InputError` on any schema violation."""
    d = _obj(data, "model", set(_FIELDS), _REQUIRED)
    basis = d["divisor_basis"]
    if not isinstance(basis, list):
        raise InputError("divisor_basis: expected an array of strings")
    basis = tuple(_str(b, f"divisor_basis[{i}]") for i, b in enumerate(basis))
    gram = d["beauville_gram"]
    if not isinstance(gram, list):
        raise InputError("beauville_gram: expected an array of arrays")
    rows = [_ints(r, f"beauville_gram[{i}]") for i, r in enumerate(gram)]
    if any(len(r) != len(basis) for r in rows) or len(rows) != len(basis):
        raise InputError(f"beauville_gram must be {len(basis)}x{len(basis)}")
    curves = []
    if not isinstance(d["curves"], list):
        raise InputError("curves: expected an array")
    for i, c in enumerate(d["curves"]):
        c = _obj(c, f"curves[{i}]", {"name", "pairings", "contracted"}, {"name", "pairings", "contracted"})
        if not isinstance(c["contracted"], bool):
            raise InputError(f"curves[{i}].contracted: expected a boolean")
        curves.append(CurveClass(_str(c["name"], f"curves[{i}].name"), _ints(c["pairings"], f"curves[{i}].pairings"),
                                 c["contracted"]))
    gp = None
    if d.get("gamma_prime") is not None:
        g = _obj(d["gamma_prime"], "gamma_prime", {"resolved_curve", "against"}, {"resolved_curve", "against"})
        gp = GammaPrime(_str(g["resolved_curve"], "gamma_prime.resolved_curve"), _str(g["against"], "gamma_prime.against"))
    facts = []
    if not isinstance(d["known_cartier_facts"], list):
        raise InputError("known_cartier_facts: expected an array")
    for i, f in enumerate(d["known_cartier_facts"]):
        keys = {"expression", "free_part", "citation"}
        f = _obj(f, f"known_cartier_facts[{i}]", keys, keys)
        expr = f["expression"]
        if not isinstance(expr, dict):
            raise InputError(f"known_cartier_facts[{i}].expression: expected an object")
        facts.append(CartierFact(
            tuple((_str(k, "label"), _int(v, f"known_cartier_facts[{i}].expression.{k}")) for k, v in expr.items()),
            _int(f["free_part"], f"known_cartier_facts[{i}].free_part"),
            _str(f["citation"], f"known_cartier_facts[{i}].citation"),
        ))
    pts = d["proper_transforms"]
    if not isinstance(pts, dict):
        raise InputError("proper_transforms: expected an object")
    transforms = []
    for k, v in pts.items():
        _str(v, f"proper_transforms.{k}")
        if v not in basis:
            raise InputError(f"proper_transforms.{k}: {v!r} is not a basis label")
        transforms.append((k, _unit(basis.index(v), len(basis))))
    exc = _ints(d["exceptional"], "exceptional")
    if exc and len(exc) != len(basis):
        raise InputError(f"exceptional: expected {len(basis)} entries, got {len(exc)}")
    return ResolutionModel(
        name=_str(d["name"], "name"),
        mu_rank=_int(d["mu_rank"], "mu_rank"),
        divisor_basis=basis,
        beauville_gram=ExactMatrix(rows, cols=len(basis)),
        exceptional=exc,
        curves=tuple(curves),
        gamma_prime=gp,
        known_cartier_facts=tuple(facts),
        proper_transforms=tuple(transforms),
    )


def model_to_dict(model: ResolutionModel) -> dict:
    """Inverse of :func:`model_from_dict`; needs unit proper transforms and a leading unit μ̃ block."""
    n = model.rank
    if any(v != _unit(i, n) for i, v in enumerate(model.mu_vectors)):
        raise ModelError("only models with the Donaldson block first in the basis can be exported")
    pts = {}
    for k, v in model.proper_transforms:
        nz = [i for i, x in enumerate(v) if x]
        if len(nz) != 1 or v[nz[0]] != 1:
            raise ModelError(f"proper transform of {k} is not a basis class")
        pts[k] = model.divisor_basis[nz[0]]
    out: dict[str, Any] = {
        "name": model.name,
        "mu_rank": model.mu_rank,
        "divisor_basis": list(model.divisor_basis),
        "beauville_gram": model.beauville_gram.to_lists(),
        "exceptional": list(model.exceptional),
        "curves": [{"name": c.name, "pairings": list(c.pairings), "contracted": c.contracted} for c in model.curves],
    }
    if model.gamma_prime is not None:
        out["gamma_prime"] = {"resolved_curve": model.gamma_prime.resolved_curve,
                              "against": model.gamma_prime.against}
    out["known_cartier_facts"] = [
        {"expression": f.as_dict(), "free_part": f.free_part, "citation": f.citation}
        for f in model.known_cartier_facts
    ]
    out["proper_transforms"] = pts
    return out


def dumps_model(model: ResolutionModel) -> str:
    return json.dumps(model_to_dict(model), indent=2, ensure_ascii=False) + "\n"


def loads_model(text: str) -> ResolutionModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return model_from_dict(data)


def load_model(path: str | Path) -> ResolutionModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads_model(text)
