"""Chern characters, Mukai vectors and Riemann-Roch on K3 and abelian surfaces.

Even cohomology of a surface is modelled as triples ``(deg 0, deg 2, deg 4)``
with the degree-2 part a vector in the surface's second cohomology lattice
and the degree-4 part a rational multiple of the point class (``∫[pt] = 1``).

On both surface kinds the Todd class is ``(1, 0, 2ε)`` and its square root
``(1, 0, ε)``, with ``ε = 1`` for K3 and ``ε = 0`` for abelian surfaces. A
surface is either NS-only (the default: only algebraic classes exist) or
carries a full ``H^2`` lattice with the Néron-Severi lattice embedded in it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ComputationFault, InputError
from .exactalg import ExactMatrix, saturate, solve_integral
from .lattice import IntegralLattice, Sublattice, direct_sum, e8, hyperbolic_plane, orthogonal_complement

Vector = tuple[int, ...]


class SurfaceKind(str, enum.Enum):
    K3 = "k3"
    ABELIAN = "abelian"

    @property
    def epsilon(self) -> int:
        return 1 if self is SurfaceKind.K3 else 0

    @property
    def b2(self) -> int:
        return 22 if self is SurfaceKind.K3 else 6


@dataclass(frozen=True)
class SurfaceModel:
    """A K3 or abelian surface with its Néron-Severi data.

    ``full_h2``, when present, is the whole second cohomology lattice and
    ``ns_embedding`` holds the images of the NS basis as its columns; degree-2
    parts of classes are then written in ``full_h2`` coordinates.
    """

    kind: SurfaceKind
    ns: IntegralLattice
    ample: Vector
    full_h2: IntegralLattice | None = None
    ns_embedding: ExactMatrix | None = None
    name: str = ""

    def __post_init__(self):
        amp = self.ns.check_vector(self.ample)
        object.__setattr__(self, "ample", amp)
        if self.ns.pair(amp, amp) <= 0:
            raise InputError("ample class must have positive self-intersection")
        if self.full_h2 is None:
            if self.ns_embedding is not None:
                raise InputError("ns_embedding given without full_h2")
            return
        emb = self.ns_embedding
        if emb is None or emb.shape != (self.full_h2.rank, self.ns.rank):
            raise InputError("full_h2 needs an ns_embedding of shape rank(H2) x rank(NS)")
        pulled = emb.transpose() @ self.full_h2.gram @ emb
        if pulled != self.ns.gram:
            raise InputError("ns_embedding does not preserve the intersection form")

    @property
    def epsilon(self) -> int:
        return self.kind.epsilon

    @property
    def h2(self) -> IntegralLattice:
        """Lattice in which degree-2 parts live."""
        return self.full_h2 if self.full_h2 is not None else self.ns

    def embed(self, ns_vector: Sequence[int]) -> Vector:
        v = self.ns.check_vector(ns_vector)
        if self.ns_embedding is None:
            return v
        return self.ns_embedding @ v

    @property
    def polarization(self) -> Vector:
        """The ample class in ``h2`` coordinates."""
        return self.embed(self.ample)

    def is_algebraic(self, c: Sequence[int]) -> bool:
        c = self.h2.check_vector(c)
        if self.ns_embedding is None:
            return True
        images = [self.ns_embedding.col(j) for j in range(self.ns.rank)]
        return solve_integral(saturate(images, self.h2.rank), c) is not None

    def zero(self) -> Vector:
        return (0,) * self.h2.rank


def k3_surface(full: bool = False) -> SurfaceModel:
    """K3 with NS = Z·H, H² = 2; ``full`` attaches U³ ⊕ E8(-1)² with H = e + f."""
    ns = IntegralLattice.from_gram([[2]], ("H",))
    if not full:
        return SurfaceModel(SurfaceKind.K3, ns, (1,), name="K3, NS=<2>")
    u = hyperbolic_plane()
    h2 = direct_sum(direct_sum(direct_sum(u, u), direct_sum(u, e8(-1))), e8(-1))
    emb = ExactMatrix([[1], [1]] + [[0]] * 20, cols=1)
    return SurfaceModel(SurfaceKind.K3, ns, (1,), h2, emb, name="K3, NS=<2> in U^3+E8(-1)^2")


def abelian_surface(full: bool = False) -> SurfaceModel:
    """Abelian surface with NS = Z·H, H² = 2; ``full`` attaches U³ with H = e + f."""
    ns = IntegralLattice.from_gram([[2]], ("H",))
    if not full:
        return SurfaceModel(SurfaceKind.ABELIAN, ns, (1,), name="abelian, NS=<2>")
    u = hyperbolic_plane()
    h2 = direct_sum(direct_sum(u, u), u)
    emb = ExactMatrix([[1], [1], [0], [0], [0], [0]], cols=1)
    return SurfaceModel(SurfaceKind.ABELIAN, ns, (1,), h2, emb, name="abelian, NS=<2> in U^3")


def surface_by_name(name: str, full: bool = False) -> SurfaceModel:
    key = name.strip().lower()
    if key in ("k3", "x"):
        return k3_surface(full)
    if key in ("abelian", "ab", "j"):
        return abelian_surface(full)
    raise InputError(f"unknown surface {name!r} (expected k3 or abelian)")


# -- classes ---------------------------------------------------------------

@dataclass(frozen=True)
class ChernCharacter:
    """``ch = (ch0, ch1, ch2)`` of a topological K-theory class."""

    surface: SurfaceModel
    ch0: int
    ch1: Vector
    ch2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ch0", int(self.ch0))
        object.__setattr__(self, "ch1", self.surface.h2.check_vector(self.ch1))
        object.__setattr__(self, "ch2", Fraction(self.ch2))

    @property
    def rank(self) -> int:
        return self.ch0

    def __add__(self, other: "ChernCharacter") -> "ChernCharacter":
        _same_surface(self, other)
        return ChernCharacter(
            self.surface,
            self.ch0 + other.ch0,
            tuple(a + b for a, b in zip(self.ch1, other.ch1)),
            self.ch2 + other.ch2,
        )

    def __neg__(self) -> "ChernCharacter":
        return ChernCharacter(self.surface, -self.ch0, tuple(-a for a in self.ch1), -self.ch2)

    def __sub__(self, other: "ChernCharacter") -> "ChernCharacter":
        return self + (-other)

    def __rmul__(self, k: int) -> "ChernCharacter":
        return ChernCharacter(self.surface, k * self.ch0, tuple(k * a for a in self.ch1), k * self.ch2)

    def components(self) -> tuple[int, Vector, Fraction]:
        return (self.ch0, self.ch1, self.ch2)

    def dual(self) -> "ChernCharacter":
        return ChernCharacter(self.surface, self.ch0, tuple(-a for a in self.ch1), self.ch2)


@dataclass(frozen=True)
class MukaiVector:
    """``v = ch·sqrt(td) = (r, c, s)``."""

    surface: SurfaceModel
    r: int
    c: Vector
    s: int

    def __post_init__(self):
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "c", self.surface.h2.check_vector(self.c))
        object.__setattr__(self, "s", int(self.s))

    @classmethod
    def of(cls, surface: SurfaceModel, triple: Sequence) -> "MukaiVector":
        """Build from a flat tuple ``(r, c_1, ..., c_k, s)``."""
        flat = [int(x) for x in triple]
        k = surface.h2.rank
        if len(flat) != k + 2:
            raise InputError(f"Mukai vector needs {k + 2} entries on this surface, got {len(flat)}")
        return cls(surface, flat[0], tuple(flat[1:-1]), flat[-1])

    def flat(self) -> Vector:
        return (self.r, *self.c, self.s)

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        _same_surface(self, other)
        return MukaiVector(
            self.surface, self.r + other.r, tuple(a + b for a, b in zip(self.c, other.c)), self.s + other.s
        )

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(self.surface, -self.r, tuple(-a for a in self.c), -self.s)

    def __rmul__(self, k: int) -> "MukaiVector":
        return MukaiVector(self.surface, k * self.r, tuple(k * a for a in self.c), k * self.s)

    def dual(self) -> "MukaiVector":
        return MukaiVector(self.surface, self.r, tuple(-a for a in self.c), self.s)

    def __str__(self) -> str:
        c = str(self.c[0]) if len(self.c) == 1 else "(" + ", ".join(map(str, self.c)) + ")"
        return f"({self.r}, {c}, {self.s})"


Class = Union[ChernCharacter, MukaiVector]


def _same_surface(a, b) -> None:
    if a.surface != b.surface:
        raise InputError("classes live on different surfaces")


def ch_product(a: ChernCharacter, b: ChernCharacter) -> ChernCharacter:
    """Cup product in even cohomology, truncated above degree 4."""
    _same_surface(a, b)
    h2 = a.surface.h2
    return ChernCharacter(
        a.surface,
        a.ch0 * b.ch0,
        tuple(a.ch0 * y + b.ch0 * x for x, y in zip(a.ch1, b.ch1)),
        a.ch0 * b.ch2 + h2.pair(a.ch1, b.ch1) + a.ch2 * b.ch0,
    )


def structure_sheaf(surface: SurfaceModel) -> ChernCharacter:
    return ChernCharacter(surface, 1, surface.zero(), 0)


def point_class(surface: SurfaceModel) -> ChernCharacter:
    return ChernCharacter(surface, 0, surface.zero(), 1)


def line_bundle(surface: SurfaceModel, c1: Sequence[int]) -> ChernCharacter:
    """``ch(L) = (1, c, c²/2)`` for ``c`` in ``h2`` coordinates."""
    c = surface.h2.check_vector(c1)
    return ChernCharacter(surface, 1, c, Fraction(surface.h2.norm(c), 2))


def todd(surface: SurfaceModel) -> ChernCharacter:
    return ChernCharacter(surface, 1, surface.zero(), 2 * surface.epsilon)


def sqrt_todd(surface: SurfaceModel) -> ChernCharacter:
    return ChernCharacter(surface, 1, surface.zero(), surface.epsilon)


def integrate(a: ChernCharacter) -> Fraction:
    return a.ch2


def mukai_vector(a: Class) -> MukaiVector:
    if isinstance(a, MukaiVector):
        return a
    s = a.ch2 + a.surface.epsilon * a.ch0
    if s.denominator != 1:
        raise InputError(f"class has non-integral Mukai vector (s = {s})")
    return MukaiVector(a.surface, a.ch0, a.ch1, int(s))


def chern_character(v: Class) -> ChernCharacter:
    if isinstance(v, ChernCharacter):
        return v
    return ChernCharacter(v.surface, v.r, v.c, Fraction(v.s - v.surface.epsilon * v.r))


def mukai_vector_of(surface: SurfaceModel, rank: int, c1: Sequence[int], c2) -> MukaiVector:
    """Mukai vector of a class with the given rank, c1 (in ``h2``) and c2."""
    c = surface.h2.check_vector(c1)
    ch2 = Fraction(surface.h2.norm(c), 2) - Fraction(c2)
    return mukai_vector(ChernCharacter(surface, rank, c, ch2))


def mukai_pairing(a: Class, b: Class) -> int:
    """``<(r,c,s), (r',c',s')> = c·c' - r s' - s r'``."""
    v, w = mukai_vector(a), mukai_vector(b)
    _same_surface(v, w)
    return v.surface.h2.pair(v.c, w.c) - v.r * w.s - v.s * w.r


def mukai_lattice(surface: SurfaceModel) -> IntegralLattice:
    """The Mukai lattice in flat coordinates ``(r, c..., s)``."""
    g = surface.h2.gram
    k = g.rows
    rows = [[0] * (k + 2) for _ in range(k + 2)]
    rows[0][k + 1] = rows[k + 1][0] = -1
    for i in range(k):
        for j in range(k):
            rows[i + 1][j + 1] = g[i, j]
    labels = ("r",) + tuple(f"c:{x}" for x in surface.h2.basis_labels) + ("s",)
    return IntegralLattice(ExactMatrix(rows, cols=k + 2), labels)


def integrated_product_form(surface: SurfaceModel) -> IntegralLattice:
    """The form ``(v, w) ↦ ∫ v·w`` on Mukai vectors, i.e. the Euler pairing."""
    g = surface.h2.gram
    k = g.rows
    rows = [[0] * (k + 2) for _ in range(k + 2)]
    rows[0][k + 1] = rows[k + 1][0] = 1
    for i in range(k):
        for j in range(k):
            rows[i + 1][j + 1] = g[i, j]
    return IntegralLattice(ExactMatrix(rows, cols=k + 2))


def euler_pairing(a: Class, b: Class) -> int:
    """``ξ(a, b) = χ(a·b) = ∫ ch(a) ch(b) td``.

    Evaluated once by expanding ``ch(a)·ch(b)·td`` and once as the top-degree
    part of ``v(a)·v(b)``; a mismatch raises :class:`ComputationFault`.
    """
    ca, cb = chern_character(a), chern_character(b)
    _same_surface(ca, cb)
    direct = integrate(ch_product(ch_product(ca, cb), todd(ca.surface)))
    va, vb = mukai_vector(a), mukai_vector(b)
    via_mukai = integrate(ch_product(chern_character_raw(va), chern_character_raw(vb)))
    if direct != via_mukai:
        raise ComputationFault(f"Riemann-Roch paths disagree: {direct} != {via_mukai}")
    if direct.denominator != 1:
        raise ComputationFault(f"non-integral Euler characteristic {direct}")
    return int(direct)


def chern_character_raw(v: MukaiVector) -> ChernCharacter:
    """The triple of ``v`` read as an even-cohomology element (no Todd twist)."""
    return ChernCharacter(v.surface, v.r, v.c, Fraction(v.s))


# -- Hilbert polynomials ---------------------------------------------------

@dataclass(frozen=True)
class HilbertPolynomial:
    """Polynomial in ``n`` with exact coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __call__(self, n) -> Fraction:
        return sum((c * Fraction(n) ** i for i, c in enumerate(self.coeffs)), Fraction(0))

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else -1

    def leading(self) -> Fraction:
        return self.coeffs[self.degree] if self.degree >= 0 else Fraction(0)

    def scaled(self, k) -> "HilbertPolynomial":
        return HilbertPolynomial(tuple(c * Fraction(k) for c in self.coeffs))

    def __str__(self) -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            if mono and mag == 1:
                body = mono
            else:
                body = f"{mag}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _interpolate(points: Sequence[tuple[int, Fraction]]) -> tuple[Fraction, ...]:
    # Lagrange interpolation, exact.
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return tuple(coeffs)


def hilbert_polynomial(surface: SurfaceModel, v: Class) -> HilbertPolynomial:
    """``n ↦ χ(E ⊗ H^n)`` by Riemann-Roch against ``ch(H^n)``."""
    ch = chern_character(v)
    if ch.surface != surface:
        raise InputError("class does not live on the given surface")
    h = surface.polarization
    samples = []
    for n in range(3):
        twist = line_bundle(surface, tuple(n * x for x in h))
        samples.append((n, integrate(ch_product(ch_product(ch, twist), todd(surface)))))
    return HilbertPolynomial(_interpolate(samples))


def reduced_hilbert_polynomial(surface: SurfaceModel, v: Class) -> HilbertPolynomial:
    r = chern_character(v).rank
    if r <= 0:
        raise InputError("reduced Hilbert polynomial needs positive rank")
    return hilbert_polynomial(surface, v).scaled(Fraction(1, r))


def compare_reduced_hp(surface: SurfaceModel, v1: Class, v2: Class) -> str:
    """``"less"``, ``"equal"`` or ``"greater"``, comparing from the top degree down."""
    p = reduced_hilbert_polynomial(surface, v1).coeffs
    q = reduced_hilbert_polynomial(surface, v2).coeffs
    for a, b in zip(reversed(p), reversed(q)):
        if a != b:
            return "greater" if a > b else "less"
    return "equal"


# -- the descent sublattice and the u-maps ---------------------------------

# e is the class of a sheaf with Mukai vector (2, 0, -2).
DEFAULT_V = (2, 0, -2)


def sheaf_class(surface: SurfaceModel, v: Sequence[int] = DEFAULT_V) -> MukaiVector:
    r, c, s = v[0], v[1:-1], v[-1]
    if len(c) == 1 and surface.h2.rank != 1:
        c = surface.embed(c) if c[0] else surface.zero()
    return MukaiVector(surface, r, tuple(c), s)


def polarization_powers(surface: SurfaceModel) -> list[ChernCharacter]:
    """``1, h, h²`` with ``h = [H]``, the square taken in the ring."""
    one = structure_sheaf(surface)
    h = line_bundle(surface, surface.polarization)
    return [one, h, ch_product(h, h)]


def descent_membership_criterion(surface: SurfaceModel, a: Class, e: Class | None = None) -> bool:
    """Closed-form test: algebraic c1, the ch2 condition, and ξ(e, a) = 0."""
    e = sheaf_class(surface) if e is None else e
    ch = chern_character(a)
    target = Fraction(0) if surface.kind is SurfaceKind.K3 else Fraction(ch.rank)
    return surface.is_algebraic(ch.ch1) and ch.ch2 == target and euler_pairing(e, a) == 0


def descent_membership_brute_force(surface: SurfaceModel, a: Class, e: Class | None = None) -> bool:
    """Membership in ``e^⊥ ∩ {1,h,h²}^⊥⊥`` by explicit kernels of the Euler form."""
    e = sheaf_class(surface) if e is None else e
    xi = integrated_product_form(surface)
    gens = [mukai_vector(x).flat() for x in polarization_powers(surface)]
    perp = orthogonal_complement(xi, gens).basis
    double = orthogonal_complement(xi, list(perp)).basis
    v = mukai_vector(a).flat()
    in_double = solve_integral(list(double), v) is not None if double else not any(v)
    return in_double and xi.pair(mukai_vector(e).flat(), v) == 0


def perp_double_perp_member(surface: SurfaceModel, a: Class, e: Class | None = None) -> bool:
    """Whether ``a`` lies in the sublattice on which line bundles descend."""
    crit = descent_membership_criterion(surface, a, e)
    brute = descent_membership_brute_force(surface, a, e)
    if crit != brute:
        raise ComputationFault(f"membership criterion ({crit}) disagrees with kernel computation ({brute})")
    return crit


def u1(surface: SurfaceModel, line_coeffs: Sequence[int]) -> ChernCharacter:
    """``[O - L] + (c1(L)²/2)[pt]`` for ``c1(L)`` given in NS coordinates."""
    c = surface.embed(line_coeffs)
    half_square = Fraction(surface.h2.norm(c), 2)
    return structure_sheaf(surface) - line_bundle(surface, c) + half_square * point_class(surface)


def u2(surface: SurfaceModel, n: int) -> ChernCharacter:
    """``n[O]`` on a K3, ``n[O] + n[pt]`` on an abelian surface."""
    out = n * structure_sheaf(surface)
    if surface.kind is SurfaceKind.ABELIAN:
        out = out + n * point_class(surface)
    return out


def u_map(surface: SurfaceModel, line_coeffs: Sequence[int], n: int) -> MukaiVector:
    return mukai_vector(u1(surface, line_coeffs) + u2(surface, n))


@dataclass(frozen=True)
class VPerp:
    """Orthogonal complement of a Mukai vector, with an optional ``(r, c, r)`` chart."""

    v: MukaiVector
    sublattice: Sublattice
    rcr: bool

    @property
    def basis(self) -> tuple[Vector, ...]:
        return self.sublattice.basis

    @property
    def gram(self) -> ExactMatrix:
        return self.sublattice.gram

    @property
    def rank(self) -> int:
        return self.sublattice.rank

    def to_h2_plus_z(self, w: Sequence[int]) -> tuple[Vector, int]:
        """``(r, c, r) ↦ (c, r)``; only when the complement has that shape."""
        if not self.rcr:
            raise InputError("complement is not of the form (r, c, r)")
        w = tuple(int(x) for x in w)
        if w[0] != w[-1]:
            raise InputError(f"{w} is not of the form (r, c, r)")
        return w[1:-1], w[0]

    def from_h2_plus_z(self, c: Sequence[int], r: int) -> Vector:
        if not self.rcr:
            raise InputError("complement is not of the form (r, c, r)")
        return (int(r), *(int(x) for x in c), int(r))


def v_perp(surface: SurfaceModel, v: Class) -> VPerp:
    mv = mukai_vector(v) if not isinstance(v, (tuple, list)) else sheaf_class(surface, v)
    if not any(mv.flat()):
        raise InputError("orthogonal complement of the zero vector requested")
    lat = mukai_lattice(surface)
    sub = orthogonal_complement(lat, [mv.flat()])
    rcr = not any(mv.c) and mv.r == -mv.s
    return VPerp(mv, sub, rcr)


# -- known degrees of Le Potier line bundles on the curve γ' ----------------

@dataclass(frozen=True)
class CurveDegreeFact:
    name: str
    per_unit: int
    citation: str

    def value(self, n: int = 1) -> int:
        return self.per_unit * n


# Degrees of λ(u1(L)) and λ(u2(n)) on the fibre γ' of the map to the
# Donaldson-Uhlenbeck compactification; identical on both moduli spaces.
LAMBDA_U1_ON_GAMMA = CurveDegreeFact(
    "lambda(u1(L)).gamma'", 0, "line bundles from u1 are pulled back from the Uhlenbeck compactification"
)
LAMBDA_U2_ON_GAMMA = CurveDegreeFact(
    "lambda(u2(n)).gamma'", -1, "degree -n of the u2 line bundle on the Uhlenbeck fibre (GRR on a P^1 family)"
)
