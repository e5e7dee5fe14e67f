"""Finitely generated abelian groups given by generators and relations.

A group is ``Z^n / R`` where ``R`` is the row span of an integer relation
matrix whose columns are indexed by named generators. Structure is read off
the Smith normal form; generator labels survive quotients so torsion can be
reported by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import lcm
from typing import Mapping, Sequence

from .errors import InputError
from .exactalg import ExactMatrix, SmithDecomposition, hnf, snf, solve_integral

INFINITE = "infinite"


@dataclass(frozen=True)
class CyclicFactor:
    """One summand of the invariant-factor decomposition.

    ``order == 0`` marks a free ``Z`` summand. ``generator`` is the summand's
    generator as an integer combination of the presentation generators.
    """

    order: int
    generator: tuple[int, ...]
    label: str


@dataclass(frozen=True, eq=False)
class FgAbelianGroup:
    generator_names: tuple[str, ...]
    relations: ExactMatrix

    def __post_init__(self):
        if self.relations.cols != len(self.generator_names):
            raise InputError(
                f"relation matrix has {self.relations.cols} columns "
                f"for {len(self.generator_names)} generators"
            )

    @cached_property
    def _smith(self) -> SmithDecomposition:
        return snf(self.relations)

    @cached_property
    def _v_inverse(self) -> ExactMatrix:
        return _unimodular_inverse(self._smith.V)

    @cached_property
    def decomposition(self) -> tuple[CyclicFactor, ...]:
        """Nontrivial torsion factors (in divisibility order) then free factors."""
        n = len(self.generator_names)
        diag = list(self._smith.diagonal) + [0] * (n - len(self._smith.diagonal))
        vinv = self._v_inverse
        torsion, free = [], []
        for i, d in enumerate(diag):
            if d == 1:
                continue
            gen = self._reduce(vinv.row(i))
            item = CyclicFactor(d, gen, self._label(gen))
            (free if d == 0 else torsion).append(item)
        return tuple(torsion + free)

    @cached_property
    def _relation_hnf(self) -> ExactMatrix:
        return hnf(self.relations)[0] if self.relations.rows else self.relations

    def _reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """Representative of ``x`` modulo the relations, pivot entries in ``(-p/2, p/2]``."""
        out = list(x)
        h = self._relation_hnf
        for i in range(h.rows):
            row = h.row(i)
            c = next((j for j, v in enumerate(row) if v), None)
            if c is None:
                break
            q = _centered_quotient(out[c], row[c])
            if q:
                out = [a - q * b for a, b in zip(out, row)]
        return tuple(out)

    def _label(self, gen: Sequence[int]) -> str:
        terms = []
        for c, name in zip(gen, self.generator_names):
            if c == 0:
                continue
            if c == 1:
                t = name
            elif c == -1:
                t = f"-{name}"
            else:
                t = f"{c}*{name}"
            terms.append(t)
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial torsion invariant factors, ``d1 | d2 | ...``."""
        return tuple(f.order for f in self.decomposition if f.order > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for f in self.decomposition if f.order == 0)

    @property
    def torsion_generators(self) -> tuple[CyclicFactor, ...]:
        return tuple(f for f in self.decomposition if f.order > 1)

    def is_free(self) -> bool:
        return not self.invariant_factors

    def is_trivial(self) -> bool:
        return not self.decomposition

    def exponent(self) -> int | str:
        """lcm of torsion orders for a finite group, ``"infinite"`` otherwise."""
        if self.free_rank:
            return INFINITE
        return lcm(1, *self.invariant_factors)

    def order(self) -> int | str:
        if self.free_rank:
            return INFINITE
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def structure(self) -> str:
        """Human-readable isomorphism type such as ``Z^2 + Z/2``."""
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def element(self, coeffs: Mapping[str, int] | Sequence[int]) -> tuple[int, ...]:
        """Coordinate vector of an element given by label coefficients."""
        n = len(self.generator_names)
        if isinstance(coeffs, Mapping):
            vec = [0] * n
            for name, c in coeffs.items():
                try:
                    vec[self.generator_names.index(name)] += int(c)
                except ValueError:
                    raise InputError(f"unknown generator {name!r}") from None
            return tuple(vec)
        vec = tuple(int(c) for c in coeffs)
        if len(vec) != n:
            raise InputError(f"element has {len(vec)} coordinates, group has {n} generators")
        return vec

    def is_zero(self, x: Sequence[int]) -> bool:
        return solve_integral(self.relations.entries, self.element(x)) is not None

    def torsion_elements(self, limit: int = 4096) -> list[tuple[int, ...]]:
        """All torsion elements (as coordinate vectors), zero first."""
        gens = self.torsion_generators
        total = 1
        for g in gens:
            total *= g.order
        if total > limit:
            raise InputError(f"torsion subgroup has {total} elements (limit {limit})")
        n = len(self.generator_names)
        out = []
        for ks in product(*(range(g.order) for g in gens)):
            out.append(tuple(sum(k * g.generator[j] for k, g in zip(ks, gens)) for j in range(n)))
        return out


def _unimodular_inverse(v: ExactMatrix) -> ExactMatrix:
    # HNF of a unimodular matrix is the identity, and its transform is V^-1.
    h, u = hnf(v)
    if h != ExactMatrix.identity(v.rows):
        raise InputError("matrix is not unimodular")
    return u


def _centered_quotient(a: int, p: int) -> int:
    # q with a - q*p in (-p/2, p/2]
    q, r = divmod(a, p)
    if r > p // 2:
        q += 1
    return q


def from_presentation(names: Sequence[str], relations) -> FgAbelianGroup:
    """Group on ``names`` modulo the rows of ``relations``.

    >>> from_presentation(["A", "B", "L"], [[2, 0, 0]]).structure()
    'Z^2 + Z/2'
    """
    names = tuple(names)
    rel = relations if isinstance(relations, ExactMatrix) else ExactMatrix(relations, cols=len(names))
    return FgAbelianGroup(names, rel)


def quotient_by(group: FgAbelianGroup, subgroup_generators) -> FgAbelianGroup:
    """``G / <generators>``, generator labels inherited."""
    n = len(group.generator_names)
    extra = [group.element(g) for g in subgroup_generators]
    rows = list(group.relations.entries) + extra
    return FgAbelianGroup(group.generator_names, ExactMatrix(rows, cols=n))


def is_isomorphic(g: FgAbelianGroup, h: FgAbelianGroup) -> bool:
    return g.free_rank == h.free_rank and g.invariant_factors == h.invariant_factors


def relabel(group: FgAbelianGroup, names: Sequence[str]) -> FgAbelianGroup:
    return FgAbelianGroup(tuple(names), group.relations)
