"""Integral lattices: free Z-modules with a symmetric integer bilinear form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .exactalg import ExactMatrix, as_matrix, det, kernel_basis

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntegralLattice:
    """Gram matrix plus basis labels. Degenerate forms are allowed."""

    gram: ExactMatrix
    basis_labels: tuple[str, ...] = ()

    def __post_init__(self):
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not g.is_square():
            raise InputError(f"Gram matrix must be square, got {g.rows}x{g.cols}")
        if g != g.transpose():
            raise InputError("Gram matrix is not symmetric")
        labels = tuple(self.basis_labels) or tuple(f"e{i}" for i in range(g.rows))
        if len(labels) != g.rows:
            raise InputError(f"{len(labels)} labels for a rank-{g.rows} lattice")
        object.__setattr__(self, "basis_labels", labels)

    @classmethod
    def from_gram(cls, gram, labels: Sequence[str] = ()) -> "IntegralLattice":
        return cls(as_matrix(gram), tuple(labels))

    @property
    def rank(self) -> int:
        return self.gram.rows

    def check_vector(self, x: Sequence[int]) -> Vector:
        v = tuple(int(a) for a in x)
        if len(v) != self.rank:
            raise InputError(f"vector of length {len(v)} in a rank-{self.rank} lattice")
        return v

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        """``x^T G y``."""
        x = self.check_vector(x)
        y = self.check_vector(y)
        gy = self.gram @ y
        return sum(a * b for a, b in zip(x, gy))

    def norm(self, x: Sequence[int]) -> int:
        return self.pair(x, x)

    def pairing_matrix(self, vectors: Sequence[Sequence[int]]) -> ExactMatrix:
        """Rows ``v^T G`` for each v; its kernel is the orthogonal complement."""
        rows = [tuple(self.gram.transpose() @ self.check_vector(v)) for v in vectors]
        return ExactMatrix(rows, cols=self.rank)

    def discriminant(self) -> int:
        return det(self.gram)

    def unit(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.rank))


@dataclass(frozen=True)
class Sublattice:
    """A sublattice given by a basis in ambient coordinates."""

    ambient: IntegralLattice
    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> ExactMatrix:
        b = self.basis
        return ExactMatrix(
            [[self.ambient.pair(x, y) for y in b] for x in b], cols=len(b)
        )

    def as_lattice(self, labels: Sequence[str] = ()) -> IntegralLattice:
        return IntegralLattice(self.gram, tuple(labels))


def orthogonal_complement(lat: IntegralLattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """Saturated basis of ``{x : <x, v> = 0 for all v}`` with its restricted form."""
    if not vectors:
        return Sublattice(lat, tuple(lat.unit(i) for i in range(lat.rank)))
    basis = kernel_basis(lat.pairing_matrix(vectors))
    return Sublattice(lat, tuple(basis))


def direct_sum(a: IntegralLattice, b: IntegralLattice) -> IntegralLattice:
    n, m = a.rank, b.rank
    rows = [list(a.gram.row(i)) + [0] * m for i in range(n)]
    rows += [[0] * n + list(b.gram.row(i)) for i in range(m)]
    return IntegralLattice(ExactMatrix(rows, cols=n + m), a.basis_labels + b.basis_labels)


def hyperbolic_plane() -> IntegralLattice:
    return IntegralLattice.from_gram([[0, 1], [1, 0]], ("e", "f"))


def e8(sign: int = 1) -> IntegralLattice:
    """The E8 root lattice (Bourbaki Cartan matrix); ``sign=-1`` gives E8(-1)."""
    cartan = [
        [2, 0, -1, 0, 0, 0, 0, 0],
        [0, 2, 0, -1, 0, 0, 0, 0],
        [-1, 0, 2, -1, 0, 0, 0, 0],
        [0, -1, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, 0],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, -1],
        [0, 0, 0, 0, 0, 0, -1, 2],
    ]
    return IntegralLattice.from_gram([[sign * x for x in r] for r in cartan])


@dataclass(frozen=True)
class IsometryCheck:
    ok: bool
    witness: tuple[int, int] | None = None
    source_value: int | None = None
    target_value: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class LatticeMap:
    """Linear map given by a matrix whose columns are images of the source basis."""

    source: IntegralLattice
    target: IntegralLattice
    matrix: ExactMatrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.target.rank, self.source.rank):
            raise InputError(
                f"map matrix is {m.rows}x{m.cols}, expected "
                f"{self.target.rank}x{self.source.rank}"
            )

    @classmethod
    def from_images(cls, source, target, images: Sequence[Sequence[int]]) -> "LatticeMap":
        cols = [target.check_vector(v) for v in images]
        if len(cols) != source.rank:
            raise InputError(f"{len(cols)} images for a rank-{source.rank} source")
        m = ExactMatrix(cols, cols=target.rank).transpose() if cols else ExactMatrix.zeros(target.rank, 0)
        return cls(source, target, m)

    def image(self, i: int) -> Vector:
        return self.matrix.col(i)

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.matrix @ self.source.check_vector(x)

    def precompose(self, m) -> "LatticeMap":
        """``self ∘ m`` for an endomorphism matrix ``m`` of the source."""
        return LatticeMap(self.source, self.target, self.matrix @ as_matrix(m))


def is_isometry(f: LatticeMap) -> IsometryCheck:
    """Check ``F^T G_target F == G_source``, reporting the first failing pair."""
    pulled = f.matrix.transpose() @ f.target.gram @ f.matrix
    src = f.source.gram
    for i in range(src.rows):
        for j in range(i, src.cols):
            if pulled[i, j] != src[i, j]:
                return IsometryCheck(False, (i, j), src[i, j], pulled[i, j])
    return IsometryCheck(True)
