"""Exact integer and rational linear algebra.

Everything here works on Python ``int`` and :class:`fractions.Fraction`, so no
operation ever rounds. Matrices are small (desk scale, a few dozen rows at
most), which lets the normal-form routines stay simple: Euclidean row and
column reduction with explicit unimodular transforms.

Conventions:

* :func:`hnf` is row style: ``U @ M == H`` with positive pivots, entries above
  each pivot reduced into ``[0, pivot)``, zero rows last.
* :func:`snf` returns ``U @ M @ V == S`` with a non-negative diagonal obeying
  the divisibility chain ``d1 | d2 | ...``.
* Empty and zero-dimensional matrices are legal everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import InputError

__all__ = [
    "ExactMatrix",
    "RationalMatrix",
    "SmithDecomposition",
    "RationalSolution",
    "as_matrix",
    "hnf",
    "snf",
    "kernel_basis",
    "solve_rational",
    "solve_integral",
    "saturate",
    "det",
    "rank",
    "content",
    "primitive",
]


class _Matrix:
    """Immutable dense matrix; subclasses fix the entry type."""

    __slots__ = ("_rows", "_cols", "_data")

    def __init__(self, data: Iterable[Iterable] = (), cols: int | None = None):
        rows = tuple(tuple(self._coerce(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise InputError("ragged matrix: rows have different lengths")
            if cols is not None and cols != width:
                raise InputError(f"declared {cols} columns but rows have {width}")
        else:
            width = 0 if cols is None else cols
            if width < 0:
                raise InputError("negative column count")
        object.__setattr__(self, "_rows", len(rows))
        object.__setattr__(self, "_cols", width)
        object.__setattr__(self, "_data", rows)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @staticmethod
    def _coerce(x):  # pragma: no cover - overridden
        raise NotImplementedError

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def entries(self) -> tuple[tuple, ...]:
        return self._data

    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, values: Sequence, rows: int | None = None, cols: int | None = None):
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls(out, cols=cols)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            if not (0 <= i < self._rows and 0 <= j < self._cols):
                raise IndexError(f"entry ({i}, {j}) outside {self._rows}x{self._cols}")
            return self._data[i][j]
        return self._data[key]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def transpose(self):
        return type(self)(
            [[self._data[i][j] for i in range(self._rows)] for j in range(self._cols)],
            cols=self._rows,
        )

    T = property(transpose)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    def is_square(self) -> bool:
        return self._rows == self._cols

    def __matmul__(self, other):
        if isinstance(other, _Matrix):
            if self._cols != other._rows:
                raise InputError(f"cannot multiply {self.shape} by {other.shape}")
            kind = RationalMatrix if RationalMatrix in (type(self), type(other)) else ExactMatrix
            ot = other._data
            out = [
                [sum(a * ot[k][j] for k, a in enumerate(row)) for j in range(other._cols)]
                for row in self._data
            ]
            return kind(out, cols=other._cols)
        vec = tuple(other)
        if len(vec) != self._cols:
            raise InputError(f"vector of length {len(vec)} cannot multiply {self.shape}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._data)

    def __add__(self, other):
        if not isinstance(other, _Matrix) or other.shape != self.shape:
            return NotImplemented
        kind = RationalMatrix if RationalMatrix in (type(self), type(other)) else ExactMatrix
        return kind(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
            cols=self._cols,
        )

    def __neg__(self):
        return type(self)([[-a for a in r] for r in self._data], cols=self._cols)

    def __sub__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        return self + (-other)

    def scale(self, k):
        kind = RationalMatrix if isinstance(k, Fraction) else type(self)
        return kind([[k * a for a in r] for r in self._data], cols=self._cols)

    def __eq__(self, other):
        if isinstance(other, _Matrix):
            return self.shape == other.shape and self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash((self._rows, self._cols, self._data))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"{type(self).__name__}({self._rows}x{self._cols}: [{body}])"


class ExactMatrix(_Matrix):
    """Arbitrary-precision integer matrix."""

    __slots__ = ()

    @staticmethod
    def _coerce(x) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        raise InputError(f"non-integer entry {x!r} in integer matrix")

    def to_rational(self) -> "RationalMatrix":
        return RationalMatrix(self._data, cols=self._cols)


class RationalMatrix(_Matrix):
    """Exact rational matrix; entries are Fractions, always in lowest terms."""

    __slots__ = ()

    @staticmethod
    def _coerce(x) -> Fraction:
        if isinstance(x, float):
            raise InputError("floating-point entries are not allowed")
        try:
            return Fraction(x)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot read {x!r} as a rational number") from exc

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._data for x in r)

    def to_integer(self) -> ExactMatrix:
        if not self.is_integral():
            raise InputError("matrix has non-integral entries")
        return ExactMatrix(self._data, cols=self._cols)


def as_matrix(m, cols: int | None = None) -> ExactMatrix:
    """Coerce nested sequences (or an ExactMatrix) to an ExactMatrix."""
    if isinstance(m, ExactMatrix):
        return m
    if isinstance(m, RationalMatrix):
        return m.to_integer()
    return ExactMatrix(m, cols=cols)


def _as_rational(m) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    if isinstance(m, ExactMatrix):
        return m.to_rational()
    return RationalMatrix(m)


# -- small vector helpers -------------------------------------------------

def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide out the content; the zero vector is returned unchanged."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


# -- Hermite normal form --------------------------------------------------

def _hnf_rows(a: list[list[int]], u: list[list[int]], ncols: int) -> int:
    """In-place row HNF of ``a`` with the same row operations applied to ``u``.

    Returns the rank.
    """
    m = len(a)
    p = 0
    for c in range(ncols):
        if p >= m:
            break
        while True:
            nz = [i for i in range(p, m) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            if piv != p:
                a[p], a[piv] = a[piv], a[p]
                u[p], u[piv] = u[piv], u[p]
            done = True
            for i in range(p + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[p][c]
                    ai, ap, ui, up = a[i], a[p], u[i], u[p]
                    for j in range(c, ncols):
                        ai[j] -= q * ap[j]
                    for j in range(len(ui)):
                        ui[j] -= q * up[j]
                    if ai[c]:
                        done = False
            if done:
                break
        if a[p][c] == 0:
            continue
        if a[p][c] < 0:
            a[p] = [-x for x in a[p]]
            u[p] = [-x for x in u[p]]
        pv = a[p][c]
        for i in range(p):
            q = a[i][c] // pv
            if q:
                ai, ap, ui, up = a[i], a[p], u[i], u[p]
                for j in range(c, ncols):
                    ai[j] -= q * ap[j]
                for j in range(len(ui)):
                    ui[j] -= q * up[j]
        p += 1
    return p


def hnf(m) -> tuple[ExactMatrix, ExactMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U @ M == H`` and ``U`` unimodular.

    >>> H, U = hnf([[2, 4], [4, 2]])
    >>> H.to_lists()
    [[2, 4], [0, 6]]
    """
    m = as_matrix(m)
    a = m.to_lists()
    u = ExactMatrix.identity(m.rows).to_lists()
    _hnf_rows(a, u, m.cols)
    return ExactMatrix(a, cols=m.cols), ExactMatrix(u, cols=m.rows)


# -- Smith normal form ----------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == S`` with ``S`` diagonal, non-negative, divisibility chain."""

    S: ExactMatrix
    U: ExactMatrix
    V: ExactMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(m) -> SmithDecomposition:
    """Smith normal form with both unimodular transforms."""
    m = as_matrix(m)
    nr, nc = m.shape
    a = m.to_lists()
    u = ExactMatrix.identity(nr).to_lists()
    v = ExactMatrix.identity(nc).to_lists()

    def swap_cols(x: list[list[int]], i: int, j: int) -> None:
        for row in x:
            row[i], row[j] = row[j], row[i]

    def add_col(x: list[list[int]], dst: int, src: int, k: int) -> None:
        # col_dst += k * col_src
        for row in x:
            row[dst] += k * row[src]

    def add_row(x: list[list[int]], dst: int, src: int, k: int) -> None:
        rd, rs = x[dst], x[src]
        for j in range(len(rd)):
            rd[j] += k * rs[j]

    for t in range(min(nr, nc)):
        cand = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not cand:
            break
        _, pi, pj = min(cand)
        while True:
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                swap_cols(a, t, pj)
                swap_cols(v, t, pj)
            pv = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // pv
                    add_row(a, i, t, -q)
                    add_row(u, i, t, -q)
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // pv
                    add_col(a, j, t, -q)
                    add_col(v, j, t, -q)
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if rest:
                _, pi, pj = min(rest)
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % pv),
                None,
            )
            if bad is None:
                break
            # fold the offending row into the pivot row and redo the sweep
            add_row(a, t, bad, 1)
            add_row(u, t, bad, 1)
            pi, pj = t, t
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(
        ExactMatrix(a, cols=nc), ExactMatrix(u, cols=nr), ExactMatrix(v, cols=nc)
    )


# -- determinant and rank (fraction-free) ---------------------------------

def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (rank, sign-adjusted last pivot)."""
    m = len(a)
    n = len(a[0]) if m else 0
    sign = 1
    prev = 1
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r, sign * prev


def det(m) -> int:
    """Exact determinant by Bareiss elimination."""
    m = as_matrix(m)
    if not m.is_square():
        raise InputError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return 1
    r, d = _bareiss(m.to_lists())
    return d if r == m.rows else 0


def rank(m) -> int:
    """Exact rank by fraction-free elimination."""
    m = as_matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    return _bareiss(m.to_lists())[0]


# -- kernels, saturation, solving -----------------------------------------

def kernel_basis(m) -> list[tuple[int, ...]]:
    """Basis of the integer kernel ``{x : M x = 0}``, in row HNF.

    The basis spans a saturated sublattice, so every integer solution is an
    integer combination of it.
    """
    m = as_matrix(m)
    n = m.cols
    if n == 0:
        return []
    # U @ M^T = H; rows of U against zero rows of H span ker(M).
    h, u = hnf(m.transpose())
    r = sum(1 for i in range(h.rows) if any(h.row(i)))
    raw = [u.row(i) for i in range(r, n)]
    if not raw:
        return []
    canon, _ = hnf(raw)
    return [canon.row(i) for i in range(canon.rows) if any(canon.row(i))]


def saturate(vectors: Sequence[Sequence[int]], dim: int | None = None) -> list[tuple[int, ...]]:
    """Basis (row HNF) of ``span(vectors) ⊗ Q ∩ Z^n``."""
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        return []
    n = len(vecs[0]) if dim is None else dim
    if any(len(v) != n for v in vecs):
        raise InputError("vectors of unequal dimension")
    perp = kernel_basis(ExactMatrix(vecs, cols=n))
    return kernel_basis(ExactMatrix(perp, cols=n))


@dataclass(frozen=True)
class RationalSolution:
    """A particular solution (free variables set to zero) and the nullity."""

    x: tuple[Fraction, ...]
    nullity: int


def solve_rational(m, b: Sequence) -> RationalSolution | None:
    """Solve ``M x = b`` over Q; ``None`` when inconsistent."""
    a = _as_rational(m)
    bb = [Fraction(x) for x in b]
    if len(bb) != a.rows:
        raise InputError(f"right-hand side of length {len(bb)} for {a.rows} equations")
    n = a.cols
    aug = [list(a.row(i)) + [bb[i]] for i in range(a.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, len(aug))):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return RationalSolution(tuple(x), n - len(pivots))


def solve_integral(rows: Sequence[Sequence[int]], target: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients ``c`` with ``sum c_i rows[i] == target``, or ``None``."""
    tgt = [int(x) for x in target]
    n = len(tgt)
    if not rows:
        return () if not any(tgt) else None
    mat = as_matrix(rows, cols=n)
    h, u = hnf(mat)
    resid = list(tgt)
    coeff = [0] * h.rows
    for i in range(h.rows):
        hr = h.row(i)
        c = next((j for j, x in enumerate(hr) if x), None)
        if c is None:
            break
        q, rem = divmod(resid[c], hr[c])
        if rem:
            return None
        coeff[i] = q
        resid = [x - q * y for x, y in zip(resid, hr)]
    if any(resid):
        return None
    # target = coeff @ H = coeff @ U @ M
    return tuple(sum(coeff[k] * u[k, j] for k in range(h.rows)) for j in range(mat.rows))
