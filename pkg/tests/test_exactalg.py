from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukailedger.errors import InputError
from mukailedger.exactalg import (
    ExactMatrix,
    RationalMatrix,
    det,
    hnf,
    kernel_basis,
    rank,
    saturate,
    snf,
    solve_integral,
    solve_rational,
)
from oracles import determinantal_divisors, leibniz_det, matmul, rational_rank


def matrices(max_rows=5, max_cols=5, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def is_row_hnf(h: ExactMatrix) -> bool:
    last = -1
    seen_zero = False
    for i in range(h.rows):
        row = h.row(i)
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        for k in range(i):
            if not 0 <= h[k, p] < row[p]:
                return False
        last = p
    return True


# -- construction ----------------------------------------------------------

def test_matrix_is_immutable_and_bounds_checked():
    m = ExactMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        m.rows = 3
    with pytest.raises(IndexError):
        m[2, 0]
    assert m[1, 0] == 3


def test_matrix_rejects_floats_and_ragged_rows():
    with pytest.raises(InputError):
        ExactMatrix([[1.5]])
    with pytest.raises(InputError):
        ExactMatrix([[1, 2], [3]])


def test_rational_entries_in_lowest_terms():
    m = RationalMatrix([[Fraction(4, 6), Fraction(-3, -9)]])
    assert m[0, 0] == Fraction(2, 3)
    assert m[0, 0].denominator == 3
    assert m[0, 1] == Fraction(1, 3)
    with pytest.raises(InputError):
        RationalMatrix([[0.5]])


def test_empty_matrices_are_legal():
    e = ExactMatrix([], cols=0)
    assert e.shape == (0, 0)
    assert det(e) == 1
    assert rank(e) == 0
    h, u = hnf(e)
    assert h.shape == (0, 0)
    assert snf(e).diagonal == ()


# -- worked values ---------------------------------------------------------

def test_hnf_examples():
    assert hnf([[1, 0], [0, 1]]) == (ExactMatrix.identity(2), ExactMatrix.identity(2))
    h, u = hnf([[2, 4], [4, 2]])
    assert h == ExactMatrix([[2, 4], [0, 6]])
    assert u @ ExactMatrix([[2, 4], [4, 2]]) == h
    h, _ = hnf([[0, 0], [0, 0]])
    assert h == ExactMatrix.zeros(2, 2)


def test_snf_examples():
    assert snf([[2, 0], [0, 3]]).diagonal == (1, 6)
    assert snf([[2, 4], [4, 2]]).diagonal == (2, 6)
    assert snf(ExactMatrix.identity(4)).S == ExactMatrix.identity(4)


def test_snf_examples_match_minor_oracle():
    for rows in ([[2, 0], [0, 3]], [[2, 4], [4, 2]]):
        assert list(snf(rows).diagonal) == determinantal_divisors(rows)


def test_kernel_examples():
    assert kernel_basis([[1, -2]]) == [(2, 1)]
    assert kernel_basis(ExactMatrix.identity(2)) == []
    assert kernel_basis([[2, -2]]) == [(1, 1)]


def test_solve_examples():
    assert solve_rational([[2]], [3]).x == (Fraction(3, 2),)
    sol = solve_rational([[1, 2], [3, 4]], [0, 0])
    assert sol.x == (0, 0) and sol.nullity == 0
    assert solve_rational([[1], [1]], [1, 2]) is None
    with pytest.raises(InputError):
        solve_rational([[1, 2]], [1, 2])


def test_solve_reports_nullity_with_free_variables_zero():
    sol = solve_rational([[1, 1]], [4])
    assert sol.x == (4, 0)
    assert sol.nullity == 1


def test_saturate_examples():
    assert saturate([(2, 0)]) == [(1, 0)]
    assert sorted(saturate([(1, 1), (1, -1)])) == [(0, 1), (1, 0)]
    assert saturate([]) == []


def test_det_and_rank_examples():
    assert det(ExactMatrix.identity(3)) == 1
    assert det([[-6, 3], [3, -2]]) == 3
    assert rank(ExactMatrix.zeros(3, 2)) == 0
    with pytest.raises(InputError):
        det([[1, 2]])


def test_solve_integral():
    assert solve_integral([(2, 0), (0, 3)], (4, 9)) == (2, 3)
    assert solve_integral([(2, 0)], (1, 0)) is None
    assert solve_integral([], (0, 0)) == ()


# -- properties ------------------------------------------------------------

@given(matrices())
def test_snf_exact_decomposition(rows):
    m = ExactMatrix(rows)
    d = snf(m)
    assert d.U @ m @ d.V == d.S
    assert abs(det(d.U)) == 1 and abs(det(d.V)) == 1
    diag = d.diagonal
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # off-diagonal entries vanish
    assert all(d.S[i, j] == 0 for i in range(m.rows) for j in range(m.cols) if i != j)


@given(matrices(max_rows=5, max_cols=5, bound=6))
def test_snf_matches_minor_gcd_oracle(rows):
    nz = [x for x in snf(rows).diagonal if x]
    assert nz == determinantal_divisors(rows)


@given(matrices())
def test_hnf_shape_and_transform(rows):
    m = ExactMatrix(rows)
    h, u = hnf(m)
    assert u @ m == h
    assert abs(det(u)) == 1
    assert is_row_hnf(h)


@given(matrices())
def test_hnf_is_canonical_under_row_operations(rows):
    m = ExactMatrix(rows)
    if m.rows > 1:
        swapped = ExactMatrix([rows[1], rows[0], *rows[2:]])
        assert hnf(swapped)[0] == hnf(m)[0]


@given(matrices(bound=12))
def test_kernel_annihilates_and_is_saturated(rows):
    m = ExactMatrix(rows)
    k = kernel_basis(m)
    for v in k:
        assert all(x == 0 for x in m @ v)
    assert len(k) == m.cols - rational_rank(rows)
    if k:
        assert saturate(k) == k


@given(matrices(bound=10**6), st.data())
def test_solve_rational_recovers_a_solution(rows, data):
    m = ExactMatrix(rows)
    x0 = data.draw(st.lists(st.integers(-10**6, 10**6), min_size=m.cols, max_size=m.cols))
    b = m @ x0
    sol = solve_rational(m, b)
    assert sol is not None
    residual = [sum(Fraction(a) * x for a, x in zip(m.row(i), sol.x)) - b[i] for i in range(m.rows)]
    assert all(r == 0 for r in residual)
    assert sol.nullity == m.cols - rational_rank(rows)


@given(matrices(max_rows=5, max_cols=5, bound=10**6))
def test_det_matches_leibniz_on_square_part(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert det(sq) == leibniz_det(sq)
    assert rank(rows) == rational_rank(rows)


@given(matrices(bound=10**6))
def test_results_bit_reproducible(rows):
    a, b = snf(rows), snf([list(r) for r in rows])
    assert (a.S, a.U, a.V) == (b.S, b.U, b.V)
    assert hnf(rows) == hnf(rows)


@given(matrices(max_rows=4, max_cols=4))
def test_saturation_is_rational_span_intersection(rows):
    sat = saturate(rows)
    assert len(sat) == rational_rank(rows)
    # each input vector is an integer combination of the saturation
    for r in rows:
        assert solve_integral(sat, r) is not None
    # the saturation has trivial SNF torsion, so the quotient is free
    if sat:
        assert all(x == 1 for x in snf(sat).diagonal)


def test_matmul_oracle_agrees():
    a = [[1, 2], [3, 4]]
    assert (ExactMatrix(a) @ ExactMatrix(a)).to_lists() == matmul(a, a)
