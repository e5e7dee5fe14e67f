import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukailedger.abgroup import INFINITE, from_presentation, is_isomorphic, quotient_by, relabel
from mukailedger.errors import InputError
from mukailedger.exactalg import ExactMatrix, det, snf


def relations(n, max_rows=3, bound=6):
    return st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), max_size=max_rows)


def unimodular(n):
    """Products of random elementary matrices and sign flips."""
    ops = st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-3, 3)), max_size=8)

    def build(steps):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for i, j, k in steps:
            if i == j:
                m[i] = [-x for x in m[i]]
            else:
                m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        return ExactMatrix(m, cols=n)

    return ops.map(build)


def test_presentation_examples():
    g = from_presentation(["A", "B~", "lambda"], [[2, 0, 0]])
    assert g.structure() == "Z^2 + Z/2"
    assert g.invariant_factors == (2,)
    assert g.free_rank == 2
    assert g.exponent() == INFINITE
    assert g.torsion_generators[0].label == "A"
    assert from_presentation(["x", "y"], ExactMatrix([], cols=2)).structure() == "Z^2"
    assert from_presentation(["x"], [[1]]).is_trivial()


def test_dimension_mismatch_is_input_error():
    with pytest.raises(InputError):
        from_presentation(["a", "b"], ExactMatrix([[1, 2, 3]]))


def test_quotient_examples():
    z3 = from_presentation(["lambda", "Sigma~", "B~"], ExactMatrix([], cols=3))
    q = quotient_by(z3, [(0, 1, 0)])
    assert q.structure() == "Z^2"
    assert [f.label for f in q.decomposition] == ["lambda", "B~"]
    z2 = from_presentation(["a", "b"], ExactMatrix([], cols=2))
    assert quotient_by(z2, [(1, 0), (0, 1)]).is_trivial()
    a1 = from_presentation(["lambda(u1(H))", "B"], ExactMatrix([], cols=2))
    pic_quot = quotient_by(a1, [(1, 0), (0, 2)])
    assert pic_quot.structure() == "Z/2"
    assert pic_quot.exponent() == 2


def test_quotient_rejects_malformed_generators():
    z2 = from_presentation(["a", "b"], ExactMatrix([], cols=2))
    with pytest.raises(InputError):
        quotient_by(z2, [(1, 0, 0)])
    with pytest.raises(InputError):
        quotient_by(z2, [{"c": 1}])


def test_exponent_and_order():
    assert from_presentation(["x"], [[1]]).exponent() == 1
    g = from_presentation(["a", "b"], [[2, 0], [0, 3]])
    assert g.invariant_factors == (6,)
    assert g.exponent() == 6 and g.order() == 6


def test_isomorphism_examples():
    a = from_presentation(["t", "f"], [[2, 0]])
    b = from_presentation(["f", "t"], [[0, 2]])
    assert is_isomorphic(a, b)
    z4 = from_presentation(["x"], [[4]])
    z2z2 = from_presentation(["x", "y"], [[2, 0], [0, 2]])
    assert not is_isomorphic(z4, z2z2)


def test_element_and_zero_test():
    g = from_presentation(["A", "B"], [[2, 0]])
    assert g.is_zero({"A": 4})
    assert not g.is_zero({"A": 1})
    assert len(g.torsion_elements()) == 2


def test_relabel_keeps_structure():
    g = from_presentation(["A", "B"], [[2, 0]])
    h = relabel(g, ["D", "B"])
    assert h.torsion_generators[0].label == "D"
    assert is_isomorphic(g, h)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(relations(n), unimodular(n))))
def test_presentation_is_basis_independent(data):
    rels, p = data
    n = p.rows
    names = [f"g{i}" for i in range(n)]
    r = ExactMatrix(rels, cols=n)
    g = from_presentation(names, r)
    # new generators are the rows of p; relations transform by p^-1
    h = from_presentation(names, r @ _inverse(p))
    assert is_isomorphic(g, h)


def _inverse(p):
    from mukailedger.abgroup import _unimodular_inverse

    return _unimodular_inverse(p)


@given(st.integers(1, 4).flatmap(lambda n: relations(n).map(lambda r: (n, r))))
def test_quotient_by_everything_and_nothing(data):
    n, rels = data
    g = from_presentation([f"g{i}" for i in range(n)], ExactMatrix(rels, cols=n))
    everything = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    assert quotient_by(g, everything).is_trivial()
    assert is_isomorphic(quotient_by(g, []), g)


@given(st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.just(n), relations(n, max_rows=n, bound=5), relations(n, max_rows=2, bound=5))))
def test_exponent_divides_for_larger_subgroup(data):
    n, small, extra = data
    base = from_presentation([f"g{i}" for i in range(n)], ExactMatrix([], cols=n))
    everything = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    h_small = quotient_by(base, small + [tuple(3 * x for x in e) for e in everything])
    h_big = quotient_by(h_small, extra)
    # G/H with H ⊇ H' has exponent dividing that of G/H'
    e_big, e_small = h_big.exponent(), h_small.exponent()
    assert isinstance(e_small, int)
    assert e_small % e_big == 0


@given(st.integers(1, 4).flatmap(lambda n: relations(n, max_rows=4).map(lambda r: (n, r))))
def test_torsion_generators_have_exact_order(data):
    n, rels = data
    g = from_presentation([f"g{i}" for i in range(n)], ExactMatrix(rels, cols=n))
    for f in g.torsion_generators:
        assert g.is_zero(tuple(f.order * x for x in f.generator))
        for k in range(1, f.order):
            assert not g.is_zero(tuple(k * x for x in f.generator))
    order = g.order()
    if order != INFINITE:
        d = snf(ExactMatrix(rels, cols=n)).diagonal if rels else ()
        assert order == abs(det(ExactMatrix.diagonal(d))) if d else order == 1
