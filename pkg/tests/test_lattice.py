import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukailedger.errors import InputError
from mukailedger.exactalg import ExactMatrix, rank, saturate
from mukailedger.lattice import (
    IntegralLattice,
    LatticeMap,
    direct_sum,
    e8,
    hyperbolic_plane,
    is_isometry,
    orthogonal_complement,
)
from mukailedger.mukai import k3_surface, mukai_lattice


def symmetric(n, bound=5):
    return st.lists(st.integers(-bound, bound), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
        lambda xs: _sym(n, xs))


def _sym(n, xs):
    m = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    return IntegralLattice.from_gram(m)


def lattice_and_vectors(max_rank=4):
    return st.integers(1, max_rank).flatmap(
        lambda n: st.tuples(
            symmetric(n),
            st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), max_size=3),
            st.lists(st.integers(-4, 4), min_size=n, max_size=n),
            st.lists(st.integers(-4, 4), min_size=n, max_size=n),
        ))


def test_gram_must_be_symmetric_and_square():
    with pytest.raises(InputError):
        IntegralLattice.from_gram([[1, 2], [3, 4]])
    with pytest.raises(InputError):
        IntegralLattice.from_gram([[1, 2]])


def test_pair_examples():
    assert hyperbolic_plane().pair((1, 0), (0, 1)) == 1
    ext10 = IntegralLattice.from_gram([[-6, 3], [3, -2]], ("Sigma~", "B~"))
    assert ext10.pair((1, 0), (0, 1)) == 3
    ext6 = IntegralLattice.from_gram([[-2, 2], [2, -4]], ("A", "B~"))
    assert ext6.pair((0, 1), (0, 1)) == -4
    with pytest.raises(InputError):
        ext6.pair((1,), (0, 1))


def test_complement_examples():
    lat = mukai_lattice(k3_surface())
    sub = orthogonal_complement(lat, [(2, 0, -2)])
    assert sub.basis == ((1, 0, 1), (0, 1, 0))
    assert sub.gram == ExactMatrix([[-2, 0], [0, 2]])
    u = hyperbolic_plane()
    assert orthogonal_complement(u, []).rank == 2
    assert orthogonal_complement(u, [(1, 0), (0, 1)]).rank == 0


def test_isometry_examples():
    u = hyperbolic_plane()
    assert is_isometry(LatticeMap(u, u, ExactMatrix.identity(2)))
    res = is_isometry(LatticeMap(u, u, ExactMatrix([[2, 0], [0, 2]])))
    assert not res
    assert res.witness == (0, 1)
    assert (res.source_value, res.target_value) == (1, 4)


def test_map_shape_checked():
    u = hyperbolic_plane()
    with pytest.raises(InputError):
        LatticeMap(u, u, ExactMatrix.identity(3))


def test_direct_sum_examples():
    s = direct_sum(IntegralLattice.from_gram([[2]]), IntegralLattice.from_gram([[-6, 3], [3, -2]]))
    assert s.gram == ExactMatrix([[2, 0, 0], [0, -6, 3], [0, 3, -2]])
    empty = IntegralLattice(ExactMatrix([], cols=0))
    u = hyperbolic_plane()
    assert direct_sum(u, empty).gram == u.gram
    uu = direct_sum(u, u)
    assert uu.rank == 4 and uu.discriminant() == 1


def test_discriminants():
    assert hyperbolic_plane().discriminant() == -1
    assert IntegralLattice.from_gram([[-6, 3], [3, -2]]).discriminant() == 3
    assert IntegralLattice.from_gram([[-2, 2], [2, -4]]).discriminant() == 4
    assert e8().discriminant() == 1
    assert IntegralLattice.from_gram([[0, 0], [0, 0]]).discriminant() == 0


def test_standard_k3_lattice_is_even_unimodular_of_signature_3_19():
    h2 = k3_surface(full=True).h2
    assert h2.rank == 22
    assert abs(h2.discriminant()) == 1
    assert all(h2.gram[i, i] % 2 == 0 for i in range(22))


@given(lattice_and_vectors())
def test_pair_symmetric_and_bilinear(data):
    lat, _, x, y = data
    assert lat.pair(x, y) == lat.pair(y, x)
    z = [a + 2 * b for a, b in zip(x, y)]
    assert lat.pair(z, y) == lat.pair(x, y) + 2 * lat.pair(y, y)


@given(lattice_and_vectors())
def test_complement_saturated_and_annihilating(data):
    lat, vs, _, _ = data
    sub = orthogonal_complement(lat, vs)
    for b in sub.basis:
        for v in vs:
            assert lat.pair(b, v) == 0
    if sub.basis:
        assert saturate(list(sub.basis)) == list(sub.basis)
    pm_rank = rank(lat.pairing_matrix(vs)) if vs else 0
    assert sub.rank == lat.rank - pm_rank


def signed_permutations(n):
    return st.tuples(st.permutations(range(n)), st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(symmetric(n), signed_permutations(n),
                                                     st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n))))
def test_isometry_verdict_invariant_under_source_automorphisms(data):
    lat, (perm, signs), entries = data
    n = lat.rank
    p = ExactMatrix([[signs[j] if perm[j] == i else 0 for j in range(n)] for i in range(n)])
    auto = LatticeMap(lat, lat, p)
    f = LatticeMap(lat, lat, ExactMatrix([entries[i * n:(i + 1) * n] for i in range(n)]))
    if is_isometry(auto):
        assert bool(is_isometry(f)) == bool(is_isometry(f.precompose(p)))
    # the identity always is one
    assert is_isometry(LatticeMap(lat, lat, ExactMatrix.identity(n)))
