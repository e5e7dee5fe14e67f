from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mukailedger.errors import InputError
from mukailedger.exactalg import ExactMatrix
from mukailedger.mukai import (
    LAMBDA_U1_ON_GAMMA,
    LAMBDA_U2_ON_GAMMA,
    ChernCharacter,
    MukaiVector,
    SurfaceKind,
    abelian_surface,
    ch_product,
    chern_character,
    compare_reduced_hp,
    descent_membership_brute_force,
    descent_membership_criterion,
    euler_pairing,
    hilbert_polynomial,
    k3_surface,
    line_bundle,
    mukai_pairing,
    mukai_vector,
    mukai_vector_of,
    perp_double_perp_member,
    point_class,
    sheaf_class,
    structure_sheaf,
    u1,
    u2,
    u_map,
    v_perp,
)

X = k3_surface()
J = abelian_surface()
SURFACES = [X, J]


def classes(surface, bound=6):
    return st.builds(
        lambda r, c, s: MukaiVector(surface, r, (c,), s),
        st.integers(-bound, bound), st.integers(-bound, bound), st.integers(-bound, bound),
    )


def test_surface_invariants():
    assert X.kind is SurfaceKind.K3 and X.epsilon == 1
    assert J.kind is SurfaceKind.ABELIAN and J.epsilon == 0
    assert X.ns.norm(X.ample) == 2 and J.ns.norm(J.ample) == 2
    with pytest.raises(InputError):
        type(X)(SurfaceKind.K3, X.ns, (0,))


def test_full_h2_attachment():
    xf, jf = k3_surface(full=True), abelian_surface(full=True)
    assert xf.h2.rank == 22 and jf.h2.rank == 6
    assert xf.h2.norm(xf.polarization) == 2
    with pytest.raises(InputError):
        type(X)(SurfaceKind.K3, X.ns, (1,), xf.h2, ExactMatrix([[1]] + [[0]] * 21, cols=1))


def test_ch_product_examples():
    h = line_bundle(X, (1,))
    assert ch_product(h, h).components() == (1, (2,), 4)
    a = ChernCharacter(X, 3, (-2,), Fraction(5, 2))
    assert ch_product(a, structure_sheaf(X)) == a
    e = chern_character(sheaf_class(X))
    assert ch_product(e, structure_sheaf(X)).components() == (2, (0,), -4)


def test_mixed_surfaces_rejected():
    with pytest.raises(InputError):
        ch_product(structure_sheaf(X), structure_sheaf(J))
    with pytest.raises(InputError):
        mukai_pairing(structure_sheaf(X), structure_sheaf(J))


def test_mukai_vector_examples():
    assert mukai_vector_of(X, 2, (0,), 4).flat() == (2, 0, -2)
    assert mukai_vector_of(X, 1, (0,), 0).flat() == (1, 0, 1)
    assert mukai_vector_of(J, 2, (0,), 2).flat() == (2, 0, -2)


def test_mukai_pairing_examples():
    v = sheaf_class(X)
    for r, c in product(range(-3, 4), repeat=2):
        assert mukai_pairing(v, MukaiVector(X, r, (c,), r)) == 0
    assert mukai_pairing(v, v) == 8
    assert mukai_pairing(MukaiVector(X, 1, (0,), 0), MukaiVector(X, 0, (0,), 1)) == -1


def test_euler_pairing_examples():
    assert euler_pairing(sheaf_class(X), u2(X, 1)) == 0
    for b in range(-3, 4):
        assert euler_pairing(structure_sheaf(X), MukaiVector(X, 0, (b,), 0)) == 0
    assert euler_pairing(structure_sheaf(X), structure_sheaf(X)) == 2
    assert euler_pairing(structure_sheaf(J), structure_sheaf(J)) == 0


def test_hilbert_polynomial_examples():
    assert str(hilbert_polynomial(X, sheaf_class(X))) == "2n^2"
    assert str(hilbert_polynomial(X, structure_sheaf(X))) == "n^2 + 2"
    assert str(hilbert_polynomial(J, sheaf_class(J))) == "2n^2 - 2"
    # against chi(E(n)) for a few n, with ch(H^n) = (1, nH, n^2)
    p = hilbert_polynomial(X, sheaf_class(X))
    for n in range(-3, 6):
        assert p(n) == 2 * n * n


def test_reduced_hilbert_comparison():
    e = sheaf_class(X)
    assert compare_reduced_hp(X, structure_sheaf(X), e) == "greater"
    assert compare_reduced_hp(X, e, e) == "equal"
    assert compare_reduced_hp(X, e, 2 * e) == "equal"
    with pytest.raises(InputError):
        compare_reduced_hp(X, point_class(X), e)


def test_descent_membership_examples():
    assert perp_double_perp_member(X, u1(X, (1,)))
    assert perp_double_perp_member(J, u2(J, 3))
    assert not perp_double_perp_member(X, MukaiVector(X, 1, (0,), 0))


def test_descent_membership_sees_transcendental_classes():
    xf = k3_surface(full=True)
    transcendental = ChernCharacter(xf, 0, (1, -1) + (0,) * 20, 0)
    assert not perp_double_perp_member(xf, transcendental)
    assert perp_double_perp_member(xf, u1(xf, (1,)))


def test_u_map_examples():
    assert u_map(X, (1,), 0).flat() == (0, -1, 0)
    assert u_map(X, (0,), 5).flat() == (5, 0, 5)
    assert u_map(J, (0,), 1).flat() == (1, 0, 1)
    # u2 differs between the surface kinds in K-theory; the Mukai vectors agree
    assert u2(X, 1).ch2 == 0 and u2(J, 1).ch2 == 1


def test_v_perp_examples():
    for s in SURFACES:
        vp = v_perp(s, sheaf_class(s))
        assert vp.basis == ((1, 0, 1), (0, 1, 0))
        assert vp.gram == ExactMatrix([[-2, 0], [0, 2]])
        assert vp.to_h2_plus_z((3, 2, 3)) == ((2,), 3)
        assert vp.from_h2_plus_z((2,), 3) == (3, 2, 3)
    assert v_perp(k3_surface(full=True), sheaf_class(k3_surface(full=True))).rank == 23
    with pytest.raises(InputError):
        v_perp(X, MukaiVector(X, 0, (0,), 0))


def test_curve_degree_constants():
    assert LAMBDA_U1_ON_GAMMA.value(7) == 0
    assert LAMBDA_U2_ON_GAMMA.value(1) == -1
    assert LAMBDA_U2_ON_GAMMA.value(3) == -3


# -- properties ------------------------------------------------------------

def _two_class_pairs(surface):
    return st.tuples(classes(surface), classes(surface))


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_hrr_two_paths_agree(surface):
    @settings(max_examples=500)
    @given(_two_class_pairs(surface))
    def check(pair):
        a, b = pair
        # euler_pairing raises ComputationFault if the two paths disagree
        value = euler_pairing(a, b)
        direct = ch_product(ch_product(chern_character(a), chern_character(b)), _td(surface)).ch2
        assert value == direct

    check()


def _td(surface):
    return ChernCharacter(surface, 1, surface.zero(), 2 * surface.epsilon)


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_chi_is_minus_mukai_pairing_with_dual(surface):
    @given(_two_class_pairs(surface))
    def check(pair):
        a, b = pair
        assert euler_pairing(a.dual(), b) == -mukai_pairing(a, b)

    check()


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_u_map_is_additive(surface):
    ints = st.integers(-20, 20)

    @given(ints, ints, ints, ints)
    def check(l1, n1, l2, n2):
        lhs = u_map(surface, (l1 + l2,), n1 + n2)
        assert lhs == u_map(surface, (l1,), n1) + u_map(surface, (l2,), n2)

    check()


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_u_map_image_is_rcr_on_a_box(surface):
    box = range(-4, 5)
    image = {u_map(surface, (l,), n).flat() for l in box for n in box}
    assert image == {(m, d, m) for d in box for m in box}
    # and the image is the full descent lattice on the same box
    members = {
        (r, c, s) for r in box for c in box for s in box
        if perp_double_perp_member(surface, MukaiVector(surface, r, (c,), s))
    }
    assert members == image


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_hilbert_leading_coefficient(surface):
    @given(classes(surface, bound=20))
    def check(v):
        p = hilbert_polynomial(surface, v)
        assert p.coeffs[2] == Fraction(v.r * surface.ns.norm(surface.ample), 2)
        twisted = ch_product(chern_character(v), line_bundle(surface, (3,)))
        assert p(3) == ch_product(twisted, _td(surface)).ch2

    check()


@pytest.mark.parametrize("surface", SURFACES, ids=["k3", "abelian"])
def test_membership_criterion_matches_brute_force_on_box(surface):
    box = range(-3, 4)
    for r, c, s in product(box, repeat=3):
        a = MukaiVector(surface, r, (c,), s)
        assert descent_membership_criterion(surface, a) == descent_membership_brute_force(surface, a)


def test_mukai_vector_round_trip():
    for s in SURFACES:
        for r, c, t in product(range(-2, 3), repeat=3):
            v = MukaiVector(s, r, (c,), t)
            assert mukai_vector(chern_character(v)) == v
