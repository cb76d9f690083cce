"""Clifford algebras, the induced involution, and the invariant suite."""

import itertools
import random

import pytest

import wallforms as wf
from wallforms.clifford import alt_membership, sym_alt_dimensions
from wallforms.errors import (
    CharacteristicNot2,
    CriterionFails,
    NotInterchange,
    NotScalarSquare,
    NotSymmetric,
    ResidualNotFixed,
    UnsupportedField,
    ZeroSquare,
)
from wallforms.linalg import Matrix


@pytest.fixture(scope="module")
def alg_h4f2(h4f2):
    return wf.algebra_for_space(h4f2)


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------

def test_generator_squares(alg_h4f2, r2t, ft):
    # e_i^2 = q(e_i)
    for i in range(4):
        e = alg_h4f2.basis_blade(1 << i)
        assert (e * e).is_zero()  # q vanishes on the hyperbolic basis
    alg = wf.algebra_for_space(r2t)
    u = alg.basis_blade(1)
    assert u * u == alg.scalar(ft.t)


def test_one_is_identity(alg_h4f2):
    one = alg_h4f2.one()
    for blade in range(alg_h4f2.dim):
        b = alg_h4f2.basis_blade(blade)
        assert one * b == b
        assert b * one == b


def test_orthogonal_generators_commute(alg_h4f2):
    e1 = alg_h4f2.basis_blade(0b0001)
    e3 = alg_h4f2.basis_blade(0b0100)
    assert e3 * e1 == alg_h4f2.basis_blade(0b0101)  # b(e1, e3) = 0


def test_paired_generators_anticommute_with_unit(alg_h4f2, f2):
    e1 = alg_h4f2.basis_blade(0b0001)
    e2 = alg_h4f2.basis_blade(0b0010)
    # e2 e1 = e1 e2 + b(e1, e2) = e1 e2 + 1
    assert e2 * e1 == alg_h4f2.basis_blade(0b0011) + alg_h4f2.one()


def test_associativity_all_blade_triples(alg_h4f2):
    blades = [alg_h4f2.basis_blade(b) for b in range(alg_h4f2.dim)]
    for a, b, c in itertools.product(blades, repeat=3):
        assert (a * b) * c == a * (b * c)


def test_associativity_random_six_dim(f2, h4f2):
    plane = wf.QuadraticSpace.hyperbolic(f2, 1)
    big = h4f2.orthogonal_sum(plane)
    alg = wf.algebra_for_space(big)
    rng = random.Random(53)
    for _ in range(10_000):
        a, b, c = (alg.basis_blade(rng.randrange(alg.dim)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_center_is_scalars(alg_h4f2, r2t, r4t):
    assert alg_h4f2.center_dimension() == 1
    assert wf.algebra_for_space(r2t).center_dimension() == 1
    assert wf.algebra_for_space(r4t).center_dimension() == 1


def test_inverse(alg_h4f2):
    g = alg_h4f2.one() + alg_h4f2.basis_blade(0b0101)
    inv = alg_h4f2.inverse(g)
    assert g * inv == alg_h4f2.one()
    assert inv * g == alg_h4f2.one()


def test_characteristic_two_required(gf7_plane_sum):
    with pytest.raises(CharacteristicNot2):
        wf.CliffordAlgebra.from_space(gf7_plane_sum)


# ---------------------------------------------------------------------------
# the induced involution
# ---------------------------------------------------------------------------

def test_reversal_on_paired_blade(h4f2, alg_h4f2):
    j = wf.natural_involution(wf.identity_isometry(h4f2), alg_h4f2)
    # J(e1 e2) = e2 e1 = e1 e2 + 1
    img = j.apply(alg_h4f2.basis_blade(0b0011))
    assert img == alg_h4f2.basis_blade(0b0011) + alg_h4f2.one()


def test_involution_extends_tau(h4f2, tau_int, alg_h4f2):
    j = wf.natural_involution(tau_int, alg_h4f2)
    rng = random.Random(59)
    elems = list(h4f2.field.elements())
    for _ in range(100):
        v = tuple(rng.choice(elems) for _ in range(4))
        assert j.apply(alg_h4f2.vector(v)) == alg_h4f2.vector(tau_int.apply(v))
    # J(e2) = tau(e2) = e2 + e3
    assert j.apply(alg_h4f2.basis_blade(0b0010)) == alg_h4f2.vector(
        tau_int.apply(h4f2.basis_vector(1)))


def test_involution_squares_to_identity(h4f2, tau_int, alg_h4f2):
    j = wf.natural_involution(tau_int, alg_h4f2)
    ident = Matrix.identity(alg_h4f2.field, alg_h4f2.dim)
    assert j.matrix * j.matrix == ident


def test_involution_antimultiplicative_all_pairs(h4f2, tau_int, alg_h4f2):
    j = wf.natural_involution(tau_int, alg_h4f2)
    blades = [alg_h4f2.basis_blade(b) for b in range(alg_h4f2.dim)]
    for a, b in itertools.product(blades, repeat=2):
        assert j.apply(a * b) == j.apply(b) * j.apply(a)


def test_sym_alt_dimensions(h4f2, tau_int, alg_h4f2):
    j = wf.natural_involution(tau_int, alg_h4f2)
    sym, alt = sym_alt_dimensions(j)
    assert sym + alt == alg_h4f2.dim
    # Alt subset of Sym in characteristic 2
    op = Matrix.identity(alg_h4f2.field, alg_h4f2.dim) + j.matrix
    for col in range(alg_h4f2.dim):
        image = alg_h4f2.from_coeff_vector(op.col(col))
        assert j.apply(image) == image


def test_involution_type_examples(h4f2, tau_int, tau_r2t, alg_h4f2):
    assert wf.involution_type(wf.natural_involution(tau_int, alg_h4f2)) == "orthogonal"
    # identity: r = 0 != k, so 1 = (1 + J)(e1 e2) lies in Alt
    j_id = wf.natural_involution(wf.identity_isometry(h4f2), alg_h4f2)
    assert wf.involution_type(j_id) == "symplectic"
    assert wf.involution_type(wf.natural_involution(tau_r2t)) == "orthogonal"


def test_alt_membership_witness(h4f2, alg_h4f2):
    j_id = wf.natural_involution(wf.identity_isometry(h4f2), alg_h4f2)
    witness = alt_membership(j_id, alg_h4f2.one())
    assert witness is not None
    assert witness + j_id.apply(witness) == alg_h4f2.one()


# ---------------------------------------------------------------------------
# the commutative residual subalgebra
# ---------------------------------------------------------------------------

def test_phi_interchange(tau_int, alg_h4f2, f2):
    phi = wf.phi_subalgebra(tau_int)
    assert phi.dim == 4
    # spanned by 1, e1, e3, e1 e3 with all generator squares zero
    assert phi.generator_squares == (f2.zero, f2.zero)
    blades = {frozenset(m.coeffs) for m in phi.monomials}
    assert blades == {frozenset([0]), frozenset([0b0001]),
                      frozenset([0b0100]), frozenset([0b0101])}


def test_phi_r2t(tau_r2t, ft):
    phi = wf.phi_subalgebra(tau_r2t)
    assert phi.dim == 2
    assert phi.generator_squares == (ft.t,)


def test_phi_r4t(tau_r4t, ft):
    phi = wf.phi_subalgebra(tau_r4t)
    assert phi.dim == 4
    assert phi.generator_squares == (ft.t, ft.t)


def test_phi_requires_residual_fixed(h4f2):
    with pytest.raises(ResidualNotFixed):
        wf.phi_subalgebra(wf.identity_isometry(h4f2))


# ---------------------------------------------------------------------------
# alternating generators
# ---------------------------------------------------------------------------

def test_alternating_generators_r2t(r2t, tau_r2t):
    report = wf.alternating_generators_check(tau_r2t, (r2t.basis_vector(0),))
    assert report.ok
    w = report.explicit_witnesses[0]
    j = wf.natural_involution(tau_r2t)
    alg = wf.algebra_for_space(r2t)
    assert w + j.apply(w) == alg.vector(r2t.basis_vector(0))


def test_alternating_generators_r4t_products(r4t, tau_r4t):
    basis = (r4t.basis_vector(0), r4t.basis_vector(2))
    report = wf.alternating_generators_check(tau_r4t, basis)
    assert report.ok
    assert len(report.explicit_witnesses) == 3  # u1, u2, u1 u2
    assert len(report.solved_witnesses) == 3


def test_alternating_generators_zero_square(tau_int, h4f2):
    with pytest.raises(ZeroSquare):
        wf.alternating_generators_check(
            tau_int, (h4f2.basis_vector(0), h4f2.basis_vector(2)))


# ---------------------------------------------------------------------------
# Pfister data
# ---------------------------------------------------------------------------

def test_pfister_interchange_all_ones(tau_int, f2):
    pf = wf.pfister_invariant(tau_int)
    assert pf.generators == (f2.one, f2.one)
    assert pf.square_flags == (True, True)


def test_pfister_r2t(tau_r2t, ft):
    pf = wf.pfister_invariant(tau_r2t)
    assert pf.generators == (ft.t,)
    assert pf.square_flags == (False,)


def test_pfister_r4t(tau_r4t, ft):
    pf = wf.pfister_invariant(tau_r4t)
    assert pf.generators == (ft.t, ft.t)


def test_pfister_structural_equality(ft, tau_r4t):
    pf = wf.pfister_invariant(tau_r4t)
    t = ft.t
    # t and t^3 lie in the same square class (t^3 = t * (t)^2)
    other = wf.PfisterDescriptor(ft, (t * t * t, t), (False, False))
    assert pf == other
    different = wf.PfisterDescriptor(ft, (t, ft.one), (False, True))
    assert pf != different


# ---------------------------------------------------------------------------
# transpose criterion and the explicit matrix model
# ---------------------------------------------------------------------------

def test_criterion_interchange_holds(tau_int):
    crit = wf.transpose_iso_criterion(tau_int)
    assert crit.holds and crit.structure == "alternating"


def test_criterion_r2t_fails(tau_r2t):
    crit = wf.transpose_iso_criterion(tau_r2t)
    assert not crit.holds
    assert crit.structure == "fails"


def test_criterion_r2t_unit_variant_holds(ft):
    # same plane with q(u) = 1 instead of t: the reflection has a trivial
    # spinor norm, so the criterion holds
    space = wf.QuadraticSpace.from_q_upper(
        ft, wf.Matrix(ft, [[ft.one, ft.one], [ft.zero, ft.zero]]))
    tau = wf.reflection(space, space.basis_vector(0))
    crit = wf.transpose_iso_criterion(tau)
    assert crit.holds and crit.structure == "unit-diagonal"
    with pytest.raises(UnsupportedField):
        wf.explicit_matrix_iso(tau)


def test_criterion_r4t_fails(tau_r4t):
    assert not wf.transpose_iso_criterion(tau_r4t).holds


def test_explicit_iso_interchange(h4f2, tau_int, alg_h4f2):
    iso = wf.explicit_matrix_iso(tau_int)
    assert iso.size == 4
    # construction is self-verifying; re-check a few identities here
    j = wf.natural_involution(tau_int, alg_h4f2)
    for blade in range(alg_h4f2.dim):
        elt = alg_h4f2.basis_blade(blade)
        assert iso.apply(j.apply(elt)) == iso.apply(elt).transpose()
    for s in range(alg_h4f2.dim):
        for t in range(alg_h4f2.dim):
            a, b = alg_h4f2.basis_blade(s), alg_h4f2.basis_blade(t)
            assert iso.apply(a * b) == iso.apply(a) * iso.apply(b)


def test_explicit_iso_gf4_reflection(f4):
    space = wf.QuadraticSpace.from_q_upper(
        f4, wf.Matrix(f4, [[f4.one, f4.one], [f4.zero, f4.zero]]))
    tau = wf.reflection(space, space.basis_vector(0))
    iso = wf.explicit_matrix_iso(tau)
    assert iso.size == 2
    alg = wf.algebra_for_space(space)
    flat = Matrix(f4, [
        [img[r, c] for r in range(2) for c in range(2)]
        for img in iso.blade_images
    ])
    assert flat.rank() == 4  # bijective onto M_2(GF(4))


def test_explicit_iso_r2t_criterion_fails(tau_r2t):
    with pytest.raises(CriterionFails):
        wf.explicit_matrix_iso(tau_r2t)


# ---------------------------------------------------------------------------
# conjugating elements
# ---------------------------------------------------------------------------

def test_goldman_frame_element(h4f2, tau_int, alg_h4f2, f2):
    g = wf.goldman_element(tau_int, "frame")
    # normalized frame (e1, e2, e3, e4): g = 1 + w x = 1 + e3 e1 = 1 + e1 e3
    assert g == alg_h4f2.one() + alg_h4f2.basis_blade(0b0101)
    g_inv = alg_h4f2.inverse(g)
    for i in range(4):
        v = alg_h4f2.vector(h4f2.basis_vector(i))
        assert g * v * g_inv == alg_h4f2.vector(tau_int.apply(h4f2.basis_vector(i)))


def test_goldman_swap_plane(h4f2, tau_int, alg_h4f2):
    g = wf.goldman_element(tau_int, "swap-plane")
    g_inv = alg_h4f2.inverse(g)
    for i in range(4):
        v = alg_h4f2.vector(h4f2.basis_vector(i))
        assert g * v * g_inv == alg_h4f2.vector(tau_int.apply(h4f2.basis_vector(i)))


def test_goldman_gf4_conjugates(h4f4, f4):
    e = h4f4.basis_vector
    tau = wf.eichler(h4f4, e(0), e(2))
    assert tau.is_interchange()
    for construction in ("frame", "swap-plane"):
        g = wf.goldman_element(tau, construction)
        alg = wf.algebra_for_space(h4f4)
        g_inv = alg.inverse(g)
        for i in range(4):
            v = alg.vector(e(i))
            assert g * v * g_inv == alg.vector(tau.apply(e(i)))


def test_goldman_rejects_non_interchange(h4f2):
    with pytest.raises(NotInterchange):
        wf.goldman_element(wf.identity_isometry(h4f2))


# ---------------------------------------------------------------------------
# tensor factorization
# ---------------------------------------------------------------------------

def test_tensor_witness_interchange_plus_identity(f2, h4f2, tau_int):
    plane = wf.QuadraticSpace.hyperbolic(f2, 1)
    big = h4f2.orthogonal_sum(plane)
    mat = [[tau_int.mat[i, j] for j in range(4)] + [f2.zero] * 2 for i in range(4)]
    mat += [[f2.zero] * 4 + [f2.one, f2.zero], [f2.zero] * 4 + [f2.zero, f2.one]]
    tau = wf.Isometry(big, wf.Matrix(f2, mat))
    witness = wf.tensor_decomposition_witness(tau)
    kinds = sorted(f.kind for f in witness.factors)
    assert kinds == ["identity-plane", "interchange"]


def test_tensor_witness_r4t(tau_r4t):
    witness = wf.tensor_decomposition_witness(tau_r4t)
    assert [f.kind for f in witness.factors] == ["reflection", "reflection"]


def test_tensor_witness_identity_plane(f2):
    plane = wf.QuadraticSpace.hyperbolic(f2, 1)
    witness = wf.tensor_decomposition_witness(wf.identity_isometry(plane))
    assert [f.kind for f in witness.factors] == ["identity-plane"]


# ---------------------------------------------------------------------------
# symmetric matrices with scalar square
# ---------------------------------------------------------------------------

def test_square_scalar_identity(f2):
    assert wf.square_scalar_check(Matrix.identity(f2, 2), f2.one)


def test_square_scalar_exhaustive_gf4(f4):
    elems = list(f4.elements())
    checked = 0
    for diag1, diag2, off in itertools.product(elems, repeat=3):
        x = Matrix(f4, [[diag1, off], [off, diag2]])
        sq = x * x
        c = sq[0, 0]
        if sq != Matrix.identity(f4, 2).scale(c):
            continue
        checked += 1
        assert wf.square_scalar_check(x, c)
    assert checked > 0


def test_square_scalar_rejects_asymmetric(f2):
    x = Matrix.from_ints(f2, [[0, 1], [0, 0]])
    with pytest.raises(NotSymmetric):
        wf.square_scalar_check(x, f2.zero)


def test_square_scalar_rejects_nonscalar(f4):
    w = f4.parse("w")
    x = Matrix(f4, [[w, f4.zero], [f4.zero, f4.one]])
    with pytest.raises(NotScalarSquare):
        wf.square_scalar_check(x, f4.one)


def test_involution_antimultiplicative_six_dim(f2, h4f2, tau_int):
    plane = wf.QuadraticSpace.hyperbolic(f2, 1)
    big = h4f2.orthogonal_sum(plane)
    mat = [[tau_int.mat[i, j] for j in range(4)] + [f2.zero] * 2 for i in range(4)]
    mat += [[f2.zero] * 4 + [f2.one, f2.zero], [f2.zero] * 4 + [f2.zero, f2.one]]
    tau = wf.Isometry(big, wf.Matrix(f2, mat))
    alg = wf.algebra_for_space(big)
    j = wf.natural_involution(tau, alg)
    for a_bits in range(alg.dim):
        for b_bits in range(alg.dim):
            a, b = alg.basis_blade(a_bits), alg.basis_blade(b_bits)
            assert j.apply(a * b) == j.apply(b) * j.apply(a)


def test_six_dim_three_reflection_model(f2):
    # three orthogonal anisotropic vectors: residual form <1,1,1>, model M_8
    space = wf.QuadraticSpace.hyperbolic(f2, 3)
    vecs = [(1, 1, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 1, 1)]
    us = [tuple(f2.from_int(c) for c in v) for v in vecs]
    tau = wf.identity_isometry(space)
    for u in us:
        tau = tau * wf.reflection(space, u)
    assert tau.residual_space() == tau.fixed_space()
    pf = wf.pfister_invariant(tau)
    assert pf.generators == (f2.one,) * 3
    iso = wf.explicit_matrix_iso(tau)
    assert iso.size == 8
    witness = wf.tensor_decomposition_witness(tau)
    assert [f.kind for f in witness.factors] == ["reflection"] * 3
    report = wf.alternating_generators_check(tau, wf.wall_form(tau).basis)
    assert report.ok
    assert len(report.explicit_witnesses) == 7
