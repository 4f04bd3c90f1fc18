import random

import pytest

from saito_workbench.exact_arith import Polynomial, poly_gcd
from saito_workbench.tangent_derivations import (
    Derivation,
    DerivationBasis,
    NotInModule,
    OrthogonalFamily,
    bezout_minor,
    bracket,
    build_orthogonal_family,
    check_bezout,
    check_orthogonality,
    check_triangularizable,
    express_in_basis,
    is_tangent,
    structure_constants,
)

from conftest import SEED, family, rand_poly

X1, X2, X3 = (Polynomial.variable(3, i) for i in range(3))


def rand_tangent(basis, rng):
    """Random element of the S-span of a tangent basis."""
    d = Derivation.zero(basis.nvars)
    for b in basis.derivations:
        d = d + rand_poly(basis.nvars, 2, rng, 2) * b
    return d


class TestApply:
    def test_euler_scales_by_degree(self):
        e = Derivation.euler(3)
        assert e.apply(X1 ** 2 * X2) == 3 * X1 ** 2 * X2

    def test_wreath_matrix_entry(self):
        _, _, basis, _ = family("wreath", 3, 1)
        assert basis[1].apply(X3) == X3 * (X3 - X1)

    def test_kills_constants(self):
        _, _, basis, _ = family("wreath", 3, 2)
        one = Polynomial.const(3, 1)
        assert all(d.apply(one).is_zero() for d in basis.derivations)


class TestTangency:
    def test_family_members_are_tangent(self):
        _, arr, basis, _ = family("wreath", 3, 1)
        assert all(is_tangent(arr, d) for d in basis.derivations)

    def test_plain_partial_is_not(self):
        _, arr, _, _ = family("wreath", 3, 1)
        ddx = Derivation((Polynomial.const(3, 1), Polynomial.zero(3),
                          Polynomial.zero(3)))
        assert not is_tangent(arr, ddx)

    def test_zero_is_tangent(self):
        _, arr, _, _ = family("braid", 4)
        assert is_tangent(arr, Derivation.zero(4))

    def test_closure_under_bracket_and_module_action(self):
        rng = random.Random(SEED + 10)
        for r in (1, 2):
            _, arr, basis, _ = family("wreath", 3, r)
            for _ in range(10):
                a, b = rand_tangent(basis, rng), rand_tangent(basis, rng)
                f = rand_poly(3, 2, rng, 2)
                assert is_tangent(arr, bracket(a, b))
                assert is_tangent(arr, f * a)


class TestBracket:
    def test_self_bracket_vanishes(self):
        e = Derivation.euler(3)
        assert bracket(e, e).is_zero()

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_euler_bracket_scalar_computed_from_data(self, r):
        # the scalar on [E, D] is determined by homogeneity: weight of D
        _, _, basis, _ = family("wreath", 3, r)
        E, D = basis[0], basis[1]
        br = bracket(E, D)
        coeffs = express_in_basis(br, basis)
        assert coeffs == [Polynomial.zero(3), Polynomial.const(3, r),
                          Polynomial.zero(3)]
        # operator-action oracle on monomials up to degree 2r + 3
        rng = random.Random(SEED + r)
        for _ in range(30):
            f = rand_poly(3, 2 * r + 3, rng)
            assert br.apply(f) == E.apply(D.apply(f)) - D.apply(E.apply(f))

    def test_dc_bracket_lands_in_span(self):
        _, _, basis, _ = family("wreath", 3, 1)
        br = bracket(basis[1], basis[2])
        coeffs = express_in_basis(br, basis)
        assert coeffs[0].is_zero() and coeffs[1].is_zero()
        assert coeffs[2] == X3 + X2 - X1

    def test_jacobi_random(self):
        rng = random.Random(SEED + 11)
        _, _, basis, _ = family("wreath", 3, 1)
        for _ in range(10):
            a, b, c = (rand_tangent(basis, rng) for _ in range(3))
            jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) \
                + bracket(c, bracket(a, b))
            assert jac.is_zero()


class TestExpressInBasis:
    def test_basis_member(self):
        _, _, basis, _ = family("wreath", 3, 1)
        g = express_in_basis(basis[1], basis)
        assert g == [Polynomial.zero(3), Polynomial.const(3, 1), Polynomial.zero(3)]

    @pytest.mark.parametrize("r", [1, 2])
    def test_power_derivation(self, r):
        _, _, basis, _ = family("wreath", 3, r)
        theta2 = Derivation((X1 ** (r + 1), X2 ** (r + 1), X3 ** (r + 1)))
        g = express_in_basis(theta2, basis)
        assert g == [X1 ** r, Polynomial.const(3, 1), Polynomial.zero(3)]

    def test_not_in_module(self):
        _, _, basis, _ = family("wreath", 3, 1)
        ddx = Derivation((Polynomial.const(3, 1), Polynomial.zero(3),
                          Polynomial.zero(3)))
        with pytest.raises(NotInModule):
            express_in_basis(ddx, basis)

    def test_roundtrip(self):
        rng = random.Random(SEED + 12)
        _, _, basis, _ = family("wreath", 3, 2)
        for _ in range(15):
            d = rand_tangent(basis, rng)
            g = express_in_basis(d, basis)
            back = Derivation.zero(3)
            for c, b in zip(g, basis.derivations):
                back = back + c * b
            assert back.components == d.components


class TestConditions:
    @pytest.mark.parametrize("name,n,r", [
        ("wreath", 3, 1), ("wreath", 3, 2), ("wreath", 3, 3),
        ("braid", 3, 1), ("braid", 4, 1), ("braid_deleted", 2, 1)])
    def test_triangular_families(self, name, n, r):
        _, _, basis, _ = family(name, n, r)
        assert check_triangularizable(basis)

    def test_broken_triangularity(self):
        _, _, basis, _ = family("wreath", 3, 1)
        bad = DerivationBasis([basis[0],
                               Derivation((X1, X2 * (X2 - X1), X3 * (X3 - X1))),
                               basis[2]])
        assert not check_triangularizable(bad)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_bezout_minor_for_wreath(self, r):
        _, _, basis, _ = family("wreath", 3, r)
        assert bezout_minor(basis, 1) == X2 * X3 * (X3 ** r - X2 ** r)
        assert check_bezout(basis)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_bezout_braid(self, n):
        _, _, basis, _ = family("braid", n)
        assert check_bezout(basis)

    def test_bezout_counterexample(self):
        # diagonal (x1, x1, x3): the k = 1 minor degenerates
        d1 = Derivation((X1, Polynomial.zero(3), Polynomial.zero(3)))
        d2 = Derivation((Polynomial.zero(3), X1, Polynomial.zero(3)))
        d3 = Derivation((Polynomial.zero(3), Polynomial.zero(3), X3))
        basis = DerivationBasis([d1, d2, d3])
        assert check_triangularizable(basis)
        assert not check_bezout(basis)


class TestOrthogonality:
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_wreath_family(self, r):
        _, _, basis, fam = family("wreath", 3, r)
        assert check_orthogonality(basis, fam)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_braid_family(self, n):
        _, _, basis, fam = family("braid", n)
        assert check_orthogonality(basis, fam)

    def test_explicit_coefficients(self):
        spec, _, basis, fam = family("wreath", 3, 1)
        # u_2 = alpha_3 - (x3 - x2) alpha_2
        assert fam.coefficients[1] == (Polynomial.zero(3), -(X3 - X2))
        spec2, _, basis2, fam2 = family("wreath", 3, 2)
        assert fam2.coefficients[1] == (Polynomial.zero(3), -(X3 ** 2 - X2 ** 2))

    def test_braid_two_family(self):
        _, _, basis, fam = family("braid", 2)
        x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        assert fam.coefficients[0] == (-(x2 - x1),)
        assert fam.coefficients[1] == (Polynomial.zero(2),)

    def test_constant_family_fails(self):
        _, _, basis, _ = family("wreath", 3, 1)
        zero = Polynomial.zero(3)
        bogus = OrthogonalFamily(((zero, zero),) * 3)  # u_k = alpha_3 always
        assert not check_orthogonality(basis, bogus)


class TestStructureConstants:
    def test_table_and_antisymmetry(self):
        _, _, basis, _ = family("wreath", 3, 2)
        table = structure_constants(basis)
        assert set(table) == {(0, 1), (0, 2), (1, 2)}
        c12 = basis.structure_constants(0, 1)
        assert c12 == (Polynomial.zero(3), Polynomial.const(3, 2), Polynomial.zero(3))
        c21 = basis.structure_constants(1, 0)
        assert c21 == tuple(-c for c in c12)
        cii = basis.structure_constants(1, 1)
        assert all(c.is_zero() for c in cii)


class TestWeights:
    def test_family_weights(self):
        _, _, b1, _ = family("wreath", 3, 2)
        assert b1.weights == (0, 2, 4)
        _, _, b2, _ = family("braid", 4)
        assert b2.weights == (-1, 0, 1, 2)

    def test_bracket_weight_additivity(self):
        rng = random.Random(SEED + 13)
        _, _, basis, _ = family("wreath", 3, 1)
        for i in range(3):
            for j in range(3):
                br = bracket(basis[i], basis[j])
                if not br.is_zero():
                    assert br.weight() == basis[i].weight() + basis[j].weight()
