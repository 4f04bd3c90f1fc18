import json

import pytest

from saito_workbench.arrangement import (
    Arrangement,
    FamilySpec,
    arrangement_from_dict,
    arrangement_to_dict,
    build_family,
    change_coordinates,
    check_saito_criterion,
    defining_polynomial,
    orlik_terao_basis,
)
from saito_workbench.exact_arith import (
    Polynomial,
    ScalarMatrix,
    bareiss_det,
    poly_to_str,
)
from saito_workbench.tangent_derivations import (
    Derivation,
    DerivationBasis,
    TangencyViolation,
    express_in_basis,
)

from conftest import family

X1, X2, X3 = (Polynomial.variable(3, i) for i in range(3))


class TestBuildFamily:
    def test_braid_three(self):
        _, arr, basis, _ = family("braid", 3)
        assert set(arr.forms) == {X2 - X1, X3 - X1, X3 - X2}
        assert defining_polynomial(arr) == (X2 - X1) * (X3 - X1) * (X3 - X2)

    def test_wreath_r1(self):
        _, arr, basis, _ = family("wreath", 3, 1)
        assert len(arr.forms) == 6
        q = X1 * X2 * X3 * (X2 - X1) * (X3 - X1) * (X3 - X2)
        assert defining_polynomial(arr) == q

    def test_wreath_r2_splits_over_q(self):
        _, arr, basis, _ = family("wreath", 3, 2)
        expected = {X1, X2, X3, X2 - X1, X2 + X1, X3 - X1, X3 + X1,
                    X3 - X2, X3 + X2}
        assert set(arr.forms) == expected
        q = X1 * X2 * X3 * (X2 ** 2 - X1 ** 2) * (X3 ** 2 - X1 ** 2) * (X3 ** 2 - X2 ** 2)
        assert defining_polynomial(arr) == q

    def test_wreath_r3_is_cyclotomic_with_rational_q(self):
        _, arr, basis, _ = family("wreath", 3, 3)
        assert arr.field == 3 and len(arr.forms) == 12
        q = defining_polynomial(arr)
        assert all(not isinstance(c, object) or hasattr(c, "denominator")
                   for c in q.terms.values())
        expect = X1 * X2 * X3
        for a, b in ((X2, X1), (X3, X1), (X3, X2)):
            expect = expect * (a ** 3 - b ** 3)
        assert q == expect

    def test_braid_two_defining_polynomial(self):
        spec, arr, basis, _ = family("braid", 2)
        x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        assert defining_polynomial(arr) == x2 - x1

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            FamilySpec("braid", 1)
        with pytest.raises(ValueError):
            FamilySpec("wreath", 3, 0)
        with pytest.raises(ValueError):
            FamilySpec("mystery", 3)


class TestSaitoMatrix:
    def test_wreath_displayed_matrix(self):
        _, _, basis, _ = family("wreath", 3, 2)
        m = basis.saito_matrix
        r = 2
        assert m[0] == [X1, X2, X3]
        assert m[1][0].is_zero()
        assert m[1][1] == X2 * (X2 ** r - X1 ** r)
        assert m[1][2] == X3 * (X3 ** r - X1 ** r)
        assert m[2][0].is_zero() and m[2][1].is_zero()
        assert m[2][2] == X3 * (X3 ** r - X2 ** r) * (X3 ** r - X1 ** r)

    def test_braid_two_matrix(self):
        _, _, basis, _ = family("braid", 2)
        x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        one = Polynomial.const(2, 1)
        assert basis.saito_matrix == [[one, one],
                                      [Polynomial.zero(2), x2 - x1]]

    def test_zero_derivations_zero_matrix(self):
        zero = Derivation.zero(2)
        basis = DerivationBasis([zero, zero])
        assert all(c.is_zero() for row in basis.saito_matrix for c in row)


class TestSaitoCriterion:
    @pytest.mark.parametrize("name,n,r", [
        ("braid", 2, 1), ("braid", 3, 1), ("braid", 4, 1), ("braid", 5, 1),
        ("braid_deleted", 1, 1), ("braid_deleted", 2, 1), ("braid_deleted", 3, 1),
        ("wreath", 3, 1), ("wreath", 3, 2), ("wreath", 3, 3),
    ])
    def test_families_are_free_with_scalar_one(self, name, n, r):
        _, arr, basis, _ = family(name, n, r)
        res = check_saito_criterion(arr, basis)
        assert res.free and res.scalar == 1

    def test_duplicated_row_is_not_a_basis(self):
        _, arr, basis, _ = family("wreath", 3, 1)
        broken = DerivationBasis([basis[0], basis[0], basis[2]])
        res = check_saito_criterion(arr, broken)
        assert not res.free

    def test_non_tangent_member_raises(self):
        _, arr, _, _ = family("wreath", 3, 1)
        ddx = Derivation((Polynomial.const(3, 1), Polynomial.zero(3),
                          Polynomial.zero(3)))
        e = Derivation.euler(3)
        with pytest.raises(TangencyViolation):
            check_saito_criterion(arr, DerivationBasis([ddx, e, e]))

    def test_determinant_equals_q_exactly(self):
        for name, n, r in (("braid", 4, 1), ("wreath", 3, 2)):
            _, arr, basis, _ = family(name, n, r)
            det = bareiss_det(basis.saito_matrix)
            assert det == defining_polynomial(arr)


class TestPowerBasis:
    @pytest.mark.parametrize("r", [1, 2])
    def test_symmetric_function_coefficients(self, r):
        spec, _, basis, _ = family("wreath", 3, r)
        theta = orlik_terao_basis(spec)
        # theta_2 = alpha_2 + s_1 alpha_1 with s_1 = x1^r
        g = express_in_basis(theta[1], basis)
        assert g == [X1 ** r, Polynomial.const(3, 1), Polynomial.zero(3)]
        # theta_3 = alpha_3 + (x1^r + x2^r) alpha_2 + x1^{2r} alpha_1
        g3 = express_in_basis(theta[2], basis)
        assert g3 == [X1 ** (2 * r), X2 ** r + X1 ** r, Polynomial.const(3, 1)]


class TestChangeCoordinates:
    def test_identity(self):
        _, _, basis, _ = family("braid", 3)
        T = ScalarMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        d = change_coordinates(basis[1], T)
        assert d.components == basis[1].components

    def test_braid_theta2_in_difference_coordinates(self):
        # z = x1, y_k = x_{k+1} - x1 sends theta_2 to (0, y_1, y_2)
        _, _, basis, _ = family("braid", 3)
        T = ScalarMatrix([[1, 0, 0], [-1, 1, 0], [-1, 0, 1]])
        d = change_coordinates(basis[1], T)
        assert [poly_to_str(c) for c in d.components] == ["0", "x2", "x3"]

    def test_euler_is_invariant(self):
        e = Derivation.euler(3)
        T = ScalarMatrix([[1, 2, 0], [0, 1, 5], [1, 0, 1]])
        assert change_coordinates(e, T).components == e.components

    def test_functorial(self):
        _, _, basis, _ = family("braid", 3)
        T1 = ScalarMatrix([[1, 1, 0], [0, 1, 0], [2, 0, 1]])
        T2 = ScalarMatrix([[1, 2, 0], [0, 1, 5], [1, 0, 1]])
        T21 = ScalarMatrix([[sum(T2[i, k] * T1[k, j] for k in range(3))
                             for j in range(3)] for i in range(3)])
        d = basis[2]
        lhs = change_coordinates(change_coordinates(d, T1), T2)
        assert lhs.components == change_coordinates(d, T21).components

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            change_coordinates(Derivation.euler(2), ScalarMatrix([[1, 1], [1, 1]]))


class TestJsonFormat:
    @pytest.mark.parametrize("name,n,r", [
        ("wreath", 3, 2), ("wreath", 3, 3), ("braid", 3, 1)])
    def test_roundtrip(self, name, n, r):
        _, arr, basis, _ = family(name, n, r)
        blob = json.dumps(arrangement_to_dict(arr, basis))
        arr2, basis2 = arrangement_from_dict(json.loads(blob))
        assert arr2.forms == arr.forms
        assert all(a.components == b.components
                   for a, b in zip(basis2.derivations, basis.derivations))

    def test_proportional_forms_rejected(self):
        x1 = Polynomial.variable(2, 0)
        x2 = Polynomial.variable(2, 1)
        with pytest.raises(ValueError, match="forms 1 and 3 proportional"):
            Arrangement(2, [x1, x2, x1 * 2])

    def test_forms_normalised_to_monic(self):
        x1 = Polynomial.variable(2, 0)
        x2 = Polynomial.variable(2, 1)
        arr = Arrangement(2, [2 * x2 - 2 * x1])
        assert arr.forms[0] == x2 - x1

    def test_nonlinear_form_rejected(self):
        with pytest.raises(ValueError, match="linear"):
            Arrangement(2, [Polynomial.variable(2, 0) ** 2])
