"""Central hyperplane arrangements, the three built-in families with their
canonical derivation bases, and Saito's criterion."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import (
    Cyclotomic,
    NotDivisible,
    Polynomial,
    ScalarMatrix,
    bareiss_det,
    matrix_inverse,
    poly_exact_div,
    poly_from_str,
    poly_to_str,
    zeta,
)
from .tangent_derivations import (
    Derivation,
    DerivationBasis,
    TangencyViolation,
    is_tangent,
)

FAMILIES = ("braid", "braid_deleted", "wreath")


@dataclass(frozen=True)
class FamilySpec:
    """Selector for the built-in families: the braid arrangement, its
    restriction to the hyperplane x_0 = 0 (`braid_deleted`), and the
    reflection arrangement of the wreath product of a cyclic group of order
    r with the symmetric group."""

    family: str
    n: int
    r: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r" % (self.family,))
        if self.family == "braid" and self.n < 2:
            raise ValueError("braid family needs n >= 2")
        if self.family != "braid" and self.n < 1:
            raise ValueError("family %s needs n >= 1" % self.family)
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.family != "wreath" and self.r != 1:
            raise ValueError("parameter r applies to the wreath family only")


class Arrangement:
    """A central arrangement: distinct linear forms over Q or Q(zeta_r).

    Forms are normalised so the coefficient of the highest variable present
    is 1, which fixes file round-tripping.
    """

    def __init__(self, nvars, forms, field="Q"):
        if field != "Q" and not (isinstance(field, int) and field >= 1):
            raise ValueError("field must be 'Q' or a cyclotomic order")
        self.nvars = nvars
        self.field = field
        normalised = []
        for idx, f in enumerate(forms):
            if not isinstance(f, Polynomial) or f.nvars != nvars:
                raise ValueError("form %d is not a polynomial in n variables" % (idx + 1))
            if f.is_zero() or f.total_degree() != 1 or not f.is_homogeneous():
                raise ValueError("form %d is not a nonzero linear form" % (idx + 1))
            _, lead = f.leading()
            inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
            normalised.append(f * inv)
        for i in range(len(normalised)):
            for j in range(i + 1, len(normalised)):
                if normalised[i] == normalised[j]:
                    raise ValueError("forms %d and %d proportional" % (i + 1, j + 1))
        self.forms = tuple(normalised)

    def __len__(self):
        return len(self.forms)

    @property
    def zeta_order(self):
        return None if self.field == "Q" else self.field


def defining_polynomial(arr: Arrangement) -> Polynomial:
    """Product of all forms; homogeneous of degree len(arr)."""
    q = Polynomial.const(arr.nvars, 1)
    for f in arr.forms:
        q = q * f
    return q


@dataclass(frozen=True)
class SaitoResult:
    free: bool
    scalar: object = None  # det = scalar * Q when free


def check_saito_criterion(arr: Arrangement, basis: DerivationBasis) -> SaitoResult:
    """Saito's criterion: the family is a basis of the tangent derivations
    iff det of the Saito matrix is a nonzero scalar multiple of Q."""
    for idx, d in enumerate(basis.derivations):
        if not is_tangent(arr, d):
            raise TangencyViolation("derivation %d is not tangent" % (idx + 1))
    det = bareiss_det(basis.saito_matrix)
    if det.is_zero():
        return SaitoResult(False)
    q = defining_polynomial(arr)
    try:
        quot = poly_exact_div(det, q)
    except NotDivisible:
        return SaitoResult(False)
    if not quot.is_constant():
        return SaitoResult(False)
    return SaitoResult(True, quot.constant_value())


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------

def _braid_forms(n):
    x = [Polynomial.variable(n, i) for i in range(n)]
    return [x[j] - x[i] for i in range(n) for j in range(i + 1, n)]


def _braid_basis(n):
    x = [Polynomial.variable(n, i) for i in range(n)]
    ders = []
    for i in range(n):
        comps = []
        for k in range(n):
            p = Polynomial.const(n, 1)
            for j in range(i):
                p = p * (x[k] - x[j])
            comps.append(p)
        ders.append(Derivation(tuple(comps)))
    return DerivationBasis(ders)


def _wreath_forms(n, r):
    x = [Polynomial.variable(n, i) for i in range(n)]
    forms = list(x)
    if r == 1:
        forms += [x[j] - x[i] for i in range(n) for j in range(i + 1, n)]
    elif r == 2:
        for i in range(n):
            for j in range(i + 1, n):
                forms += [x[j] - x[i], x[j] + x[i]]
    else:
        z = zeta(r)
        for i in range(n):
            for j in range(i + 1, n):
                forms += [x[j] - (z ** m) * x[i] for m in range(r)]
    return forms


def _wreath_basis(n, r):
    x = [Polynomial.variable(n, i) for i in range(n)]
    ders = []
    for m in range(n):
        comps = []
        for k in range(n):
            p = x[k]
            for i in range(m):
                p = p * (x[k] ** r - x[i] ** r)
            comps.append(p)
        ders.append(Derivation(tuple(comps)))
    return DerivationBasis(ders)


def build_family(spec: FamilySpec):
    """The arrangement and its canonical triangular basis.

    Wreath arrangements with r >= 3 list their forms over Q(zeta_r); the
    defining polynomial still has rational coefficients.
    """
    if spec.family == "braid":
        return Arrangement(spec.n, _braid_forms(spec.n)), _braid_basis(spec.n)
    if spec.family == "braid_deleted":
        return Arrangement(spec.n, _wreath_forms(spec.n, 1)), _wreath_basis(spec.n, 1)
    field = "Q" if spec.r <= 2 else spec.r
    return (Arrangement(spec.n, _wreath_forms(spec.n, spec.r), field),
            _wreath_basis(spec.n, spec.r))


def orlik_terao_basis(spec: FamilySpec) -> DerivationBasis:
    """The power basis theta_m(x_k) = x_k^((m-1)r + 1) of the wreath family
    (r = 1 for the restricted braid arrangement)."""
    if spec.family == "braid":
        raise ValueError("power basis exists for the wreath-type families only")
    n, r = spec.n, (spec.r if spec.family == "wreath" else 1)
    x = [Polynomial.variable(n, i) for i in range(n)]
    return DerivationBasis([
        Derivation(tuple(x[k] ** ((m * r) + 1) for k in range(n)))
        for m in range(n)
    ])


def change_coordinates(d: Derivation, T: ScalarMatrix) -> Derivation:
    """Transport a derivation through the linear change y = T x.

    The result d' satisfies d'(g) = d(g o T) o T^{-1}; its components are
    d'(y_i) = (sum_j T_ij d(x_j)) with x substituted by T^{-1} y.
    """
    n = d.nvars
    if T.nrows != n or T.ncols != n:
        raise ValueError("T must be n x n")
    Tinv = matrix_inverse(T)  # raises on singular T
    images = []
    for j in range(n):
        p = Polynomial.zero(n)
        for k in range(n):
            c = Tinv[j, k]
            if c:
                p = p + Polynomial.variable(n, k) * c
        images.append(p)
    comps = []
    for i in range(n):
        acc = Polynomial.zero(n)
        for j in range(n):
            c = T[i, j]
            if c:
                acc = acc + d.components[j] * c
        comps.append(acc.substitute(images))
    return Derivation(tuple(comps))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def _scalar_to_str(c):
    return poly_to_str(Polynomial.const(0, c))


def _scalar_from_str(s, r):
    return poly_from_str(s, 0, r=r).constant_value()


def arrangement_to_dict(arr: Arrangement, basis: DerivationBasis | None = None) -> dict:
    field = "Q" if arr.field == "Q" else {"cyclotomic": arr.field}
    forms = [[_scalar_to_str(f.coefficient(tuple(1 if k == i else 0 for k in range(arr.nvars))))
              for i in range(arr.nvars)] for f in arr.forms]
    out = {"n": arr.nvars, "field": field, "forms": forms}
    if basis is not None:
        out["basis"] = [[poly_to_str(c) for c in d.components] for d in basis.derivations]
    return out


def arrangement_from_dict(data: dict):
    """Parse the JSON arrangement format; returns (arrangement, basis|None)."""
    n = data["n"]
    field = data.get("field", "Q")
    if field == "Q":
        r = None
        field_tag = "Q"
    else:
        r = int(field["cyclotomic"])
        field_tag = "Q" if r <= 2 else r
    forms = []
    for coeffs in data["forms"]:
        if len(coeffs) != n:
            raise ValueError("each form needs %d coefficients" % n)
        p = Polynomial.zero(n)
        for i, s in enumerate(coeffs):
            p = p + Polynomial.variable(n, i) * _scalar_from_str(str(s), r)
        forms.append(p)
    arr = Arrangement(n, forms, field_tag)
    basis = None
    if "basis" in data:
        ders = [Derivation(tuple(poly_from_str(s, n, r=r) for s in row))
                for row in data["basis"]]
        basis = DerivationBasis(ders)
    return arr, basis


def load_arrangement(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return arrangement_from_dict(json.load(fh))


def save_arrangement(path: str, arr: Arrangement, basis=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(arrangement_to_dict(arr, basis), fh, indent=2)
        fh.write("\n")
