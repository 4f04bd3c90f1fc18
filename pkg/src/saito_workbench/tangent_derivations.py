"""Derivations of the polynomial ring, tangency, brackets, and the three
structural conditions on a basis (triangularity, Bezout, orthogonality)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import (
    NotDivisible,
    Polynomial,
    bareiss_det,
    poly_exact_div,
    poly_gcd,
)


class TangencyViolation(Exception):
    """A claimed tangent derivation fails the divisibility test."""


class NotInModule(Exception):
    """A derivation is not an S-combination of the given basis."""


@dataclass(frozen=True)
class Derivation:
    """A derivation sum c_i d/dx_i of S = k[x_1..x_n], as its component
    vector (c_1, ..., c_n)."""

    components: tuple

    def __post_init__(self):
        n = len(self.components)
        for c in self.components:
            if not isinstance(c, Polynomial) or c.nvars != n:
                raise ValueError("components must be polynomials in n variables")

    @property
    def nvars(self):
        return len(self.components)

    @classmethod
    def zero(cls, nvars):
        return cls(tuple(Polynomial.zero(nvars) for _ in range(nvars)))

    @classmethod
    def euler(cls, nvars):
        return cls(tuple(Polynomial.variable(nvars, i) for i in range(nvars)))

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def apply(self, f: Polynomial) -> Polynomial:
        if f.nvars != self.nvars:
            raise ValueError("ambient variable counts differ")
        out = Polynomial.zero(self.nvars)
        for i, c in enumerate(self.components):
            if c:
                out = out + c * f.derivative(i)
        return out

    def __call__(self, f):
        return self.apply(f)

    def __add__(self, other):
        return Derivation(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return Derivation(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return Derivation(tuple(-a for a in self.components))

    def __rmul__(self, f):
        """Module action f * d for f in S (or a scalar)."""
        return Derivation(tuple(f * c for c in self.components))

    def weight(self):
        """Common value of deg d(x_k) - 1 over nonzero components, or None
        when the components are not homogeneous of one degree."""
        degs = set()
        for c in self.components:
            if c.is_zero():
                continue
            if not c.is_homogeneous():
                return None
            degs.add(c.total_degree())
        if len(degs) > 1:
            return None
        if not degs:
            return None  # zero derivation carries no weight
        return degs.pop() - 1


def apply(d: Derivation, f: Polynomial) -> Polynomial:
    return d.apply(f)


def bracket(a: Derivation, b: Derivation) -> Derivation:
    """Lie bracket, componentwise a(b(x_k)) - b(a(x_k))."""
    if a.nvars != b.nvars:
        raise ValueError("ambient variable counts differ")
    return Derivation(tuple(a.apply(bc) - b.apply(ac)
                            for ac, bc in zip(a.components, b.components)))


def is_tangent(arr, d: Derivation) -> bool:
    """True iff every linear form of the arrangement divides its image."""
    for lam in arr.forms:
        try:
            poly_exact_div(d.apply(lam), lam)
        except NotDivisible:
            return False
    return True


class DerivationBasis:
    """An ordered family (alpha_1, ..., alpha_n) of derivations, with the
    cached Saito matrix, weights, and structure constants.

    Instances compare by identity; caches live on the instance.
    """

    def __init__(self, derivations):
        derivations = tuple(derivations)
        if not derivations:
            raise ValueError("empty basis")
        n = derivations[0].nvars
        if len(derivations) != n:
            raise ValueError("basis size must equal the number of variables")
        self.derivations = derivations
        self.nvars = n
        self._saito = None
        self._constants = {}

    def __len__(self):
        return self.nvars

    def __getitem__(self, i):
        return self.derivations[i]

    @property
    def saito_matrix(self):
        """Rows are basis derivations, columns variables: entry (i, k) is
        alpha_{i+1}(x_{k+1})."""
        if self._saito is None:
            self._saito = [list(d.components) for d in self.derivations]
        return self._saito

    @property
    def weights(self):
        return tuple(d.weight() for d in self.derivations)

    def is_triangular(self):
        return check_triangularizable(self)

    def structure_constants(self, i, j):
        """Coefficients (c_1, ..., c_n) in S with [alpha_{i+1}, alpha_{j+1}]
        = sum_k c_k alpha_{k+1}.  Raises NotInModule if the basis is not
        bracket closed (a data error)."""
        if i == j:
            zero = Polynomial.zero(self.nvars)
            return tuple(zero for _ in range(self.nvars))
        if (i, j) not in self._constants:
            if (j, i) in self._constants:
                self._constants[(i, j)] = tuple(-c for c in self._constants[(j, i)])
            else:
                br = bracket(self.derivations[i], self.derivations[j])
                self._constants[(i, j)] = tuple(express_in_basis(br, self))
        return self._constants[(i, j)]


def saito_matrix(basis: DerivationBasis):
    return basis.saito_matrix


def express_in_basis(d: Derivation, basis: DerivationBasis):
    """Solve d = sum g_i alpha_i against a triangular basis.

    The Saito matrix is upper triangular, so the components x_1, x_2, ...
    determine g_1, g_2, ... in turn by one exact division each; a failed
    division signals that d is not in the S-span.
    """
    if not check_triangularizable(basis):
        raise ValueError("basis is not triangular")
    n = basis.nvars
    g = []
    for i in range(n):
        rhs = d.components[i]
        for j in range(i):
            rhs = rhs - g[j] * basis[j].components[i]
        try:
            g.append(poly_exact_div(rhs, basis[i].components[i]))
        except NotDivisible as exc:
            raise NotInModule("component %d not exactly divisible" % (i + 1)) from exc
    return g


def check_triangularizable(basis: DerivationBasis) -> bool:
    """alpha_i(x_j) = 0 for i > j, with nonvanishing diagonal."""
    n = basis.nvars
    for i in range(n):
        if basis[i].components[i].is_zero():
            return False
        for j in range(i):
            if not basis[i].components[j].is_zero():
                return False
    return True


def bezout_minor(basis: DerivationBasis, k: int) -> Polynomial:
    """The (n-k) x (n-k) determinant paired with alpha_k(x_k); k is 1-based.

    Row j corresponds to the variable x_{k+j}, column m to the derivation
    alpha_{k+m-1}; entries above the first superdiagonal vanish by
    triangularity.
    """
    n = basis.nvars
    if not 1 <= k <= n - 1:
        raise ValueError("k must lie in 1..n-1")
    size = n - k
    rows = [[basis[(k - 1) + m].components[k + j] for m in range(size)]
            for j in range(size)]
    return bareiss_det(rows)


def check_bezout(basis: DerivationBasis) -> bool:
    """gcd(alpha_k(x_k), det of the paired minor) is a unit for all k < n."""
    if not check_triangularizable(basis):
        return False
    n = basis.nvars
    for k in range(1, n):
        minor = bezout_minor(basis, k)
        diag = basis[k - 1].components[k - 1]
        if minor.is_zero():
            return False
        if not poly_gcd(diag, minor).is_constant():
            return False
    return True


@dataclass(frozen=True)
class OrthogonalFamily:
    """Coefficients f_k^i of the elements u_k = alpha_n + sum_i f_k^i alpha_i
    (i < n); the leading coefficient on alpha_n is implicitly 1."""

    coefficients: tuple  # coefficients[k][i] = f_{k+1}^{i+1}, 0-based

    def size(self):
        return len(self.coefficients)

    def u_derivation(self, k: int, basis: DerivationBasis) -> Derivation:
        """The order-one element u_{k+1} as a derivation."""
        n = basis.nvars
        u = basis[n - 1]
        for i, f in enumerate(self.coefficients[k]):
            if f:
                u = u + f * basis[i]
        return u


def check_orthogonality(basis: DerivationBasis, fam: OrthogonalFamily) -> bool:
    """Verify [u_k, x_l] = 0 exactly for all l != k."""
    n = basis.nvars
    if fam.size() != n:
        return False
    for k in range(n):
        u = fam.u_derivation(k, basis)
        for l in range(n):
            if l != k and not u.components[l].is_zero():
                return False
    return True


def build_orthogonal_family(spec) -> OrthogonalFamily:
    """The explicit orthogonal families for the three built-in families.

    For the wreath family (and the restricted braid arrangement, which is
    its r = 1 case) the coefficients are alternating products of x_j^r -
    x_k^r; for the braid family the same with plain differences.
    """
    family, n = spec.family, spec.n
    r = spec.r if family == "wreath" else 1
    nv = n
    x = [Polynomial.variable(nv, i) for i in range(nv)]

    def power_diff(j, k):
        if family == "braid":
            return x[j] - x[k]
        return x[j] ** r - x[k] ** r

    coeffs = []
    for k in range(n):
        row = []
        for i in range(n - 1):
            if i < k:
                row.append(Polynomial.zero(nv))
                continue
            prod = Polynomial.const(nv, (-1) ** (n - 1 - i))
            for j in range(i + 1, n):
                prod = prod * power_diff(j, k)
            row.append(prod)
        coeffs.append(tuple(row))
    return OrthogonalFamily(tuple(coeffs))


def structure_constants(basis: DerivationBasis):
    """All c_{ij}^k with [alpha_i, alpha_j] = sum_k c_{ij}^k alpha_k, as a
    map (i, j) -> coefficient tuple (0-based, i < j; antisymmetry gives the
    rest)."""
    n = basis.nvars
    return {(i, j): basis.structure_constants(i, j)
            for i in range(n) for j in range(i + 1, n)}
