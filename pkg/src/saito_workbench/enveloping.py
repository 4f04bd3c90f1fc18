"""PBW normal forms in the Lie-Rinehart enveloping algebra U(S, L).

An element is a finite sum of terms f * alpha^I with f in S and alpha^I =
alpha_n^{i_n} ... alpha_1^{i_1} (descending generator index left to right,
coefficients on the left).  Multi-indices are stored ascending: I[m] is the
exponent of alpha_{m+1}.

The rewriting engine moves coefficients left through generators with
alpha_m * f = f * alpha_m + alpha_m(f) and restores the canonical descending
order with alpha_i alpha_j = alpha_j alpha_i + [alpha_i, alpha_j], the
bracket expanded through the basis structure constants.  Correctness is
enforced by the faithful action on polynomials (`act_on_poly`), which is the
testing oracle for the whole product.
"""

from __future__ import annotations

import re

from .exact_arith import Polynomial, monomials_of_degree, poly_from_str, poly_to_str
from .tangent_derivations import Derivation, DerivationBasis, express_in_basis


def _add_term(acc, idx, p):
    if not p:
        return
    cur = acc.get(idx)
    if cur is None:
        acc[idx] = p
    else:
        s = cur + p
        if s:
            acc[idx] = s
        else:
            del acc[idx]


def _min_gen(idx):
    for m, e in enumerate(idx):
        if e:
            return m
    return None


def _bump(idx, m, by=1):
    out = list(idx)
    out[m] += by
    return tuple(out)


def _idx_times_poly(basis, idx, g):
    """alpha^I * g in normal form.  Moving g through the word only produces
    subwords of alpha^I, so no reordering is ever needed here."""
    if not g:
        return {}
    s = _min_gen(idx)
    if s is None:
        return {idx: g}
    J = _bump(idx, s, -1)
    out = {}
    for I2, h in _idx_times_poly(basis, J, g).items():
        _add_term(out, _bump(I2, s), h)
    for I2, h in _idx_times_poly(basis, J, basis[s].apply(g)).items():
        _add_term(out, I2, h)
    return out


def _times_poly(basis, terms, g):
    out = {}
    for idx, f in terms.items():
        for I2, h in _idx_times_poly(basis, idx, g).items():
            _add_term(out, I2, f * h)
    return out


def _append_gen(basis, terms, m):
    out = {}
    for idx, f in terms.items():
        _append_gen_term(basis, out, idx, f, m)
    return out


def _append_gen_term(basis, out, idx, f, m):
    s = _min_gen(idx)
    if s is None or s >= m:
        _add_term(out, _bump(idx, m), f)
        return
    # alpha^I alpha_m = (alpha^J alpha_m) alpha_s + alpha^J [alpha_s, alpha_m]
    J = _bump(idx, s, -1)
    tmp = {}
    _append_gen_term(basis, tmp, J, f, m)
    for I2, h in _append_gen(basis, tmp, s).items():
        _add_term(out, I2, h)
    for k, c in enumerate(basis.structure_constants(s, m)):
        if not c:
            continue
        moved = _times_poly(basis, {J: f}, c)
        for I2, h in _append_gen(basis, moved, k).items():
            _add_term(out, I2, h)


class UElement:
    """Canonical PBW normal form: a map from multi-indices to S-coefficients."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: DerivationBasis, terms=None):
        self.basis = basis
        clean = {}
        if terms:
            for idx, f in terms.items():
                idx = tuple(idx)
                if len(idx) != basis.nvars or any(e < 0 for e in idx):
                    raise ValueError("bad multi-index %r" % (idx,))
                if not isinstance(f, Polynomial):
                    f = Polynomial.const(basis.nvars, f)
                if f:
                    clean[idx] = f
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poly(cls, basis, f):
        zero = (0,) * basis.nvars
        return cls(basis, {zero: f})

    @classmethod
    def from_scalar(cls, basis, c):
        return cls.from_poly(basis, Polynomial.const(basis.nvars, c))

    @classmethod
    def generator(cls, basis, m):
        """The basis derivation alpha_{m+1} as an order-one element."""
        idx = [0] * basis.nvars
        idx[m] = 1
        return cls(basis, {tuple(idx): Polynomial.const(basis.nvars, 1)})

    @classmethod
    def from_derivation(cls, basis, d: Derivation):
        coeffs = express_in_basis(d, basis)
        terms = {}
        for m, g in enumerate(coeffs):
            if g:
                idx = [0] * basis.nvars
                idx[m] = 1
                terms[tuple(idx)] = g
        return cls(basis, terms)

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self):
        """Largest |I| among stored terms; -1 for zero."""
        return max((sum(i) for i in self.terms), default=-1)

    def weight(self):
        """Common weight deg f + sum i_m w_m of the terms, or None."""
        w = self.basis.weights
        if any(v is None for v in w):
            return None
        vals = set()
        for idx, f in self.terms.items():
            if not f.is_homogeneous():
                return None
            vals.add(f.total_degree() + sum(e * wv for e, wv in zip(idx, w)))
        if len(vals) != 1:
            return None
        return vals.pop()

    def filtration_part(self, p, lower=0):
        """Terms with lower <= |I| <= p."""
        return UElement(self.basis, {i: f for i, f in self.terms.items()
                                     if lower <= sum(i) <= p})

    def __eq__(self, other):
        if not isinstance(other, UElement):
            return NotImplemented
        return self.basis is other.basis and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------------

    def _wrap(self, terms):
        u = UElement.__new__(UElement)
        u.basis = self.basis
        u.terms = terms
        return u

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for idx, f in other.terms.items():
            _add_term(out, idx, f)
        return self._wrap(out)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + other._wrap({i: -f for i, f in other.terms.items()})

    def __neg__(self):
        return self._wrap({i: -f for i, f in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, UElement):
            if other.basis is not self.basis:
                raise ValueError("elements over different bases")
            return other
        if isinstance(other, Polynomial):
            return UElement.from_poly(self.basis, other)
        if isinstance(other, Derivation):
            return UElement.from_derivation(self.basis, other)
        return UElement.from_scalar(self.basis, other)

    def scale(self, f):
        """Left multiplication by f in S (or a scalar)."""
        if not isinstance(f, Polynomial):
            f = Polynomial.const(self.basis.nvars, f)
        out = {}
        for idx, g in self.terms.items():
            _add_term(out, idx, f * g)
        return self._wrap(out)

    def __mul__(self, other):
        return u_mul(self, self._coerce(other))

    def __pow__(self, e):
        out = UElement.from_scalar(self.basis, 1)
        for _ in range(e):
            out = u_mul(out, self)
        return out

    def __repr__(self):
        return "UElement(%r)" % u_to_str(self)

    def __str__(self):
        return u_to_str(self)


def u_mul(a: UElement, b: UElement) -> UElement:
    """Canonical normal form of the product."""
    if a.basis is not b.basis:
        raise ValueError("elements over different bases")
    basis = a.basis
    out = {}
    for J, g in b.terms.items():
        part = _times_poly(basis, a.terms, g)
        for m in range(basis.nvars - 1, -1, -1):
            for _ in range(J[m]):
                part = _append_gen(basis, part, m)
        for idx, f in part.items():
            _add_term(out, idx, f)
    u = UElement.__new__(UElement)
    u.basis = basis
    u.terms = out
    return u


def u_commutator(a: UElement, b) -> UElement:
    b = a._coerce(b)
    return u_mul(a, b) - u_mul(b, a)


def commutator_with_var(basis: DerivationBasis, idx, l) -> dict:
    """[alpha^I, x_{l+1}] as a terms dict, cached per basis."""
    cache = getattr(basis, "_comm_cache", None)
    if cache is None:
        cache = basis._comm_cache = {}
    key = (tuple(idx), l)
    if key not in cache:
        g = Polynomial.variable(basis.nvars, l)
        out = _idx_times_poly(basis, tuple(idx), g)
        _add_term(out, tuple(idx), -g)
        cache[key] = out
    return cache[key]


def act_on_poly(u: UElement, f: Polynomial) -> Polynomial:
    """Apply sum f_I alpha^I to f, composing right to left; this action is
    faithful and serves as the oracle for the product."""
    out = Polynomial.zero(u.basis.nvars)
    for idx, c in u.terms.items():
        g = f
        for m in range(u.basis.nvars):
            for _ in range(idx[m]):
                g = u.basis[m].apply(g)
            if not g:
                break
        if g:
            out = out + c * g
    return out


def multi_indices(nvars, max_order, min_order=0):
    """All I with min_order <= |I| <= max_order, deterministically ordered."""
    out = []
    for j in range(min_order, max_order + 1):
        out.extend(monomials_of_degree(nvars, j))
    return out


def enumerate_slice(basis: DerivationBasis, order_bound: int, weight: int):
    """All (monomial, I) with |I| <= order_bound and deg m + sum i w = weight."""
    w = basis.weights
    if any(v is None for v in w):
        raise ValueError("basis weights are not defined")
    out = []
    for idx in multi_indices(basis.nvars, order_bound):
        d = weight - sum(e * wv for e, wv in zip(idx, w))
        for mono in monomials_of_degree(basis.nvars, d):
            out.append((mono, idx))
    return out


# ---------------------------------------------------------------------------
# printing and parsing: terms `f * a3^i3*a2^i2*a1^i1`, coefficient
# parenthesised when it has several pieces
# ---------------------------------------------------------------------------

def _gen_word(idx):
    factors = []
    for m in range(len(idx) - 1, -1, -1):
        if idx[m] == 1:
            factors.append("a%d" % (m + 1))
        elif idx[m] > 1:
            factors.append("a%d^%d" % (m + 1, idx[m]))
    return "*".join(factors)


def u_to_str(u: UElement) -> str:
    if not u.terms:
        return "0"
    pieces = []
    for idx in sorted(u.terms, key=lambda i: (sum(i), i), reverse=True):
        f = u.terms[idx]
        fs = poly_to_str(f)
        word = _gen_word(idx)
        if not word:
            pieces.append(fs)
        elif f == Polynomial.const(f.nvars, 1):
            pieces.append(word)
        else:
            if len(f.terms) > 1 or fs.startswith("-"):
                fs = "(%s)" % fs
            pieces.append("%s*%s" % (fs, word))
    return " + ".join(pieces)


_GEN = re.compile(r"a(\d+)(?:\^(\d+))?$")


def u_from_str(s: str, basis: DerivationBasis, r=None) -> UElement:
    s = s.strip()
    if s == "0":
        return UElement(basis, {})
    n = basis.nvars
    terms = {}
    # split on '+' at paren depth zero
    chunks, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            chunks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    chunks.append("".join(cur))
    for chunk in chunks:
        chunk = chunk.strip()
        factors = []
        buf, depth = [], 0
        for ch in chunk:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "*" and depth == 0:
                factors.append("".join(buf))
                buf = []
            else:
                buf.append(ch)
        factors.append("".join(buf))
        idx = [0] * n
        coeff_parts = []
        for fac in factors:
            fac = fac.strip()
            m = _GEN.match(fac)
            if m:
                g = int(m.group(1))
                if not 1 <= g <= n:
                    raise ValueError("generator a%d out of range" % g)
                idx[g - 1] += int(m.group(2) or 1)
            else:
                coeff_parts.append(fac[1:-1] if fac.startswith("(") else fac)
        coeff = Polynomial.const(n, 1)
        for part in coeff_parts:
            coeff = coeff * poly_from_str(part, n, r=r)
        _add_term(terms, tuple(idx), coeff)
    return UElement(basis, terms)
