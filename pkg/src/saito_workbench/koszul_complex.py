"""The complex X^* = U (x) Hom(Lambda^* W, k), the two low chains of the
Koszul resolution of S needed for liftings, the eta generators, and the
sharp action of derivations on degree-one cochains."""

from __future__ import annotations

from dataclasses import dataclass

from .exact_arith import Polynomial, mono_mul
from .tangent_derivations import Derivation, DerivationBasis
from .enveloping import UElement, commutator_with_var, u_commutator, u_mul, _add_term


class Cochain:
    """Element of X^q: a map (multi-index, q-subset K of variables) -> S.

    The wedge basis is kept as ascending index tuples; all sign bookkeeping
    happens in the differential.  A term f alpha^I x_K has weight
    deg f + sum i_m w_m - |K|.
    """

    __slots__ = ("basis", "degree", "terms")

    def __init__(self, basis: DerivationBasis, degree: int, terms=None):
        self.basis = basis
        self.degree = degree
        clean = {}
        if terms:
            for (idx, K), f in terms.items():
                idx, K = tuple(idx), tuple(K)
                if len(K) != degree or list(K) != sorted(set(K)):
                    raise ValueError("bad wedge subset %r" % (K,))
                if not isinstance(f, Polynomial):
                    f = Polynomial.const(basis.nvars, f)
                if f:
                    clean[(idx, K)] = f
        self.terms = clean

    @classmethod
    def from_u(cls, u: UElement, K):
        K = tuple(sorted(K))
        return cls(u.basis, len(K), {(idx, K): f for idx, f in u.terms.items()})

    def component(self, K) -> UElement:
        K = tuple(sorted(K))
        return UElement(self.basis, {idx: f for (i, kk), f in self.terms.items()
                                     if kk == K for idx in [i]})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self):
        return max((sum(i) for i, _ in self.terms), default=-1)

    def weight(self):
        w = self.basis.weights
        if any(v is None for v in w):
            return None
        vals = set()
        for (idx, K), f in self.terms.items():
            if not f.is_homogeneous():
                return None
            vals.add(f.total_degree() + sum(e * wv for e, wv in zip(idx, w)) - len(K))
        return vals.pop() if len(vals) == 1 else None

    def filtration_part(self, p, lower=0):
        return Cochain(self.basis, self.degree,
                       {k: f for k, f in self.terms.items() if lower <= sum(k[0]) <= p})

    def _wrap(self, terms):
        c = Cochain.__new__(Cochain)
        c.basis, c.degree, c.terms = self.basis, self.degree, terms
        return c

    def __add__(self, other):
        if other.basis is not self.basis or other.degree != self.degree:
            raise ValueError("cochains not compatible")
        out = dict(self.terms)
        for k, f in other.terms.items():
            _add_term(out, k, f)
        return self._wrap(out)

    def __neg__(self):
        return self._wrap({k: -f for k, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not isinstance(f, Polynomial):
            f = Polynomial.const(self.basis.nvars, f)
        out = {}
        for k, g in self.terms.items():
            _add_term(out, k, f * g)
        return self._wrap(out)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.basis is other.basis and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        parts = []
        for (idx, K), f in sorted(self.terms.items()):
            u = UElement(self.basis, {idx: f})
            wedge = "^".join("x%d~" % (i + 1) for i in K) or "1"
            parts.append("(%s)%s" % (u, wedge))
        return "Cochain[%s]" % (" + ".join(parts) or "0")


def koszul_d(c) -> Cochain:
    """The differential d(u x_K) = sum_{l not in K} [u, x_l] (x_K wedge x_l),
    the wedge sorted with one sign per transposition."""
    if isinstance(c, UElement):
        c = Cochain.from_u(c, ())
    basis = c.basis
    n = basis.nvars
    out = {}
    for (idx, K), f in c.terms.items():
        for l in range(n):
            if l in K:
                continue
            sign = (-1) ** sum(1 for m in K if m > l)
            newK = tuple(sorted(K + (l,)))
            for idx2, g in commutator_with_var(basis, idx, l).items():
                _add_term(out, (idx2, newK), sign * (f * g))
    return Cochain(basis, c.degree + 1, out)


# ---------------------------------------------------------------------------
# the Koszul resolution in low degrees: P0 = S^e, P1 = S^e (x) W
# ---------------------------------------------------------------------------

class P0Element:
    """Finite sum of tensors a|b with monomial slots and scalar weights."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return P0Element(self.nvars, out)

    def __sub__(self, other):
        return self + P0Element(self.nvars, {k: -c for k, c in other.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, P0Element) and self.terms == other.terms

    def __repr__(self):
        return "P0Element(%r)" % (self.terms,)


class P1Element:
    """Finite sum of tensors a|b (x) x_k, canonical over (a, b, k) keys."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = self.terms.get(k, 0) + c
            self.terms = {k: c for k, c in self.terms.items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return P1Element(self.nvars, out)

    def __sub__(self, other):
        return self + P1Element(self.nvars, {k: -c for k, c in other.terms.items()})

    def scale(self, c):
        return P1Element(self.nvars, {k: v * c for k, v in self.terms.items()})

    def lmul(self, f: Polynomial):
        """Multiply the left slot: (f|1) . self."""
        out = {}
        for (a, b, k), c in self.terms.items():
            for mono, fc in f.terms.items():
                key = (mono_mul(mono, a), b, k)
                s = out.get(key, 0) + c * fc
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return P1Element(self.nvars, out)

    def rmul(self, f: Polynomial):
        """Multiply the right slot: (1|f) . self."""
        out = {}
        for (a, b, k), c in self.terms.items():
            for mono, fc in f.terms.items():
                key = (a, mono_mul(mono, b), k)
                s = out.get(key, 0) + c * fc
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return P1Element(self.nvars, out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, P1Element) and self.terms == other.terms

    def __repr__(self):
        return "P1Element(%r)" % (self.terms,)


def p0_generator(nvars, a=None, b=None, coeff=1):
    zero = (0,) * nvars
    return P0Element(nvars, {(a or zero, b or zero): coeff})


def p1_generator(nvars, k, a=None, b=None, coeff=1):
    zero = (0,) * nvars
    return P1Element(nvars, {(a or zero, b or zero, k): coeff})


def resolution_b(x: P1Element) -> P0Element:
    """b_1(a|b (x) x_k) = a x_k | b - a | x_k b."""
    out = P0Element(x.nvars, {})
    for (a, b, k), c in x.terms.items():
        e = [0] * x.nvars
        e[k] = 1
        xk = tuple(e)
        out = out + P0Element(x.nvars, {(mono_mul(a, xk), b): c, (a, mono_mul(xk, b)): -c})
    return out


def p0_of_poly_difference(g: Polynomial) -> P0Element:
    """g|1 - 1|g, the boundary of the generic lifting values."""
    n = g.nvars
    zero = (0,) * n
    terms = {}
    for mono, c in g.terms.items():
        for key, sgn in (((mono, zero), 1), ((zero, mono), -1)):
            s = terms.get(key, 0) + sgn * c
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
    return P0Element(n, terms)


def delta(g: Polynomial) -> P1Element:
    """A Leibniz section of b_1: Delta(x_k) = 1|x_k|1, Delta(scalar) = 0,
    and Delta(fg) = (f|1) Delta(g) + (1|g) Delta(f) along the fixed
    factorisation that peels the highest variable of each monomial first
    (the rule alone does not determine the splitting order).

    Satisfies b_1(Delta(g)) = g|1 - 1|g.
    """
    n = g.nvars
    out = P1Element(n, {})
    for mono, c in g.terms.items():
        out = out + _delta_mono(n, mono).scale(c)
    return out


def _delta_mono(n, mono):
    k = next((i for i in range(n - 1, -1, -1) if mono[i]), None)
    if k is None:
        return P1Element(n, {})
    rest = list(mono)
    rest[k] -= 1
    rest = tuple(rest)
    term = P1Element(n, {((0,) * n, rest, k): 1})
    return _delta_mono(n, rest).lmul(Polynomial.variable(n, k)) + term


@dataclass
class ChainLifting:
    """A degree-one lifting of a derivation through the Koszul resolution:
    the values theta_1(1|x_k|1); theta_0 is determined by the Leibniz rule
    on S^e."""

    theta: Derivation
    values: tuple  # P1Element per variable slot

    def chain_map_defect(self, k) -> P0Element:
        """b_1(theta_1(1|x_k|1)) - theta_0(b_1(1|x_k|1)); zero iff the
        chain-map equation holds at the k-th generator."""
        want = p0_of_poly_difference(self.theta.components[k])
        return resolution_b(self.values[k]) - want

    def is_chain_map(self) -> bool:
        return all(self.chain_map_defect(k).is_zero()
                   for k in range(len(self.values)))


def lift_derivation(theta: Derivation) -> ChainLifting:
    """Generic lifting theta_1(1|x_k|1) = Delta(theta(x_k))."""
    return ChainLifting(theta, tuple(delta(c) for c in theta.components))


def paper_lifting_D(r: int, basis: DerivationBasis) -> ChainLifting:
    """The explicit lifting of D = alpha_2 for the wreath family on three
    variables: zero at x_1 and, at x_k for k = 2, 3,

        sum_{s+t=r} x_k^s|x_k|x_k^t - sum_{s+t=r-1} x_1^s|x_1|x_1^t x_k
        - x_1^r|x_k|1.

    The middle sum telescopes under b_1 only with x_1 powers on the left;
    with x_k there instead the chain-map identity fails for r >= 2.
    """
    n = basis.nvars
    if n != 3:
        raise ValueError("this lifting is specific to three variables")
    D = basis[1]
    zero = (0,) * n

    def mono(var, e):
        out = [0] * n
        out[var] = e
        return tuple(out)

    values = [P1Element(n, {})]
    for k in (1, 2):
        terms = {}
        for s in range(r + 1):
            key = (mono(k, s), mono(k, r - s), k)
            terms[key] = terms.get(key, 0) + 1
        for s in range(r):
            t = r - 1 - s
            b = list(mono(0, t))
            b[k] += 1
            key = (mono(0, s), tuple(b), 0)
            terms[key] = terms.get(key, 0) - 1
        key = (mono(0, r), zero, k)
        terms[key] = terms.get(key, 0) - 1
        values.append(P1Element(n, terms))
    return ChainLifting(D, tuple(values))


# ---------------------------------------------------------------------------
# eta generators and the sharp action
# ---------------------------------------------------------------------------

def u_family_element(fam, k, basis) -> UElement:
    """u_{k+1} as an order-one element of U."""
    return UElement.from_derivation(basis, fam.u_derivation(k, basis))


def build_eta(k: int, p: int, fam, basis: DerivationBasis) -> Cochain:
    """The cocycle eta_k^p = u_k^p x_k (k is 0-based here)."""
    u = u_family_element(fam, k, basis)
    return Cochain.from_u(u ** p, (k,))


def evaluate_cochain_on_p1(c: Cochain, x: P1Element) -> UElement:
    """S^e-linear extension: c(a|b (x) x_k) = a . c(x_k slot) . b,
    re-normal-formed in U."""
    basis = c.basis
    comps = [c.component((k,)) for k in range(basis.nvars)]
    out = UElement(basis, {})
    for (a, b, k), s in x.terms.items():
        u = comps[k]
        if u.is_zero():
            continue
        u = u.scale(Polynomial.monomial(basis.nvars, a, s))
        if any(b):
            u = u_mul(u, UElement.from_poly(basis, Polynomial.monomial(basis.nvars, b)))
        out = out + u
    return out


def sharp_action(theta: Derivation, lifting: ChainLifting, c):
    """theta^sharp: [theta, c(p)] - c(theta_1(p)) on the resolution
    generators.  Degree 0 takes and returns a UElement ([theta, u]); degree
    1 takes and returns a Cochain."""
    if isinstance(c, UElement):
        t = UElement.from_derivation(c.basis, theta)
        return u_commutator(t, c)
    if c.degree != 1:
        raise ValueError("sharp action implemented for degrees 0 and 1")
    basis = c.basis
    t = UElement.from_derivation(basis, theta)
    out = {}
    for k in range(basis.nvars):
        uk = c.component((k,))
        val = UElement(basis, {})
        if not uk.is_zero():
            val = val + u_commutator(t, uk)
        ev = evaluate_cochain_on_p1(c, lifting.values[k])
        val = val - ev
        for idx, f in val.terms.items():
            _add_term(out, (idx, (k,)), f)
    return Cochain(basis, 1, out)
