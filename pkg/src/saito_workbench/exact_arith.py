"""Exact scalar, polynomial and linear-algebra kernel.

Scalars are `fractions.Fraction` or `Cyclotomic` (a reduced residue modulo
the r-th cyclotomic polynomial, giving arithmetic in Q(zeta_r)).  A
cyclotomic value that happens to be rational is always demoted to a
Fraction, so equality and hashing stay consistent across the two types.

Polynomials are sparse maps from exponent tuples to scalars with no stored
zero coefficients; equality is structural.  The monomial order used for
normalisation and printing is graded lexicographic with x1 < x2 < ... < xn.

Linear algebra is exact: fraction-free Bareiss elimination for determinants
over any ring with exact division (in particular polynomial rings), and a
sparse integer elimination for the large graded-slice rank computations.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

Scalar = object  # Fraction | Cyclotomic


class NotDivisible(Exception):
    """Raised when an exact polynomial quotient does not exist."""


# ---------------------------------------------------------------------------
# cyclotomic scalars
# ---------------------------------------------------------------------------

def _frac_poly_divmod(a, b):
    """Divide dense Fraction coefficient lists (low degree first)."""
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    while len(a) >= len(b):
        if not a[-1]:
            a.pop()
            continue
        c = a[-1] * inv
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[i + d] -= c * bc
        a.pop()
    while a and not a[-1]:
        a.pop()
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_coeffs(r: int) -> tuple:
    """Coefficients of the r-th cyclotomic polynomial, via the sieve
    x^r - 1 = prod_{d | r} Phi_d."""
    if r < 1:
        raise ValueError("r must be >= 1")
    num = [Fraction(-1)] + [Fraction(0)] * (r - 1) + [Fraction(1)]
    for d in range(1, r):
        if r % d == 0:
            num, rem = _frac_poly_divmod(num, list(cyclotomic_coeffs(d)))
            assert not rem
    return tuple(num)


def _cyclo_make(r, coeffs):
    """Reduce mod Phi_r and demote to Fraction when the value is rational."""
    phi = list(cyclotomic_coeffs(r))
    deg = len(phi) - 1
    coeffs = list(coeffs)
    if len(coeffs) > deg:
        _, coeffs = _frac_poly_divmod(coeffs, phi)
    coeffs += [Fraction(0)] * (deg - len(coeffs))
    if all(c == 0 for c in coeffs[1:]):
        return coeffs[0] if coeffs else Fraction(0)
    c = Cyclotomic.__new__(Cyclotomic)
    c.r = r
    c.coeffs = tuple(coeffs)
    return c


class Cyclotomic:
    """Element of Q(zeta_r), stored as the unique representative of degree
    < deg Phi_r.  Instances are only ever irrational; rational values demote
    to Fraction in all constructors and arithmetic."""

    __slots__ = ("r", "coeffs")

    def __init__(self, r, coeffs):
        res = _cyclo_make(r, [Fraction(c) for c in coeffs])
        if not isinstance(res, Cyclotomic):
            raise ValueError("rational value; use Fraction instead")
        self.r = res.r
        self.coeffs = res.coeffs

    def _lift(self, other):
        if isinstance(other, Cyclotomic):
            if other.r != self.r:
                raise ValueError("mixed cyclotomic orders %d and %d" % (self.r, other.r))
            return list(other.coeffs)
        if isinstance(other, (int, Fraction)):
            return [Fraction(other)]
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a = list(self.coeffs)
        for i, c in enumerate(o):
            if i < len(a):
                a[i] += c
            else:
                a.append(c)
        return _cyclo_make(self.r, a)

    __radd__ = __add__

    def __neg__(self):
        return _cyclo_make(self.r, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + _cyclo_make(self.r, [-c for c in o]) if isinstance(other, Cyclotomic) else self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a = self.coeffs
        prod = [Fraction(0)] * (len(a) + len(o) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(o):
                if cb:
                    prod[i + j] += ca * cb
        return _cyclo_make(self.r, prod)

    __rmul__ = __mul__

    def inverse(self):
        """Inverse modulo Phi_r via the extended Euclidean algorithm."""
        phi = list(cyclotomic_coeffs(self.r))
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or (r1 and r1[0]):
            q, rem = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, rem if rem else [Fraction(0)]
            qs1 = [Fraction(0)] * (len(q) + len(s1) - 1)
            for i, qc in enumerate(q):
                if qc:
                    for j, sc in enumerate(s1):
                        qs1[i + j] += qc * sc
            new = list(s0) + [Fraction(0)] * max(0, len(qs1) - len(s0))
            for i, c in enumerate(qs1):
                new[i] -= c
            s0, s1 = s1, new
            if len(r1) == 1 and r1[0]:
                break
        g = r1[0] if r1 else Fraction(0)
        if not g:
            raise ZeroDivisionError("element is zero modulo Phi_r")
        return _cyclo_make(self.r, [c / g for c in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return _cyclo_make(self.r, [c / Fraction(other) for c in self.coeffs])
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        inv = self.inverse()
        return inv * other if isinstance(inv, Cyclotomic) else Fraction(other) * inv

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = Fraction(1)
        base = self
        while e:
            if e & 1:
                out = base * out
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.r == other.r and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return False  # canonical instances are never rational
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __bool__(self):
        return True

    def __hash__(self):
        return hash((self.r, self.coeffs))

    def __repr__(self):
        return "Cyclotomic(%d, %r)" % (self.r, list(self.coeffs))


def zeta(r: int):
    """The primitive r-th root of unity (a Fraction when r <= 2)."""
    return _cyclo_make(r, [Fraction(0), Fraction(1)])


def scalar_is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True if monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_degree(a):
    return sum(a)


def grlex_key(mono):
    """Sort key for graded lexicographic order with x1 < x2 < ... < xn."""
    return (sum(mono), tuple(reversed(mono)))


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree d, in a deterministic order."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, nvars)
    return out


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _coerce_scalar(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class Polynomial:
    """Sparse exact multivariate polynomial.

    `terms` maps exponent tuples (length `nvars`) to nonzero scalars.  All
    arithmetic returns canonical polynomials, so `==` is reliable identity
    of mathematical values.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvars:
                    raise ValueError("exponent tuple of wrong length")
                c = _coerce_scalar(c)
                if c:
                    clean[mono] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars, expts, c=1):
        return cls(nvars, {tuple(expts): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def leading(self):
        """(monomial, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_value(self):
        """The scalar value, if the polynomial is constant."""
        if not self.terms:
            return Fraction(0)
        ((m, c),) = self.terms.items()
        if any(m):
            raise ValueError("polynomial is not constant")
        return c

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("ambient variable counts differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = Polynomial.const(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = out
        p._hash = None
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {m: -c for m, c in self.terms.items()}
        p._hash = None
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = Polynomial.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            c = _coerce_scalar(other)
            if not c:
                return Polynomial.zero(self.nvars)
            p = Polynomial.__new__(Polynomial)
            p.nvars = self.nvars
            p.terms = {m: v * c for m, v in self.terms.items()}
            p._hash = None
            return p
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = out
        p._hash = None
        return p

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial.const(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = Polynomial.const(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- structure -----------------------------------------------------------

    def derivative(self, i):
        """Formal partial derivative with respect to x_{i+1} (0-based index)."""
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial(self.nvars, out)

    def graded_component(self, d):
        """Sum of the total-degree-d terms."""
        return Polynomial(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def degrees(self):
        return sorted({sum(m) for m in self.terms})

    def substitute(self, images):
        """Substitute x_i -> images[i]; images are polynomials in any ambient."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("cannot substitute in zero variables")
        nv = images[0].nvars
        out = Polynomial.zero(nv)
        for m, c in self.terms.items():
            term = Polynomial.const(nv, c)
            for i, e in enumerate(m):
                if e:
                    term = term * images[i] ** e
            out = out + term
        return out

    def __repr__(self):
        return "Polynomial(%r)" % poly_to_str(self)

    def __str__(self):
        return poly_to_str(self)


# -- spec-level operation names ---------------------------------------------

def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_derivative(a: Polynomial, i: int) -> Polynomial:
    return a.derivative(i)


def graded_component(a: Polynomial, d: int) -> Polynomial:
    return a.graded_component(d)


def poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient a/b.  Raises NotDivisible when none exists; that is a
    meaningful outcome (used e.g. by tangency tests), not a failure."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return Polynomial.zero(a.nvars)
    mb, cb = b.leading()
    out = {}
    rem = a
    while rem.terms:
        ma, ca = rem.leading()
        if not mono_divides(mb, ma):
            raise NotDivisible("%s does not divide %s" % (b, a))
        m = mono_div(ma, mb)
        c = ca / cb
        out[m] = c
        rem = rem - Polynomial.monomial(a.nvars, m, c) * b
    return Polynomial(a.nvars, out)


def poly_divides(b: Polynomial, a: Polynomial) -> bool:
    try:
        poly_exact_div(a, b)
        return True
    except NotDivisible:
        return False


# -- gcd via primitive-part subresultant PRS ---------------------------------

def _main_variable(a, b):
    v = -1
    for p in (a, b):
        for m in p.terms:
            for i in range(p.nvars - 1, v, -1):
                if m[i]:
                    v = max(v, i)
                    break
    return v


def _to_univariate(p, v):
    """Dense list of Polynomial coefficients in x_v (low degree first)."""
    d = max((m[v] for m in p.terms), default=0)
    coeffs = [{} for _ in range(d + 1)]
    for m, c in p.terms.items():
        e = list(m)
        k = e[v]
        e[v] = 0
        coeffs[k][tuple(e)] = c
    return [Polynomial(p.nvars, t) for t in coeffs]


def _from_univariate(coeffs, v, nvars):
    out = {}
    for k, p in enumerate(coeffs):
        for m, c in p.terms.items():
            e = list(m)
            e[v] = k
            out[tuple(e)] = c
    return Polynomial(nvars, out)


def _trim(f):
    while f and f[-1].is_zero():
        f.pop()
    return f


def _pseudo_rem(f, g):
    """Pseudo-remainder of dense coefficient lists in the main variable."""
    f = list(f)
    dg = len(g) - 1
    lcg = g[-1]
    while len(f) - 1 >= dg and f:
        lcf = f[-1]
        shift = len(f) - 1 - dg
        f = [lcg * c for c in f]
        for i, gc in enumerate(g):
            f[i + shift] = f[i + shift] - lcf * gc
        _trim(f)
    return f


def _content(coeffs):
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            break
    return g if g is not None else None


def _primitive(coeffs):
    cont = _content(coeffs)
    if cont is None or cont.is_constant():
        return coeffs, Polynomial.const(coeffs[0].nvars if coeffs else 0, 1)
    return [poly_exact_div(c, cont) for c in coeffs], cont


def _monic(p):
    _, c = p.leading()
    return p * (1 / c if isinstance(c, Fraction) else c.inverse())


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """A gcd of a and b, normalised to leading coefficient 1 (graded-lex).

    Recursive primitive-part subresultant PRS, one variable at a time; over
    the coefficient field the content of a set of constants is 1.
    """
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    v = _main_variable(a, b)
    if v < 0:
        return Polynomial.const(a.nvars, 1)
    fa, fb = _to_univariate(a, v), _to_univariate(b, v)
    pa, ca = _primitive(fa)
    pb, cb = _primitive(fb)
    cont_gcd = poly_gcd(ca, cb)
    f, g = (pa, pb) if len(pa) >= len(pb) else (pb, pa)
    while g:
        rem = _pseudo_rem(f, g)
        rem, _ = _primitive(rem) if rem else (rem, None)
        f, g = g, rem
    pp = _from_univariate(f, v, a.nvars)
    return _monic(pp * cont_gcd)


# ---------------------------------------------------------------------------
# text grammar:  terms `c*x1^a*x2^b...` joined by `+`/`-`; scalars are
# rationals `p/q` or powers of `z` (the chosen root of unity).
# ---------------------------------------------------------------------------

def _scalar_parts(c):
    """Split a scalar into printable (Fraction, zeta-power) pieces."""
    if isinstance(c, Cyclotomic):
        return [(f, k) for k, f in enumerate(c.coeffs) if f]
    return [(Fraction(c), 0)]


def poly_to_str(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for mono in sorted(p.terms, key=grlex_key, reverse=True):
        for frac, zpow in _scalar_parts(p.terms[mono]):
            factors = []
            if zpow == 1:
                factors.append("z")
            elif zpow > 1:
                factors.append("z^%d" % zpow)
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append("x%d" % (i + 1))
                elif e > 1:
                    factors.append("x%d^%d" % (i + 1, e))
            mag = abs(frac)
            if not factors or mag != 1:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not pieces:
                pieces.append(body if frac > 0 else "-" + body)
            else:
                pieces.append((" + " if frac > 0 else " - ") + body)
    return "".join(pieces)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<z>z)|(?P<op>[*^+/-]))")


def _tokenize(s):
    pos, out = 0, []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == m.start():
            if s[pos:].strip() == "":
                break
            raise ValueError("cannot parse polynomial at %r" % s[pos:])
        pos = m.end()
        if m.lastgroup == "num":
            out.append(("num", int(m.group("num"))))
        elif m.lastgroup == "var":
            out.append(("var", int(m.group("var")[1:])))
        elif m.lastgroup == "z":
            out.append(("z", None))
        else:
            out.append((m.group("op"), None))
    return out


def poly_from_str(s: str, nvars: int, r: int | None = None) -> Polynomial:
    """Parse the polynomial text grammar.  `r` enables the `z` scalar."""
    toks = _tokenize(s)
    if not toks:
        raise ValueError("empty polynomial string")
    result = Polynomial.zero(nvars)
    i = 0

    def parse_term(i):
        coeff = Fraction(1)
        zpow = 0
        expts = [0] * nvars
        expect_factor = True
        while i < len(toks):
            kind, val = toks[i]
            if kind == "num":
                num = Fraction(val)
                if i + 2 < len(toks) and toks[i + 1][0] == "/" and toks[i + 2][0] == "num":
                    num /= toks[i + 2][1]
                    i += 2
                coeff *= num
                i += 1
            elif kind == "var":
                if not 1 <= val <= nvars:
                    raise ValueError("variable x%d out of range (n=%d)" % (val, nvars))
                e = 1
                if i + 2 < len(toks) and toks[i + 1][0] == "^" and toks[i + 2][0] == "num":
                    e = toks[i + 2][1]
                    i += 2
                expts[val - 1] += e
                i += 1
            elif kind == "z":
                if r is None:
                    raise ValueError("scalar z not allowed over Q")
                e = 1
                if i + 2 < len(toks) and toks[i + 1][0] == "^" and toks[i + 2][0] == "num":
                    e = toks[i + 2][1]
                    i += 2
                zpow += e
                i += 1
            elif kind == "*":
                i += 1
                expect_factor = True
                continue
            else:
                break
            expect_factor = False
        if expect_factor:
            raise ValueError("dangling operator in polynomial string")
        c = coeff if zpow == 0 else coeff * zeta(r) ** zpow
        return Polynomial.monomial(nvars, expts, c), i

    sign = 1
    if toks[0][0] in "+-":
        sign = -1 if toks[0][0] == "-" else 1
        i = 1
    while True:
        term, i = parse_term(i)
        result = result + term * sign
        if i == len(toks):
            return result
        kind, _ = toks[i]
        if kind == "+":
            sign = 1
        elif kind == "-":
            sign = -1
        else:
            raise ValueError("expected + or - between terms")
        i += 1


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

class ScalarMatrix:
    """Dense rectangular matrix of scalars."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [list(map(_coerce_scalar, row)) for row in rows]
        width = {len(r) for r in rows}
        if len(width) > 1:
            raise ValueError("matrix is not rectangular")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width.pop() if rows else 0

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def transpose(self):
        return ScalarMatrix([[self.rows[i][j] for i in range(self.nrows)]
                             for j in range(self.ncols)])


def _rows_of(M):
    if isinstance(M, ScalarMatrix):
        return [row[:] for row in M.rows]
    return [list(map(_coerce_scalar, row)) for row in M]


def _field_inv(c):
    return 1 / c if isinstance(c, (int, Fraction)) else c.inverse()


def rref(M):
    """Reduced row echelon form over the scalar field.

    Returns (rows, pivot_columns); zero rows are dropped.
    """
    rows = [r for r in _rows_of(M) if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = _field_inv(rows[rank][col])
        rows[rank] = [c * inv for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def kernel_basis(M):
    """Exact basis of the right null space; empty when the map is injective."""
    rows = _rows_of(M)
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def matrix_rank(M):
    return len(rref(M)[0])


def matrix_inverse(M):
    rows = _rows_of(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    aug = [row + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return ScalarMatrix([red[i][n:] for i in range(n)])


def bareiss_det(rows, exact_div=None):
    """Fraction-free Bareiss determinant.

    Works over any integral domain given an exact-division callback;
    polynomial entries use poly_exact_div, scalars use field division.
    """
    M = [list(row) for row in rows]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    sample = M[0][0]
    if exact_div is None:
        if isinstance(sample, Polynomial):
            exact_div = poly_exact_div
        else:
            exact_div = lambda a, b: a / b
    is_poly = isinstance(sample, Polynomial)
    zero = Polynomial.zero(sample.nvars) if is_poly else Fraction(0)
    sign = 1
    prev = None
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[k][k] * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num if prev is None else exact_div(num, prev)
            M[i][k] = zero
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


# -- sparse elimination for large graded slices ------------------------------

def _int_rows(rows):
    """Clear denominators rowwise; input rows are dicts col -> Fraction/int."""
    out = []
    for row in rows:
        if not row:
            continue
        denom = 1
        for v in row.values():
            if isinstance(v, Fraction):
                denom = denom * v.denominator // math.gcd(denom, v.denominator)
        r = {}
        for k, v in row.items():
            iv = int(v * denom) if isinstance(v, Fraction) else v * denom
            if iv:
                r[k] = iv
        if r:
            out.append(r)
    return out


def sparse_rank(rows) -> int:
    """Rank of a sparse matrix given as rows of {column: coefficient}.

    Coefficients must be integers or Fractions; elimination is fraction-free
    over the integers with gcd row normalisation to bound growth.
    """
    work = _int_rows(rows)
    work.sort(key=len)
    pivots = {}
    rank = 0
    for row in work:
        row = dict(row)
        while row:
            c = min(row)
            if c not in pivots:
                g = 0
                for v in row.values():
                    g = math.gcd(g, v)
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
                pivots[c] = row
                rank += 1
                break
            p = pivots[c]
            a, b = row[c], p[c]
            g = math.gcd(a, b)
            ma, mb = b // g, a // g
            new = {k: ma * v for k, v in row.items()}
            for k, v in p.items():
                s = new.get(k, 0) - mb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = new
    return rank


class SpanSolver:
    """Incremental exact row space with coordinate recovery.

    Vectors are sparse dicts over integer column keys.  Inserting a vector
    reports whether it enlarged the span; `solve` expresses a vector as a
    combination of previously inserted labelled vectors.  Unlabelled vectors
    act as quotient directions and must all be inserted before any labelled
    one, otherwise coordinates are not well defined.
    """

    def __init__(self):
        self._rows = {}   # pivot column -> (rowdict, combdict)

    def _reduce(self, vec):
        vec = {k: _coerce_scalar(v) for k, v in vec.items() if v}
        comb = {}
        while vec:
            c = min(vec)
            if c not in self._rows:
                return vec, comb, c
            row, rcomb = self._rows[c]
            f = vec[c] * _field_inv(row[c])
            for k, v in row.items():
                s = vec.get(k, 0) - f * v
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
            for k, v in rcomb.items():
                s = comb.get(k, 0) + f * v
                if s:
                    comb[k] = s
                else:
                    comb.pop(k, None)
        return vec, comb, None

    def insert(self, vec, label=None) -> bool:
        """Add a vector to the span; returns True if the rank grew."""
        red, comb, piv = self._reduce(vec)
        if piv is None:
            return False
        if label is not None:
            comb = {label: Fraction(1), **{k: -v for k, v in comb.items()}}
            # comb expresses red in terms of labelled originals: red = vec - sum f*row
        else:
            comb = {}
        self._rows[piv] = (red, comb)
        return True

    @property
    def rank(self):
        return len(self._rows)

    def contains(self, vec) -> bool:
        red, _, piv = self._reduce(vec)
        return piv is None

    def solve(self, vec):
        """Coefficients {label: c} with vec = sum c * inserted[label], or None.

        Unlabelled inserted vectors may enter the combination silently; they
        are treated as quotient directions and dropped from the result.
        """
        red, comb, piv = self._reduce(vec)
        if piv is not None:
            return None
        return {k: v for k, v in comb.items() if k is not None}
