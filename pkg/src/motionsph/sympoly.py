"""Exact symbolic algebra for the singular-parameter regularization.

Everything is done over the Gaussian rationals Q(i).  Polynomials live in
the ambient lambda-coordinates plus one ray variable t; rational terms
carry a structural phase exp(i<s A_lambda, t H0>) so that directional
differentiation in lambda is closed on the representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolationError
from .rootsys import coords_of, vdot


class GaussQ:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(x):
        if isinstance(x, GaussQ):
            return x
        return GaussQ(x)

    def __add__(self, other):
        o = GaussQ.of(other)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussQ.of(other)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussQ.of(other) - self

    def __mul__(self, other):
        o = GaussQ.of(other)
        return GaussQ(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussQ.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussQ((self.re * o.re + self.im * o.im) / d,
                      (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return GaussQ.of(other) / self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussQ(other)
        return isinstance(other, GaussQ) and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return abs(complex(self))

    def conj(self):
        return GaussQ(self.re, -self.im)

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"


I = GaussQ(0, 1)


class MPoly:
    """Sparse multivariate polynomial over Q(i): nvars lambda-coordinates
    plus a final t variable.  Exponent keys are tuples of length nvars+1."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = GaussQ.of(c)
                if c:
                    self.terms[k] = c

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * (nvars + 1): GaussQ.of(c)})

    @classmethod
    def t_times(cls, nvars, c):
        """c * t"""
        key = (0,) * nvars + (1,)
        return cls(nvars, {key: GaussQ.of(c)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, GaussQ()) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MPoly(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussQ)):
            c = GaussQ.of(other)
            return MPoly(self.nvars, {k: v * c for k, v in self.terms.items()})
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                s = out.get(k, GaussQ()) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __neg__(self):
        return self * GaussQ(-1)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def deriv_directional(self, direction):
        """Directional derivative in the lambda variables only."""
        out = {}
        for k, c in self.terms.items():
            for j, d in enumerate(direction):
                if d and k[j]:
                    kk = k[:j] + (k[j] - 1,) + k[j + 1:]
                    s = out.get(kk, GaussQ()) + c * (Fraction(d) * k[j])
                    if s:
                        out[kk] = s
                    else:
                        out.pop(kk, None)
        return MPoly(self.nvars, out)

    def substitute_lambda(self, values):
        """Substitute exact lambda coordinates, returning {t_degree: GaussQ}."""
        out = {}
        for k, c in self.terms.items():
            v = c
            for j, e in enumerate(k[:-1]):
                for _ in range(e):
                    v = v * values[j]
            deg = k[-1]
            s = out.get(deg, GaussQ()) + v
            if s:
                out[deg] = s
            else:
                out.pop(deg, None)
        return out

    def canonical_str(self):
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            parts.append(f"({c.re}+{c.im}i)*x^{k}")
        return " + ".join(parts) or "0"


def linear_form(nvars, coeffs):
    """The polynomial <coeffs, lambda>."""
    terms = {}
    for j, c in enumerate(coeffs):
        if c:
            key = tuple(1 if i == j else 0 for i in range(nvars)) + (0,)
            terms[key] = GaussQ.of(c)
    return MPoly(nvars, terms)


@dataclass(frozen=True)
class RatExpTerm:
    """numerator / prod <gamma_j, lambda>^k_j  *  exp(i <s A_lambda, t H0>).

    Denominator factors are indices into the context's non-vanishing root
    list, so evaluation at the singular parameter stays finite.
    """
    num: MPoly
    den: tuple       # sorted tuple of (root_index, power)
    s_index: int     # index into the context's Weyl-group list

    def canonical_str(self, ctx=None):
        return f"[s={self.s_index}; den={self.den}; num={self.num.canonical_str()}]"


@dataclass(frozen=True)
class DiffContext:
    """Fixed data for one regularization run: root system, Weyl group,
    probe H0, and the list of denominator roots (those not vanishing)."""
    rs: object
    weyl: tuple
    H0: tuple
    den_roots: tuple  # ambient coordinates of the pi'' roots

    @property
    def nvars(self):
        return self.rs.dim


def directional_derivative(term, beta, ctx):
    """d/d(beta) of a single term; exact Leibniz expansion."""
    beta = coords_of(beta)
    out = []
    # numerator
    dnum = term.num.deriv_directional(beta)
    if dnum:
        out.append(RatExpTerm(dnum, term.den, term.s_index))
    # denominator factors: d (1/<g,l>^k) = -k <g,beta> / <g,l>^(k+1)
    for pos, (ri, k) in enumerate(term.den):
        g = ctx.den_roots[ri]
        c = vdot(g, beta)
        if c:
            den = list(term.den)
            den[pos] = (ri, k + 1)
            num = term.num * GaussQ(-k * c)
            if num:
                out.append(RatExpTerm(num, tuple(den), term.s_index))
    # phase: d exp(i <s A_l, t H0>) = i t <s beta, H0> * exp(...)
    s = ctx.weyl[term.s_index]
    c = vdot(s.apply(beta), ctx.H0)
    if c:
        num = term.num * MPoly.t_times(ctx.nvars, GaussQ(0, c))
        if num:
            out.append(RatExpTerm(num, term.den, term.s_index))
    return out


def directional_derivative_sum(terms, beta, ctx):
    out = []
    for t in terms:
        out.extend(directional_derivative(t, beta, ctx))
    return _merge_terms(out)


def _merge_terms(terms):
    by_key = {}
    for t in terms:
        key = (t.s_index, t.den)
        if key in by_key:
            by_key[key] = RatExpTerm(by_key[key].num + t.num, t.den, t.s_index)
        else:
            by_key[key] = t
    return [t for t in by_key.values() if t.num]


def apply_pi_prime(terms, betas, ctx):
    """Iterated directional derivatives along the vanishing roots."""
    for beta in betas:
        terms = directional_derivative_sum(terms, beta, ctx)
    return terms


def evaluate_at(terms, lam_coords, ctx):
    """Substitute exact Gaussian-rational lambda coordinates.

    Returns {s_index: {t_degree: GaussQ}}; the caller attaches the phase
    frequencies i<s A_lambda0, H0>.
    """
    lam_coords = [GaussQ.of(c) for c in lam_coords]
    den_values = []
    for g in ctx.den_roots:
        v = GaussQ()
        for gj, lj in zip(g, lam_coords):
            v = v + lj * gj
        if not v:
            raise InvariantViolationError(
                "denominator root vanishes at lambda_0; pi'' split is wrong")
        den_values.append(v)
    out = {}
    for term in terms:
        poly = term.num.substitute_lambda(lam_coords)
        if not poly:
            continue
        dv = GaussQ(1)
        for ri, k in term.den:
            for _ in range(k):
                dv = dv * den_values[ri]
        acc = out.setdefault(term.s_index, {})
        for deg, c in poly.items():
            s = acc.get(deg, GaussQ()) + c / dv
            if s:
                acc[deg] = s
            else:
                acc.pop(deg, None)
    return {k: v for k, v in out.items() if v}


def c_constant(betas):
    """The proportionality constant of the regularized sum: the permanent
    of the Gram matrix of the vanishing roots.  For r = 2 this is
    x12^2 + x11 x22; for r = 3 the five-term symmetric expression."""
    betas = [coords_of(b) for b in betas]
    r = len(betas)
    if r == 0:
        return Fraction(1)
    gram = [[vdot(a, b) for b in betas] for a in betas]
    total = Fraction(0)
    for perm in itertools.permutations(range(r)):
        p = Fraction(1)
        for i, j in enumerate(perm):
            p *= gram[i][j]
        total += p
    return total
