"""Root systems in exact rational arithmetic.

Simple roots use the standard orthogonal realizations with rational
coordinates (G2 is realized in R^3 so every Gram entry is rational).
The invariant form is the Euclidean form of the realization; it differs
from the Killing form by a positive factor per simple system, which is
irrelevant to every statement computed here and recorded as
``RootSystem.form_scale`` for reproducibility.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ConfigurationError

SUPPORTED_LABELS = ("A1", "A2", "A3", "B2", "G2")

# ---------------------------------------------------------------------------
# exact vector helpers (tuples of Fractions, or anything ring-like)


def vdot(u, v):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, u):
    return tuple(c * a for a in u)


def vzero(n):
    return (Fraction(0),) * n


def reflect(v, alpha, alpha_sq=None):
    """Reflection of v in the hyperplane orthogonal to alpha."""
    if alpha_sq is None:
        alpha_sq = vdot(alpha, alpha)
    c = 2 * vdot(v, alpha) / alpha_sq
    return vsub(v, vscale(c, alpha))


def as_fractions(coords):
    return tuple(Fraction(c) for c in coords)


@dataclass(frozen=True)
class Covector:
    """A linear functional on the Cartan subspace, identified with its
    Killing-dual vector in the orthogonal realization (A_lambda)."""

    coords: tuple
    basis: str = "ambient-orthogonal"

    def pairing(self, vec):
        return vdot(self.coords, vec)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def coords_of(v):
    """Accept a Covector or a bare coordinate sequence."""
    if isinstance(v, Covector):
        return v.coords
    return tuple(v)


# ---------------------------------------------------------------------------
# root system construction

_SIMPLE_ROOTS = {
    "A1": [(1, -1)],
    "A2": [(1, -1, 0), (0, 1, -1)],
    "A3": [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)],
    "B2": [(1, -1), (0, 1)],
    # G2 scaled so that all Gram entries are rational: long roots have
    # squared length 6, short roots 2.
    "G2": [(1, -1, 0), (-2, 1, 1)],
}


@dataclass(frozen=True)
class RootSystem:
    label: str
    rank: int
    dim: int
    simple_roots: tuple
    gram: tuple
    gram_inv: tuple
    positive_roots: tuple
    expansions: tuple  # expansions[k][j] = coefficient of alpha_j in positive root k
    form_scale: Fraction = Fraction(1)

    @property
    def n_positive(self):
        return len(self.positive_roots)

    def simple_pairings(self, v):
        """Tuple (<alpha_1, v>, ..., <alpha_l, v>)."""
        v = coords_of(v)
        return tuple(vdot(a, v) for a in self.simple_roots)

    def is_dominant(self, v):
        return all(p >= 0 for p in self.simple_pairings(v))

    def is_strictly_dominant(self, v):
        return all(p > 0 for p in self.simple_pairings(v))

    def dual_basis(self):
        """Vectors h_i in the root span with <alpha_j, h_i> = delta_ij."""
        cols = []
        for i in range(self.rank):
            x = _solve_sym(self.gram, tuple(
                Fraction(1) if j == i else Fraction(0) for j in range(self.rank)))
            cols.append(tuple(
                sum(x[j] * self.simple_roots[j][d] for j in range(self.rank))
                for d in range(self.dim)))
        return tuple(cols)

    def from_pairing_coords(self, c):
        """Vector v in the root span with <alpha_i, v> = c_i."""
        c = tuple(c)
        if len(c) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(c)}")
        x = _solve_sym(self.gram, c)
        return tuple(
            sum(x[j] * self.simple_roots[j][d] for j in range(self.rank))
            for d in range(self.dim))

    def simple_basis_coeffs(self, v):
        """Coefficients c with v = sum c_i alpha_i; raises if v is not in
        the root span (exactly, for rational input)."""
        v = coords_of(v)
        c = _solve_sym(self.gram, self.simple_pairings(v))
        recon = vzero(self.dim)
        for ci, a in zip(c, self.simple_roots):
            recon = vadd(recon, vscale(ci, a))
        if recon != tuple(v):
            raise ValueError("covector is not in the span of the roots")
        return c


def _solve_sym(gram, rhs):
    """Solve gram @ x = rhs exactly (gram symmetric positive definite)."""
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(Fraction(a[i][n]) for i in range(n))


_EXPECTED_POSITIVE = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "G2": 6}


@lru_cache(maxsize=None)
def build_root_system(label, rank=None):
    """Construct the named root system with all invariants verified.

    Accepts either ``build_root_system("B2")`` or ``build_root_system("B", 2)``.
    """
    if rank is not None:
        label = f"{label}{rank}"
    label = str(label).strip().upper()
    if not re.fullmatch(r"[A-G][0-9]+", label) or label not in _SIMPLE_ROOTS:
        raise ConfigurationError(
            f"unsupported root system {label!r}; supported: {', '.join(SUPPORTED_LABELS)}")

    simple = tuple(as_fractions(a) for a in _SIMPLE_ROOTS[label])
    ell = len(simple)
    dim = len(simple[0])
    gram = tuple(tuple(vdot(a, b) for b in simple) for a in simple)

    # closure of the simple roots under all simple reflections
    roots = set(simple)
    frontier = set(simple)
    while frontier:
        new = set()
        for beta in frontier:
            for alpha in simple:
                img = reflect(beta, alpha)
                if img not in roots:
                    new.add(img)
        roots |= new
        frontier = new

    rs_tmp = RootSystem(label, ell, dim, simple, gram,
                        tuple(_solve_sym(gram, row) for row in _identity(ell)),
                        (), ())
    positive = []
    for beta in roots:
        coeffs = rs_tmp.simple_basis_coeffs(beta)
        if all(c >= 0 for c in coeffs) and any(c > 0 for c in coeffs):
            ints = tuple(int(c) for c in coeffs)
            if tuple(Fraction(i) for i in ints) != coeffs:
                raise ConfigurationError(
                    f"non-integral root expansion in {label}: {coeffs}")
            positive.append((sum(ints), ints, beta))
    positive.sort()

    if len(positive) != _EXPECTED_POSITIVE[label]:
        raise ConfigurationError(
            f"{label}: generated {len(positive)} positive roots, "
            f"expected {_EXPECTED_POSITIVE[label]}")

    rs = RootSystem(
        label=label,
        rank=ell,
        dim=dim,
        simple_roots=simple,
        gram=gram,
        gram_inv=tuple(_solve_sym(gram, row) for row in _identity(ell)),
        positive_roots=tuple(p[2] for p in positive),
        expansions=tuple(p[1] for p in positive),
    )
    _check_invariants(rs)
    return rs


def _identity(n):
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                 for i in range(n))


def _check_invariants(rs):
    # gram symmetric positive definite (Sylvester minors)
    for i in range(rs.rank):
        for j in range(rs.rank):
            assert rs.gram[i][j] == rs.gram[j][i]
    assert _leading_minors_positive(rs.gram)
    # each simple reflection permutes the positive roots other than itself
    pos = set(rs.positive_roots)
    for alpha in rs.simple_roots:
        images = {reflect(beta, alpha) for beta in pos if beta != alpha}
        assert images == pos - {alpha}, f"{rs.label}: reflection does not permute positives"


def _leading_minors_positive(gram):
    n = len(gram)
    for k in range(1, n + 1):
        if _det([row[:k] for row in gram[:k]]) <= 0:
            return False
    return True


def _det(m):
    n = len(m)
    m = [list(row) for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


# ---------------------------------------------------------------------------
# the lexicographic order defined by the simple roots


def lex_tuple(xi, rs):
    """Coefficient tuple of xi in the simple-root basis, the comparison
    key of the lexicographic order.  Positive roots compare > 0 in this
    order, which is what the wall-maximality normalization needs."""
    return rs.simple_basis_coeffs(coords_of(xi))


def lex_compare(xi1, xi2, rs):
    """-1, 0, or 1 comparing xi1 against xi2 lexicographically."""
    t1, t2 = lex_tuple(xi1, rs), lex_tuple(xi2, rs)
    if t1 == t2:
        return 0
    return 1 if t1 > t2 else -1


def eval_pi(rs, v):
    """Product of <alpha, v> over all positive roots; exact for rational
    (or Gaussian-rational) coordinates."""
    v = coords_of(v)
    prod = None
    for alpha in rs.positive_roots:
        f = vdot(v, alpha)
        prod = f if prod is None else prod * f
    return prod
