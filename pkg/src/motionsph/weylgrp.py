"""Weyl group enumeration, stabilizers, normalization, and the
constructive stabilizer-generation lemma.

Elements carry exact rational matrices acting on the ambient realization,
a reduced word in the simple reflections, and the determinant sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .rootsys import (
    RootSystem, coords_of, lex_tuple, reflect, vdot, vscale,
)


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple  # rows of exact Fractions
    word: tuple    # reduced expression, 0-based simple-reflection indices
    sign: int      # det(matrix) = (-1)**len(word)

    def apply(self, v):
        v = coords_of(v)
        return tuple(vdot(row, v) for row in self.matrix)

    def compose(self, other):
        """self * other (apply other first)."""
        m = tuple(
            tuple(sum(self.matrix[i][k] * other.matrix[k][j]
                      for k in range(len(v)))
                  for j in range(len(v)))
            for i, v in enumerate(self.matrix))
        return WeylElement(m, self.word + other.word, self.sign * other.sign)

    def __hash__(self):
        return hash(self.matrix)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    @property
    def is_identity(self):
        return not self.word or all(
            self.matrix[i][j] == (1 if i == j else 0)
            for i in range(len(self.matrix)) for j in range(len(self.matrix)))


def _reflection_matrix(alpha, dim):
    cols = []
    for j in range(dim):
        e = tuple(Fraction(1) if d == j else Fraction(0) for d in range(dim))
        cols.append(reflect(e, alpha))
    return tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))


def _identity_element(dim):
    m = tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(dim))
              for i in range(dim))
    return WeylElement(m, (), 1)


@lru_cache(maxsize=None)
def _group_cache(rs: RootSystem):
    dim = rs.dim
    gens = [WeylElement(_reflection_matrix(a, dim), (i,), -1)
            for i, a in enumerate(rs.simple_roots)]
    e = _identity_element(dim)
    seen = {e.matrix: e}
    frontier = [e]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                x = g.compose(w)  # BFS in word length gives reduced words
                if x.matrix not in seen:
                    # canonical reduced word: s_i * w prepends the letter
                    seen[x.matrix] = x
                    new.append(x)
        frontier = new
    elements = sorted(seen.values(), key=lambda w: (len(w.word), w.word))
    return tuple(elements)


def generate_weyl_group(rs):
    """All Weyl elements, identity first, sorted by reduced-word length."""
    return list(_group_cache(rs))


def simple_reflection(rs, i):
    """The Weyl element s_{alpha_i} (0-based index)."""
    for w in _group_cache(rs):
        if len(w.word) == 1 and w.word[0] == i:
            return w
    raise IndexError(i)


def _fixes(w, targets):
    return all(w.apply(v) == tuple(v) for v in targets)


def stabilizer(W, v):
    """Subgroup of W fixing v exactly.  v may be a covector/coordinate
    tuple or a pair (xi, eta), in which case both parts must be fixed."""
    if isinstance(v, tuple) and len(v) == 2 and not isinstance(v[0], (int, Fraction)):
        targets = [coords_of(v[0]), coords_of(v[1])]
    else:
        targets = [coords_of(v)]
    sub = [w for w in W if _fixes(w, targets)]
    _assert_subgroup(sub)
    return sub


def _assert_subgroup(sub):
    mats = {w.matrix for w in sub}
    for a in sub:
        for b in sub:
            assert a.compose(b).matrix in mats, "stabilizer not closed"


@dataclass(frozen=True)
class StabilizerPair:
    """U = stabilizer of lambda_0, V = stabilizer of eta_0, with coset
    representatives of V/U (shortest word in each coset)."""
    U: tuple
    V: tuple
    coset_reps: tuple

    def __post_init__(self):
        umats = {w.matrix for w in self.U}
        vmats = {w.matrix for w in self.V}
        assert umats <= vmats, "U is not contained in V"
        assert len(self.V) == len(self.U) * len(self.coset_reps)


def stabilizer_pair(W, xi0, eta0):
    xi0, eta0 = coords_of(xi0), coords_of(eta0)
    V = stabilizer(W, eta0)
    U = [w for w in V if w.apply(xi0) == xi0]
    umats = {w.matrix for w in U}
    reps, covered = [], set()
    for w in V:  # W is word-length sorted, so reps get shortest words
        if w.matrix in covered:
            continue
        reps.append(w)
        covered |= {w.compose(u).matrix for u in U}
    return StabilizerPair(tuple(U), tuple(V), tuple(reps))


def dominant_representative(eta, rs, W=None):
    """(s, s*eta) with -A_{s*eta} in the closed dominant chamber.
    Deterministic: shortest word, then lexicographically lowest."""
    if W is None:
        W = generate_weyl_group(rs)
    eta = coords_of(eta)
    for w in W:
        img = w.apply(eta)
        if rs.is_dominant(vscale(Fraction(-1), img)):
            return w, img
    raise AssertionError("no dominant representative found")  # unreachable


def maximize_xi_over_V(xi, V, rs):
    """(s, s*xi) with s in V and s*xi lexicographically maximal over the
    V-orbit.  Asserts the wall-positivity consequence: <alpha, A_{s*xi}>
    >= 0 for every positive root alpha whose reflection lies in V."""
    xi = coords_of(xi)
    best = None
    for w in V:
        img = w.apply(xi)
        key = lex_tuple(img, rs)
        cand = (tuple(-c for c in key), len(w.word), w.word)
        if best is None or cand < best[0]:
            best = (cand, w, img)
    _, s, xi_max = best
    vmats = {w.matrix for w in V}
    for alpha in rs.positive_roots:
        refl = _reflection_matrix(alpha, rs.dim)
        if refl in vmats:
            assert vdot(alpha, xi_max) >= 0, "lex maximum violates wall positivity"
    return s, xi_max


def _vanishing_simple_indices(rs, a_xi, a_eta):
    return [i for i, alpha in enumerate(rs.simple_roots)
            if vdot(alpha, a_xi) == 0 and vdot(alpha, a_eta) == 0]


def _check_normalized(rs, a_xi, a_eta, W):
    if not rs.is_dominant(vscale(Fraction(-1), a_eta)):
        raise PreconditionError("-A_eta is not dominant; normalize first")
    V = stabilizer(W, a_eta)
    key = lex_tuple(a_xi, rs)
    for w in V:
        if lex_tuple(w.apply(a_xi), rs) > key:
            raise PreconditionError("xi is not lex-maximal over V; normalize first")


def _closure(gens, identity):
    seen = {identity.matrix: identity}
    frontier = [identity]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                x = g.compose(w)
                if x.matrix not in seen:
                    seen[x.matrix] = x
                    new.append(x)
        frontier = new
    return sorted(seen.values(), key=lambda w: (len(w.word), w.word))


def verify_lemma2(rs, lam0, W=None):
    """Check that the stabilizer U of a normalized spectral parameter is
    generated by the simple reflections vanishing at it.

    lam0 may be a SpectralParameter or a pair of coordinate tuples
    (a_xi, a_eta).  Returns (ok, witness) where witness carries the
    generating set and both subgroups.
    """
    a_xi, a_eta = _lambda_coords(lam0)
    if W is None:
        W = generate_weyl_group(rs)
    _check_normalized(rs, a_xi, a_eta, W)
    U = [w for w in W if w.apply(a_xi) == tuple(a_xi) and w.apply(a_eta) == tuple(a_eta)]
    vanishing = _vanishing_simple_indices(rs, a_xi, a_eta)
    gens = [simple_reflection(rs, i) for i in vanishing]
    Uprime = _closure(gens, _identity_element(rs.dim))
    ok = {w.matrix for w in U} == {w.matrix for w in Uprime}
    witness = {
        "vanishing_simple_indices": vanishing,
        "U_order": len(U),
        "U_prime_order": len(Uprime),
        "U": U,
        "U_prime": Uprime,
    }
    return ok, witness


def _lambda_coords(lam0):
    """(A_xi, A_eta) from a SpectralParameter-like object or a pair."""
    if hasattr(lam0, "xi") and hasattr(lam0, "eta"):
        return coords_of(lam0.xi), coords_of(lam0.eta)
    a_xi, a_eta = lam0
    return coords_of(a_xi), coords_of(a_eta)


def decompose_root(alpha, lam0, rs, W=None):
    """Write a positive root alpha vanishing at a normalized lambda_0 as
    alpha = s(alpha_p) with s a product of vanishing simple reflections
    and alpha_p a vanishing simple root, by induction on the height."""
    a_xi, a_eta = _lambda_coords(lam0)
    if W is None:
        W = generate_weyl_group(rs)
    _check_normalized(rs, a_xi, a_eta, W)
    alpha = coords_of(alpha)
    if alpha not in rs.positive_roots:
        raise PreconditionError("alpha is not a positive root")
    if vdot(alpha, a_xi) != 0 or vdot(alpha, a_eta) != 0:
        raise PreconditionError("alpha does not vanish at lambda_0")

    def recurse(beta):
        coeffs = rs.simple_basis_coeffs(beta)
        if sum(coeffs) == 1:
            return _identity_element(rs.dim), beta
        k = next(i for i, c in enumerate(coeffs)
                 if c > 0 and vdot(beta, rs.simple_roots[i]) > 0)
        sk = simple_reflection(rs, k)
        s_prime, alpha_p = recurse(sk.apply(beta))
        return sk.compose(s_prime), alpha_p

    s, alpha_p = recurse(alpha)
    assert s.apply(alpha_p) == alpha
    assert vdot(alpha_p, a_xi) == 0 and vdot(alpha_p, a_eta) == 0
    return s, alpha_p


def sign_on_pi_prime(sigma, factors):
    """Sign by which sigma acts on the product of the given root factors.

    sigma must permute the factor multiset up to sign (true for sigma in
    the stabilizer U when factors are the roots vanishing there); the
    result then equals det(sigma).
    """
    factors = [coords_of(f) for f in factors]
    remaining = list(factors)
    eps_prime = 1
    for beta in factors:
        img = sigma.apply(beta)
        neg = vscale(Fraction(-1), img)
        if img in remaining:
            remaining.remove(img)
        elif neg in remaining:
            remaining.remove(neg)
            eps_prime = -eps_prime
        else:
            raise PreconditionError(
                "element does not permute the factor set up to sign")
    assert eps_prime == sigma.sign, "pi'-sign differs from det sign"
    return eps_prime
