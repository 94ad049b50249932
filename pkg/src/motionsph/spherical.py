"""Spherical-function evaluation for complex Cartan motion groups.

Regular parameters use the Weyl alternating-sum formula directly; singular
parameters (where the product of positive roots vanishes at A_lambda) go
through the exact symbolic regularization: multiply by the vanishing-root
product, differentiate along those roots, evaluate at the parameter.
"""

from __future__ import annotations

import cmath
import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    PreconditionError, ProbeCollisionError, RegularParameterError,
    SingularParameterError,
)
from .expasym import ExpPoly, ep_eval
from .rootsys import RootSystem, coords_of, eval_pi, vdot, vscale, vzero
from .sympoly import (
    DiffContext, GaussQ, MPoly, RatExpTerm, apply_pi_prime, evaluate_at,
    c_constant,
)
from .weylgrp import (
    dominant_representative, generate_weyl_group, maximize_xi_over_V,
    stabilizer, stabilizer_pair,
)

NEAR_SINGULAR_REROUTE = 1e-10
NEAR_SINGULAR_WARN = 1e-8


@dataclass(frozen=True)
class SpectralParameter:
    """lambda = xi + i*eta as a pair of real covectors (ambient coords)."""
    xi: tuple
    eta: tuple
    normalized: bool = False
    witness: tuple = ()

    @property
    def is_real(self):
        return all(c == 0 for c in self.eta)

    def a_lambda(self):
        """Ambient coordinates of A_lambda as Gaussian rationals."""
        return tuple(GaussQ(x, y) for x, y in zip(self.xi, self.eta))

    def h_prime(self):
        """H' = -A_eta."""
        return vscale(Fraction(-1), self.eta)


def from_pairing(rs, xi_pairings, eta_pairings=None):
    """Spectral parameter from simple-root pairing coordinates
    c_i = <alpha_i, A>; the natural coordinates for naming wall strata."""
    xi = rs.from_pairing_coords([Fraction(c) for c in xi_pairings])
    if eta_pairings is None:
        eta = vzero(rs.dim)
    else:
        eta = rs.from_pairing_coords([Fraction(c) for c in eta_pairings])
    return SpectralParameter(xi, eta)


def normalize(rs, lam, W=None):
    """Normalize: first move -A_eta into the closed dominant chamber, then
    make xi lexicographically maximal over the stabilizer of eta."""
    if W is None:
        W = generate_weyl_group(rs)
    if isinstance(lam, SpectralParameter):
        xi, eta = lam.xi, lam.eta
    else:
        xi, eta = (coords_of(c) for c in lam)
    s1, eta1 = dominant_representative(eta, rs, W)
    xi1 = s1.apply(xi)
    V = stabilizer(W, eta1)
    s2, xi2 = maximize_xi_over_V(xi1, V, rs)
    return SpectralParameter(xi2, eta1, normalized=True, witness=(s1, s2))


def vanishing_positive_roots(rs, lam):
    """Positive roots beta with <beta, A_lambda> = 0 (both parts)."""
    if isinstance(lam, SpectralParameter):
        xi, eta = lam.xi, lam.eta
    else:
        xi, eta = lam
    return [b for b in rs.positive_roots
            if vdot(b, xi) == 0 and vdot(b, eta) == 0]


def is_singular(rs, lam):
    return bool(vanishing_positive_roots(rs, lam))


# ---------------------------------------------------------------------------
# normalization constant: psi_lambda(0) = 1


@lru_cache(maxsize=None)
def alt_sum_constant(rs: RootSystem):
    """The rational k with  sum_s eps(s) <sA,H>^N = N! * k * pi(A) pi(H)
    for all A, H (N = number of positive roots); checked on two pairs."""
    W = generate_weyl_group(rs)
    N = rs.n_positive
    basis = rs.dual_basis()

    def combo(weights):
        v = vzero(rs.dim)
        for w, h in zip(weights, basis):
            v = tuple(a + Fraction(w) * b for a, b in zip(v, h))
        return v

    def k_of(a, h):
        total = Fraction(0)
        for s in W:
            total += s.sign * vdot(s.apply(a), h) ** N
        return total / (math.factorial(N) * eval_pi(rs, a) * eval_pi(rs, h))

    k1 = k_of(combo(range(1, rs.rank + 1)), combo(range(2, rs.rank + 2)))
    k2 = k_of(combo([3, 7, 11, 17][: rs.rank]), combo([5, 2, 13, 19][: rs.rank]))
    assert k1 == k2, "alternating-sum leading constant is not constant"
    return k1


@lru_cache(maxsize=None)
def c0_constant(rs: RootSystem):
    """c0 = 1 / (i^N k): the constant making psi_lambda(0) = 1."""
    N = rs.n_positive
    i_pow = GaussQ(1)
    for _ in range(N):
        i_pow = i_pow * GaussQ(0, 1)
    return GaussQ(1) / (i_pow * alt_sum_constant(rs))


# ---------------------------------------------------------------------------
# regular evaluation


def _alt_sum(rs, W, a_lambda, H):
    """sum_s eps(s) exp(i <s A_lambda, H>) with compensated summation."""
    re, im = [], []
    for s in W:
        z = 1j * complex(vdot(s.apply(a_lambda), H))
        v = s.sign * cmath.exp(z)
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im))


def _singularity_scale(rs, a_lambda):
    """|pi(A_lambda)| scaled by the product of |alpha| |A| (conditioning)."""
    a = [complex(c) for c in a_lambda]
    norm_a = math.sqrt(sum(abs(x) ** 2 for x in a))
    if norm_a == 0:
        return 0.0
    scale = 1.0
    for alpha in rs.positive_roots:
        scale *= math.sqrt(float(vdot(alpha, alpha))) * norm_a
    return abs(complex(eval_pi(rs, a))) / scale


def psi_regular(rs, lam, H, W=None):
    """psi_lambda(exp H) by the alternating-sum formula; normalized so
    that psi_lambda(0) = 1.  H on a chamber wall is handled by a
    one-dimensional limit transverse to the wall."""
    if W is None:
        W = generate_weyl_group(rs)
    if not isinstance(lam, SpectralParameter):
        lam = SpectralParameter(coords_of(lam[0]), coords_of(lam[1]))
    a_lambda = [complex(x, y) for x, y in zip(lam.xi, lam.eta)]

    rel = _singularity_scale(rs, a_lambda)
    if rel < NEAR_SINGULAR_REROUTE:
        raise SingularParameterError(
            "pi(A_lambda) vanishes (or nearly so); use psi_singular "
            "for the regularized evaluation on a ray")
    if rel < NEAR_SINGULAR_WARN:
        warnings.warn("psi_regular: lambda is close to the singular set; "
                      "the alternating sum is ill-conditioned", stacklevel=2)

    H = coords_of(H)
    pi_H = complex(eval_pi(rs, [complex(h) for h in H]))
    if abs(pi_H) > 1e-9:
        return _psi_regular_at(rs, W, a_lambda, H)

    # H on (or numerically on) a wall: limit along a strictly dominant
    # probe.  The alternating sum cancels to order N in the offset, which
    # exceeds double precision for N = 6, so the ladder runs in mpmath.
    u = vzero(rs.dim)
    for h in rs.dual_basis():
        u = tuple(a + b for a, b in zip(u, h))
    return _psi_wall_limit(rs, W, a_lambda, H, u)


def _psi_wall_limit(rs, W, a_lambda, H, u, dps=40, levels=6):
    import mpmath

    def exact(x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)

    with mpmath.workdps(dps):
        a_m = [mpmath.mpc(z) for z in a_lambda]
        H_m = [exact(x) for x in H]
        u_m = [exact(x) for x in u]
        # the alternating-sum cancellation hinges on exact Weyl matrices
        mats = [[[exact(c) for c in row] for row in s.matrix] for s in W]
        pi_a = mpmath.mpc(1)
        for beta in rs.positive_roots:
            pi_a *= sum(exact(b) * a for b, a in zip(beta, a_m))

        def psi_at(e):
            Hh = [h + e * uu for h, uu in zip(H_m, u_m)]
            num = mpmath.mpc(0)
            for s, m in zip(W, mats):
                st_h = [sum(m[i][j] * Hh[i] for i in range(rs.dim))
                        for j in range(rs.dim)]
                num += s.sign * mpmath.exp(1j * sum(a * h for a, h in zip(a_m, st_h)))
            pi_h = mpmath.mpf(1)
            for beta in rs.positive_roots:
                pi_h *= sum(exact(b) * h for b, h in zip(beta, Hh))
            return mpmath.mpc(complex(c0_constant(rs))) * num / (pi_a * pi_h)

        eps = [mpmath.mpf(1) / (1000 * 2 ** j) for j in range(levels)]
        return complex(_neville_to_zero(eps, [psi_at(e) for e in eps]))


def _psi_regular_at(rs, W, a_lambda, H):
    num = _alt_sum(rs, W, a_lambda, H)
    pi_a = complex(eval_pi(rs, a_lambda))
    pi_h = complex(eval_pi(rs, [complex(h) for h in H]))
    return complex(c0_constant(rs)) * num / (pi_a * pi_h)


def _neville_to_zero(xs, ys):
    n = len(xs)
    tab = list(ys)
    for level in range(1, n):
        for i in range(n - level):
            tab[i] = (tab[i] * (0 - xs[i + level]) - tab[i + 1] * (0 - xs[i])) \
                / (xs[i] - xs[i + level])
    return tab[0]


# ---------------------------------------------------------------------------
# singular (regularized) evaluation on rays


@dataclass(frozen=True)
class RaySum:
    """c * zeta_{lambda_0}(t H0) as an exact ExpPoly, with per-Weyl-element
    polynomial data for the V / (W minus V) split."""
    exppoly: ExpPoly
    c_value: Fraction
    per_s: tuple        # tuple of (s_index, freq pair, {deg: GaussQ})
    vanishing: tuple    # the roots of pi'
    lam0: SpectralParameter
    H0: tuple
    rs: RootSystem


def build_ray_sum(rs, lam0, H0, W=None):
    """Assemble c*zeta_{lambda_0}(t H0) symbolically; works for any number
    of vanishing roots (r = 0 reduces to the plain alternating sum)."""
    if W is None:
        W = generate_weyl_group(rs)
    if not lam0.normalized:
        raise PreconditionError("lambda_0 must be normalized")
    H0 = coords_of(H0)
    if not rs.is_strictly_dominant(H0):
        raise PreconditionError("H0 must be strictly dominant")

    vanishing = tuple(vanishing_positive_roots(rs, lam0))
    van_set = set(vanishing)
    den_roots = tuple(b for b in rs.positive_roots if b not in van_set)
    ctx = DiffContext(rs=rs, weyl=tuple(W), H0=H0, den_roots=den_roots)

    nvars = rs.dim
    den = tuple((ri, 1) for ri in range(len(den_roots)))
    terms = [RatExpTerm(MPoly.constant(nvars, s.sign), den, si)
             for si, s in enumerate(W)]
    terms = apply_pi_prime(terms, vanishing, ctx)
    per_s_raw = evaluate_at(terms, lam0.a_lambda(), ctx)

    h_prime = lam0.h_prime()
    per_s = []
    term_map = {}
    for si, poly in sorted(per_s_raw.items()):
        s = W[si]
        freq = (vdot(s.apply(h_prime), H0), vdot(s.apply(lam0.xi), H0))
        per_s.append((si, freq, dict(poly)))
        acc = term_map.setdefault(freq, {})
        for deg, c in poly.items():
            acc[deg] = acc.get(deg, GaussQ()) + c
    exppoly = ExpPoly.build(term_map)
    return RaySum(
        exppoly=exppoly,
        c_value=c_constant(vanishing),
        per_s=tuple(per_s),
        vanishing=vanishing,
        lam0=lam0,
        H0=H0,
        rs=rs,
    )


@dataclass(frozen=True)
class SingularRay:
    """psi_{lambda_0} restricted to the ray t -> t*H0, in regularized form:
    exppoly(t) = c * zeta_{lambda_0}(t H0), and psi(t) = c0 * exppoly(t) /
    (c * pi(t H0))."""
    ray: RaySum

    @property
    def exppoly(self):
        return self.ray.exppoly

    @property
    def c_value(self):
        return self.ray.c_value

    def psi(self, t):
        rs = self.ray.rs
        pi_h0 = float(eval_pi(rs, [float(h) for h in self.ray.H0]))
        denom = float(self.c_value) * pi_h0 * t ** rs.n_positive
        return complex(c0_constant(rs)) * ep_eval(self.exppoly, t) / denom


def psi_singular(rs, lam0, H0, W=None):
    """Regularized evaluation at a singular normalized parameter."""
    if not is_singular(rs, (lam0.xi, lam0.eta)):
        raise RegularParameterError(
            "pi(A_lambda) does not vanish; use psi_regular")
    return SingularRay(build_ray_sum(rs, lam0, H0, W))


# ---------------------------------------------------------------------------
# the V / (W minus V) split


@dataclass(frozen=True)
class SplitSum:
    """c*zeta = exp(rate*t) * bracket(t) + remainder(t) on the probe ray.

    bracket has purely imaginary frequencies {i s xi_0(H0) : s in V/U};
    every remainder frequency has real part strictly below rate."""
    bracket: ExpPoly
    outer_rate: Fraction
    remainder: ExpPoly
    probe: tuple
    lam0: SpectralParameter
    ray: RaySum


def split_sum(rs, lam0, H0, W=None):
    if W is None:
        W = generate_weyl_group(rs)
    ray = build_ray_sum(rs, lam0, H0, W)
    pair = stabilizer_pair(W, lam0.xi, lam0.eta)
    vmats = {w.matrix for w in pair.V}
    h_prime = lam0.h_prime()
    rate = vdot(h_prime, coords_of(H0))

    bracket_map, remainder_map = {}, {}
    for si, freq, poly in ray.per_s:
        if W[si].matrix in vmats:
            assert freq[0] == rate
            acc = bracket_map.setdefault((Fraction(0), freq[1]), {})
        else:
            assert freq[0] < rate, "off-V frequency is not strictly smaller"
            acc = remainder_map.setdefault(freq, {})
        for deg, c in poly.items():
            acc[deg] = acc.get(deg, GaussQ()) + c
    bracket = ExpPoly.build(bracket_map)
    remainder = ExpPoly.build(remainder_map)

    expected = {(Fraction(0), vdot(s.apply(lam0.xi), coords_of(H0)))
                for s in pair.coset_reps}
    got = {f for f, _ in bracket.terms}
    if len(expected) != len(pair.coset_reps):
        raise ProbeCollisionError(
            "two coset frequencies s xi_0(H0) coincide; re-pick the probe")
    if not got <= expected:
        raise ProbeCollisionError("bracket frequencies do not match V/U cosets")

    # exact recombination check
    recombined = bracket.shift_frequencies((rate, Fraction(0))) + remainder
    assert recombined == ray.exppoly, "split does not recombine exactly"
    return SplitSum(bracket=bracket, outer_rate=rate, remainder=remainder,
                    probe=coords_of(H0), lam0=lam0, ray=ray)


def bracket_nonzero(rs, lam0, H0, W=None):
    """The identity-coset polynomial of the bracket is never identically
    zero: its top coefficient equals i^r |U| pi'(H0) / pi''(lambda_0).
    Returns (ok, info) with both the computed and predicted coefficients."""
    if W is None:
        W = generate_weyl_group(rs)
    ray = build_ray_sum(rs, lam0, H0, W)
    pair = stabilizer_pair(W, lam0.xi, lam0.eta)
    umats = {w.matrix for w in pair.U}
    r = len(ray.vanishing)

    e_poly = {}
    for si, _freq, poly in ray.per_s:
        if W[si].matrix in umats:
            for deg, c in poly.items():
                e_poly[deg] = e_poly.get(deg, GaussQ()) + c
    computed_top = e_poly.get(r, GaussQ())

    pi_prime_h0 = Fraction(1)
    for b in ray.vanishing:
        pi_prime_h0 *= vdot(b, coords_of(H0))
    pi_pp = GaussQ(1)
    van = set(ray.vanishing)
    a_l = lam0.a_lambda()
    for g in rs.positive_roots:
        if g not in van:
            v = GaussQ()
            for gj, lj in zip(g, a_l):
                v = v + lj * gj
            pi_pp = pi_pp * v
    i_pow = GaussQ(1)
    for _ in range(r):
        i_pow = i_pow * GaussQ(0, 1)
    predicted = i_pow * Fraction(len(pair.U)) * pi_prime_h0 / pi_pp

    ok = bool(computed_top) and computed_top == predicted
    info = {
        "degree": r,
        "computed_top": computed_top,
        "predicted_top": predicted,
        "e_coset_poly": e_poly,
        "U_order": len(pair.U),
    }
    return ok, info


# ---------------------------------------------------------------------------
# probe selection


def pick_probe_direction(rs, lam0, seed=0, W=None, budget=200):
    """Deterministic strictly dominant rational H0 with the coset
    frequencies s xi_0(H0) pairwise distinct; retries with denser
    rationals on (measure-zero) collisions."""
    if not lam0.normalized:
        raise PreconditionError("lambda_0 must be normalized")
    if W is None:
        W = generate_weyl_group(rs)
    pair = stabilizer_pair(W, lam0.xi, lam0.eta)
    basis = rs.dual_basis()
    rng = random.Random(seed)
    for attempt in range(budget):
        if attempt == 0:
            weights = [Fraction(i + 1) for i in range(rs.rank)]
        elif attempt < 8:
            weights = [Fraction(rng.randint(1, 29)) for _ in range(rs.rank)]
        else:
            weights = [Fraction(rng.randint(1, 97), rng.randint(1, 13))
                       for _ in range(rs.rank)]
        H0 = vzero(rs.dim)
        for w, h in zip(weights, basis):
            H0 = tuple(a + w * b for a, b in zip(H0, h))
        freqs = {vdot(s.apply(lam0.xi), H0) for s in pair.coset_reps}
        if len(freqs) == len(pair.coset_reps):
            return H0
    raise ProbeCollisionError("exhausted probe retry budget")
