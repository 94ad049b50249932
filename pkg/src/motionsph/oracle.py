"""Independent ground-truth generators.

None of these share code paths with the symbolic engine: the rank-1
closed form is sin(x)/x, the Monte Carlo check integrates the defining
K-average directly, and the divided-difference limit approximates the
regularizing differential operator numerically in high precision.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np

from .errors import PreconditionError
from .rootsys import coords_of
from .spherical import vanishing_positive_roots
from .weylgrp import generate_weyl_group

_MC_CHUNK = 100_000


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def psi_rank1(x):
    """sin(x)/x with the removable singularity filled by its series."""
    x = complex(x)
    if abs(x) < 1e-4:
        x2 = x * x
        return 1 - x2 / 6 + x2 * x2 / 120 - x2 * x2 * x2 / 5040
    import cmath
    return cmath.sin(x) / x


def psi_montecarlo_su2(lam_norm, y_norm, n_samples, seed=0):
    """Haar average of exp(i*lam(Ad(k)Y)) for the rank-1 complex group:
    the orbit average reduces to a uniform average of exp(i*a*u) with
    u = cos(theta) uniform on [-1, 1] and a = |lambda||Y|.

    Returns (mean, stderr).  Counter-based chunked streams keep the result
    reproducible and independent of chunk scheduling.
    """
    if n_samples < 1000:
        raise PreconditionError("n_samples must be at least 1000")
    a = float(lam_norm) * float(y_norm)
    total = 0j
    total_sq = 0.0
    done = 0
    chunk_idx = 0
    while done < n_samples:
        n = min(_MC_CHUNK, n_samples - done)
        rng = np.random.Generator(np.random.Philox(key=[seed, chunk_idx]))
        u = rng.uniform(-1.0, 1.0, n)
        vals = np.exp(1j * a * u)
        total += complex(vals.sum())
        total_sq += float(np.sum(np.abs(vals) ** 2))
        done += n
        chunk_idx += 1
    mean = total / n_samples
    var = max(total_sq / n_samples - abs(mean) ** 2, 0.0)
    stderr = math.sqrt(var / n_samples)
    return mean, stderr


def divided_difference_limit(rs, lam0, H0, t, betas=None, steps=5, h0=None, dps=40):
    """Numerical limit of the regularized alternating sum.

    Approximates the iterated directional derivative (along the vanishing
    roots) of  sum_s eps(s) exp(i<sA_lambda, tH0>) / pi''(lambda)  at
    lambda_0 by nested symmetric divided differences with Richardson
    extrapolation, in high-precision arithmetic.  Converges to the value
    of the symbolic ExpPoly at t.
    """
    if betas is None:
        betas = vanishing_positive_roots(rs, lam0)
    betas = [coords_of(b) for b in betas]
    r = len(betas)
    if h0 is None:
        # the phase error scales with (t*h)^2, so shrink the step with t
        h0 = 0.05 / max(1.0, float(t))
    if h0 <= 0 or (r > 0 and h0 < 1e-12):
        raise PreconditionError("step underflow; use the exact symbolic path")
    H0 = coords_of(H0)
    W = generate_weyl_group(rs)

    van = set(vanishing_positive_roots(rs, lam0))
    den_roots = [g for g in rs.positive_roots if g not in van]

    # <s A_lambda, tH0> = <A_lambda, s^T (tH0)>; precompute s^T H0 exactly
    dim = rs.dim
    st_h0 = [tuple(sum(s.matrix[i][j] * H0[i] for i in range(dim)) for j in range(dim))
             for s in W]

    with mpmath.workdps(dps):
        t_mp = _mpf(t)
        a0 = [mpmath.mpc(_mpf(x), _mpf(y)) for x, y in zip(lam0.xi, lam0.eta)]

        def G(lam_vec):
            total = mpmath.mpc(0)
            for s, sth in zip(W, st_h0):
                phase = sum(l * _mpf(c) for l, c in zip(lam_vec, sth))
                total += s.sign * mpmath.exp(1j * t_mp * phase)
            den = mpmath.mpc(1)
            for g in den_roots:
                den *= sum(l * _mpf(c) for l, c in zip(lam_vec, g))
            return total / den

        def D(h):
            if r == 0:
                return G(a0)
            acc = mpmath.mpc(0)
            for signs in itertools.product((1, -1), repeat=r):
                pt = list(a0)
                sgn = 1
                for sg, b in zip(signs, betas):
                    sgn *= sg
                    for j in range(dim):
                        pt[j] = pt[j] + sg * h * _mpf(b[j])
                acc += sgn * G(pt)
            return acc / (2 * h) ** r

        if r == 0:
            return complex(G(a0))
        hs = [mpmath.mpf(h0) / 2 ** j for j in range(steps)]
        vals = [D(h) for h in hs]
        # Richardson in h^2 (symmetric differences have even error expansion)
        xs = [h * h for h in hs]
        tab = list(vals)
        n = len(xs)
        for level in range(1, n):
            for i in range(n - level):
                tab[i] = (tab[i] * xs[i + level] - tab[i + 1] * xs[i]) \
                    / (xs[i + level] - xs[i])
        return complex(tab[0])
