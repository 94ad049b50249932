import math
import random
import warnings
from fractions import Fraction as F

import pytest

from motionsph.errors import (
    PreconditionError, ProbeCollisionError, RegularParameterError,
    SingularParameterError,
)
from motionsph.expasym import ExpPoly, ep_eval
from motionsph.oracle import psi_rank1
from motionsph.rootsys import build_root_system, vadd, vdot, vscale, vzero
from motionsph.spherical import (
    SpectralParameter, alt_sum_constant, bracket_nonzero, build_ray_sum,
    c0_constant, from_pairing, is_singular, normalize, pick_probe_direction,
    psi_regular, psi_singular, split_sum, vanishing_positive_roots,
)
from motionsph.sympoly import GaussQ
from motionsph.weylgrp import generate_weyl_group

ALL = ["A1", "A2", "A3", "B2", "G2"]


# --- normalization constants -----------------------------------------------


def test_alt_sum_constant_a1():
    assert alt_sum_constant(build_root_system("A1")) == 1


def test_c0_a1_is_minus_i():
    assert c0_constant(build_root_system("A1")) == GaussQ(0, -1)


@pytest.mark.parametrize("label", ALL)
def test_c0_normalizes_psi_at_origin(label):
    # psi_lambda(exp H) -> 1 as H -> 0 (wall-limit path at H = 0)
    rs = build_root_system(label)
    lam = from_pairing(rs, range(1, rs.rank + 1), range(2, rs.rank + 2))
    val = psi_regular(rs, lam, vzero(rs.dim))
    assert abs(val - 1) < 1e-10


# --- regular evaluation ----------------------------------------------------


def test_rank1_matches_closed_form():
    rs = build_root_system("A1")
    rng = random.Random(17)
    for _ in range(50):
        lam = from_pairing(rs, [F(rng.randint(1, 40), rng.randint(1, 7))])
        H = from_pairing(rs, [F(rng.randint(1, 30), rng.randint(1, 5))]).xi
        x = float(vdot(lam.xi, H))
        assert abs(psi_regular(rs, lam, H) - psi_rank1(x)) < 1e-10


def test_rank1_imaginary_parameter_is_sinh():
    rs = build_root_system("A1")
    lam = from_pairing(rs, [0], [F(3, 2)])
    H = from_pairing(rs, [2]).xi
    y = float(vdot(lam.eta, H))
    assert abs(psi_regular(rs, lam, H) - math.sinh(y) / y) < 1e-10


def test_wall_H_is_handled_by_limit():
    rs = build_root_system("A2")
    lam = from_pairing(rs, [1, 2])
    H_wall = from_pairing(rs, [0, 3]).xi  # pi(H) = 0
    val = psi_regular(rs, lam, H_wall)
    # cross-check against evaluation just off the wall
    u = from_pairing(rs, [1, 1]).xi
    near = psi_regular(rs, lam, [float(a) + 1e-6 * float(b)
                                 for a, b in zip(H_wall, u)])
    assert abs(val - near) < 1e-4


def test_zero_H_gives_one():
    rs = build_root_system("B2")
    lam = from_pairing(rs, [2, 3], [1, 1])
    assert abs(psi_regular(rs, lam, vzero(rs.dim)) - 1) < 1e-10


def test_singular_lambda_rerouted():
    rs = build_root_system("A2")
    lam = from_pairing(rs, [0, 1])
    H = from_pairing(rs, [1, 1]).xi
    with pytest.raises(SingularParameterError):
        psi_regular(rs, lam, H)


def test_near_singular_warns():
    rs = build_root_system("A2")
    wall = from_pairing(rs, [0, 1]).xi
    xi = tuple(float(x) + 3e-9 * float(b)
               for x, b in zip(wall, rs.positive_roots[0]))
    lam = SpectralParameter(xi, (0.0,) * rs.dim)
    H = from_pairing(rs, [1, 1]).xi
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        psi_regular(rs, lam, H)
    assert any("ill-conditioned" in str(w.message) for w in caught)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_weyl_invariance_in_lambda_and_H(label):
    rs = build_root_system(label)
    W = generate_weyl_group(rs)
    rng = random.Random(23)
    for _ in range(3):
        lam = from_pairing(rs,
                           [F(rng.randint(1, 9), 2) for _ in range(rs.rank)],
                           [F(rng.randint(1, 9), 3) for _ in range(rs.rank)])
        H = from_pairing(rs, [F(rng.randint(1, 5)) for _ in range(rs.rank)]).xi
        base = psi_regular(rs, lam, H, W)
        for s in W:
            lam_s = SpectralParameter(s.apply(lam.xi), s.apply(lam.eta))
            assert abs(psi_regular(rs, lam_s, H, W) - base) < 1e-10
            assert abs(psi_regular(rs, lam, s.apply(H), W) - base) < 1e-10


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_real_parameter_bounded_by_one(label):
    rs = build_root_system(label)
    rng = random.Random(29)
    for _ in range(20):
        lam = from_pairing(rs, [F(rng.randint(1, 60), rng.randint(1, 7))
                                for _ in range(rs.rank)])
        H = from_pairing(rs, [F(rng.randint(1, 90), rng.randint(1, 5))
                              for _ in range(rs.rank)]).xi
        assert abs(psi_regular(rs, lam, H)) <= 1 + 1e-9


# --- normalization ---------------------------------------------------------


def test_normalize_postconditions():
    rs = build_root_system("B2")
    rng = random.Random(31)
    W = generate_weyl_group(rs)
    for _ in range(10):
        lam = from_pairing(rs,
                           [F(rng.randint(-6, 6)) for _ in range(rs.rank)],
                           [F(rng.randint(-6, 6)) for _ in range(rs.rank)])
        lam0 = normalize(rs, lam, W)
        assert lam0.normalized
        assert rs.is_dominant(vscale(F(-1), lam0.eta))
        s1, s2 = lam0.witness
        assert s2.compose(s1).apply(lam.xi) == lam0.xi
        assert s1.apply(lam.eta) == lam0.eta
        # idempotent
        again = normalize(rs, lam0, W)
        assert (again.xi, again.eta) == (lam0.xi, lam0.eta)


def test_vanishing_roots_and_singularity():
    rs = build_root_system("A3")
    lam = from_pairing(rs, [0, 1, 0])
    vans = vanishing_positive_roots(rs, lam)
    assert len(vans) == 2
    assert is_singular(rs, (lam.xi, lam.eta))
    assert not is_singular(rs, (from_pairing(rs, [1, 1, 1]).xi, vzero(rs.dim)))


# --- singular rays ---------------------------------------------------------


def test_psi_singular_rejects_regular_parameter():
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [1, 1]))
    H0 = from_pairing(rs, [1, 1]).xi
    with pytest.raises(RegularParameterError):
        psi_singular(rs, lam0, H0)


def test_build_ray_sum_preconditions():
    rs = build_root_system("A2")
    lam = from_pairing(rs, [0, 1])
    H0 = from_pairing(rs, [1, 1]).xi
    with pytest.raises(PreconditionError):
        build_ray_sum(rs, lam, H0)  # not normalized
    lam0 = normalize(rs, lam)
    with pytest.raises(PreconditionError):
        build_ray_sum(rs, lam0, from_pairing(rs, [0, 1]).xi)  # wall H0


def test_rank1_singular_ray_is_constant_one():
    rs = build_root_system("A1")
    lam0 = normalize(rs, from_pairing(rs, [0]))
    H0 = from_pairing(rs, [2]).xi
    ray = psi_singular(rs, lam0, H0)
    # c * zeta = 2 * i<alpha,H0> t  (c = 2, both Weyl terms contribute)
    expected = ExpPoly.build({(F(0), F(0)): {1: GaussQ(0, 4)}})
    assert ray.exppoly == expected
    assert ray.c_value == 2
    for t in (0.5, 1.0, 7.0):
        assert abs(ray.psi(t) - 1) < 1e-12


@pytest.mark.parametrize("label,pairings", [
    ("A2", [0, 1]), ("B2", [1, 0]), ("G2", [0, 2]), ("A3", [0, 1, 0]),
])
def test_singular_ray_continuity_with_regular_values(label, pairings):
    # psi is continuous in lambda: symmetric perturbations along the first
    # vanishing root converge to the regularized ray value
    rs = build_root_system(label)
    lam0 = normalize(rs, from_pairing(rs, pairings))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ray = psi_singular(rs, lam0, H0, W)
    u = from_pairing(rs, [1] * rs.rank).xi  # generic regularizing direction
    t = 2.0
    H = [t * float(c) for c in H0]
    vals = []
    eps_list = (2e-3, 1e-3)
    for eps in eps_list:
        pair = []
        for sgn in (1, -1):
            xi = tuple(float(x) + sgn * eps * float(b)
                       for x, b in zip(lam0.xi, u))
            pair.append(psi_regular(rs, (xi, lam0.eta), H, W))
        vals.append(0.5 * (pair[0] + pair[1]))
    # one Richardson step in eps^2
    e2 = [e * e for e in eps_list]
    extrap = (vals[1] * e2[0] - vals[0] * e2[1]) / (e2[0] - e2[1])
    assert abs(extrap - ray.psi(t)) < 1e-6 * max(1.0, abs(ray.psi(t)))


# --- the split along the eta-stabilizer ------------------------------------


def test_split_counts_regular_imaginary_a2():
    # eta_0 on a wall, xi_0 regular: |V| = 2, U trivial
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [1, 2], [0, -1]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ss = split_sum(rs, lam0, H0, W)
    assert len(ss.bracket.terms) == 2
    assert len(ss.remainder.terms) == 4
    assert ss.outer_rate == vdot(lam0.h_prime(), H0)
    assert all(f[0] == 0 for f, _ in ss.bracket.terms)
    assert all(f[0] < ss.outer_rate for f, _ in ss.remainder.terms)


def test_split_recombines_to_full_sum():
    rs = build_root_system("B2")
    lam0 = normalize(rs, from_pairing(rs, [1, 3], [-2, 0]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ss = split_sum(rs, lam0, H0, W)
    recombined = ss.bracket.shift_frequencies((ss.outer_rate, F(0))) + ss.remainder
    assert recombined == ss.ray.exppoly
    for t in (0.7, 3.0):
        assert abs(ep_eval(recombined, t) - ep_eval(ss.ray.exppoly, t)) < 1e-8


def test_split_singular_wall_has_polynomial_bracket():
    # xi and eta both on the alpha_1 wall: r = 1, U = V, one bracket term
    # whose polynomial coefficient is nonconstant
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [0, 1], [0, -1]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ss = split_sum(rs, lam0, H0, W)
    assert len(ss.bracket.terms) == 1
    assert len(ss.bracket.terms[0][1]) == 2  # degree 1 polynomial


def test_probe_collision_detected():
    # eta = 0 makes V the whole group; xi_0 with pairings (1,1) has
    # s_1 xi_0 - s_2 xi_0 = alpha_2 - alpha_1, orthogonal to H0 = h_1 + h_2
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [1, 1]))
    W = generate_weyl_group(rs)
    basis = rs.dual_basis()
    H0 = vadd(basis[0], basis[1])
    with pytest.raises(ProbeCollisionError):
        split_sum(rs, lam0, H0, W)


def test_pick_probe_avoids_collision_and_is_deterministic():
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [1, 1], [-1, -1]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, seed=0, W=W)
    assert H0 == pick_probe_direction(rs, lam0, seed=0, W=W)
    assert rs.is_strictly_dominant(H0)
    split_sum(rs, lam0, H0, W)  # must not raise


def test_pick_probe_requires_normalized():
    rs = build_root_system("A2")
    lam = from_pairing(rs, [1, 1], [1, 1])
    with pytest.raises(PreconditionError):
        pick_probe_direction(rs, lam)


# --- bracket top coefficient -----------------------------------------------


def test_bracket_top_regular_imaginary():
    rs = build_root_system("A2")
    lam0 = normalize(rs, from_pairing(rs, [1, 2], [0, -1]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ok, info = bracket_nonzero(rs, lam0, H0, W)
    assert ok
    assert info["degree"] == 0 and info["U_order"] == 1


def test_bracket_top_a3_two_vanishing_roots():
    rs = build_root_system("A3")
    lam0 = normalize(rs, from_pairing(rs, [0, 1, 0], [0, -1, 0]))
    W = generate_weyl_group(rs)
    H0 = pick_probe_direction(rs, lam0, W=W)
    ok, info = bracket_nonzero(rs, lam0, H0, W)
    assert ok
    assert info["degree"] == 2 and info["U_order"] == 4
    assert info["computed_top"] == info["predicted_top"]


def test_bracket_top_rank1_at_zero():
    rs = build_root_system("A1")
    lam0 = normalize(rs, from_pairing(rs, [0]))
    H0 = from_pairing(rs, [2]).xi
    ok, info = bracket_nonzero(rs, lam0, H0)
    assert ok
    # i^1 * |U| * pi'(H0) / pi''(lambda0) = i * 2 * 2 / 1 = 4i
    assert info["predicted_top"] == GaussQ(0, 4)
