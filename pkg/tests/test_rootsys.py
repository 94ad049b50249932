import random
from fractions import Fraction as F

import pytest

from motionsph.errors import ConfigurationError
from motionsph.rootsys import (
    build_root_system, eval_pi, lex_compare, lex_tuple, reflect, vadd,
    vscale, vzero,
)
from motionsph.weylgrp import generate_weyl_group

ALL = ["A1", "A2", "A3", "B2", "G2"]

EXPECTED_COUNTS = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "G2": 6}


@pytest.mark.parametrize("label", ALL)
def test_positive_root_counts(label):
    rs = build_root_system(label)
    assert rs.n_positive == EXPECTED_COUNTS[label]


def test_a2_positive_roots_are_the_three_sums():
    rs = build_root_system("A2")
    a1, a2 = rs.simple_roots
    assert set(rs.positive_roots) == {a1, a2, vadd(a1, a2)}


def test_g2_count_matches_cartan_matrix_closure():
    # independent generation: reflect in root space coordinates driven only
    # by the G2 Cartan matrix, never touching the library's realization
    cartan = [[2, -1], [-3, 2]]

    def refl(i, coeffs):
        # s_i acting on a root written in the simple-root basis
        pairing = sum(coeffs[j] * cartan[i][j] for j in range(2))
        out = list(coeffs)
        out[i] -= pairing
        return tuple(out)

    roots = {(1, 0), (0, 1)}
    frontier = set(roots)
    while frontier:
        new = set()
        for c in frontier:
            for i in range(2):
                img = refl(i, c)
                if img not in roots:
                    new.add(img)
        roots |= new
        frontier = new
    positive = [c for c in roots if all(x >= 0 for x in c) and any(x > 0 for x in c)]
    assert len(positive) == 6
    assert build_root_system("G2").n_positive == 6


def test_b2_has_two_root_lengths():
    rs = build_root_system("B2")
    assert rs.gram[0][0] != rs.gram[1][1]


@pytest.mark.parametrize("label", ALL)
def test_expansions_nonnegative_integers(label):
    rs = build_root_system(label)
    for coeffs in rs.expansions:
        assert all(isinstance(c, int) and c >= 0 for c in coeffs)
        assert any(c > 0 for c in coeffs)


@pytest.mark.parametrize("label", ALL)
def test_gram_symmetric_rational(label):
    rs = build_root_system(label)
    for i in range(rs.rank):
        for j in range(rs.rank):
            assert rs.gram[i][j] == rs.gram[j][i]
            assert isinstance(rs.gram[i][j], F)


@pytest.mark.parametrize("label", ALL)
def test_simple_reflection_permutes_other_positives(label):
    rs = build_root_system(label)
    pos = set(rs.positive_roots)
    for alpha in rs.simple_roots:
        images = {reflect(b, alpha) for b in pos if b != alpha}
        assert images == pos - {alpha}


def test_unsupported_label_rejected():
    with pytest.raises(ConfigurationError):
        build_root_system("E8")
    with pytest.raises(ConfigurationError):
        build_root_system("bogus")


def test_two_argument_form():
    assert build_root_system("B", 2).label == "B2"


# --- lexicographic order ---------------------------------------------------


def _from_simple_coeffs(rs, coeffs):
    v = vzero(rs.dim)
    for c, a in zip(coeffs, rs.simple_roots):
        v = vadd(v, vscale(F(c), a))
    return v


def test_lex_first_coordinate_dominates():
    rs = build_root_system("A2")
    xi1 = _from_simple_coeffs(rs, [1, 0])
    xi2 = _from_simple_coeffs(rs, [0, 5])
    assert lex_compare(xi1, xi2, rs) == 1


def test_lex_reflexive():
    rs = build_root_system("A2")
    xi = _from_simple_coeffs(rs, [2, 3])
    assert lex_compare(xi, xi, rs) == 0


def test_lex_dual_basis_vector_beats_its_reflection():
    rs = build_root_system("A2")
    xi1 = rs.dual_basis()[0]  # <alpha_1, xi1> = 1, <alpha_2, xi1> = 0
    xi2 = reflect(xi1, rs.simple_roots[0])
    assert lex_compare(xi1, xi2, rs) == 1


@pytest.mark.parametrize("label", ALL)
def test_positive_roots_are_lex_positive(label):
    rs = build_root_system(label)
    zero = vzero(rs.dim)
    for beta in rs.positive_roots:
        assert lex_compare(beta, zero, rs) == 1


def test_lex_rejects_vector_outside_root_span():
    rs = build_root_system("A2")  # root span is the sum-zero plane in R^3
    with pytest.raises(ValueError):
        lex_tuple((F(1), F(0), F(0)), rs)


# --- eval_pi ---------------------------------------------------------------


def test_eval_pi_rank1_single_factor():
    rs = build_root_system("A1")
    v = vscale(F(3, 2), rs.simple_roots[0])  # <alpha, v> = 3
    assert eval_pi(rs, v) == 3


@pytest.mark.parametrize("label", ALL)
def test_eval_pi_zero_vector(label):
    rs = build_root_system(label)
    assert eval_pi(rs, vzero(rs.dim)) == 0


def test_eval_pi_positive_on_dominant_chamber():
    rs = build_root_system("A2")
    v = vadd(*rs.dual_basis())
    assert eval_pi(rs, v) > 0


@pytest.mark.parametrize("label", ALL)
def test_eval_pi_sign_covariance(label):
    rs = build_root_system(label)
    rng = random.Random(7)
    basis = rs.dual_basis()
    for _ in range(5):
        v = vzero(rs.dim)
        for h in basis:
            v = vadd(v, vscale(F(rng.randint(-9, 9), rng.randint(1, 4)), h))
        p = eval_pi(rs, v)
        for s in generate_weyl_group(rs):
            assert eval_pi(rs, s.apply(v)) == s.sign * p
