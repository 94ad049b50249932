"""One-variable exponential polynomials and the boundedness decision rule.

An ExpPoly is a finite sum  sum_j p_j(t) exp((mu_j + i k_j) t)  with
pairwise-distinct frequencies.  Frequencies and coefficients are exact
(Fraction pairs / Gaussian rationals) when built from the symbolic
pipeline; a float constructor with tolerance merging is provided for
numerically-sourced data.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolationError
from .sympoly import GaussQ

FREQ_MERGE_TOL = 1e-12


def _freq_complex(freq):
    return complex(float(freq[0]), float(freq[1]))


def _coeff_complex(c):
    return complex(c)


@dataclass(frozen=True)
class ExpPoly:
    """terms: tuple of (freq, coeffs) with freq = (re, im) and coeffs the
    ascending-degree polynomial coefficients."""
    terms: tuple

    @staticmethod
    def build(term_map):
        """From {freq: {degree: coeff}}; drops zeros, sorts for determinism."""
        out = []
        for freq, poly in term_map.items():
            degs = {d: c for d, c in poly.items() if c}
            if not degs:
                continue
            top = max(degs)
            coeffs = tuple(degs.get(d, GaussQ() if isinstance(next(iter(degs.values())), GaussQ) else 0j)
                           for d in range(top + 1))
            out.append(((freq[0], freq[1]), coeffs))
        out.sort(key=lambda item: (float(item[0][0]), float(item[0][1]), repr(item[0])))
        ep = ExpPoly(tuple(out))
        ep._check_distinct()
        return ep

    @staticmethod
    def from_float_terms(pairs, tol=FREQ_MERGE_TOL):
        """From [(complex_freq, coeff_list)], merging frequencies within tol."""
        merged = []
        for f, coeffs in pairs:
            f = complex(f)
            for entry in merged:
                if abs(entry[0] - f) <= tol:
                    c = list(entry[1])
                    for i, x in enumerate(coeffs):
                        if i < len(c):
                            c[i] += x
                        else:
                            c.append(x)
                    entry[1] = c
                    break
            else:
                merged.append([f, list(coeffs)])
        term_map = {}
        for f, coeffs in merged:
            term_map[(f.real, f.imag)] = {d: c for d, c in enumerate(coeffs)}
        return ExpPoly.build(term_map)

    def _check_distinct(self):
        seen = set()
        for freq, _ in self.terms:
            if freq in seen:
                raise InvariantViolationError(f"repeated frequency {freq}")
            seen.add(freq)

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        term_map = {}
        for freq, coeffs in self.terms + other.terms:
            acc = term_map.setdefault(freq, {})
            for d, c in enumerate(coeffs):
                acc[d] = acc.get(d, GaussQ() if isinstance(c, GaussQ) else 0j) + c
        return ExpPoly.build(term_map)

    def scale(self, c):
        return ExpPoly(tuple((f, tuple(x * c for x in coeffs))
                             for f, coeffs in self.terms))

    def shift_frequencies(self, delta):
        """Multiply by exp(delta * t): add delta = (re, im) to every frequency."""
        term_map = {}
        for (fr, fi), coeffs in self.terms:
            term_map[(fr + delta[0], fi + delta[1])] = dict(enumerate(coeffs))
        return ExpPoly.build(term_map)

    def max_degree(self):
        return max((len(c) - 1 for _, c in self.terms), default=-1)

    def to_json(self):
        return [
            {
                "re_freq": float(f[0]),
                "im_freq": float(f[1]),
                "coeffs": [[float(complex(c).real), float(complex(c).imag)]
                           for c in coeffs],
            }
            for f, coeffs in self.terms
        ]

    @staticmethod
    def from_json(data):
        return ExpPoly.from_float_terms(
            [(complex(d["re_freq"], d["im_freq"]),
              [complex(a, b) for a, b in d["coeffs"]]) for d in data])


def ep_eval(ep, t):
    """Value of the exponential polynomial at real t."""
    total = 0j
    for freq, coeffs in ep.terms:
        p = 0j
        for c in reversed(coeffs):
            p = p * t + _coeff_complex(c)
        total += p * cmath.exp(_freq_complex(freq) * t)
    return total


def ep_eval_log_abs(ep, t):
    """log|ep(t)|, stable for frequencies with large positive real part."""
    if ep.is_zero:
        return -math.inf
    m = max(float(f[0]) for f, _ in ep.terms)
    total = 0j
    for freq, coeffs in ep.terms:
        p = 0j
        for c in reversed(coeffs):
            p = p * t + _coeff_complex(c)
        z = complex(float(freq[0]) - m, float(freq[1]))
        total += p * cmath.exp(z * t)
    if total == 0:
        return -math.inf
    return m * t + math.log(abs(total))


@dataclass(frozen=True)
class OscillatoryClass:
    kind: str          # "zero" | "bounded" | "unbounded"
    witness: tuple     # the offending / nonzero term, or None
    limsup_bound: float | None = None

    @property
    def is_zero(self):
        return self.kind == "zero"


def classify_oscillatory(ep):
    """Algebraic limsup classification for purely imaginary frequencies.

    A nonconstant polynomial coefficient forces limsup |ep| = infinity;
    all-constant nonzero coefficients give a finite positive limsup;
    no terms means identically zero.  (Consequence of Harish-Chandra's
    elementary exponential-polynomial lemma; no sampling involved.)
    """
    for freq, _ in ep.terms:
        if freq[0] != 0:
            raise InvariantViolationError(
                f"frequency {freq} is not purely imaginary")
    ep._check_distinct()
    for term in ep.terms:
        if len(term[1]) > 1:
            return OscillatoryClass("unbounded", term)
    if not ep.terms:
        return OscillatoryClass("zero", None)
    bound = sum(abs(complex(c[0])) for _, c in ep.terms)
    return OscillatoryClass("bounded", ep.terms[0], limsup_bound=bound)


def dominant_growth(ep):
    """(rate, reduced): the max real part over nonzero terms and the
    purely-oscillatory part at that rate (frequencies shifted to iR)."""
    if ep.is_zero:
        return -math.inf, ep
    rate = max((f[0] for f, _ in ep.terms), key=float)
    term_map = {}
    for (fr, fi), coeffs in ep.terms:
        if fr == rate:
            term_map[(type(fr)(0) if isinstance(fr, Fraction) else 0.0, fi)] = \
                dict(enumerate(coeffs))
    return rate, ExpPoly.build(term_map)


def numeric_limsup_probe(ep, t_grid):
    """max |ep(t)| over the grid; a numerical cross-check, not a decision."""
    return max((abs(ep_eval(ep, t)) for t in t_grid), default=0.0)
