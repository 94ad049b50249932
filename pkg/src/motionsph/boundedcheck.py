"""Boundedness classification of spherical functions, with re-checkable
certificates and empirical growth probes.

The verdict is decided algebraically: exact strict inequalities for the
off-stabilizer Weyl terms, exact non-vanishing of the oscillatory bracket,
and a positive outer growth rate.  Grid probes corroborate the certified
rate but never decide it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .expasym import classify_oscillatory, ep_eval_log_abs
from .rootsys import build_root_system, coords_of, eval_pi, vdot, vscale
from .spherical import (
    SpectralParameter, bracket_nonzero, build_ray_sum, c0_constant,
    normalize, pick_probe_direction, split_sum,
)
from .weylgrp import generate_weyl_group, stabilizer


def _frac_str(x):
    return str(Fraction(x))


def _gauss_pair(g):
    return [_frac_str(g.re), _frac_str(g.im)]


@dataclass(frozen=True)
class BoundednessCertificate:
    verdict: str                 # "Bounded" | "Unbounded"
    system: str
    seed: int
    lam_xi_pairings: tuple       # input lambda, simple-root pairing coords
    lam_eta_pairings: tuple
    lam0_xi_pairings: tuple      # normalized representative
    lam0_eta_pairings: tuple
    normalization_words: tuple
    bound: float | None = None
    probe_pairings: tuple | None = None
    rate: Fraction | None = None
    inequality_table: tuple = ()
    bracket: dict | None = None

    def to_json(self):
        out = {
            "schema": "motionsph/1",
            "kind": "boundedness-certificate",
            "verdict": self.verdict,
            "system": self.system,
            "seed": self.seed,
            "lambda": {
                "xi": [_frac_str(c) for c in self.lam_xi_pairings],
                "eta": [_frac_str(c) for c in self.lam_eta_pairings],
            },
            "lambda_normalized": {
                "xi": [_frac_str(c) for c in self.lam0_xi_pairings],
                "eta": [_frac_str(c) for c in self.lam0_eta_pairings],
                "words": [list(w) for w in self.normalization_words],
            },
        }
        if self.verdict == "Bounded":
            out["bound"] = self.bound
        else:
            out["probe"] = [_frac_str(c) for c in self.probe_pairings]
            out["rate"] = _frac_str(self.rate)
            out["inequality_table"] = [
                {
                    "word": list(row["word"]),
                    "value": _frac_str(row["value"]),
                    "in_V": row["in_V"],
                    "dist_H0_Hp": row["dist_H0_Hp"],
                    "dist_H0_sHp": row["dist_H0_sHp"],
                }
                for row in self.inequality_table
            ]
            out["bracket"] = {
                "degree": self.bracket["degree"],
                "U_order": self.bracket["U_order"],
                "top_coefficient": _gauss_pair(self.bracket["computed_top"]),
                "predicted_top": _gauss_pair(self.bracket["predicted_top"]),
                "oscillatory_class": self.bracket["oscillatory_class"],
            }
        return out


def classify(rs, lam, seed=0, W=None):
    """Theorem engine: Bounded iff the spectral parameter is real."""
    if W is None:
        W = generate_weyl_group(rs)
    if not isinstance(lam, SpectralParameter):
        lam = SpectralParameter(coords_of(lam[0]), coords_of(lam[1]))
    lam0 = normalize(rs, lam, W)
    common = dict(
        system=rs.label,
        seed=seed,
        lam_xi_pairings=rs.simple_pairings(lam.xi),
        lam_eta_pairings=rs.simple_pairings(lam.eta),
        lam0_xi_pairings=rs.simple_pairings(lam0.xi),
        lam0_eta_pairings=rs.simple_pairings(lam0.eta),
        normalization_words=tuple(w.word for w in lam0.witness),
    )
    if lam.is_real:
        # |psi_xi| <= 1: the defining integrand has modulus one
        return BoundednessCertificate(verdict="Bounded", bound=1.0, **common)

    H0 = pick_probe_direction(rs, lam0, seed=seed, W=W)
    ss = split_sum(rs, lam0, H0, W)
    table = verify_inequality_table(rs, lam0.eta, H0, W)
    ok, binfo = bracket_nonzero(rs, lam0, H0, W)
    assert ok, "bracket top coefficient check failed"
    osc = classify_oscillatory(ss.bracket)
    assert osc.kind != "zero", "bracket is identically zero"
    rate = ss.outer_rate
    assert rate > 0, "outer growth rate must be positive for eta != 0"
    binfo = dict(binfo)
    binfo["oscillatory_class"] = osc.kind
    return BoundednessCertificate(
        verdict="Unbounded",
        probe_pairings=rs.simple_pairings(H0),
        rate=rate,
        inequality_table=tuple(table),
        bracket=binfo,
        **common,
    )


def verify_inequality_table(rs, eta0, H0, W=None):
    """Exact values <sH', H0> for every Weyl element, with equality
    precisely on the stabilizer of eta0 and strict inequality off it."""
    if W is None:
        W = generate_weyl_group(rs)
    eta0 = coords_of(eta0)
    h_prime = vscale(Fraction(-1), eta0)
    if not rs.is_dominant(h_prime):
        raise PreconditionError("H' = -A_eta must be dominant")
    H0 = coords_of(H0)
    if not rs.is_strictly_dominant(H0):
        raise PreconditionError("H0 must be strictly dominant")
    vmats = {w.matrix for w in stabilizer(W, eta0)}
    top = vdot(h_prime, H0)
    d_hp = _dist(H0, h_prime)
    rows = []
    for s in W:
        shp = s.apply(h_prime)
        val = vdot(shp, H0)
        in_v = s.matrix in vmats
        if in_v:
            assert val == top
        else:
            assert val < top, "off-V inequality is not strict"
        rows.append({
            "word": s.word,
            "value": val,
            "in_V": in_v,
            "dist_H0_Hp": d_hp,
            "dist_H0_sHp": _dist(H0, shp),
        })
    return rows


def _dist(u, v):
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(u, v)))


def revalidate_certificate(cert_json):
    """Re-check an Unbounded certificate from its serialized fields alone:
    recompute the inequality table and bracket coefficient and compare."""
    if cert_json.get("verdict") == "Bounded":
        eta = [Fraction(c) for c in cert_json["lambda"]["eta"]]
        return all(c == 0 for c in eta) and cert_json["bound"] == 1.0
    rs = build_root_system(cert_json["system"])
    W = generate_weyl_group(rs)
    xi0 = rs.from_pairing_coords([Fraction(c) for c in cert_json["lambda_normalized"]["xi"]])
    eta0 = rs.from_pairing_coords([Fraction(c) for c in cert_json["lambda_normalized"]["eta"]])
    H0 = rs.from_pairing_coords([Fraction(c) for c in cert_json["probe"]])
    rate = Fraction(cert_json["rate"])
    if rate <= 0:
        return False
    h_prime = vscale(Fraction(-1), eta0)
    if vdot(h_prime, H0) != rate:
        return False
    table = verify_inequality_table(rs, eta0, H0, W)
    recorded = cert_json["inequality_table"]
    if len(table) != len(recorded):
        return False
    by_word = {tuple(r["word"]): r for r in recorded}
    for row in table:
        rec = by_word.get(tuple(row["word"]))
        if rec is None or Fraction(rec["value"]) != row["value"] or rec["in_V"] != row["in_V"]:
            return False
        if not rec["in_V"] and not Fraction(rec["value"]) < rate:
            return False
    lam0 = SpectralParameter(xi0, eta0, normalized=True)
    ok, binfo = bracket_nonzero(rs, lam0, H0, W)
    if not ok:
        return False
    top = binfo["computed_top"]
    rec = cert_json["bracket"]["top_coefficient"]
    return bool(top) and (Fraction(rec[0]), Fraction(rec[1])) == (top.re, top.im)


# ---------------------------------------------------------------------------
# empirical growth probes


@dataclass(frozen=True)
class ProbeResult:
    ts: tuple
    abs_psi: tuple
    log_abs_psi: tuple
    fitted_rate: float
    certified_rate: float


def default_t_grid(t_max=200.0, points=512):
    """Log-spaced grid on [1, t_max]; sinh-type growth overflows doubles
    near t*rate ~ 700, so evaluation stays in the log domain."""
    return np.geomspace(1.0, t_max, points)


def probe_growth(rs, lam, H0=None, t_grid=None, seed=0, W=None):
    """Sample |psi_lambda(t H0)| and fit the exponential growth rate.

    The explicit polynomial denominator pi(t H0) is normalized out before
    fitting, and a log(t) regressor absorbs the polynomial factor of the
    regularized numerator, isolating the exponential rate."""
    if W is None:
        W = generate_weyl_group(rs)
    if not isinstance(lam, SpectralParameter):
        lam = SpectralParameter(coords_of(lam[0]), coords_of(lam[1]))
    if t_grid is None:
        t_grid = default_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    lam0 = normalize(rs, lam, W)
    if H0 is None:
        H0 = pick_probe_direction(rs, lam0, seed=seed, W=W)
    H0 = coords_of(H0)

    ray = build_ray_sum(rs, lam0, H0, W)
    ep = ray.exppoly
    # log |zeta(t)| with zeta including the 1/pi'' factor; psi differs by
    # the constant c0/c and the polynomial pi(t H0)
    log_zeta = np.array([ep_eval_log_abs(ep, float(t)) for t in t_grid])
    pi_h0 = float(eval_pi(rs, [float(h) for h in H0]))
    log_norm = math.log(abs(complex(c0_constant(rs)))) - math.log(float(ray.c_value)) \
        - math.log(abs(pi_h0))
    log_abs_psi = log_zeta + log_norm - rs.n_positive * np.log(t_grid)
    abs_psi = np.exp(np.clip(log_abs_psi, -700, 700))

    # slow beats between bracket frequencies bias a short-ray fit; the
    # envelope regression runs on a longer internal ray in the log domain
    t_max = float(t_grid[-1])
    fit_ts = np.geomspace(t_max / 10.0, max(200.0 * t_max, 40000.0), 1024)
    fit_ys = np.array([ep_eval_log_abs(ep, float(t)) for t in fit_ts])
    fitted = _fit_rate(fit_ts, fit_ys)
    certified = float(vdot(lam0.h_prime(), H0))
    return ProbeResult(
        ts=tuple(float(t) for t in t_grid),
        abs_psi=tuple(float(v) for v in abs_psi),
        log_abs_psi=tuple(float(v) for v in log_abs_psi),
        fitted_rate=fitted,
        certified_rate=certified,
    )


def _fit_rate(ts, log_vals, n_windows=24):
    """Least-squares fit of a + rate*t + d*log(t) to window maxima over the
    top decade (peak envelope regression; the oscillatory bracket makes
    pointwise fitting meaningless)."""
    t_max = ts[-1]
    mask = ts >= t_max / 10.0
    ts, log_vals = ts[mask], log_vals[mask]
    finite = np.isfinite(log_vals)
    ts, log_vals = ts[finite], log_vals[finite]
    idx = np.array_split(np.arange(len(ts)), n_windows)
    px, py = [], []
    for chunk in idx:
        if len(chunk) == 0:
            continue
        j = chunk[np.argmax(log_vals[chunk])]
        px.append(ts[j])
        py.append(log_vals[j])
    px, py = np.array(px), np.array(py)
    A = np.column_stack([np.ones_like(px), px, np.log(px)])
    coef, *_ = np.linalg.lstsq(A, py, rcond=None)
    return float(coef[1])


def easy_direction_check(rs, xi, sample_grid, W=None):
    """max |psi_xi| over a grid of H for real xi; the integrand has
    modulus one, so this never exceeds 1 (up to roundoff)."""
    from .spherical import psi_regular
    if W is None:
        W = generate_weyl_group(rs)
    xi = coords_of(xi)
    zero = tuple(Fraction(0) for _ in xi)
    return max(abs(psi_regular(rs, (xi, zero), H, W)) for H in sample_grid)
