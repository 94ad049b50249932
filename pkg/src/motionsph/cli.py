"""Command-line interface: eval, classify, probe, verify, constants.

All machine-readable output carries "schema": "motionsph/1".  Identical
command line + seed gives byte-identical JSON.  Exit codes: 0 success,
1 failed verification, 2 argument/configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import boundedcheck, oracle
from .errors import MotionsphError, ConfigurationError
from .expasym import ep_eval
from .rootsys import build_root_system, vdot
from .spherical import (
    SpectralParameter, from_pairing, normalize, pick_probe_direction,
    psi_regular,
)
from .weylgrp import generate_weyl_group, verify_lemma2
from .sympoly import c_constant

ENV_PREFIX = "MOTIONSPH_"

DEFAULTS = {
    "seed": 0,
    "t_max": 200.0,
    "points": 512,
    "precision": 50,
    "format": "json",
}


def config_load(path=None, env=None, flags=None):
    """Settings with precedence flags > environment > file > defaults."""
    env = os.environ if env is None else env
    settings = dict(DEFAULTS)
    path = path or env.get(ENV_PREFIX + "CONFIG")
    if path:
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        for key in DEFAULTS:
            if key in data:
                settings[key] = data[key]
    for key in DEFAULTS:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            settings[key] = type(DEFAULTS[key])(raw)
    if flags:
        for key, val in flags.items():
            if val is not None:
                settings[key] = val
    if settings["format"] not in ("json", "csv"):
        raise ConfigurationError(f"unknown output format {settings['format']!r}")
    return settings


def _parse_rationals(text, expected=None, what="value"):
    try:
        vals = [Fraction(p.strip()) for p in str(text).split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"cannot parse {what}: {text!r}") from exc
    if expected is not None and len(vals) != expected:
        raise ConfigurationError(
            f"{what}: expected {expected} comma-separated rationals, got {len(vals)}")
    return vals


def _lambda_from_args(rs, args):
    if getattr(args, "ambient", False):
        xi = tuple(_parse_rationals(args.xi, rs.dim, "--xi"))
        eta = tuple(_parse_rationals(args.eta, rs.dim, "--eta")) if args.eta \
            else tuple(Fraction(0) for _ in range(rs.dim))
        return SpectralParameter(xi, eta)
    xi = _parse_rationals(args.xi, rs.rank, "--xi")
    eta = _parse_rationals(args.eta, rs.rank, "--eta") if args.eta else None
    return from_pairing(rs, xi, eta)


def _emit_json(obj, out):
    out.write(json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1))
    out.write("\n")


def _error_json(err, code, stream):
    _emit_json({"schema": "motionsph/1", "error": type(err).__name__,
                "message": str(err)}, stream)
    return code


# ---------------------------------------------------------------------------
# subcommands


def _cmd_eval(args, settings, out):
    rs = build_root_system(args.system)
    lam = _lambda_from_args(rs, args)
    H = tuple(_parse_rationals(args.H, rs.dim, "--H"))
    value = psi_regular(rs, lam, H)
    _emit_json({
        "schema": "motionsph/1",
        "system": {"type": rs.label[0], "rank": rs.rank},
        "lambda": {"xi": [str(c) for c in rs.simple_pairings(lam.xi)],
                   "eta": [str(c) for c in rs.simple_pairings(lam.eta)]},
        "H": [str(c) for c in H],
        "psi": {"re": value.real, "im": value.imag},
    }, out)
    return 0


def _cmd_classify(args, settings, out):
    rs = build_root_system(args.system)
    lam = _lambda_from_args(rs, args)
    cert = boundedcheck.classify(rs, lam, seed=settings["seed"])
    _emit_json(cert.to_json(), out)
    return 0


def _cmd_probe(args, settings, out):
    rs = build_root_system(args.system)
    lam = _lambda_from_args(rs, args)
    grid = boundedcheck.default_t_grid(settings["t_max"], settings["points"])
    result = boundedcheck.probe_growth(rs, lam, t_grid=grid, seed=settings["seed"])
    out.write("t,abs_psi,log_abs_psi\n")
    for t, a, la in zip(result.ts, result.abs_psi, result.log_abs_psi):
        out.write(f"{t!r},{a!r},{la!r}\n")
    out.write(f"# fitted_rate={result.fitted_rate!r}\n")
    out.write(f"# certified_rate={result.certified_rate!r}\n")
    return 0


def _cmd_constants(args, settings, out):
    rs = build_root_system(args.system)
    stratum = [int(i) for i in str(args.stratum).split(",")] if args.stratum else []
    for i in stratum:
        if not 1 <= i <= rs.rank:
            raise ConfigurationError(f"--stratum index {i} out of range 1..{rs.rank}")
    pairings = [Fraction(0) if (i + 1) in stratum else Fraction(1)
                for i in range(rs.rank)]
    lam = from_pairing(rs, pairings)
    betas = [b for b, exp in zip(rs.positive_roots, rs.expansions)
             if all(e == 0 or (j + 1) in stratum for j, e in enumerate(exp))]
    c = c_constant(betas)
    r = len(betas)
    gram = [[vdot(a, b) for b in betas] for a in betas]
    report = {
        "schema": "motionsph/1",
        "system": {"type": rs.label[0], "rank": rs.rank},
        "stratum_simple_roots": stratum,
        "r": r,
        "c": str(c),
        "gram": [[str(x) for x in row] for row in gram],
    }
    if r == 2:
        x = gram
        formula = x[0][1] ** 2 + x[0][0] * x[1][1]
        report["closed_form_r2"] = str(formula)
        report["matches_closed_form"] = bool(c == formula)
    elif r == 3:
        x = gram
        formula = (x[0][0] * x[1][2] ** 2 + x[1][1] * x[0][2] ** 2
                   + x[2][2] * x[0][1] ** 2 + x[0][0] * x[1][1] * x[2][2]
                   + 2 * x[0][1] * x[0][2] * x[1][2])
        report["closed_form_r3"] = str(formula)
        report["matches_closed_form"] = bool(c == formula)
    _emit_json(report, out)
    if "matches_closed_form" in report and not report["matches_closed_form"]:
        return 1
    return 0


def _all_face_strata(rs):
    """One real dominant spectral parameter per face of the chamber."""
    import itertools
    for bits in itertools.product((0, 1), repeat=rs.rank):
        pairings = [Fraction(b) for b in bits]
        yield bits, from_pairing(rs, pairings)


def _cmd_verify(args, settings, out):
    rs = build_root_system(args.system)
    W = generate_weyl_group(rs)
    run_all = not (args.lemma2 or args.c_constants or args.inequality or args.oracle)
    failures = 0

    def report(name, ok, detail=""):
        nonlocal failures
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        out.write(f"{status} {name}{(' ' + detail) if detail else ''}\n")

    if args.lemma2 or run_all:
        all_ok = True
        for bits, lam in _all_face_strata(rs):
            lam0 = normalize(rs, lam, W)
            ok, _w = verify_lemma2(rs, lam0, W)
            all_ok &= ok
        report(f"lemma2[{rs.label}]", all_ok, f"faces=2^{rs.rank}")

    if args.c_constants or run_all:
        all_ok = True
        checked = 0
        for bits, lam in _all_face_strata(rs):
            from .spherical import vanishing_positive_roots
            betas = vanishing_positive_roots(rs, (lam.xi, lam.eta))
            c = c_constant(betas)
            gram = [[vdot(a, b) for b in betas] for a in betas]
            if len(betas) == 2:
                all_ok &= c == gram[0][1] ** 2 + gram[0][0] * gram[1][1]
                checked += 1
            elif len(betas) == 3:
                all_ok &= c == (gram[0][0] * gram[1][2] ** 2 + gram[1][1] * gram[0][2] ** 2
                                + gram[2][2] * gram[0][1] ** 2
                                + gram[0][0] * gram[1][1] * gram[2][2]
                                + 2 * gram[0][1] * gram[0][2] * gram[1][2])
                checked += 1
        report(f"c-constants[{rs.label}]", all_ok, f"strata_checked={checked}")

    if args.inequality or run_all:
        all_ok = True
        for bits, lam in _all_face_strata(rs):
            if all(b == 0 for b in bits):
                continue
            eta = tuple(-c for c in lam.xi)  # -A_eta dominant on this face
            H0 = pick_probe_direction(
                rs, normalize(rs, (lam.xi, eta), W), seed=settings["seed"], W=W)
            try:
                boundedcheck.verify_inequality_table(rs, eta, H0, W)
            except AssertionError:
                all_ok = False
        report(f"inequality[{rs.label}]", all_ok)

    if args.oracle or run_all:
        # divided-difference oracle against the symbolic ExpPoly on a wall stratum
        from .spherical import build_ray_sum
        pairings = [Fraction(0) if i == 0 else Fraction(1) for i in range(rs.rank)]
        lam0 = normalize(rs, from_pairing(rs, pairings), W)
        H0 = pick_probe_direction(rs, lam0, seed=settings["seed"], W=W)
        ray = build_ray_sum(rs, lam0, H0, W)
        ok = True
        for t in (1, 3):
            sym = ep_eval(ray.exppoly, t)
            num = oracle.divided_difference_limit(rs, lam0, H0, t)
            scale = max(1.0, abs(sym))
            ok &= abs(sym - num) / scale < 1e-6
        report(f"oracle-divided-difference[{rs.label}]", ok)
        if rs.label == "A1":
            mc, se = oracle.psi_montecarlo_su2(1.0, math.pi, 200_000,
                                               seed=settings["seed"])
            ref = oracle.psi_rank1(math.pi)
            report("oracle-monte-carlo[A1]", abs(mc - ref) <= 3 * se + 1e-12,
                   f"stderr={se:.2e}")

    return 1 if failures else 0


# ---------------------------------------------------------------------------


def _build_parser():
    p = argparse.ArgumentParser(
        prog="motionsph",
        description="Spherical functions of complex Cartan motion groups: "
                    "evaluation, boundedness certificates, growth probes.")
    p.add_argument("--config", help="TOML config file (env MOTIONSPH_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True)

    def add_lambda_args(sp):
        sp.add_argument("--system", required=True, help="A1, A2, A3, B2, or G2")
        sp.add_argument("--xi", required=True,
                        help="real part, comma-separated rationals in "
                             "simple-root pairing coordinates")
        sp.add_argument("--eta", default=None, help="imaginary part (default 0)")
        sp.add_argument("--ambient", action="store_true",
                        help="interpret --xi/--eta as ambient coordinates")

    sp = sub.add_parser("eval", help="evaluate psi_lambda(H)")
    add_lambda_args(sp)
    sp.add_argument("--H", required=True, help="ambient coordinates of H")

    sp = sub.add_parser("classify", help="boundedness certificate")
    add_lambda_args(sp)
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("probe", help="growth probe CSV along a ray")
    add_lambda_args(sp)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--t-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=None)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--system", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--lemma2", action="store_true")
    sp.add_argument("--c-constants", dest="c_constants", action="store_true")
    sp.add_argument("--inequality", action="store_true")
    sp.add_argument("--oracle", action="store_true")

    sp = sub.add_parser("constants", help="regularization constant c per stratum")
    sp.add_argument("--system", required=True)
    sp.add_argument("--stratum", default="",
                    help="comma-separated 1-based vanishing simple-root indices")
    return p


_COMMANDS = {
    "eval": _cmd_eval,
    "classify": _cmd_classify,
    "probe": _cmd_probe,
    "verify": _cmd_verify,
    "constants": _cmd_constants,
}


def run(argv=None, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        flags = {k: getattr(args, k, None)
                 for k in ("seed", "t_max", "points")}
        settings = config_load(path=args.config, flags=flags)
        return _COMMANDS[args.command](args, settings, out)
    except ConfigurationError as exc:
        return _error_json(exc, 2, err)
    except MotionsphError as exc:
        return _error_json(exc, 2, err)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
