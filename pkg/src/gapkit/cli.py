"""
Command line front end.

    gapkit freq      --input gaps.json
    gapkit invert    --input targets.json [--newton-tol T]
    gapkit divisor   --input divisor.json
    gapkit comb      --rho R --K N [--n-gaps n]
    gapkit potapov   --input ledger.json
    gapkit adic      --depth N
    gapkit selftest  --seed S

Reports are JSON (schema "gapkit-1") on stdout, or ``<command>.json`` in
the ``--out`` directory. Exit status: 0 success, 1 selftest failure,
2 malformed input, 3 numerical failure.
"""

import argparse
import logging
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .abel_map import abel
from .abelian import (
    frequencies,
    interlacing_ok,
    leading_coeff_identity_residual,
    solve_normalized_polys,
    strict_inequality_sum,
)
from .adic import avoidance_certificate, construct_avoiding_beta, crt_consistency, torus_sample
from .comb import band_edges, export_gapset, spectral_diagnostics
from .divisor import (
    Divisor,
    companion_divisor,
    ratio_identity_residual,
    trace_data,
    weyl_pair,
    wronskian_residual,
)
from .frequency_map import NewtonOptions, invert_frequencies, perturbed_seed
from .io import (
    InputError,
    NumericalFailure,
    csv_text,
    dumps,
    field,
    load_json,
    parse_divisor,
    parse_gapset,
    parse_number,
    parse_vector,
    parse_weights,
    stage,
)
from .potapov import PotapovFactor, j_form, point_mass_herglotz, product_matrix, transform_pair, two_term_expansion
from .quadrature import DEFAULT_TOL
from .selftest import run_selftest

PROBE_S = (1.0, 10.0, 100.0)
# samples of z = -s on the negative axis for the divisor curves CSV
CURVE_POINTS = 61


def _emit(args, name, text):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_input(args):
    if not args.input:
        raise InputError("this command needs --input", "argv")
    return load_json(args.input)


def cmd_freq(args):
    obj = _require_input(args)
    gs = parse_gapset(obj)
    with stage("abelian_integrals", "frequencies"):
        nd = solve_normalized_polys(gs, args.quad_tol)
        fs = frequencies(gs, tol=args.quad_tol)
        checks = {
            "leading_coeff_residual": leading_coeff_identity_residual(gs, nd, fs, args.quad_tol),
            "interlacing": interlacing_ok(gs, nd) if gs.n else True,
            "strict_inequality_sum": strict_inequality_sum(gs, nd) if gs.n else None,
        }
    report = {"command": "freq", "gapset": gs.to_json(), "frequencies": fs.to_json(), "differentials": nd.to_json()}
    report["checks"] = checks
    _emit(args, "freq.json", dumps(report))
    return 0


def cmd_invert(args):
    obj = _require_input(args)
    targets = obj.get("frequencies", obj) if isinstance(obj, dict) else obj
    loc = "#/frequencies" if isinstance(obj, dict) and "frequencies" in obj else "#"
    eta = parse_vector(targets, "eta", loc)
    etat = parse_vector(targets, "etat", loc)
    reference = parse_gapset(obj["gapset"], "#/gapset") if isinstance(obj, dict) and "gapset" in obj else None
    if isinstance(obj, dict) and "seed" in obj:
        seed = parse_gapset(obj["seed"], "#/seed")
    elif reference is not None:
        seed = perturbed_seed(reference, np.random.default_rng(args.seed))
    else:
        raise InputError("need a 'seed' GapSet (or a 'gapset' to perturb)", "#")
    if seed.n != len(eta) or len(etat) != len(eta):
        raise InputError("eta, etat and the seed must have the same length", loc)
    opts = NewtonOptions(tol=args.newton_tol, quad_tol=args.quad_tol)
    with stage("frequency_map", "invert_frequencies"):
        res = invert_frequencies(eta, etat, seed, opts)
    report = {
        "command": "invert",
        "seed": seed.to_json(),
        "gapset": res.gapset.to_json(),
        "residual": res.residual,
        "iterations": res.iterations,
        "rng_seed": args.seed,
    }
    if reference is not None:
        err = np.concatenate([res.gapset.a - reference.a, res.gapset.b - reference.b])
        report["max_endpoint_error"] = float(np.max(np.abs(err)))
    _emit(args, "invert.json", dumps(report))
    if args.out:
        _emit(args, "invert.csv", csv_text(["iter", "residual", "damping"], res.history))
    return 0


def cmd_divisor(args):
    obj = _require_input(args)
    gs = parse_gapset(obj)
    D = parse_divisor(obj["divisor"], gs) if isinstance(obj, dict) and "divisor" in obj else Divisor.D0(gs)
    with stage("divisor_spectral", "weyl_pair"):
        wp = weyl_pair(D)
        zs = [-s for s in PROBE_S]
        values = [
            {"z": z, "R": complex(wp.R(z)), "m_plus": complex(wp.m_plus(z)), "m_minus": complex(wp.m_minus(z))}
            for z in zs
        ]
    with stage("divisor_spectral", "trace_data"):
        td = trace_data(D, tol=args.quad_tol)
    with stage("divisor_spectral", "companion_divisor"):
        D1 = companion_divisor(D)
        residuals = {
            "ratio_identity": ratio_identity_residual(D, PROBE_S, D1, args.quad_tol),
            "wronskian": wronskian_residual(D, PROBE_S, args.quad_tol),
        }
    with stage("abel_map", "abel"):
        ch = abel(D, args.quad_tol)
    report = {
        "command": "divisor",
        "gapset": gs.to_json(),
        "divisor": D.to_json(),
        "values": values,
        "m_plus0": wp.m_plus0,
        "traces": td.to_json(),
        "companion": D1.to_json(),
        "character": ch.to_json(),
        "residuals": residuals,
    }
    _emit(args, "divisor.json", dumps(report))
    if args.out:
        s_grid = np.logspace(-3, 3, CURVE_POINTS)
        rows = [(s, wp.R(-s).real, wp.m_plus(-s).real, wp.m_minus(-s).real) for s in s_grid]
        _emit(args, "divisor.csv", csv_text(["s", "R", "m_plus", "m_minus"], rows))
    return 0


def cmd_comb(args):
    if not args.rho > 0 or args.K < 10:
        raise InputError("comb needs --rho > 0 and --K >= 10", "argv")
    with stage("comb_model", "band_edges"):
        cm = band_edges(args.rho, args.K)
        diag = spectral_diagnostics(cm)
    text = csv_text(["k", "mu_minus", "mu_plus", "upsilon", "a", "b"], cm.rows())
    report = {"command": "comb", "rho": args.rho, "K": args.K, "diagnostics": diag.to_json()}
    if args.n_gaps:
        if args.n_gaps > args.K:
            raise InputError("--n-gaps exceeds --K", "argv")
        gs = export_gapset(cm, args.n_gaps)
        with stage("abelian_integrals", "frequencies"):
            fs = frequencies(gs, tol=args.quad_tol)
        report["export"] = {
            "gapset": gs.to_json(),
            "eta": fs.eta.tolist(),
            "eta_strictly_decreasing": bool(np.all(np.diff(fs.eta) < 0)),
        }
    if args.out:
        _emit(args, "comb.csv", text)
        _emit(args, "comb.json", dumps(report))
    else:
        sys.stdout.write(text)
    return 0


def _pair_from(obj):
    if "pair" in obj:
        pair = obj["pair"]
        if not isinstance(pair, dict) or "plus" not in pair or "minus" not in pair:
            raise InputError("'pair' needs 'plus' and 'minus' objects", "#/pair")
        wp_, xp = parse_weights(pair["plus"], "#/pair/plus")
        wm, xm = parse_weights(pair["minus"], "#/pair/minus")
        return point_mass_herglotz(wp_, xp), point_mass_herglotz(wm, xm)
    gs = parse_gapset(obj)
    D = parse_divisor(obj["divisor"], gs) if "divisor" in obj else Divisor.D0(gs)
    wp = weyl_pair(D)
    return (lambda z: complex(wp.n_plus(z))), (lambda z: complex(wp.n_minus(z)))


def cmd_potapov(args):
    obj = _require_input(args)
    if not isinstance(obj, dict):
        raise InputError("expected an object", "#")
    n_plus, n_minus = _pair_from(obj)
    raw = obj.get("factors", [])
    if not isinstance(raw, list):
        raise InputError("'factors' must be a list", "#/factors")
    factors = []
    for i, f in enumerate(raw):
        where = f"#/factors/{i}"
        rho = parse_number(field(f, "rho", where), f"{where}/rho")
        phi = parse_number(f.get("phi", 0.0), f"{where}/phi")
        if rho < 0:
            raise InputError("rho must be non-negative", f"#/factors/{i}/rho")
        factors.append(PotapovFactor(rho, phi))
    inverse = bool(obj.get("inverse", False))
    steps = []
    with stage("potapov_transforms", "transform_pair"):
        rp, rm = n_plus, n_minus
        before = two_term_expansion(rp)
        steps.append({"step": 0, "r_plus": before.to_json(), "neg_inv_r_minus": two_term_expansion(lambda z: -1.0 / rm(z)).to_json()})
        for i, f in enumerate(factors, start=1):
            rp, rm = transform_pair(rp, rm, f, inverse)
            e_plus = two_term_expansion(rp)
            row = {
                "step": i,
                "factor": f.to_json(),
                "r_plus": e_plus.to_json(),
                "neg_inv_r_minus": two_term_expansion(lambda z, rm=rm: -1.0 / rm(z)).to_json(),
            }
            if f.phi == 0 and not inverse and before.kind == "regular" and abs(before.w) < 1e-8 and before.sigma:
                row["predicted_slope"] = 1.0 / (1.0 / before.sigma - f.rho)
            steps.append(row)
            before = e_plus
        z = 0.3 + 0.7j
        A = product_matrix(factors, z, inverse)
        H = j_form(A, z)
        eig = np.linalg.eigvalsh(0.5 * (H + H.conj().T)) if factors else np.zeros(1)
    report = {
        "command": "potapov",
        "inverse": inverse,
        "steps": steps,
        "det_at_probe": complex(np.linalg.det(A)) if factors else 1.0,
        "j_form_min_eig": float(np.min(eig.real)),
    }
    _emit(args, "potapov.json", dumps(report))
    return 0


def cmd_adic(args):
    if args.depth < 3:
        raise InputError("--depth must be >= 3", "argv")
    ab = construct_avoiding_beta(args.depth)
    with stage("adic_torus", "avoidance_certificate"):
        cert = avoidance_certificate(ab, depth=args.depth)
    rng = np.random.default_rng(args.seed)
    bad = 0
    for _ in range(100):
        x = Fraction(int(rng.integers(1, 10**9)), int(rng.integers(1, 10**4)))
        bad += crt_consistency(torus_sample(x, "1/k", args.depth), args.depth)
    report = {
        "command": "adic",
        "depth": args.depth,
        "beta": ab.to_json(),
        "certificate": cert.to_json(),
        "crt_violations": bad,
        "crt_samples": 100,
        "rng_seed": args.seed,
    }
    _emit(args, "adic.json", dumps(report))
    return 0


def cmd_selftest(args):
    with stage("cli", "selftest"):
        rep = run_selftest(args.seed, args.quad_tol, args.depth)
    report = {"command": "selftest"}
    report.update(rep)
    _emit(args, "selftest.json", dumps(report))
    return 0 if rep["passed"] else 1


COMMANDS = {
    "freq": (cmd_freq, "frequencies of a gap set"),
    "invert": (cmd_invert, "gap set from frequency targets"),
    "divisor": (cmd_divisor, "Weyl functions, traces and character of a divisor"),
    "comb": (cmd_comb, "band edges of the comb model"),
    "potapov": (cmd_potapov, "Potapov factor ledger for a Herglotz pair"),
    "adic": (cmd_adic, "avoiding offset and its certificate"),
    "selftest": (cmd_selftest, "seeded property suite"),
}


def _positive(x):
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="gapkit", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"gapkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("--input", help="input JSON file")
        s.add_argument("--out", help="output directory (default: stdout)")
        s.add_argument("--quad-tol", type=_positive, default=DEFAULT_TOL)
        s.add_argument("--newton-tol", type=_positive, default=1e-8)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--depth", type=int, default=30)
        s.add_argument("--rho", type=float, default=1.0)
        s.add_argument("--K", type=int, default=200)
        s.add_argument("--n-gaps", type=int, default=0)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except InputError as exc:
        print(f"gapkit: malformed input: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"gapkit: numerical failure in {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
