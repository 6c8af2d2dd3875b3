"""Command-line front end.

    nash-mixer {spectrum,nash,mixing} model {depolarizing,qubit,ring} [flags]
    nash-mixer {spectrum,nash,mixing} input generator.json [flags]

Exit codes: 0 success, 2 invalid input or unsupported structure, 3 the
certificate was falsified by a sampled observable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import numpy as np

from .exceptions import InvalidCertificate, NashMixerError, ParseError
from .io import dumps_csv, dumps_report, load_generator, matrix_from_json, matrix_to_json, read_json
from .lp_spaces import FullRankState
from .models import (
    DepolarizingSpec,
    QubitUnitalSpec,
    RingSpec,
    build_depolarizing,
    build_qubit_unital,
    build_ring,
    depolarizing_nash_certificate,
    qubit_nash_certificate,
    ring_nash_certificate,
)
from .nash import (
    NashCertificate,
    counting_bound,
    eigenvalue_lower_bounds,
    fit_c,
    ls_lower_bound,
    mixing_time,
    ultracontractive_bound,
    verify_nash,
)
from .semigroup import Semigroup, spectral_report, xi_exact

DEFAULT_SEED = 20240611
SEED_ENV = "NASH_MIXER_SEED"
EXIT_OK, EXIT_INPUT, EXIT_FALSIFIED = 0, 2, 3


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _floats(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED} or ${SEED_ENV})")
    p.add_argument("--samples", type=int, default=2000, help="observables sampled by nash verification")
    p.add_argument("--tol", type=float, default=1e-9, help="detailed-balance tolerance")
    p.add_argument("--epsilon", type=float, default=0.01, help="mixing accuracy")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-points", type=int, default=25)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--out-file", default=None)
    return p


def _nash_parent(command):
    p = argparse.ArgumentParser(add_help=False)
    if command == "spectrum":
        return p
    p.add_argument("--kind", choices=("I", "II"), default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--c", type=float, default=None, help="Nash constant")
    p.add_argument("--t-cutoff", type=float, default=None)
    if command == "nash":
        p.add_argument("--fit", action="store_true", help="fit C on the sample set instead of verifying")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nash-mixer",
        description="Spectra, Nash certificates and mixing-time bounds for Lindblad generators.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for command in ("spectrum", "nash", "mixing"):
        parents = [_common_parent(), _nash_parent(command)]
        cp = commands.add_parser(command)
        sources = cp.add_subparsers(dest="source", required=True)
        mp = sources.add_parser("model")
        models = mp.add_subparsers(dest="model", required=True)
        dp = models.add_parser("depolarizing", parents=parents)
        dp.add_argument("--gamma", type=float, default=1.0)
        dp.add_argument("--dim", type=int, default=None)
        dp.add_argument("--target-state", default=None,
                        help="comma-separated probabilities or a JSON matrix file")
        qp = models.add_parser("qubit", parents=parents)
        qp.add_argument("--rates", type=_floats, default=[1.0, 1.0, 1.0], help="l1,l2,l3")
        rp = models.add_parser("ring", parents=parents)
        rp.add_argument("--sites", type=int, default=8)
        rp.add_argument("--hamiltonian", default=None, help="JSON matrix file for the coherent part")
        ip = sources.add_parser("input", parents=parents)
        ip.add_argument("path")
    return parser


# --------------------------------------------------------------------------
# problem setup
# --------------------------------------------------------------------------


def _load_matrix(path, name):
    return matrix_from_json(read_json(path), name)


def _target_state(args):
    if args.target_state is None:
        return FullRankState.maximally_mixed(args.dim or 2)
    if os.path.exists(args.target_state):
        state = FullRankState(_load_matrix(args.target_state, "target state"))
    else:
        try:
            probs = _floats(args.target_state)
        except argparse.ArgumentTypeError as exc:
            raise ParseError(str(exc)) from None
        state = FullRankState.from_probabilities(probs)
    if args.dim is not None and args.dim != state.dim:
        raise ParseError(f"--dim {args.dim} does not match the target state dimension {state.dim}")
    return state


def build_problem(args):
    """Return ``(semigroup, built-in certificate or None, description)``."""
    if args.source == "input":
        gen, rho = load_generator(args.path)
        sg = Semigroup(gen, rho, db_tol=args.tol)
        return sg, None, {"source": "input", "path": args.path}
    if args.model == "depolarizing":
        spec = DepolarizingSpec(args.gamma, _target_state(args))
        sg = Semigroup(build_depolarizing(spec), spec.target, db_tol=args.tol)
        nu = getattr(args, "nu", None) or 2.0
        return sg, depolarizing_nash_certificate(spec, nu), {"model": "depolarizing", "gamma": args.gamma,
                                                             "dim": spec.dim}
    if args.model == "qubit":
        if len(args.rates) != 3:
            raise ParseError("--rates needs exactly three values")
        spec = QubitUnitalSpec(*args.rates)
        sg = Semigroup(build_qubit_unital(spec), np.eye(2) / 2, db_tol=args.tol)
        return sg, qubit_nash_certificate(spec), {"model": "qubit", "rates": list(args.rates)}
    H = _load_matrix(args.hamiltonian, "hamiltonian") if args.hamiltonian else None
    spec = RingSpec(args.sites, hamiltonian=H, coherent=False)
    # the coherent part does not change the Dirichlet form, so the analysis
    # runs on the reversible dissipative part
    gen = build_ring(spec).dissipative_part()
    sg = Semigroup(gen, np.eye(spec.n_sites) / spec.n_sites, db_tol=args.tol)
    desc = {"model": "ring", "sites": spec.n_sites, "coherent_part_supplied": H is not None,
            "analysed_part": "dissipative"}
    return sg, ring_nash_certificate(spec), desc


def resolve_certificate(args, builtin):
    if args.c is None:
        if builtin is None:
            return None
        if args.kind is None and args.t_cutoff is None:
            return builtin
        raise InvalidCertificate("--kind/--t-cutoff need an explicit --c")
    if args.nu is None:
        raise InvalidCertificate("--c needs --nu")
    kind = args.kind or ("II" if args.t_cutoff is not None else "I")
    return NashCertificate(kind, args.nu, args.c, args.t_cutoff)


def _grid(args, lo_default, hi_default):
    lo = args.t_min if args.t_min is not None else lo_default
    hi = args.t_max if args.t_max is not None else hi_default
    if not (lo >= 0 and hi > lo and args.t_points >= 2):
        raise ParseError("time grid needs 0 <= t-min < t-max and t-points >= 2")
    return np.linspace(lo, hi, args.t_points)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_spectrum(args, sg, builtin, desc):
    rep = spectral_report(sg)
    values, counts = rep.breakpoints()
    t = _grid(args, 0.0, 5.0 / rep.gap)
    body = {
        "command": "spectrum",
        "problem": desc,
        "eigenvalues": rep.eigenvalues,
        "gap": rep.gap,
        "breakpoints": {"s": values, "multiplicity": counts, "counting": rep.counting(values)},
        "zeta": {"t": t, "value": rep.zeta(t)},
    }
    csv = {"index": np.arange(len(rep.eigenvalues)), "eigenvalue": rep.eigenvalues}
    return body, csv, EXIT_OK


def _derived_bounds(cert, sg, t):
    rep = spectral_report(sg)
    out = {"ls_lower_bound": ls_lower_bound(cert, rep.gap, strict=False), "window_ok": cert.window_ok}
    if cert.kind == "II":
        t = t[(t > 0) & (t <= cert.t_cutoff)]
        s = rep.breakpoints()[0]
        s = s[s >= 1 / cert.t_cutoff]
    else:
        t = t[t > 0]
        s = rep.breakpoints()[0]
    out["ultracontractive"] = {"t": t, "bound": np.array([ultracontractive_bound(cert, x) for x in t])}
    out["counting"] = {"s": s, "exact": rep.counting(s), "bound": np.array([counting_bound(cert, x) for x in s])}
    out["eigenvalue_lower_bounds"] = eigenvalue_lower_bounds(cert, len(rep.eigenvalues) - 1)
    return out


def cmd_nash(args, sg, builtin, desc):
    sg.require_reversible()
    cert = resolve_certificate(args, builtin)
    if args.fit:
        nu = args.nu if args.nu is not None else (cert.nu if cert else None)
        if nu is None:
            raise InvalidCertificate("--fit needs --nu")
        kind = args.kind or ("II" if args.t_cutoff is not None else (cert.kind if cert else "I"))
        T = args.t_cutoff if args.t_cutoff is not None else (cert.t_cutoff if cert else None)
        c_fit = fit_c(sg, None, kind, nu, T, n_samples=args.samples, seed=args.seed)
        fitted = NashCertificate(kind, nu, c_fit, T if kind == "II" else None)
        body = {"command": "nash", "problem": desc, "fitted": fitted.to_dict(), "n_samples": args.samples,
                "reference": cert.to_dict() if cert else None}
        t = _grid(args, 0.0, 1.0 / spectral_report(sg).gap)
        body["bounds"] = _derived_bounds(fitted, sg, t)
        csv = {"t": body["bounds"]["ultracontractive"]["t"], "bound": body["bounds"]["ultracontractive"]["bound"]}
        return body, csv, EXIT_OK
    if cert is None:
        raise InvalidCertificate("no certificate: pass --nu/--c (and --t-cutoff for type II) or --fit")
    report = verify_nash(sg, None, cert, n_samples=args.samples, seed=args.seed)
    hi = cert.t_cutoff if cert.kind == "II" else 1.0 / spectral_report(sg).gap
    t = _grid(args, 0.0, hi)
    body = {"command": "nash", "problem": desc, "certificate": cert.to_dict(), "report": report.to_dict(),
            "status": "passed (sampled)" if report.passed else "falsified",
            "bounds": _derived_bounds(cert, sg, t)}
    csv = {"t": body["bounds"]["ultracontractive"]["t"], "bound": body["bounds"]["ultracontractive"]["bound"]}
    if not report.passed:
        print("certificate falsified; witness observable:", file=sys.stderr)
        print(json.dumps(matrix_to_json(report.witness)), file=sys.stderr)
        return body, csv, EXIT_FALSIFIED
    return body, csv, EXIT_OK


def cmd_mixing(args, sg, builtin, desc):
    if not 0 < args.epsilon < 1:
        raise ParseError(f"--epsilon must lie in (0, 1), got {args.epsilon}")
    cert = resolve_certificate(args, builtin)
    rep = mixing_time(sg, None, args.epsilon, cert)
    horizon = 1.2 * max(rep.t_generic, rep.t_nash or 0.0)
    t = _grid(args, 0.0, horizon)
    kw = {"seed": args.seed, "threads": args.threads}
    xi = np.array([xi_exact(sg, x, **kw) for x in t])
    rep.curves = {"t": t, "xi_exact": xi, "bound_generic": rep.generic_bound(t), "bound_nash": rep.nash_bound(t)}
    body = {"command": "mixing", "problem": desc, "report": rep.to_dict(),
            "xi_at_t_generic": xi_exact(sg, rep.t_generic, **kw),
            "xi_at_t_nash": None if rep.t_nash is None else xi_exact(sg, rep.t_nash, **kw)}
    return body, rep.curves, EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "nash": cmd_nash, "mixing": cmd_mixing}


def _emit(text, out_file):
    if out_file:
        with open(out_file, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def error_object(exc):
    obj = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.offset is not None:
        obj["offset"] = exc.offset
    return obj


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        sg, builtin, desc = build_problem(args)
        body, csv, code = COMMANDS[args.command](args, sg, builtin, desc)
        body["seed"] = args.seed
    except NashMixerError as exc:
        sys.stdout.write(dumps_report(error_object(exc)))
        return EXIT_INPUT
    if args.output == "csv":
        _emit(dumps_csv(csv), args.out_file)
    else:
        _emit(dumps_report(body), args.out_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
