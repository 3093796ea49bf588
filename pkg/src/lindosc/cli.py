"""Command-line front end.

Exit codes: 0 success, 1 usage or invalid input, 2 tolerance breach,
3 internal error.  Tables go to ``--output`` (written atomically) or stdout.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import ModelParams, default_dim, fock_state, gibbs_state, superposition_state
from .io import dumps_csv, read_matrix, write_text_atomic
from .validation import DimensionError, ParameterError, TruncationError

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_TOL = {
    "compare": 1e-7,
    "biorthogonality": 1e-9,
    "ladder": 1e-8,
    "completeness": 1e-8,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _float_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value file; command-line flags override it")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=math.log(2.0))
    p.add_argument("--dim", type=_positive_int, default=None, help="truncation dimension (default: automatic)")
    p.add_argument("--output", "-o", help="output path (default: stdout)")


def _add_time_args(p: argparse.ArgumentParser):
    p.add_argument("--init", default="paper-example", help="fock:N | gibbs | paper-example | file:PATH")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--steps", type=_positive_int, default=100)
    p.add_argument("--obs", type=_float_list, default=["E", "x", "p"], help="comma-separated observables")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lindosc", description="Exact dynamics of the damped quantum harmonic oscillator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="closed-form mode table with residuals")
    _add_model_args(p)
    p.add_argument("--jmax", type=_positive_int, default=4)

    p = sub.add_parser("evolve", help="observable trajectory from one method")
    _add_model_args(p)
    _add_time_args(p)
    p.add_argument("--method", default="spectral", help="closed-form | spectral[:JMAX] | disentangled | oracle | ladder[:ORDER]")

    p = sub.add_parser("compare", help="pairwise discrepancies between methods")
    _add_model_args(p)
    _add_time_args(p)
    p.add_argument("--methods", type=_float_list, default=["closed-form", "spectral", "disentangled", "oracle"])
    p.add_argument("--tol", type=float, default=DEFAULT_TOL["compare"])

    p = sub.add_parser("verify", help="run a verification suite")
    _add_model_args(p)
    p.add_argument("--suite", required=True, choices=("identities", "biorthogonality", "ladder", "completeness"))
    p.add_argument("--pmax", type=_positive_int, default=30, help="identities: largest p")
    p.add_argument("--jmax", type=_positive_int, default=8, help="biorthogonality: largest j; completeness: J")
    p.add_argument("--order", type=_positive_int, default=6, help="ladder: largest m+n")
    p.add_argument("--init", default="paper-example", help="completeness: state to reconstruct")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("ladder", help="ladder-mode table")
    _add_model_args(p)
    p.add_argument("--order", type=_positive_int, default=4)
    return parser


def _config_defaults(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = _config_defaults(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(cfg) - known - {"config"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def _params(args) -> ModelParams:
    return ModelParams(args.omega, args.gamma, args.beta)


def parse_init(spec: str, params: ModelParams, dim: int) -> np.ndarray:
    """Initial-state mini-language: ``fock:N``, ``gibbs``, ``paper-example``, ``file:PATH``."""
    kind, _, arg = spec.partition(":")
    if kind == "fock":
        try:
            n = int(arg)
        except ValueError:
            raise ParameterError("init", f"bad Fock level in {spec!r}") from None
        return fock_state(n, dim)
    if kind == "gibbs" and not arg:
        return gibbs_state(params, dim)
    if kind == "paper-example" and not arg:
        return superposition_state(dim)
    if kind == "file" and arg:
        try:
            rho = read_matrix(arg)
        except OSError as exc:
            raise ParameterError("init", f"cannot read {arg}: {exc.strerror}") from None
        if rho.shape[0] > dim:
            raise DimensionError(f"state file has D={rho.shape[0]} > --dim {dim}")
        out = np.zeros((dim, dim), dtype=complex)
        out[: rho.shape[0], : rho.shape[0]] = rho
        return out
    raise ParameterError("init", f"unknown initial state {spec!r}")


def _init_support(spec: str) -> int:
    kind, _, arg = spec.partition(":")
    if kind == "fock":
        try:
            return int(arg) + 1
        except ValueError:
            return 1
    if kind == "file" and arg:
        try:
            return read_matrix(arg).shape[0]
        except (OSError, DimensionError):
            return 1
    return 2


def _emit(args, text: str):
    if args.output:
        write_text_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _times(args) -> np.ndarray:
    if not (math.isfinite(args.t0) and math.isfinite(args.t1)) or args.t0 < 0 or args.t1 <= args.t0:
        raise ParameterError("t0,t1", f"need 0 <= t0 < t1, got {args.t0}, {args.t1}")
    if args.steps < 1:
        raise ParameterError("steps", "need at least one step")
    return np.linspace(args.t0, args.t1, args.steps + 1)


def _check_obs(names):
    from .observables import OBSERVABLES

    for n in names:
        if n not in OBSERVABLES:
            raise ParameterError("obs", f"unknown observable {n!r}; expected some of {', '.join(OBSERVABLES)}")


def _evolution_dim(args, params) -> int:
    # leave room for the disentangled buffer above the initial support
    return args.dim if args.dim is not None else max(default_dim(params) + _init_support(args.init), 16)


def cmd_spectrum(args) -> int:
    from .spectral import eigenvalue, left_residual, left_vector, mode_indices, pairing, required_dim, right_residual, right_vector

    params = _params(args)
    dim = args.dim if args.dim is not None else required_dim(args.jmax, params)
    rows = []
    for j, k in mode_indices(args.jmax):
        lam = eigenvalue(j, k, params)
        W = left_vector(j, k, params, dim)
        R = right_vector(j, k, params, dim)
        rows.append((
            j, k, lam.real, lam.imag,
            right_residual(j, k, params, dim), left_residual(j, k, params, dim), abs(pairing(W, R) - 1.0),
        ))
    header = ("j", "k", "re_lambda", "im_lambda", "right_residual", "left_residual", "pairing_defect")
    _emit(args, dumps_csv(header, rows, [f"omega={args.omega!r} gamma={args.gamma!r} beta={args.beta!r} dim={dim}"]))
    return EXIT_OK


def cmd_evolve(args) -> int:
    from .observables import parse_method, trajectory

    params = _params(args)
    parse_method(args.method)
    _check_obs(args.obs)
    times = _times(args)
    dim = _evolution_dim(args, params)
    rho0 = parse_init(args.init, params, dim)
    traj = trajectory(rho0, times, params, dim, args.method, args.obs)
    rows = [(t, *(traj.values[n][i] for n in args.obs)) for i, t in enumerate(times)]
    comments = [f"method={args.method} init={args.init} dim={dim}"]
    _emit(args, dumps_csv(("t", *args.obs), rows, comments))
    return EXIT_OK


def cmd_compare(args) -> int:
    from .core import trace_distance
    from .observables import parse_method, propagate_states, trajectory_compare

    params = _params(args)
    for m in args.methods:
        parse_method(m)
    _check_obs(args.obs)
    times = _times(args)
    dim = _evolution_dim(args, params)
    rho0 = parse_init(args.init, params, dim)
    report = trajectory_compare(rho0, times, params, dim, args.methods, args.obs)
    rows = []
    for (m1, m2), disc in report.pairwise.items():
        for name in args.obs:
            rows.append((m1, m2, name, disc[name]))
    state_methods = [m for m in args.methods if parse_method(m)[0] != "closed-form"]
    states = {m: propagate_states(rho0, times, params, dim, m) for m in state_methods}
    worst = report.worst
    for i, m1 in enumerate(state_methods):
        for m2 in state_methods[i + 1:]:
            d = max(trace_distance(a, b) for a, b in zip(states[m1], states[m2]))
            rows.append((m1, m2, "trace_distance", d))
            worst = max(worst, d)
    comments = [f"init={args.init} dim={dim} tol={args.tol!r} worst={worst!r}"]
    _emit(args, dumps_csv(("method_a", "method_b", "quantity", "max_discrepancy"), rows, comments))
    return EXIT_OK if worst <= args.tol else EXIT_TOLERANCE


def _report(lines, ok: bool) -> int:
    for line in lines:
        print(line)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_verify(args) -> int:
    params = _params(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL.get(args.suite)
    if args.suite == "identities":
        from .combinatorics import alt_sum, factorial, identity_I

        failures, count = 0, 0
        for p in range(args.pmax + 1):
            for q in range(p + 1):
                for r in range(q + 1):
                    count += 1
                    failures += identity_I(p, q, r) != (1 if r == 0 else 0)
        alt_fail = sum(
            alt_sum(p, r) != ((-1) ** r * factorial(r) if p == r else 0)
            for p in range(args.pmax + 1) for r in range(p + 1)
        )
        lines = [f"identity_I: checked {count} (p,q,r) triples, {failures} failures",
                 f"alt_sum: {alt_fail} failures"]
        return _report(lines, failures == 0 and alt_fail == 0)
    if args.suite == "biorthogonality":
        from .spectral import biorthogonality_defect

        dim = args.dim if args.dim is not None else 60
        defect = biorthogonality_defect(args.jmax, params, dim)
        return _report([f"max pairing defect over j <= {args.jmax} at D={dim}: {defect:.3e} (tol {tol:g})"], defect <= tol)
    if args.suite == "ladder":
        from .ladder import commutator_defects, ladder_pairing_matrix, ladder_rows

        dim = args.dim if args.dim is not None else 60
        comm = max(commutator_defects(params, min(dim, 24)).values())
        rows = ladder_rows(args.order, params, dim)
        collinear = max(r[4] for r in rows)
        P = ladder_pairing_matrix(min(args.order, dim // 4), params, dim)
        pair = float(np.abs(P - np.eye(P.shape[0])).max())
        lines = [f"commutators: {comm:.3e} (tol 1e-10)",
                 f"collinearity (m+n <= {args.order}): {collinear:.3e} (tol {tol:g})",
                 f"ladder pairing defect: {pair:.3e} (tol {tol:g})"]
        return _report(lines, comm <= 1e-10 and collinear <= tol and pair <= tol)
    from .core import trace_norm
    from .spectral import completeness_partial_sum

    dim = args.dim if args.dim is not None else default_dim(params)
    rho0 = parse_init(args.init, params, dim)
    err = trace_norm(completeness_partial_sum(rho0, args.jmax, params, dim) - rho0)
    return _report([f"completeness at J={args.jmax}, D={dim}: trace-norm error {err:.3e} (tol {tol:g})"], err <= tol)


def cmd_ladder(args) -> int:
    from .ladder import ladder_rows

    params = _params(args)
    dim = args.dim if args.dim is not None else max(60, 4 * args.order)
    rows = [(m, n, mu.real, mu.imag, res, col) for m, n, mu, res, col in ladder_rows(args.order, params, dim)]
    header = ("m", "n", "re_mu", "im_mu", "residual", "collinearity_defect")
    _emit(args, dumps_csv(header, rows, [f"omega={args.omega!r} gamma={args.gamma!r} beta={args.beta!r} dim={dim}"]))
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "compare": cmd_compare,
    "verify": cmd_verify,
    "ladder": cmd_ladder,
}


def run(argv=None) -> int:
    try:
        args = parse_args(argv)
        if args.dim is not None:
            from .validation import check_dim

            check_dim(args.dim, max_dim=None)
        _params(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DimensionError, TruncationError) as exc:
        print(f"lindosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to the internal-error code
        print(f"lindosc: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
