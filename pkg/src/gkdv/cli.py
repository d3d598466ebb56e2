"""Command-line front end: classify, solve, solve-ibvp, converge, validate.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 divergence,
4 iteration budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .classify import classify
from .diagnostics import local_extrema
from .errors import BlowUp, GKdVError, InputError, NumericalError
from .exact import TravelingWaveSolution, tw_field, tw_profile
from .fdsolver import (
    Converged,
    Diverged,
    SolverConfig,
    convergence_study,
    discrete_residual,
    format_convergence_csv,
    format_profile_csv,
    loglog_slope,
    make_grid,
    outcome_meta,
    solve,
)
from .model import GKdVEquation, parse_coefficient, parse_number
from .oracle import OracleConfig, rk_solve
from .reconstruct import SpaceTimeField, pde_residual, reconstruct, write_fence_slices, write_field_csv
from .reduce import kdv_burgers_benchmark, reduce_ibvp, standard_ivp, catalog_reduction

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DIVERGED, EXIT_MAX_ITERS = 0, 1, 2, 3, 4


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str = __version__
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    wall_time: float = 0.0
    outcome: dict = field(default_factory=dict)

    def write(self, path) -> None:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, default=str)
            fh.write("\n")


# ----------------------------------------------------------------------------
# argument handling
# ----------------------------------------------------------------------------

def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; keys use flag names with '-' or '_'."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"{path}: expected key=value, got {line!r}")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _num(text) -> float:
    try:
        return parse_number(str(text))
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _num_list(text) -> list:
    return [int(v) for v in str(text).replace(" ", "").split(",") if v]


def _pair(text) -> tuple:
    vals = [_num(v) for v in str(text).split(",")]
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"expected lo,hi with lo < hi, got {text!r}")
    return tuple(vals)


def _add_solver_flags(p, grid_points=100000):
    p.add_argument("--a", type=_num, default=0.0)
    p.add_argument("--b", type=_num, default=50.0)
    p.add_argument("--grid-points", type=int, default=grid_points, help="number of intervals N")
    p.add_argument("--tol", type=_num, default=1e-8)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--overflow-bound", type=_num, default=1e12)
    p.add_argument("--lagged", action="store_true",
                   help="evaluate the nonlinear term from the previous iterate only")


def _add_ivp_flags(p):
    p.add_argument("--n", type=_num, default=1.0)
    p.add_argument("--rho", type=_num, default=1.0)
    p.add_argument("--eps", type=_num, default=-1.0)
    p.add_argument("--gamma", type=_num, default=0.5)


def _add_equation_flags(p):
    p.add_argument("--n", type=_num, required=True)
    p.add_argument("--g", required=True, help="zero | const:c | power:lam,alpha,beta,rho | exp:lam,k | poly:c0,...")
    p.add_argument("--h", default="zero", help="zero | const:c | damping:j")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gkdv", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--manifest", help="manifest path (default: next to the main output)")
        return p

    p = add("classify", "symmetry class, generators and reduction menu")
    _add_equation_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = add("solve", "solve the reduced IBVP ODE for given (n, rho, eps, gamma)")
    _add_ivp_flags(p)
    _add_solver_flags(p)
    p.add_argument("--out", default="profile.csv")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("solve-ibvp", "reduce an IBVP, solve it and reconstruct u(x, t)")
    _add_equation_flags(p)
    p.add_argument("--j", type=_num, help="shorthand for --h damping:J")
    p.add_argument("--gamma", type=_num, default=0.5)
    p.add_argument("--q-exponent", type=_num, required=True)
    _add_solver_flags(p)
    p.add_argument("--x-range", type=_pair, default=(0.0, 5.0))
    p.add_argument("--t-range", type=_pair, default=(0.5, 2.0))
    p.add_argument("--nx", type=int, default=101)
    p.add_argument("--nt", type=int, default=31)
    p.add_argument("--slices", help="comma-separated t values for fence-slice export")
    p.add_argument("--clip", type=_pair, help="display clip lo,hi for exported fields")
    p.add_argument("--out-dir", default="ibvp_out")

    p = add("converge", "grid convergence study against a fine reference")
    _add_ivp_flags(p)
    _add_solver_flags(p)
    p.add_argument("--Ns", type=_num_list, default=[12500, 25000, 50000, 100000])
    p.add_argument("--Nref", type=int, default=200000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="convergence.csv")

    p = add("validate", "run a validation suite")
    p.add_argument("--suite", choices=("kdv-burgers", "travelingwave", "oracle"), required=True)
    p.add_argument("--out")
    return top


def _glue_negative_values(argv: list) -> list:
    """Join ``--flag -1/3`` into ``--flag=-1/3``; argparse reads a leading '-' as an option."""
    out = []
    for tok in argv:
        prev = out[-1] if out else ""
        if (tok[:1] == "-" and tok[1:2].isdigit() or tok[:2] == "-.") and prev.startswith("--") and "=" not in prev:
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def _config_path(argv: list):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.partition("=")[2]
    return None


def parse_args(argv=None) -> argparse.Namespace:
    """Parse flags; values from ``--config`` become defaults that flags override."""
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    command = next((tok for tok in argv if tok in COMMANDS), None)
    path = _config_path(argv)
    if path and command:
        values = read_config(path)
        sub = parser._subparsers._group_actions[0].choices[command]
        known = {a.dest: a for a in sub._actions}
        unknown = sorted(set(values) - set(known))
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        defaults = {}
        for key, raw in values.items():
            act = known[key]
            try:
                if act.nargs == 0:
                    defaults[key] = raw.lower() in ("1", "true", "yes")
                else:
                    defaults[key] = act.type(raw) if act.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise InputError(f"config key {key}: {exc}") from exc
            act.required = False
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(N=args.grid_points, tol=args.tol, max_iters=args.max_iters,
                        overflow_bound=args.overflow_bound, lagged=args.lagged)


def _equation(args) -> GKdVEquation:
    h = getattr(args, "h", "zero")
    if getattr(args, "j", None) is not None:
        h = f"damping:{args.j!r}"
    return GKdVEquation(args.n, parse_coefficient(args.g), parse_coefficient(h))


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("manifest",)}


def _manifest_path(args, main_output) -> str:
    if args.manifest:
        return args.manifest
    base = main_output or f"{args.command}"
    return os.path.splitext(base)[0] + ".manifest.json"


def _exit_for(outcome) -> int:
    return {"converged": EXIT_OK, "diverged": EXIT_DIVERGED, "max_iters": EXIT_MAX_ITERS}[outcome.status]


def _profile_text(outcome, fmt: str) -> str:
    meta = outcome_meta(outcome)
    if isinstance(outcome, Diverged):
        omega = np.empty(0)
        phi = np.empty(0)
    else:
        omega, phi = outcome.profile.omega, outcome.profile.phi
    if fmt == "json":
        return json.dumps({"omega": omega.tolist(), "phi": phi.tolist(), "meta": meta}) + "\n"
    return format_profile_csv(omega, phi, meta)


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_classify(args, man: RunManifest) -> int:
    report = classify(_equation(args))
    text = report.to_json() + "\n" if args.format == "json" else report.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        man.outputs.append(args.out)
    else:
        sys.stdout.write(text)
    man.outcome = report.as_dict()
    return EXIT_OK


def cmd_solve(args, man: RunManifest) -> int:
    ivp = standard_ivp(n=args.n, rho=args.rho, eps=args.eps, gamma=args.gamma, domain=(args.a, args.b))
    outcome = solve(ivp, _solver_config(args))
    with open(args.out, "w") as fh:
        fh.write(_profile_text(outcome, args.format))
    man.outputs.append(args.out)
    man.outcome = outcome_meta(outcome)
    if isinstance(outcome, Converged):
        man.outcome["discrete_residual"] = discrete_residual(ivp.ode, outcome.profile.grid, outcome.profile.phi)
    return _exit_for(outcome)


def cmd_solve_ibvp(args, man: RunManifest) -> int:
    eq = _equation(args)
    ivp = reduce_ibvp(eq, args.gamma, args.q_exponent, (args.a, args.b))
    os.makedirs(args.out_dir, exist_ok=True)
    ivp_path = os.path.join(args.out_dir, "ivp.txt")
    with open(ivp_path, "w") as fh:
        fh.write(ivp.to_kv())
    outcome = solve(ivp, _solver_config(args))
    prof_path = os.path.join(args.out_dir, "profile.csv")
    with open(prof_path, "w") as fh:
        fh.write(_profile_text(outcome, "csv"))
    man.outputs += [ivp_path, prof_path]
    man.outcome = outcome_meta(outcome)
    man.outcome["ansatz"] = str(ivp.ansatz)
    if not isinstance(outcome, Converged):
        return _exit_for(outcome)
    x = np.linspace(*args.x_range, args.nx)
    t = np.linspace(*args.t_range, args.nt)
    fld = reconstruct(ivp.ansatz, outcome.profile, x, t)
    field_path = os.path.join(args.out_dir, "field.csv")
    write_field_csv(field_path, fld, args.clip)
    man.outputs.append(field_path)
    if args.nx >= 5 and args.nt >= 3:
        mx, l2 = pde_residual(eq, fld)
        man.outcome.update(pde_residual_max=mx, pde_residual_l2=l2)
    if args.slices:
        ts = [_num(v) for v in args.slices.split(",")]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            man.outputs += write_fence_slices(os.path.join(args.out_dir, "slices"), ivp.ansatz,
                                              outcome.profile, x, ts, args.clip)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        man.outcome["warnings"] = [str(w.message) for w in caught]
    return EXIT_OK


def cmd_converge(args, man: RunManifest) -> int:
    ivp = standard_ivp(n=args.n, rho=args.rho, eps=args.eps, gamma=args.gamma, domain=(args.a, args.b))
    table = convergence_study(ivp, args.Ns, args.Nref, _solver_config(args), workers=args.workers)
    with open(args.out, "w") as fh:
        fh.write(format_convergence_csv(table))
    man.outputs.append(args.out)
    errs = [e for _, e in table]
    man.outcome = {"table": table,
                   "slope": loglog_slope(table) if all(e > 0 for e in errs) else None}
    return EXIT_OK


def _shrinkage(ivp, Ns=(25000, 50000, 100000, 200000)) -> tuple[list, bool]:
    """FD-vs-oracle max differences over doubling N; passes when each ratio is >= 1.5."""
    ref = rk_solve(ivp, make_grid(ivp.a, ivp.b, max(Ns)), OracleConfig())
    diffs = []
    for N in Ns:
        out = solve(ivp, SolverConfig(N=N))
        if not isinstance(out, Converged):
            return diffs, False
        coarse = ref.phi[:: max(Ns) // N]
        diffs.append(float(np.max(np.abs(out.profile.phi - coarse))))
    ok = all(d0 / d1 >= 1.5 for d0, d1 in zip(diffs, diffs[1:]))
    return diffs, ok


def suite_kdv_burgers() -> dict:
    ivp = kdv_burgers_benchmark(2, 1, 10, 0.5)
    diffs, agree = _shrinkage(ivp)
    out = solve(ivp, SolverConfig(N=100000))
    phi = out.profile.phi
    ext = phi[local_extrema(phi)][:3]
    decaying = len(ext) == 3 and bool(np.all(np.diff(np.abs(ext)) < 0))
    return {"fd_vs_oracle": diffs, "agreement": agree, "first_extrema": ext.tolist(),
            "decaying": decaying, "pass": agree and decaying}


def suite_travelingwave() -> dict:
    sol = TravelingWaveSolution(1, 1, 1)
    ode = catalog_reduction(4, n=1, eps=1, sigma=1)
    res = []
    for N in (200, 400, 800):
        g = make_grid(0, 10, N)
        res.append(discrete_residual(ode, g, tw_profile(sol, g.nodes)))
    ratios = [r0 / r1 for r0, r1 in zip(res, res[1:])]
    eq = GKdVEquation(1, parse_coefficient("const:1"))
    pres = []
    for k in (40, 80, 160):
        x = np.linspace(-4, 4, k + 1)
        t = np.linspace(0, 1, k // 8 + 1)
        X, T = np.meshgrid(x, t, indexing="ij")
        pres.append(pde_residual(eq, SpaceTimeField(x, t, tw_field(sol, X, T)))[0])
    pratios = [r0 / r1 for r0, r1 in zip(pres, pres[1:])]
    ok = all(3.5 <= q <= 4.6 for q in ratios + pratios)
    return {"ode_residuals": res, "ode_ratios": ratios, "pde_residuals": pres,
            "pde_ratios": pratios, "pass": ok}


def suite_oracle() -> dict:
    ivp = standard_ivp()
    diffs, ok = _shrinkage(ivp)
    return {"fd_vs_oracle": diffs, "pass": ok}


def cmd_validate(args, man: RunManifest) -> int:
    result = {"kdv-burgers": suite_kdv_burgers, "travelingwave": suite_travelingwave, "oracle": suite_oracle}[args.suite]()
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        man.outputs.append(args.out)
    sys.stdout.write(text)
    print(f"{args.suite}: {'PASS' if result['pass'] else 'FAIL'}")
    man.outcome = result
    return EXIT_OK if result["pass"] else EXIT_FAIL


COMMANDS = {"classify": cmd_classify, "solve": cmd_solve, "solve-ibvp": cmd_solve_ibvp,
            "converge": cmd_converge, "validate": cmd_validate}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    man = RunManifest(args.command, _params(args))
    if args.config:
        man.inputs.append(args.config)
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, man)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        man.outcome = {"status": "input_error", "error": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    except (BlowUp, NumericalError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        man.outcome = {"status": "diverged", "error": type(exc).__name__, "message": str(exc)}
        code = EXIT_DIVERGED
    except GKdVError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    man.wall_time = time.perf_counter() - start
    man.outcome.setdefault("exit_code", code)
    main_out = getattr(args, "out", None) or (
        os.path.join(args.out_dir, "run") if args.command == "solve-ibvp" else None)
    man.write(_manifest_path(args, main_out))
    return code


if __name__ == "__main__":
    sys.exit(main())
