"""Command-line front end: ``sf-herald <command> [options]``.

Every report embeds the resolved configuration under ``config``; writing that
object to a file and passing it back with ``--config`` reruns the command.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import oracle
from .design import (
    design_bs_universal,
    design_bs_vacuum_channel,
    design_cz_universal,
    design_first_sf_general,
    max_probability,
)
from .errors import (
    ConvergenceError,
    DesignError,
    DomainError,
    ImpossibleOutcomeError,
    InvalidStateError,
    SingularParameterError,
)
from .heralding import (
    UNIVERSAL_TOLERANCE,
    ExactSF,
    RotatedSF,
    classify_outcome,
    herald,
    herald_probability,
    heralded_wavefunction,
    universal_check,
    universal_tmeg,
)
from .numerics import QuadratureGrid, db_from_r, default_points, r_from_db
from .states import (
    TmegParams,
    fidelity,
    fock_state,
    rotated_sf_state,
    sample,
    sf_state,
    validate_tmeg,
)
from .tables import PARAM_TOLERANCE, PROB_TOLERANCE, reproduce_tables

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_CONVERGENCE = 4
EXIT_SINGULAR = 5

CONFIG_KEYS = {"command", "parameters", "output_format", "quadrature", "tolerance"}


def parse_complex(text):
    """Parse ``"1.2-0.3i"``, ``"+2.5"``, ``"-0.5i"`` or a bare decimal."""
    if isinstance(text, (int, float, complex)) and not isinstance(text, bool):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if not s:
        raise argparse.ArgumentTypeError("empty complex value")
    s = s.replace("I", "i").replace("J", "j").replace("i", "j")
    try:
        value = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"complex value must be finite: {text!r}")
    return value


def format_complex(z):
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def _finite_float(text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"value must be finite: {text!r}")
    return value


def _nonneg_int(text):
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def _positive_int(text):
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


# ---------------------------------------------------------------- serialization

def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _jsonable(value.item())
    return value


def _squeezing(r):
    return {"r": r, "db": db_from_r(r)}


def _classification_dict(c):
    out = {"kind": c.kind}
    if isinstance(c, ExactSF):
        out["squeezing"] = _squeezing(c.r)
    elif isinstance(c, RotatedSF):
        out.update(r_theta=c.r_theta, w=c.w, theta=c.theta,
                   squeezing=_squeezing(c.r_eff), phi=c.spec.phi)
    return out


def _tmeg_dict(p):
    return {"a": p.a, "b": p.b, "d": p.d}


def _setup_dict(s):
    out = {"r1": _squeezing(s.r1), "r2": _squeezing(s.r2)}
    if hasattr(s, "t"):
        out["t"] = s.t
    else:
        out["g"] = s.g
    return out


def _fmt_cell(value):
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return format_complex(complex(value["re"] or 0.0, value["im"] or 0.0))
    return str(value)


def _flatten(obj, prefix=""):
    items = []
    if isinstance(obj, dict) and not (set(obj) == {"re", "im"}):
        for k, v in obj.items():
            items += _flatten(v, f"{prefix}{k}." if prefix or k else k)
        return items
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            items += _flatten(v, f"{prefix}{i}.")
        return items
    key = prefix[:-1] if prefix.endswith(".") else prefix
    if isinstance(obj, list):
        return [(key, ";".join(_fmt_cell(v) for v in obj))]
    return [(key, _fmt_cell(obj))]


def render(report, fmt):
    """Render a JSON-ready report as ``json``, ``csv`` or a human ``table``."""
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    rows, columns = report.get("rows"), report.get("columns")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is not None:
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt_cell(row[c]) for c in columns])
        else:
            writer.writerow(["key", "value"])
            writer.writerows(_flatten(report["result"]))
        return buf.getvalue()
    lines = [f"{report['command']}"]
    pairs = _flatten(report["result"])
    width = max((len(k) for k, _ in pairs), default=0)
    lines += [f"  {k.ljust(width)}  {v}" for k, v in pairs]
    if rows:
        table = [columns] + [[_fmt_cell(r[c]) for c in columns] for r in rows]
        widths = [max(len(str(line[i])) for line in table) for i in range(len(columns))]
        lines.append("")
        for line in table:
            lines.append("  " + "  ".join(str(v).rjust(w) for v, w in zip(line, widths)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def _tmeg(args):
    return TmegParams(args.a, args.b, args.d)


def _r(args, name="r"):
    value = getattr(args, name)
    if value is None:
        return None
    return r_from_db(value) if args.db else value


def _grid_points(args):
    return args.points if args.points is not None else default_points()


def _samples(wf, args):
    pts = sample(wf, args.x_min, args.x_max, args.samples)
    return ["x", "re", "im"], [{"x": s.x, "re": s.value.real, "im": s.value.imag} for s in pts]


def cmd_validate(args):
    p = _tmeg(args)
    try:
        validate_tmeg(p)
        violations = []
    except InvalidStateError as exc:
        violations = exc.violations
    result = {"tmeg": _tmeg_dict(p), "real_determinant": p.real_determinant,
              "valid": not violations, "violations": violations}
    return result, None, (EXIT_OK if not violations else EXIT_INVALID)


def cmd_herald(args):
    p = _tmeg(args)
    outcome = herald(p, args.n, args.tol)
    check = universal_check(p, args.tol)
    result = {"tmeg": _tmeg_dict(p), "n": outcome.n, "probability": outcome.probability,
              "classification": _classification_dict(outcome.classification),
              "universal_residual": check.residual}
    table = _samples(outcome.wavefunction, args) if args.samples else None
    return result, table, EXIT_OK


def cmd_prob(args):
    p = _tmeg(args)
    ns = list(range(args.n_max + 1)) if args.n_max is not None else args.n
    probs = [herald_probability(p, n) for n in ns]
    rows = [{"n": n, "probability": pr} for n, pr in zip(ns, probs)]
    columns = ["n", "probability"]
    if args.oracle:
        grids = oracle.axis_grids(validate_tmeg(p), points=_grid_points(args))
        born = oracle.born_probabilities(p, ns, grids)
        for row, value in zip(rows, born):
            row["oracle"] = float(value)
            row["deviation"] = abs(float(value) - row["probability"])
        columns += ["oracle", "deviation"]
    result = {"tmeg": _tmeg_dict(p), "total": sum(probs)}
    return result, (columns, rows), EXIT_OK


def cmd_classify(args):
    p = _tmeg(args)
    c = classify_outcome(p, args.n, args.tol)
    check = universal_check(p, args.tol)
    result = {"tmeg": _tmeg_dict(p), "n": args.n, "classification": _classification_dict(c),
              "universal": {"residual": check.residual, "satisfied": check.satisfied}}
    return result, None, EXIT_OK


def _run_design(args):
    modes = [args.maximize, args.vacuum_channel, args.general]
    if sum(bool(m) for m in modes) > 1:
        raise DomainError("choose at most one of --maximize, --vacuum-channel, --general")
    if args.vacuum_channel and args.setup != "bs":
        raise DesignError("a vacuum input channel is a beam-splitter regime",
                          constraint="setup == bs")
    if (args.vacuum_channel or args.general) and args.n != 1:
        # checked before --r: no target squeezing makes these feasible
        raise DesignError("this regime only generates the first SF state", constraint="n == 1")
    r = _r(args)
    if r is None:
        raise DomainError("--r is required")
    if args.vacuum_channel:
        return design_bs_vacuum_channel(r, n=args.n)
    if args.general:
        if args.a is None or args.d is None:
            raise DomainError("--general needs both --a and --d")
        return design_first_sf_general(args.a, args.d, r, args.setup)
    a = None if args.maximize or args.a is None else args.a
    if args.setup == "bs":
        return design_bs_universal(args.n, r, a)
    return design_cz_universal(args.n, r, a)


def cmd_design(args):
    res = _run_design(args)
    target = sf_state(res.n, res.r)
    points = _grid_points(args)
    projected = oracle.projected_wavefunction(
        res.tmeg, res.n, oracle.axis_grids(res.tmeg, points=points))
    grid = QuadratureGrid.for_envelope(min(projected.envelope, target.envelope), points=points)
    oracle_fidelity = fidelity(projected, target, grid)
    result = {
        "setup_kind": args.setup,
        "regime": res.regime.value,
        "n": res.n,
        "target": _squeezing(res.r),
        "setup": _setup_dict(res.setup),
        "tmeg": _tmeg_dict(res.tmeg),
        "probability": res.probability,
        "verification": {"oracle_fidelity": oracle_fidelity,
                         "closed_form_probability": herald_probability(res.tmeg, res.n)},
    }
    if res.a is not None:
        result["a"] = res.a
    return result, None, EXIT_OK


def cmd_tables(args):
    report = reproduce_tables(args.tolerance, args.prob_tolerance)
    columns = ["table", "setup", "n", "column", "r", "quantity", "expected", "computed",
               "tolerance", "passed"]
    rows = []
    for cell in report["cells"]:
        for check in cell["checks"]:
            rows.append({"table": cell["table"], "setup": cell["setup"], "n": cell["n"],
                         "column": cell["column"], "r": cell["r"], "quantity": check["name"],
                         "expected": check["expected"], "computed": check["computed"],
                         "tolerance": check["tolerance"], "passed": check["passed"]})
    return report, (columns, rows), EXIT_OK


def _sweep_point(args, value):
    a, r = (value, _r(args)) if args.var == "a" else (args.a, value)
    try:
        p = universal_tmeg(a, r)
        probability = herald_probability(p, args.n)
        kind = classify_outcome(p, args.n, args.tol).kind
    except (InvalidStateError, SingularParameterError):
        probability, kind = None, "invalid"
    return {args.var: value, "probability": probability, "classification": kind}


def cmd_sweep(args):
    if args.steps < 2:
        raise DomainError("--steps must be >= 2")
    start, stop = args.start, args.stop
    if args.var == "r" and args.db:
        start, stop = r_from_db(start), r_from_db(stop)
    if not stop > start:
        raise DomainError(f"empty sweep interval [{start}, {stop}]")
    if args.var == "r" and args.a is None:
        raise DomainError("--a is required when sweeping r")
    if args.var == "a" and args.r is None:
        raise DomainError("--r is required when sweeping a")
    values = [start + (stop - start) * i / (args.steps - 1) for i in range(args.steps)]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda v: _sweep_point(args, v), values))
    p_max = max_probability(args.n) if args.n >= 1 else None
    for row in rows:
        row["max_probability"] = p_max
    valid = [row for row in rows if row["probability"] is not None]
    best = max(valid, key=lambda row: row["probability"]) if valid else None
    result = {"variable": args.var, "n": args.n, "analytic_max_probability": p_max,
              "best": best}
    columns = [args.var, "probability", "classification", "max_probability"]
    return result, (columns, rows), EXIT_OK


def cmd_sample(args):
    if args.state == "fock":
        wf = fock_state(args.n)
    elif args.state == "sf":
        if args.r is None:
            raise DomainError("--r is required for --state sf")
        wf = sf_state(args.n, _r(args))
    elif args.state == "rsf":
        if args.r_mag is None or args.phi is None:
            raise DomainError("--r-mag and --phi are required for --state rsf")
        wf = rotated_sf_state(args.n, _r(args, "r_mag"), args.phi)
    else:
        wf = heralded_wavefunction(_tmeg(args), args.n)
    columns, rows = _samples(wf, args)
    return {"state": wf.label, "count": len(rows)}, (columns, rows), EXIT_OK


# ---------------------------------------------------------------- parser

def _add_tmeg(p, required=True):
    p.add_argument("--a", type=parse_complex, required=required)
    p.add_argument("--b", type=parse_complex, required=required)
    p.add_argument("--d", type=parse_complex, required=required)


def _add_samples(p, default=0):
    p.add_argument("--samples", type=_nonneg_int, default=default,
                   help="number of wavefunction samples (x, re, im)")
    p.add_argument("--x-min", type=_finite_float, default=-5.0)
    p.add_argument("--x-max", type=_finite_float, default=5.0)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], default="table")
    common.add_argument("--points", type=_positive_int, default=None,
                        help="quadrature points (default: SF_HERALD_QUAD_POINTS or 2048)")
    common.add_argument("--tol", type=_finite_float, default=UNIVERSAL_TOLERANCE,
                        help="relative tolerance of the universal-condition check")
    common.add_argument("--db", action="store_true", help="squeezing values are in dB")

    parser = argparse.ArgumentParser(prog="sf-herald", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="replay the config embedded in a previous report")
    parser.add_argument("--format", dest="replay_format", choices=["table", "json", "csv"],
                        help="output format for --config replays")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", parents=[common], help="check a two-mode Gaussian")
    _add_tmeg(p)

    p = sub.add_parser("herald", parents=[common], help="heralded state of n detected photons")
    _add_tmeg(p)
    p.add_argument("--n", type=_nonneg_int, required=True)
    _add_samples(p)

    p = sub.add_parser("prob", parents=[common], help="photon-number probabilities")
    _add_tmeg(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_nonneg_int, nargs="+")
    group.add_argument("--n-max", type=_nonneg_int)
    p.add_argument("--oracle", action="store_true", help="add Born-rule quadrature values")

    p = sub.add_parser("classify", parents=[common], help="classify the heralded state")
    _add_tmeg(p)
    p.add_argument("--n", type=_nonneg_int, required=True)

    p = sub.add_parser("design", parents=[common], help="inverse-design a BS or CZ setup")
    p.add_argument("--setup", choices=["bs", "cz"], required=True)
    p.add_argument("--n", type=_nonneg_int, default=1)
    p.add_argument("--r", type=_finite_float)
    p.add_argument("--a", type=_finite_float)
    p.add_argument("--d", type=_finite_float)
    p.add_argument("--maximize", action="store_true", help="use the optimal universal a")
    p.add_argument("--vacuum-channel", action="store_true", help="vacuum in BS input 1")
    p.add_argument("--general", action="store_true", help="free (a, d) design for n = 1")

    p = sub.add_parser("tables", parents=[common], help="recompute the BS and CZ tables")
    p.add_argument("--tolerance", type=_finite_float, default=PARAM_TOLERANCE)
    p.add_argument("--prob-tolerance", type=_finite_float, default=PROB_TOLERANCE)

    p = sub.add_parser("sweep", parents=[common], help="universal-regime probability sweep")
    p.add_argument("--var", choices=["a", "r"], required=True)
    p.add_argument("--start", type=_finite_float, required=True)
    p.add_argument("--stop", type=_finite_float, required=True)
    p.add_argument("--steps", type=_nonneg_int, default=101)
    p.add_argument("--n", type=_nonneg_int, default=1)
    p.add_argument("--a", type=parse_complex, help="fixed a when sweeping r")
    p.add_argument("--r", type=_finite_float, default=0.5, help="fixed r when sweeping a")
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("sample", parents=[common], help="sample a wavefunction")
    p.add_argument("--state", choices=["fock", "sf", "rsf", "herald"], required=True)
    p.add_argument("--n", type=_nonneg_int, default=0)
    p.add_argument("--r", type=_finite_float)
    p.add_argument("--r-mag", type=_finite_float)
    p.add_argument("--phi", type=_finite_float)
    _add_tmeg(p, required=False)
    _add_samples(p, default=101)
    return parser


COMMANDS = {
    "validate": cmd_validate, "herald": cmd_herald, "prob": cmd_prob,
    "classify": cmd_classify, "design": cmd_design, "tables": cmd_tables,
    "sweep": cmd_sweep, "sample": cmd_sample,
}

_GLOBAL_DESTS = {"format", "points", "tol", "db", "command", "config", "replay_format"}


def _config_value(value):
    if isinstance(value, complex):
        return format_complex(value)
    return value


def resolved_config(args):
    params = {k: _config_value(v) for k, v in sorted(vars(args).items())
              if k not in _GLOBAL_DESTS}
    params["db"] = args.db
    return {"command": args.command, "parameters": params, "output_format": args.format,
            "quadrature": {"points": _grid_points(args)},
            "tolerance": {"universal": args.tol}}


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    return None


def config_to_argv(parser, config):
    """Turn an embedded config back into argv; unknown keys are rejected."""
    if not isinstance(config, dict):
        raise DomainError("config must be a JSON object")
    unknown = set(config) - CONFIG_KEYS
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    command = config.get("command")
    sp = _subparser(parser, command) if isinstance(command, str) else None
    if sp is None:
        raise DomainError(f"unknown command in config: {command!r}")
    actions = {a.dest: a for a in sp._actions if a.option_strings}
    argv = [command]
    params = config.get("parameters", {})
    if not isinstance(params, dict):
        raise DomainError("config parameters must be an object")
    for key, value in params.items():
        if key not in actions or key in {"help", "format", "points", "tol"}:
            raise DomainError(f"unknown parameter for {command}: {key!r}")
        flag = actions[key].option_strings[-1]
        if isinstance(actions[key], argparse._StoreTrueAction):
            if value:
                argv.append(flag)
        elif value is None:
            continue
        elif isinstance(value, list):
            argv += [flag] + [str(v) for v in value]
        else:
            argv += [f"{flag}={value!r}" if isinstance(value, float) else f"{flag}={value}"]
    for section, keys in (("quadrature", {"points"}), ("tolerance", {"universal"})):
        block = config.get(section, {})
        if not isinstance(block, dict) or set(block) - keys:
            raise DomainError(f"unknown keys in config {section}: {block!r}")
    if "output_format" in config:
        argv += ["--format", str(config["output_format"])]
    points = config.get("quadrature", {}).get("points")
    if points is not None:
        argv += ["--points", str(points)]
    tol = config.get("tolerance", {}).get("universal")
    if tol is not None:
        argv += [f"--tol={tol!r}"]
    return argv


EXIT_CODES = (
    (DesignError, EXIT_INFEASIBLE),
    (ConvergenceError, EXIT_CONVERGENCE),
    ((SingularParameterError, ImpossibleOutcomeError), EXIT_SINGULAR),
    ((InvalidStateError, DomainError), EXIT_INVALID),
)


def _error_report(exc, code):
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, DesignError):
        err["constraint"] = exc.constraint
        err["diagnostics"] = exc.diagnostics
    if isinstance(exc, InvalidStateError):
        err["violations"] = exc.violations
    return {"error": _jsonable(err)}


def run(argv=None):
    """Execute one command; returns ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "table"
    try:
        args = parser.parse_args(argv)
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
            if isinstance(config, dict) and isinstance(config.get("config"), dict):
                config = config["config"]  # a full report rather than a bare config
            override = args.replay_format
            args = parser.parse_args(config_to_argv(parser, config))
            if override:
                args.format = override
        if args.command is None:
            return EXIT_INVALID, "", parser.format_usage()
        fmt = args.format
        result, table, code = COMMANDS[args.command](args)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_INVALID), "", ""
    except (OSError, json.JSONDecodeError) as exc:
        return EXIT_INVALID, "", json.dumps(_error_report(exc, EXIT_INVALID)) + "\n"
    except Exception as exc:
        for kinds, code in EXIT_CODES:
            if isinstance(exc, kinds):
                report = _error_report(exc, code)
                text = (json.dumps(report, indent=2, sort_keys=True) if fmt == "json"
                        else f"error ({report['error']['type']}): {exc}")
                return code, "", text + "\n"
        raise
    report = {"command": args.command, "config": resolved_config(args),
              "result": _jsonable(result)}
    if table is not None:
        columns, rows = table
        report["columns"] = list(columns)
        report["rows"] = _jsonable(rows)
    return code, render(report, fmt), ""


def main(argv=None):
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
