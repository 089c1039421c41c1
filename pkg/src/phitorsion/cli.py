"""Command-line front end.

Exit codes: 0 on success, 1 when a computation fails, 2 for bad input.
Errors are printed to stderr as a JSON object ``{"error": ..., "message": ...}``.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np
from scipy import special

from . import index as ix
from .gluing import circle_gluing_check
from .regcalc import Expansion, ExpTerm, PhgSample, change_of_variable, regularized_integral
from .spectra import GeometryError, build_model, trace_table
from .zeta import log_torsion, zeta_continue, zeta_reg_at_zero

EXIT_OK, EXIT_COMPUTE, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic output


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_output(text: str, path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".phitorsion-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# input parsing


def load_geometry(text: str):
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read geometry file: {exc}") from None
    try:
        return build_model(text)
    except GeometryError as exc:
        raise ConfigError(str(exc)) from None


_FUNCS = {
    "exp": math.exp, "log": math.log, "log1p": math.log1p, "sqrt": math.sqrt,
    "atan": math.atan, "arctan": math.atan, "sin": math.sin, "cos": math.cos,
    "tanh": math.tanh, "cosh": math.cosh, "sinh": math.sinh,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def parse_function(expr: str):
    """Function of ``x`` from an arithmetic expression over a few elementary functions."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse function: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise ConfigError(f"unsupported syntax in function: {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in _FUNCS and node.id not in _CONSTS and node.id != "x":
            raise ConfigError(f"unknown name {node.id!r} in function")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise ConfigError("only elementary function calls are allowed")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ConfigError("only numeric constants are allowed")
    code = compile(tree, "<function>", "eval")
    env = {"__builtins__": {}, **_FUNCS, **_CONSTS}
    return lambda x: float(eval(code, env, {"x": x}))


def parse_expansion(text: str | None, endpoint: str, order) -> Expansion:
    if text is None:
        return Expansion((), None if order is None else Fraction(order), endpoint)
    try:
        raw = json.loads(text)
        terms = tuple(ExpTerm(Fraction(str(a)), int(k), float(c)) for a, k, c in raw)
        return Expansion(terms, None if order is None else Fraction(order), endpoint)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"expansion must be a JSON list of [alpha, k, coeff]: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_torsion(args) -> str:
    model = load_geometry(args.geometry)
    r = log_torsion(model, estimate_error=True)
    out = {"geometry": model.descriptor, **r.to_dict(), "T": math.exp(r.logT)}
    return dumps(out)


def zeta_residues(z) -> list:
    """Simple-pole residues of ``zeta`` (Mellin residues divided by ``Gamma``)."""
    acc: dict = {}
    for mv in z.poles:
        p = mv.location
        if p <= 0 and p == int(p):
            continue  # cancelled by the pole of Gamma
        acc[p] = acc.get(p, 0.0) + mv.principal[-1] * special.rgamma(float(p))
    return [{"s": float(p), "residue": r} for p, r in sorted(acc.items(), reverse=True) if r != 0.0]


def cmd_zeta(args) -> str:
    model = load_geometry(args.geometry)
    if not 0 <= args.degree <= model.dim:
        raise ConfigError(f"degree {args.degree} outside 0..{model.dim}")
    z = zeta_continue(model, args.degree)
    zc = zeta_continue(model, args.degree, nodes=18)
    v0, d0 = zeta_reg_at_zero(z)
    c0, cd0 = zeta_reg_at_zero(zc)
    values = []
    for s in args.s:
        a, b = z(s), zc(s)
        values.append({"s": s, "value": a, "error_estimate": abs(a - b)})
    out = {
        "geometry": model.descriptor, "degree": args.degree,
        "zeta0": v0, "dzeta0": d0,
        "error_estimate": max(abs(v0 - c0), abs(d0 - cd0)),
        "poles": zeta_residues(z),
        "values": values,
    }
    return dumps(out)


def cmd_heat_trace(args) -> str:
    model = load_geometry(args.geometry)
    if not 0 <= args.degree <= model.dim:
        raise ConfigError(f"degree {args.degree} outside 0..{model.dim}")
    if args.t:
        ts = args.t
    else:
        n = args.points
        ts = [args.t_min * (args.t_max / args.t_min) ** (i / (n - 1)) for i in range(n)] if n > 1 else [args.t_min]
    try:
        rows = trace_table(model, args.degree, ts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.format == "json":
        return dumps([{"t": t, "trace": a, "expansion": b, "residual": r} for t, a, b, r in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "trace", "expansion", "residual"])
    for row in rows:
        w.writerow([format(v, ".17g") for v in row])
    return buf.getvalue()


def cmd_regint(args) -> str:
    f = parse_function(args.function)
    sample = PhgSample(f, parse_expansion(args.zero, "zero", args.zero_order),
                       parse_expansion(args.infinity, "infinity", args.inf_order), args.function)
    r = regularized_integral(sample, tol=args.tolerance)
    out = {"function": args.function, "value": r.value, "error_estimate": r.error_estimate}
    if args.lam is not None:
        if not args.lam > 0:
            raise ConfigError("--lambda must be positive")
        c = change_of_variable(sample, args.lam, tol=max(args.tolerance, 1e-8))
        out["rescaled"] = {"lambda": args.lam, "value": c.value, "direct": c.direct,
                           "formula": c.formula, "log_coefficients": list(c.log_coeffs),
                           "error_estimate": c.error_estimate}
    return dumps(out)


def cmd_indexset(args) -> str:
    def parse(text):
        try:
            return ix.parse_index_set(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    sets = [parse(t) for t in args.sets]
    op = args.operation
    arity = {"union": 2, "eunion": 2, "sum": 2, "normalize": 1, "shift": 1, "check": 1}[op]
    if len(sets) != arity:
        raise ConfigError(f"{op} takes {arity} index set(s), got {len(sets)}")
    if op in ("shift", "check"):
        if args.value is None:
            raise ConfigError(f"{op} needs --value")
        try:
            c = Fraction(args.value)
        except ValueError:
            raise ConfigError(f"--value must be rational, got {args.value!r}") from None
    if op == "union":
        return str(ix.union(*sets))
    if op == "eunion":
        return str(ix.extended_union(*sets))
    if op == "sum":
        return str(ix.minkowski_sum(*sets))
    if op == "normalize":
        return str(sets[0])
    if op == "shift":
        return str(ix.shift(sets[0], c))
    return "true" if ix.check_bound(sets[0], c, strict=args.strict) else "false"


def cmd_glue(args) -> str:
    if not args.length > 0:
        raise ConfigError("--length must be positive")
    r = circle_gluing_check(args.length, tolerance=args.tolerance)
    out = {"length": args.length, **r.to_dict(), "passed": r.passed,
           "error_estimate": abs(r.ratio - 1.0), "log_torsions": r.log_torsions,
           "oracle_checks": r.oracle_checks}
    return dumps(out)


def cmd_suite(args) -> tuple[str, int]:
    from .acceptance import run_all

    echo = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    results = run_all(echo)
    out = [{"id": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
            "elapsed": r.elapsed, "budget": r.budget} for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_COMPUTE
    return dumps({"passed": code == EXIT_OK, "checks": out}), code


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="phitorsion", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--output", help="write the result to this file (atomically)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--tolerance", type=_positive)
    common.add_argument("-v", "--verbose", action="store_true")
    geo = _Parser(add_help=False)
    geo.add_argument("--geometry", required=True, help="JSON descriptor or @file")
    geo.add_argument("--degree", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("torsion", parents=[common, geo], help="analytic torsion of a model geometry")
    z = sub.add_parser("zeta", parents=[common, geo], help="continued zeta function of one form degree")
    z.add_argument("--s", type=float, nargs="*", default=[], help="extra evaluation points")
    h = sub.add_parser("heat-trace", parents=[common, geo], help="heat trace and short-time expansion table")
    h.add_argument("--t", type=_positive, nargs="*", help="explicit sorted time grid")
    h.add_argument("--t-min", type=_positive, default=2.0 ** -10)
    h.add_argument("--t-max", type=_positive, default=2.0 ** 4)
    h.add_argument("--points", type=int, default=29)

    r = sub.add_parser("regint", parents=[common], help="regularized integral over (0, inf)")
    r.add_argument("function", help="expression in x, e.g. 'exp(-x)/sqrt(x)'")
    r.add_argument("--zero", help="expansion at 0 as JSON [[alpha, k, coeff], ...]")
    r.add_argument("--infinity", help="expansion at infinity as JSON [[alpha, k, coeff], ...]")
    r.add_argument("--zero-order", help="remainder order at 0 (omit for exact)")
    r.add_argument("--inf-order", help="remainder order at infinity (omit for rapid decay)")
    r.add_argument("--lambda", dest="lam", type=float, help="also apply the rescaling rule")

    i = sub.add_parser("indexset", parents=[common], help="index-set operations")
    i.add_argument("operation", choices=("union", "eunion", "sum", "normalize", "shift", "check"))
    i.add_argument("sets", nargs="+", help="sets written as '{(alpha,k), ...}; cutoff=C'")
    i.add_argument("--value", help="shift amount or bound for check")
    i.add_argument("--strict", action="store_true")

    g = sub.add_parser("glue", parents=[common], help="circle gluing check")
    g.add_argument("--length", type=float, default=1.0)

    sub.add_parser("suite", parents=[common], help="run the acceptance checks")
    return p


COMMANDS = {
    "torsion": cmd_torsion, "zeta": cmd_zeta, "heat-trace": cmd_heat_trace, "regint": cmd_regint,
    "indexset": cmd_indexset, "glue": cmd_glue, "suite": cmd_suite,
}


def _fail(kind: str, message: str, code: int) -> int:
    print(dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = "csv" if args.command == "heat-trace" else "json"
        if args.tolerance is None:
            args.tolerance = 1e-6 if args.command == "glue" else 1e-8
        if args.format == "csv" and args.command != "heat-trace":
            raise ConfigError("csv output is only available for heat-trace")
        result = COMMANDS[args.command](args)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        write_output(result, args.output)
        return code
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return _fail("computation", f"{type(exc).__name__}: {exc}", EXIT_COMPUTE)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_COMPUTE)
    except Exception as exc:  # anything unforeseen still leaves a machine-readable trace
        return _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_COMPUTE)


if __name__ == "__main__":
    sys.exit(main())
