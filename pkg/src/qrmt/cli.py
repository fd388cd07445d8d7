"""Command-line entry point: ``qrmt eval ...`` and ``qrmt verify ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import functions as fn
from .errors import QError
from .qcore import (
    QContext,
    k_q,
    q_beta,
    q_bracket,
    q_exp_lower,
    q_exp_upper,
    q_factorial,
    q_gamma,
    qpoch_finite,
    qpoch_infinite,
)
from .qmellin import q_mellin
from .qseries import phi_rs, q_bessel3, q_cos, q_sin
from .suites import SuiteConfig, _env_q, report_to_csv, report_to_json, report_to_text, run_suite, suite_names

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

NAMED_F = {
    "one-over-one-plus-x": fn.one_over_one_plus_x,
    "reciprocal-qpoch": fn.reciprocal_qpoch,
    "e_q": fn.small_exp_neg,
    "qx-qpoch": fn.shifted_qpoch,
    "big-exp": fn.big_exp_neg_qx,
    "qcos": fn.qcos_function,
    "qsin": fn.qsin_function,
}


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j").replace("J", "j")
    return complex(t)


def _as_int(z: complex) -> int:
    if z.imag != 0 or not float(z.real).is_integer():
        raise ValueError(f"expected an integer, got {z}")
    return int(z.real)


def _phi_rs(ctx, args):
    r, s = _as_int(parse_complex(args[0])), _as_int(parse_complex(args[1]))
    vals = [parse_complex(a) for a in args[2:]]
    if len(vals) != r + s + 1:
        raise ValueError(f"phi_rs {r} {s} expects {r + s + 1} more arguments (upper, lower, z)")
    return phi_rs(ctx, vals[:r], vals[r:r + s], vals[-1]), None


def _q_mellin_of(ctx, args):
    if len(args) != 2:
        raise ValueError("q_mellin_of expects <function-name> <s>")
    if args[0] not in NAMED_F:
        raise LookupError(f"unknown function {args[0]!r}; choose from {', '.join(NAMED_F)}")
    res = q_mellin(ctx, NAMED_F[args[0]](ctx), parse_complex(args[1]))
    return res.value, res.err_estimate


def _simple(func, arity, conv=None):
    def run(ctx, args):
        if len(args) != arity:
            raise ValueError(f"expected {arity} argument(s), got {len(args)}")
        vals = [parse_complex(a) for a in args]
        if conv:
            vals = [c(v) for c, v in zip(conv, vals)]
        return func(ctx, *vals), None
    return run


EVAL_REGISTRY = {
    "q_bracket": _simple(q_bracket, 1),
    "q_factorial": _simple(q_factorial, 1, [_as_int]),
    "qpoch_finite": _simple(qpoch_finite, 2, [complex, _as_int]),
    "qpoch_infinite": _simple(qpoch_infinite, 1),
    "q_gamma": _simple(q_gamma, 1),
    "k_q": _simple(k_q, 1),
    "q_exp_lower": _simple(q_exp_lower, 1),
    "q_exp_upper": _simple(q_exp_upper, 1),
    "q_beta": _simple(q_beta, 2),
    "q_cos": _simple(q_cos, 1),
    "q_sin": _simple(q_sin, 1),
    "q_bessel3": _simple(q_bessel3, 2, [lambda z: float(z.real), complex]),
    "phi_rs": _phi_rs,
    "q_mellin_of": _q_mellin_of,
}


def _grid(text: str) -> tuple[int, int]:
    try:
        nr, ni = text.lower().split("x")
        return int(nr), int(ni)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 5x3, got {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=float, default=None, help="deformation parameter in (0,1)")
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--max-terms", type=int, default=10_000)
    p.add_argument("--pole-guard", type=float, default=1e-8)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--grid", type=_grid, default=(5, 3), help="NRxNI sample grid, e.g. 5x3")
    p.add_argument("--format", dest="output_format", choices=["json", "csv", "text"], default=None)
    p.add_argument("--output", dest="output_path", default=None, help="write the report here instead of stdout")
    p.add_argument("--force-q", action="store_true", help="run constrained suites at --q anyway (informative)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrmt", description="Numerical q-Mellin transforms and q-RMT checks")
    sub = parser.add_subparsers(dest="command", required=True)
    pe = sub.add_parser("eval", help="evaluate a single function")
    pe.add_argument("function")
    pe.add_argument("args", nargs="*", help="complex literals such as 0.5, 1+2i, -0.3j")
    _common(pe)
    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=suite_names())
    _common(pv)
    sub.add_parser("list", help="list suites and eval functions")
    return parser


def _config(ns, default_format: str) -> SuiteConfig:
    return SuiteConfig(q=ns.q, eps=ns.eps, max_terms=ns.max_terms, pole_guard=ns.pole_guard,
                       tolerance=ns.tolerance, grid=ns.grid, output_format=ns.output_format or default_format,
                       output_path=ns.output_path, force_q=ns.force_q)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _num(x):
    return x if x is None or math.isfinite(x) else None


def cmd_eval(ns) -> int:
    func = EVAL_REGISTRY.get(ns.function)
    if func is None:
        print(f"error: unknown function {ns.function!r}; known: {', '.join(EVAL_REGISTRY)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _config(ns, "text")
        q = cfg.q if cfg.q is not None else (_env_q() or 0.5)
        ctx = QContext(q, cfg.eps, cfg.max_terms, cfg.pole_guard)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        value, err = func(ctx, ns.args)
    except QError as e:
        print(f"error[{e.category}]: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except LookupError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, OverflowError) as e:
        print(f"error[numeric]: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    z = complex(value)
    if cfg.output_format == "json":
        out = json.dumps({"function": ns.function, "args": ns.args, "q": q, "value": [_num(z.real), _num(z.imag)],
                          "err_estimate": err}) + "\n"
    elif cfg.output_format == "csv":
        out = "function,q,value_re,value_im,err_estimate\n" + f"{ns.function},{q!r},{z.real!r},{z.imag!r},{err!r}\n"
    else:
        shown = repr(z.real) if z.imag == 0 else repr(z)
        out = shown + (f"  (err <= {err:.2e})" if err is not None else "") + "\n"
    _emit(out, cfg.output_path)
    return EXIT_OK


def cmd_verify(ns) -> int:
    try:
        cfg = _config(ns, "json")
        _env_q()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = run_suite(ns.suite, cfg)
    except Exception as e:  # harness failure: report, never a traceback
        print(f"error[harness]: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    render = {"json": lambda r: report_to_json(r) + "\n", "csv": report_to_csv, "text": report_to_text}
    _emit(render[cfg.output_format](rep), cfg.output_path)
    if rep.has_errors:
        return EXIT_NUMERIC
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_list(ns) -> int:
    print("suites: " + ", ".join(suite_names()))
    print("eval:   " + ", ".join(EVAL_REGISTRY))
    print("q_mellin_of functions: " + ", ".join(NAMED_F))
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return {"eval": cmd_eval, "verify": cmd_verify, "list": cmd_list}[ns.command](ns)


if __name__ == "__main__":
    sys.exit(main())
