"""Command-line front end.

Exit status: 0 when the computation ran and every identity held, 1 when an
identity check failed (details on stderr), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .errors import GrasscombError
from .grassmann import berezin_det, berezin_minor, gaussian_identity_check
from .graphs import DirectedMultigraph, cycle_partition_function, lemma1_holds, lgv_check
from .linalg import PolyMatrix, det_poly
from .schur import (
    ExtParams,
    SkewShape,
    conjugate_check,
    convolution_check,
    enum_ssyt,
    ext_schur,
    jacobi_trudi,
    lattice_path_schur,
    schur_ssyt,
    vertical_split_check,
)
from .sweep import CRITERIA, render, run_sweep
from .transfer import FORWARD, REVERSED, LayeredGraph, theorem2_check

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- argument parsing helpers ---------------------------------------------------


def _index_list(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _shape(text):
    try:
        return SkewShape.parse(text)
    except GrasscombError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _matrix(text):
    """Inline JSON rows, or ``@file``; entries are polynomial strings or integers."""
    if text.startswith("@"):
        data = _read_json(text[1:])
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed matrix JSON: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("matrix must be a JSON list of rows")
    for row in data:
        for e in row:
            if isinstance(e, float) or not isinstance(e, (int, str)):
                raise InputError(f"matrix entries must be integers or strings, got {e!r}")
    return PolyMatrix(data)


def _params(args):
    if args.param_a is not None:
        return ExtParams(args.nvars, args.param_a)
    return ExtParams(args.nvars)


# -- output ---------------------------------------------------------------------


def _emit(args, result, checks, extra=None):
    """Print the result (text or JSON) and return the exit status."""
    passed = all(c.get("passed", True) for c in checks)
    if args.json:
        out = {"result": result, "checks": checks}
        if extra:
            out.update(extra)
        print(json.dumps(out, indent=2))
    else:
        if result is not None:
            print(result)
        for c in checks:
            print(f"{'PASS' if c.get('passed', True) else 'FAIL'} {c.get('name', 'check')}: {c.get('label', '')}")
    if not passed:
        for c in checks:
            if not c.get("passed", True):
                print(f"mismatch: {json.dumps(c)}", file=sys.stderr)
        return FAILED
    return OK


def _check(name, label, passed, fields=None, **more):
    return {**(fields or {}), **more, "name": name, "label": label, "passed": bool(passed)}


# -- subcommands ----------------------------------------------------------------


def cmd_schur(args):
    poly = jacobi_trudi(args.shape, "h", args.nvars)
    checks = []
    if args.verify:
        oracle = schur_ssyt(args.shape, args.nvars)
        checks.append(_check("ssyt-oracle", f"determinant = tableau sum for {args.shape}", poly == oracle,
                             oracle=str(oracle)))
    return _emit(args, str(poly), checks)


def cmd_schur_ext(args):
    params = _params(args)
    if args.method == "lattice":
        poly = lattice_path_schur(args.shape, params)
    else:
        poly = ext_schur(args.shape, params)
    return _emit(args, str(poly), [], {"mode": params.mode})


def cmd_ssyt(args):
    tableaux = enum_ssyt(args.shape, args.nvars)
    if args.json:
        return _emit(args, str(len(tableaux)), [], {"tableaux": [[list(r) for r in t.filling] for t in tableaux]})
    for t in tableaux:
        print(str(t) if str(t) else "(empty)")
    print(f"{len(tableaux)} tableaux")
    return OK


def _graph(args):
    return DirectedMultigraph.from_json(_read_json(args.graph))


def cmd_lgv_check(args):
    g = _graph(args)
    report = lgv_check(g, args.sources, args.sinks, trials=args.trials, seed=args.seed)
    checks = [_check("lgv", f"A={list(args.sources)} B={list(args.sinks)} point {i + 1}", c.passed, c.to_json())
              for i, c in enumerate(report.checks)]
    result = f"({report.numerator}) / ({report.denominator})"
    return _emit(args, result, checks)


def cmd_lemma1_check(args):
    g = _graph(args)
    z = cycle_partition_function(g)
    return _emit(args, str(z), [_check("lemma1", "cycle partition function = det(1 - A)", lemma1_holds(g))])


def cmd_transfer_check(args):
    lg = LayeredGraph.from_json(_read_json(args.layers))
    report = theorem2_check(lg, args.sources, args.sinks, trials=args.trials, seed=args.seed, order=args.order)
    checks = [_check("transfer", f"A={list(args.sources)} B={list(args.sinks)} point {i + 1}", c.passed,
                     c.to_json())
              for i, c in enumerate(report.checks)]
    return _emit(args, "pass" if report.passed else "fail", checks, {"order": args.order})


def cmd_grassmann_det(args):
    m = args.matrix
    value = berezin_det(m)
    expect = det_poly(m)
    return _emit(args, str(value), [_check("berezin-det", "Berezin integral = determinant", value == expect,
                                           determinant=str(expect))])


def cmd_minor_check(args):
    m = args.matrix
    value = berezin_minor(m, args.rows, args.cols)
    expect = det_poly(m.delete([i - 1 for i in args.rows], [j - 1 for j in args.cols]))
    label = f"I={list(args.rows)} J={list(args.cols)}"
    return _emit(args, str(value), [_check("berezin-minor", label, value == expect, deleted_det=str(expect))])


def cmd_gaussian_check(args):
    rep = gaussian_identity_check(args.matrix)
    check = _check("gaussian", rep.summary(), rep.equal, mismatched=[bin(k) for k in rep.mismatched])
    return _emit(args, str(rep.rhs), [check], {"symbolic": rep.symbolic})


def _report_checks(report):
    return [c.to_json() for c in report.checks]


def cmd_convolve_check(args):
    if args.split is not None:
        report = vertical_split_check(args.shape, args.nvars, args.split)
    else:
        report = convolution_check(args.shape, args.nvars)
    return _emit(args, str(report.checks[0].lhs), _report_checks(report))


def cmd_conjugate_check(args):
    report = conjugate_check(args.shape, args.nvars)
    return _emit(args, str(report.checks[0].lhs), _report_checks(report))


def cmd_sweep(args):
    only = None
    if args.only:
        only = list(args.only)
        unknown = [k for k in only if k not in CRITERIA]
        if unknown:
            raise InputError(f"unknown criteria {unknown}; choose from 1..{max(CRITERIA)}")
    started = time.perf_counter()

    def progress(res):
        if args.timings:
            print(f"[{time.perf_counter() - started:8.1f}s] criterion {res.number} done", file=sys.stderr)

    results = run_sweep(args.seed, only=only, on_result=progress)
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"result": "pass" if ok else "fail", "seed": args.seed,
                          "checks": [r.to_json() for r in results]}, indent=2))
    else:
        sys.stdout.write(render(results, args.seed))
    if not ok:
        for r in results:
            for f in r.failures:
                print(f"criterion {r.number}: {f}", file=sys.stderr)
        return FAILED
    return OK


# -- parser -----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="grasscomb", description="Exact Grassmann-integral combinatorics checks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="structured JSON report")
        return p

    def shape_args(p):
        p.add_argument("--shape", type=_shape, required=True, help='partition or skew shape, e.g. "(2,1)/(1)"')
        p.add_argument("--nvars", type=_positive, required=True, help="number of variables x1..xn")

    def sampling(p):
        p.add_argument("--trials", type=_positive, default=3, help="evaluation points (default 3)")
        p.add_argument("--seed", type=int, required=True, help="seed for evaluation-point sampling")

    def endpoints(p):
        p.add_argument("--sources", type=_index_list, required=True, help="comma-separated source vertices")
        p.add_argument("--sinks", type=_index_list, required=True, help="comma-separated sink vertices")

    p = add("schur", cmd_schur, "Schur polynomial via Jacobi-Trudi")
    shape_args(p)
    p.add_argument("--verify", action="store_true", help="also compare with the tableau sum")

    p = add("schur-ext", cmd_schur_ext, "one-parameter extended Schur polynomial")
    shape_args(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--param-a", type=_rational, help="rational value of the parameter a")
    mode.add_argument("--symbolic-a", action="store_true", help="keep a symbolic (the default)")
    p.add_argument("--method", choices=("det", "lattice"), default="det", help="determinant or lattice-path sum")

    p = add("ssyt", cmd_ssyt, "list semistandard tableaux")
    shape_args(p)

    p = add("lgv-check", cmd_lgv_check, "LGV formula with cycles on a graph")
    p.add_argument("--graph", required=True, help="graph JSON file")
    endpoints(p)
    sampling(p)

    p = add("lemma1-check", cmd_lemma1_check, "cycle partition function versus det(1 - A)")
    p.add_argument("--graph", required=True, help="graph JSON file")

    p = add("transfer-check", cmd_transfer_check, "transfer-matrix form on a layered graph")
    p.add_argument("--layers", required=True, help="layered-graph JSON file")
    endpoints(p)
    sampling(p)
    p.add_argument("--order", choices=(FORWARD, REVERSED), default=FORWARD, help="transfer product order")

    p = add("grassmann-det", cmd_grassmann_det, "determinant as a Berezin integral")
    p.add_argument("--matrix", type=str, required=True, help='JSON rows, e.g. \'[["a","b"],["c","d"]]\', or @file')

    p = add("minor-check", cmd_minor_check, "minor as a Berezin integral with insertions")
    p.add_argument("--matrix", type=str, required=True, help="JSON rows or @file")
    p.add_argument("--rows", type=_index_list, required=True, help="deleted rows I (1-based)")
    p.add_argument("--cols", type=_index_list, required=True, help="deleted columns J (1-based)")

    p = add("gaussian-check", cmd_gaussian_check, "fermionic Gaussian integral formula")
    p.add_argument("--matrix", type=str, required=True, help="JSON rows or @file")

    p = add("convolve-check", cmd_convolve_check, "convolution identity with symbolic a, b")
    shape_args(p)
    p.add_argument("--split", type=_positive, help="check the split-variable form at x1..xk instead")

    p = add("conjugate-check", cmd_conjugate_check, "conjugate-shape identity with symbolic a")
    shape_args(p)

    p = add("sweep", cmd_sweep, "run every acceptance criterion")
    p.add_argument("--seed", type=int, required=True, help="sweep seed")
    p.add_argument("--only", type=_index_list, help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="progress with timings on stderr")
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else BAD_INPUT
    try:
        if getattr(args, "matrix", None) is not None:
            args.matrix = _matrix(args.matrix)
        return args.fn(args)
    except (InputError, GrasscombError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
