"""Command-line interface: ``pseudosym compute|verify|substitute|oracle-check``.

Component indices in every report are 1-based in chart order, so for the
built-in black-hole metrics t=1, z=2, theta=3, phi=4, psi=5.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .catalog import Catalog, parse_label
from .chart import MetricError, builtin, load_metric
from .curvature import CONVENTION, CurvatureBundle, DimensionError
from .exprparse import ParseError, parse_expr
from .render import render, render_latex
from .symkernel import KernelError, substitute_xi
from .tensor import Tensor

TENSORS = {
    "gamma": "christoffel", "riemann": "riemann", "ricci": "ricci", "scalar": "scalar",
    "weyl": "weyl", "projective": "projective", "concircular": "concircular",
    "conharmonic": "conharmonic", "nablaR": "nabla_riemann", "nablaS": "nabla_ricci",
    "metric": "g",
}
SYMBOL = {"christoffel": "Gamma", "riemann": "R", "ricci": "S", "weyl": "C", "projective": "P",
          "concircular": "W", "conharmonic": "K", "nabla_riemann": "nablaR",
          "nabla_ricci": "nablaS", "g": "g"}
DEFAULT_ORACLE_XI = {"ibh4": "t**3/7 + t**2/3 + 2", "ibh5": "t**4/9 + t**2/2 + 3"}


class UsageError(Exception):
    pass


def _metric(spec):
    try:
        return spec, builtin(spec)
    except MetricError as exc:
        builtin_error = exc
    try:
        m = load_metric(spec)
    except MetricError as exc:
        raise UsageError(f"{builtin_error}; not a metric file either ({exc})") from None
    return m.name, m


def _tensor(bundle, name):
    """Tensor (or scalar DiffExpr) for a CLI tensor name."""
    if name in TENSORS:
        attr = TENSORS[name]
        return SYMBOL.get(attr, "r"), getattr(bundle, attr)()
    if name in ("g", "G", "R", "S", "C", "P", "W", "K"):
        return name, bundle.tensor(name)
    try:
        parse_label(name)
    except KeyError:
        raise UsageError(f"unknown tensor {name!r}; expected one of "
                         f"{', '.join(TENSORS)}, Q(g,T), Q(S,T) or D.T") from None
    return name.replace(" ", ""), Catalog(bundle)[name]


def _fmt(e, fmt):
    return render_latex(e) if fmt == "latex" else render(e)


def _components(value):
    if not isinstance(value, Tensor):
        return [((), value)]
    return sorted(value.comps.items())


def _emit_compute(metric_name, label, value, fmt, out):
    comps = _components(value)
    if fmt == "json":
        doc = {
            "metric": metric_name, "convention": CONVENTION, "tensor": label,
            "components": [{"index": [i + 1 for i in idx], "value": render(v)} for idx, v in comps],
            "version": __version__,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    if isinstance(value, Tensor) and not comps:
        out.write(f"{label}: zero tensor\n")
        return
    for idx, v in comps:
        sub = "".join(str(i + 1) for i in idx) if max(idx, default=0) < 9 else \
            ",".join(str(i + 1) for i in idx)
        if fmt == "latex":
            out.write(f"{label}_{{{sub}}} = {_fmt(v, fmt)} \\\\\n" if sub else f"{label} = {_fmt(v, fmt)}\n")
        else:
            out.write(f"{label}_{sub} = {_fmt(v, fmt)}\n" if sub else f"{label} = {_fmt(v, fmt)}\n")


def cmd_compute(args, out):
    name, metric = _metric(args.metric)
    if args.xi:
        metric = metric.substitute_xi(args.xi)
    bundle = CurvatureBundle(metric)
    label, value = _tensor(bundle, args.tensor)
    _emit_compute(name, label, value, args.format, out)
    return 0


def report_document(metric_name, reports):
    return {
        "metric": metric_name,
        "convention": CONVENTION,
        "items": [{
            "id": r.conditionId,
            "verdict": r.verdict,
            "expected": r.expected,
            "method": r.method,
            "coefficients": {k: render(v) for k, v in sorted(r.coefficients.items())},
            "residualZero": r.residual_zero,
            "notes": list(r.notes),
        } for r in reports],
        "version": __version__,
    }


def cmd_verify(args, out):
    from .theorems import UnknownSuite, run_suite
    name, metric = _metric(args.metric)
    t0 = time.perf_counter()
    try:
        reports = run_suite(args.suite, name, xi=args.xi, metric=metric, jobs=args.jobs)
    except UnknownSuite as exc:
        raise UsageError(str(exc)) from None
    elapsed = time.perf_counter() - t0
    ok = all(r.matches_claim for r in reports)
    if args.format == "json":
        out.write(json.dumps(report_document(name, reports), indent=2) + "\n")
    else:
        out.write(f"metric {name}" + (f" with xi = {args.xi}" if args.xi else "") + "\n")
        for r in reports:
            mark = "ok " if r.matches_claim else "MISMATCH"
            exp = f" (claimed {r.expected})" if r.expected and r.expected != r.verdict else ""
            out.write(f"[{mark}] {r.conditionId}: {r.verdict}{exp} [{r.method}]\n")
            for k, v in sorted(r.coefficients.items()):
                out.write(f"      {k} = {_fmt(v, args.format)}\n")
            for note in r.notes:
                out.write(f"      {note}\n")
        matched = sum(r.matches_claim for r in reports)
        out.write(f"{matched}/{len(reports)} verdicts match the claims ({elapsed:.1f} s)\n")
    return 0 if ok else 1


def cmd_substitute(args, out):
    name, metric = _metric(args.metric)
    if args.expr:
        try:
            e = parse_expr(args.expr, metric.field)
        except ParseError as exc:
            raise UsageError(str(exc)) from None
        out.write(_fmt(substitute_xi(e, args.xi), args.format) + "\n")
        return 0
    sub = metric.substitute_xi(args.xi)
    bundle = CurvatureBundle(sub)
    label, value = _tensor(bundle, args.tensor or "riemann")
    _emit_compute(f"{name}[xi={args.xi}]", label, value, args.format, out)
    return 0


def cmd_oracle_check(args, out):
    from .oracle import XiForm, compare_bundle, sample_points
    name, metric = _metric(args.metric)
    bundle = CurvatureBundle(metric)
    xi = None
    if metric.field.xi_variable is not None and any(d.xi_orders() for d in metric.diagonal):
        source = args.xi or DEFAULT_ORACLE_XI.get(name, "t**2 + 1")
        xi = XiForm(source, variable=metric.field.xi_variable)
    consts = {c: 1.0 + 0.1 * k for k, c in enumerate(metric.field.constants)}
    points = sample_points(metric, args.points, seed=args.seed, xi=xi, constants=consts)
    worst_all, bad = 0.0, 0
    rows = []
    for p in points:
        worst, failures = compare_bundle(bundle, p)
        worst_all = max(worst_all, worst)
        bad += len(failures)
        rows.append({"point": p.coords, "worstRelativeError": worst, "failures": len(failures)})
    if args.format == "json":
        out.write(json.dumps({"metric": name, "xi": xi.source if xi else None, "seed": args.seed,
                              "points": rows, "worstRelativeError": worst_all,
                              "version": __version__}, indent=2) + "\n")
    else:
        for r in rows:
            pt = ", ".join(f"{k}={v:.4f}" for k, v in r["point"].items())
            out.write(f"{pt}: worst relative error {r['worstRelativeError']:.2e}, "
                      f"{r['failures']} failures\n")
        out.write(f"worst {worst_all:.2e} over {len(rows)} points"
                  + (f" with xi = {xi.source}" if xi else "") + "\n")
    return 0 if bad == 0 else 1


def build_parser():
    p = argparse.ArgumentParser(prog="pseudosym", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--metric", required=True,
                        help="built-in name (ibh4, ibh5, schwarzschild, minkowskiN) or metric JSON file")
        if fmt:
            sp.add_argument("--format", choices=("text", "json", "latex"), default="text")

    c = sub.add_parser("compute", help="list the nonzero components of a tensor")
    common(c)
    c.add_argument("--tensor", required=True)
    c.add_argument("--xi", help="closed form substituted for xi before computing")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run a condition suite and compare with the claims")
    common(v)
    v.add_argument("--suite", default="all")
    v.add_argument("--xi")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("substitute", help="replace xi by a closed form")
    common(s)
    s.add_argument("--xi", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--tensor")
    g.add_argument("--expr")
    s.set_defaults(func=cmd_substitute)

    o = sub.add_parser("oracle-check", help="compare exact curvature with finite differences")
    common(o)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--points", type=int, default=5)
    o.add_argument("--xi", help="numeric closed form for xi (sympy syntax)")
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"pseudosym: error: {exc}", file=sys.stderr)
        return 2
    except (KernelError, DimensionError, ArithmeticError, ValueError) as exc:
        print(f"pseudosym: computation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
