"""Floating-point cross-checks for the exact pipeline.

Two independent paths meet here: exact expressions evaluated at a point,
and curvature recomputed from the metric by central finite differences
(Christoffel symbols from differences of g, their derivatives from
differences of those).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import sympy

from .symkernel import KernelError

__all__ = [
    "OracleError", "XiForm", "EvalPoint", "eval", "eval_tensor", "fd_curvature",
    "FDCurvature", "sample_points", "compare_bundle", "numeric_zero",
]

DENOMINATOR_THRESHOLD = 1e-12


class OracleError(KernelError, ArithmeticError):
    """Point is singular or numerically unusable."""


class XiForm:
    """A closed form for xi(t), polynomial or transcendental.

    ``source`` is sympy syntax in the xi variable (default ``t``) and the
    names in ``constants``; the derivative tower is produced symbolically
    once and evaluated as doubles.
    """

    def __init__(self, source, constants=None, variable="t"):
        self.source = source
        self.variable = variable
        self.constants = dict(constants or {})
        self._var = sympy.Symbol(variable, positive=True)
        local = {variable: self._var}
        local.update({k: sympy.Symbol(k) for k in self.constants})
        expr = sympy.sympify(source, locals=local)
        self.expr = expr.subs({sympy.Symbol(k): sympy.nsimplify(v) if isinstance(v, (int, Fraction))
                               else v for k, v in self.constants.items()})
        self._tower = [self.expr]
        self._funcs = []

    def derivative(self, k):
        while len(self._tower) <= k:
            self._tower.append(sympy.diff(self._tower[-1], self._var))
        return self._tower[k]

    def tower(self, t, order):
        while len(self._funcs) <= order:
            k = len(self._funcs)
            self._funcs.append(sympy.lambdify(self._var, self.derivative(k), "math"))
        out = []
        for k in range(order + 1):
            v = complex(self._funcs[k](t))
            if abs(v.imag) > 1e-12 * max(1.0, abs(v.real)):
                raise OracleError(f"xi^({k}) is not real at {self.variable} = {t}")
            out.append(v.real)
        return out

    def __repr__(self):
        return f"XiForm({self.source!r}, {self.constants!r})"


@dataclass
class EvalPoint:
    """Coordinate values, a xi closed form and values for symbolic constants."""

    coords: dict
    xi: XiForm | None = None
    constants: dict = dc_field(default_factory=dict)

    def values(self, field):
        """Internal-generator value map for expressions of ``field``."""
        vals = {}
        for c in field.coordinates:
            if c not in self.coords:
                raise OracleError(f"no value for coordinate {c!r}")
            x = float(self.coords[c])
            vals[f"c_{c}"] = x
            vals[f"sin_{c}"] = math.sin(x)
            vals[f"cos_{c}"] = math.cos(x)
        for k in field.constants:
            if k in self.constants:
                vals[f"k_{k}"] = float(self.constants[k])
        if self.xi is not None and field.xi_variable is not None:
            t = float(self.coords[field.xi_variable])
            for k, v in enumerate(self.xi.tower(t, field.xi_order)):
                vals[f"xi{k}"] = v
        return vals


def _offending_factor(e, values):
    from .render import render
    try:
        _, factors = e.den.factor()
    except Exception:
        return render(e.field.one / e)
    worst = None
    for poly, _mult in factors:
        from .symkernel import DiffExpr
        fe = DiffExpr._raw(e.field, poly, e.field.ctx.constant(1))
        v = abs(fe.evaluate(values))
        if worst is None or v < worst[0]:
            worst = (v, render(fe))
    return worst[1] if worst else "?"


def eval(e, point, values=None):  # noqa: A001 - mirrors the operation name
    """Evaluate an exact expression as a double at ``point``."""
    values = values if values is not None else point.values(e.field)
    value, _num, den, _scale = e.evaluate_with_scale(values)
    if abs(den) < DENOMINATOR_THRESHOLD:
        raise OracleError(f"near-singular denominator at {point.coords}: "
                          f"factor {_offending_factor(e, values)} ~ 0")
    return value


def eval_tensor(T, point):
    values = point.values(T.field)
    return {idx: eval(v, point, values) for idx, v in T.comps.items()}


def numeric_zero(T, point, tol=1e-8):
    """Check that every component of ``T`` cancels to relative ``tol`` at ``point``.

    The relative measure is ``|value| / scale`` with ``scale`` the sum of the
    absolute numerator terms over ``|denominator|``.  Returns the worst ratio.
    """
    values = point.values(T.field)
    worst = 0.0
    for idx, v in T.comps.items():
        value, _num, den, scale = v.evaluate_with_scale(values)
        if abs(den) < DENOMINATOR_THRESHOLD:
            raise OracleError(f"near-singular denominator at {point.coords}: "
                              f"factor {_offending_factor(v, values)} ~ 0")
        if scale > 0:
            worst = max(worst, abs(value) / scale)
    return worst <= tol, worst


# -- finite differences --------------------------------------------------

@dataclass
class FDCurvature:
    gamma: list
    riemann: list
    ricci: list
    scalar: float


def _metric_function(metric, point):
    fld = metric.field
    diag = metric.diagonal
    coords = metric.coordinates
    base = dict(point.coords)

    def g_at(x):
        p = EvalPoint(dict(zip(coords, x)), point.xi, point.constants)
        vals = p.values(fld)
        return [d.evaluate(vals) for d in diag]
    return g_at, [float(base[c]) for c in coords]


def fd_curvature(metric, point, h=3e-4, order=4):
    """Numerical Gamma, R, S, r at ``point`` by nested central differences.

    ``h`` is relative: the step along coordinate c is ``h * max(1, |x_c|)``.
    ``order`` selects the 3-point (2) or 5-point (4) central stencil.
    Uses the same sign convention as the exact pipeline.
    """
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    if not h > 0 or h < 1e-12:
        raise OracleError(f"finite-difference step {h} underflows")
    g_at, x0 = _metric_function(metric, point)
    n = len(x0)
    steps = [h * max(1.0, abs(x)) for x in x0]

    def shifted(x, c, s):
        y = list(x)
        y[c] += s
        return y

    if order == 2:
        stencil = ((1, 0.5), (-1, -0.5))
    else:
        stencil = ((2, -1 / 12), (1, 8 / 12), (-1, -8 / 12), (-2, 1 / 12))

    def central(fn, x, c):
        """Stencil-weighted samples of ``fn`` along coordinate ``c`` (divide by step)."""
        return [(w / steps[c], fn(shifted(x, c, k * steps[c]))) for k, w in stencil]

    def gamma_at(x):
        g = g_at(x)
        if any(abs(v) < DENOMINATOR_THRESHOLD for v in g):
            raise OracleError(f"metric degenerates near {dict(zip(metric.coordinates, x))}")
        dg = [[0.0] * n for _ in range(n)]  # dg[i][c] = d_c g_ii
        for c in range(n):
            samples = central(g_at, x, c)
            for i in range(n):
                dg[i][c] = sum(w * gs[i] for w, gs in samples)
        gam = [[[0.0] * n for _ in range(n)] for _ in range(n)]
        for a in range(n):
            for j in range(n):
                for k in range(n):
                    acc = 0.0
                    if a == k:
                        acc += dg[a][j]
                    if a == j:
                        acc += dg[a][k]
                    if j == k:
                        acc -= dg[j][a]
                    gam[a][j][k] = 0.5 * acc / g[a]
        return gam

    gam = gamma_at(x0)
    dgam = []  # dgam[c][a][j][k] = d_c Gamma^a_jk
    for c in range(n):
        samples = central(gamma_at, x0, c)
        dgam.append([[[sum(w * gs[a][j][k] for w, gs in samples) for k in range(n)]
                      for j in range(n)] for a in range(n)])
    g = g_at(x0)
    R = [[[[0.0] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = dgam[k][l][i][j] - dgam[j][l][i][k]
                    for m in range(n):
                        acc += gam[m][i][j] * gam[l][m][k] - gam[m][i][k] * gam[l][m][j]
                    R[l][i][j][k] = -g[l] * acc
    S = [[sum(R[a][i][j][a] / g[a] for a in range(n)) for j in range(n)] for i in range(n)]
    r = sum(S[i][i] / g[i] for i in range(n))
    return FDCurvature(gam, R, S, r)


# -- sampling and comparison ------------------------------------------------

def _is_valid(metric, point, margin=0.05):
    try:
        vals = point.values(metric.field)
    except (OracleError, ValueError, ZeroDivisionError, OverflowError):
        return False
    for d in metric.diagonal:
        try:
            v, _n, den, _s = d.evaluate_with_scale(vals)
        except (ZeroDivisionError, OverflowError):
            return False
        if abs(den) < margin or abs(v) < margin or not math.isfinite(v):
            return False
    return True


def sample_points(metric, count, seed=0, xi=None, constants=None, t_range=(0.5, 4.0)):
    """Random valid points; angles keep |sin| >= 0.1, singular loci are avoided."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    angle_lo = math.asin(0.1)
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * max(1, count):
            raise OracleError("could not find enough valid sample points")
        coords = {}
        for c in metric.coordinates:
            if c == metric.chart.xi_variable or c == "t":
                coords[c] = rng.uniform(*t_range)
            elif c in ("theta", "phi", "psi"):
                coords[c] = rng.uniform(angle_lo, math.pi - angle_lo)
            else:
                coords[c] = rng.uniform(0.5, 4.0)
        p = EvalPoint(coords, xi, dict(constants or {}))
        if _is_valid(metric, p):
            out.append(p)
    return out


def _rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def compare_bundle(bundle, point, h=3e-4, rtol=1e-6, floor=1e-8, zero_atol=1e-7, order=4):
    """Worst relative deviation between exact and finite-difference curvature.

    Components with exact magnitude at least ``floor`` are compared
    relatively; the others must stay below ``zero_atol`` numerically.
    Returns ``(worst relative error, failures)``.
    """
    fd = fd_curvature(bundle.metric, point, h, order)
    n = bundle.n
    worst = 0.0
    failures = []

    def check(label, exact, approx):
        nonlocal worst
        if abs(exact) >= floor:
            e = _rel_err(exact, approx)
            worst = max(worst, e)
            if e > rtol:
                failures.append((label, exact, approx))
        elif abs(approx) > zero_atol:
            failures.append((label, exact, approx))

    gam = eval_tensor(bundle.christoffel(), point)
    R = eval_tensor(bundle.riemann(), point)
    S = eval_tensor(bundle.ricci(), point)
    for a in range(n):
        for j in range(n):
            for k in range(n):
                check(("Gamma", a, j, k), gam.get((a, j, k), 0.0), fd.gamma[a][j][k])
                for l in range(n):
                    check(("R", a, j, k, l), R.get((a, j, k, l), 0.0), fd.riemann[a][j][k][l])
        for j in range(n):
            check(("S", a, j), S.get((a, j), 0.0), fd.ricci[a][j])
    check(("r",), eval(bundle.scalar(), point), fd.scalar)
    return worst, failures
