"""Charts, diagonal metrics, built-in spacetimes and warped products."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .exprparse import ParseError, parse_expr
from .symkernel import DiffExpr, Field, KernelError
from .tensor import SYMMETRIC2, Tensor

__all__ = [
    "MetricError", "Chart", "Metric", "WarpedSpec",
    "builtin", "builtin_names", "load_metric", "metric_from_document",
    "metric_to_document", "warped_metric", "warped_curvature",
]


class MetricError(ValueError):
    """Invalid chart or metric definition."""


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names plus signature metadata.

    The signature is informational only: the sign of components such as
    ``2*xi/t - 1`` depends on where in the chart one looks.
    """

    coordinates: tuple
    signature: tuple
    constants: tuple = ()
    xi_variable: str | None = None
    xi_order: int = 6
    field: Field = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coords = tuple(self.coordinates)
        sig = tuple(int(s) for s in self.signature)
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "constants", tuple(self.constants))
        if not coords:
            raise MetricError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise MetricError(f"coordinate names must be unique: {coords}")
        if len(sig) != len(coords):
            raise MetricError(f"signature has {len(sig)} entries for {len(coords)} coordinates")
        if any(s not in (-1, 1) for s in sig):
            raise MetricError(f"signature entries must be -1 or 1: {sig}")
        try:
            fld = Field(coords, self.constants, xi_variable=self.xi_variable,
                        xi_order=self.xi_order)
        except KernelError as exc:
            raise MetricError(str(exc)) from None
        object.__setattr__(self, "field", fld)

    @property
    def n(self):
        return len(self.coordinates)

    def index(self, name):
        return self.coordinates.index(name)

    def with_constants(self, constants):
        extra = tuple(c for c in constants if c not in self.constants)
        return Chart(self.coordinates, self.signature, self.constants + extra,
                     self.xi_variable, self.xi_order)


class Metric:
    """Diagonal metric ``g = diag(g_11, ..., g_nn)`` on a chart."""

    def __init__(self, chart, diagonal, name="metric"):
        self.chart = chart
        self.name = name
        fld = chart.field
        comps = []
        for i, gi in enumerate(diagonal):
            if isinstance(gi, str):
                try:
                    gi = parse_expr(gi, fld)
                except ParseError as exc:
                    raise MetricError(f"g_{i + 1}{i + 1}: {exc}") from exc
            else:
                gi = fld.convert(gi)
            if gi.is_zero():
                raise MetricError(f"diagonal component g_{i + 1}{i + 1} is zero")
            comps.append(gi)
        if len(comps) != chart.n:
            raise MetricError(f"{len(comps)} diagonal components for a {chart.n}-dimensional chart")
        self.diagonal = tuple(comps)
        self.inverse_diagonal = tuple(c.inverse() for c in comps)
        for i, (a, b) in enumerate(zip(self.diagonal, self.inverse_diagonal)):
            if a * b != fld.one:
                raise MetricError(f"inverse check failed at index {i + 1}")

    @property
    def field(self):
        return self.chart.field

    @property
    def n(self):
        return self.chart.n

    @property
    def coordinates(self):
        return self.chart.coordinates

    def g(self, i, j):
        return self.diagonal[i] if i == j else self.field.zero

    def ginv(self, i, j):
        return self.inverse_diagonal[i] if i == j else self.field.zero

    def tensor(self):
        return Tensor(self.field, 2, self.n, {(i, i): v for i, v in enumerate(self.diagonal)},
                      SYMMETRIC2, name="g")

    def map(self, fn, chart=None, name=None):
        """New metric whose components are ``fn(g_ii)`` on ``chart``."""
        chart = chart or self.chart
        return Metric(chart, [fn(c) for c in self.diagonal], name or self.name)

    def substitute_xi(self, closed_form, constants=()):
        """Metric with ``xi`` replaced by a closed form in the xi variable."""
        from .symkernel import substitute_xi
        comps = [substitute_xi(c, closed_form, constants) for c in self.diagonal]
        extra = tuple(k for c in comps for k in c.field.constants)
        chart = self.chart.with_constants(tuple(dict.fromkeys(extra)))
        return Metric(chart, comps, f"{self.name}[xi={closed_form}]")

    def __repr__(self):
        from .render import render
        body = ", ".join(render(c) for c in self.diagonal)
        return f"Metric({self.name!r}, coordinates={self.coordinates}, diag=[{body}])"


# -- built-in spacetimes ---------------------------------------------------

_BUILTINS = {
    "ibh4": dict(
        coordinates=("t", "z", "theta", "phi"),
        signature=(-1, 1, 1, 1),
        constants=(),
        diagonal=("-1/(2*xi/t - 1)", "2*xi/t - 1", "t^2", "t^2*sin(theta)^2"),
    ),
    "ibh5": dict(
        coordinates=("t", "z", "theta", "phi", "psi"),
        signature=(-1, 1, 1, 1, 1),
        constants=(),
        diagonal=("-1/(2*xi/t^2 - 1)", "2*xi/t^2 - 1", "t^2", "t^2*sin(theta)^2",
                  "t^2*sin(theta)^2*sin(phi)^2"),
    ),
    "schwarzschild": dict(
        coordinates=("t", "z", "theta", "phi"),
        signature=(-1, 1, 1, 1),
        constants=("m",),
        diagonal=("-(1 - 2*m/z)", "1/(1 - 2*m/z)", "z^2", "z^2*sin(theta)^2"),
    ),
}

_MINKOWSKI = re.compile(r"^minkowski(?:\((\d+)\)|(\d+))?$")


def builtin_names():
    return sorted(_BUILTINS) + ["minkowski(n)"]


def _minkowski_document(n):
    if n < 1:
        raise MetricError("minkowski dimension must be positive")
    coords = ["t"] + [f"x{i}" for i in range(1, n)]
    return dict(name=f"minkowski{n}", coordinates=coords, signature=[-1] + [1] * (n - 1),
                diagonal=["-1"] + ["1"] * (n - 1), constants=[])


def builtin(name):
    """Built-in metric by name: ibh4, ibh5, schwarzschild, minkowski4 / minkowski(n)."""
    m = _MINKOWSKI.match(name)
    if m:
        n = int(m.group(1) or m.group(2) or 4)
        return metric_from_document(_minkowski_document(n))
    if name not in _BUILTINS:
        raise MetricError(f"unknown built-in metric {name!r}; known: {', '.join(builtin_names())}")
    spec = {k: list(v) for k, v in _BUILTINS[name].items()}
    spec["name"] = name
    return metric_from_document(spec)


# -- metric documents --------------------------------------------------------

_REQUIRED = {"name": str, "coordinates": list, "signature": list, "diagonal": list}


def metric_from_document(doc):
    """Build a metric from the JSON document structure."""
    if not isinstance(doc, dict):
        raise MetricError("metric document must be a JSON object")
    for key, typ in _REQUIRED.items():
        if key not in doc:
            raise MetricError(f"metric document is missing {key!r}")
        if not isinstance(doc[key], typ):
            raise MetricError(f"{key!r} must be a {typ.__name__}")
    constants = doc.get("constants", [])
    if not isinstance(constants, list) or not all(isinstance(c, str) for c in constants):
        raise MetricError("'constants' must be a list of names")
    if not all(isinstance(c, str) for c in doc["coordinates"]):
        raise MetricError("'coordinates' must be a list of names")
    if not all(isinstance(c, str) for c in doc["diagonal"]):
        raise MetricError("'diagonal' entries must be expression strings")
    if not all(s in (-1, 1) and not isinstance(s, bool) for s in doc["signature"]):
        raise MetricError("'signature' entries must be -1 or 1")
    unknown = set(doc) - set(_REQUIRED) - {"constants", "xi_variable"}
    if unknown:
        raise MetricError(f"unknown keys in metric document: {sorted(unknown)}")
    chart = Chart(tuple(doc["coordinates"]), tuple(doc["signature"]), tuple(constants),
                  doc.get("xi_variable"))
    return Metric(chart, doc["diagonal"], doc["name"])


def metric_to_document(metric):
    from .render import render
    return {
        "name": metric.name,
        "coordinates": list(metric.coordinates),
        "signature": list(metric.chart.signature),
        "diagonal": [render(c) for c in metric.diagonal],
        "constants": list(metric.chart.constants),
    }


def load_metric(source):
    """Load a metric from a path, a JSON string, or an already-parsed dict."""
    if isinstance(source, dict):
        return metric_from_document(source)
    text = None
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise MetricError(f"cannot read metric file {source}: {exc}") from None
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetricError(f"invalid JSON: {exc}") from None
    return metric_from_document(doc)


# -- warped products ----------------------------------------------------------

@dataclass
class WarpedSpec:
    """``g = g_base + f * g_fibre`` with ``f`` a function on the base."""

    base: Metric
    fibre: Metric
    warp: object  # DiffExpr or expression string over base coordinates

    def chart(self):
        b, fb = self.base.chart, self.fibre.chart
        consts = tuple(dict.fromkeys(b.constants + fb.constants))
        return Chart(b.coordinates + fb.coordinates, b.signature + fb.signature, consts,
                     b.field.xi_variable, max(b.xi_order, fb.xi_order))


def _warp_in(spec, fld):
    w = spec.warp
    if isinstance(w, str):
        w = parse_expr(w, spec.base.field)
    base_coords = set(spec.base.coordinates)
    for name in w.free_generators():
        stem = name.split("(")[-1].rstrip(")").rstrip("'")
        if stem in spec.fibre.coordinates and stem not in base_coords:
            raise MetricError(f"warping function depends on fibre coordinate {stem!r}")
    w = fld.convert(w)
    if w.is_zero():
        raise MetricError("warping function is zero")
    return w


def warped_metric(spec):
    """The product metric on the concatenated chart."""
    chart = spec.chart()
    fld = chart.field
    f = _warp_in(spec, fld)
    diag = [fld.convert(c) for c in spec.base.diagonal]
    diag += [f * fld.convert(c) for c in spec.fibre.diagonal]
    name = f"{spec.base.name}x_f{spec.fibre.name}"
    return Metric(chart, diag, name)


def warped_curvature(spec):
    """R, S, r of a warped product from the base/fibre curvature formulas.

    Independent of the direct Christoffel pipeline on the product chart: only
    base and fibre curvature (each computed on its own chart) enter.  Signs
    follow the package convention, in which a round sphere has R = -G.
    """
    from .curvature import CurvatureBundle
    from .operators import kulkarni_nomizu

    chart = spec.chart()
    fld = chart.field
    f = _warp_in(spec, fld)
    p = spec.base.n
    n = chart.n
    q = n - p
    base = CurvatureBundle(spec.base)
    fibre = CurvatureBundle(spec.fibre)
    conv = fld.convert
    coords = chart.coordinates

    gb = [conv(c) for c in spec.base.diagonal]
    gbinv = [conv(c) for c in spec.base.inverse_diagonal]
    gf = [conv(c) for c in spec.fibre.diagonal]

    df = [f.diff(coords[a]) for a in range(p)]
    gamma_b = base.christoffel()
    # T_ab = Hess(f)_ab - f_a f_b / (2f)
    T = {}
    for a in range(p):
        for b in range(p):
            hess = df[a].diff(coords[b])
            for c in range(p):
                gcab = gamma_b[(c, a, b)]
                if not gcab.is_zero():
                    hess = hess - conv(gcab) * df[c]
            val = hess - df[a] * df[b] / (2 * f)
            if not val.is_zero():
                T[(a, b)] = val
    zero = fld.zero
    trT = sum((gbinv[a] * T.get((a, a), zero) for a in range(p)), zero)
    delta1 = sum((gbinv[a] * df[a] * df[a] for a in range(p)), zero)

    R = {}

    def put(h, i, j, k, v):
        if v.is_zero():
            return
        for idx, s in (((h, i, j, k), 1), ((i, h, j, k), -1), ((h, i, k, j), -1),
                       ((i, h, k, j), 1), ((j, k, h, i), 1), ((k, j, h, i), -1),
                       ((j, k, i, h), -1), ((k, j, i, h), 1)):
            R[idx] = v if s == 1 else -v

    for (a, b, c, d), v in base.riemann().comps.items():
        R[(a, b, c, d)] = conv(v)
    for a in range(p):
        for b in range(p):
            tab = T.get((a, b))
            if tab is None:
                continue
            for al in range(q):
                put(p + al, a, b, p + al, tab * gf[al] / 2)
    gfib = spec.fibre.tensor()
    Gf = kulkarni_nomizu(gfib, gfib).scale(spec.fibre.field(1) / 2)
    Rf = fibre.riemann()
    for idx in set(Rf.comps) | set(Gf.comps):
        v = f * conv(Rf[idx]) + delta1 / 4 * conv(Gf[idx])
        if not v.is_zero():
            R[tuple(p + i for i in idx)] = v

    S = {}
    Sb = base.ricci()
    for a in range(p):
        for b in range(p):
            v = conv(Sb[(a, b)]) + T.get((a, b), zero) * fld(q) / (2 * f)
            if not v.is_zero():
                S[(a, b)] = v
    Sf = fibre.ricci()
    coeff = (trT + fld(q - 1) / (2 * f) * delta1) / 2
    for al in range(q):
        for be in range(q):
            v = conv(Sf[(al, be)]) + (coeff * gf[al] if al == be else zero)
            if not v.is_zero():
                S[(p + al, p + be)] = v
    r = (conv(base.scalar()) + conv(fibre.scalar()) / f
         + fld(q) / f * (trT + fld(q - 1) / (4 * f) * delta1))
    return {
        "R": Tensor(fld, 4, n, R, "riemannLike", name="R"),
        "S": Tensor(fld, 2, n, S, SYMMETRIC2, name="S"),
        "r": r,
        "T": T,
    }
