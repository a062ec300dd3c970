"""Rendering of kernel expressions.

``render`` produces text in the expression language accepted by
:mod:`pseudosym.exprparse`, so ``lower(parse(render(e))) == e``.
``render_latex`` produces table-style fractions with factored numerator
and denominator.
"""
from __future__ import annotations

from .symkernel import DiffExpr

_GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota",
    "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon",
    "phi", "chi", "psi", "omega",
}


def _monomial_factors(field, monom, latex=False):
    names = field.generator_names
    parts = []
    for i, e in enumerate(monom):
        if not e:
            continue
        base = _latex_gen(field, names[i]) if latex else field.describe(names[i])
        if e == 1:
            parts.append(base)
        elif latex:
            parts.append(f"{base}^{{{e}}}" if not base.startswith("\\sin") and not base.startswith("\\cos")
                         else base.replace(" ", f"^{{{e}}} ", 1))
        else:
            parts.append(f"{base}^{e}")
    return parts


def _poly_text(field, p):
    if p.is_zero():
        return "0"
    out = []
    for monom, coeff in zip(p.monoms(), p.coeffs()):
        c = int(coeff)
        factors = _monomial_factors(field, monom)
        mag = abs(c)
        if factors:
            body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
        else:
            body = str(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _needs_parens(p):
    return len(p.monoms()) > 1


def render(e):
    """Canonical text form in the expression language."""
    if not isinstance(e, DiffExpr):
        return str(e)
    f = e.field
    num = _poly_text(f, e.num)
    if e.den.is_one():
        return num
    den = _poly_text(f, e.den)
    if _needs_parens(e.num):
        num = f"({num})"
    if _needs_parens(e.den) or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


def _latex_gen(field, name):
    kind, payload = field.classify(name)
    if kind == "xi":
        sym = "\\" + field.xi_name if field.xi_name in _GREEK else field.xi_name
        if payload == 0:
            return sym
        if payload == 1:
            return f"\\dot{{{sym}}}"
        if payload == 2:
            return f"\\ddot{{{sym}}}"
        return f"{sym}^{{({payload})}}"
    sym = "\\" + payload if payload in _GREEK else payload
    if kind in ("sin", "cos"):
        return f"\\{kind} {sym}"
    return sym


def _poly_latex(field, p):
    if p.is_zero():
        return "0"
    out = []
    for monom, coeff in zip(p.monoms(), p.coeffs()):
        c = int(coeff)
        factors = _monomial_factors(field, monom, latex=True)
        mag = abs(c)
        body = " ".join(factors)
        if not factors:
            body = str(mag)
        elif mag != 1:
            body = f"{mag} {body}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _factored_latex(field, p):
    """Return (sign, content, body) for a factored polynomial."""
    content, factors = p.factor()
    content = int(content)
    sign = -1 if content < 0 else 1
    pieces = []
    for fac, mult in factors:
        text = _poly_latex(field, fac)
        if len(fac.monoms()) > 1:
            text = f"\\left({text}\\right)"
        if mult > 1:
            text = f"{text}^{{{mult}}}" if len(fac.monoms()) > 1 or " " not in text else f"\\left({text}\\right)^{{{mult}}}"
        pieces.append(text)
    return sign, abs(content), " ".join(pieces)


def render_latex(e):
    """LaTeX with factored numerator and denominator."""
    if not isinstance(e, DiffExpr):
        return str(e)
    if e.is_zero():
        return "0"
    f = e.field
    sn, cn, bn = _factored_latex(f, e.num)
    sd, cd, bd = _factored_latex(f, e.den)
    sign = "-" if sn * sd < 0 else ""
    if cn != 1 or not bn:
        bn = f"{cn} {bn}".strip()
    if e.den.is_constant():
        if cd == 1:
            return f"{sign}{bn}"
        return f"{sign}\\frac{{{bn}}}{{{cd}}}"
    if cd != 1:
        bd = f"{cd} {bd}"
    return f"{sign}\\frac{{{bn}}}{{{bd}}}"
