"""Exact differential rational-function kernel.

Scalars are quotients of integer polynomials in a fixed set of generators:

* chart coordinates,
* the derivative tower ``xi, xi', xi'', ...`` of one unknown function of a
  single coordinate,
* ``cos(x)``, ``sin(x)`` for every coordinate ``x``,
* symbolic constants (annihilated by every coordinate derivation).

Every value is kept in a canonical form:

* the numerator is reduced modulo ``cos(x)^2 + sin(x)^2 - 1`` (``cos^2`` is
  rewritten to ``1 - sin^2``), so it is at most linear in each cosine;
* the denominator is cosine-free (rationalised with the conjugate);
* numerator and denominator are coprime over the integers and the leading
  coefficient of the denominator (graded lex order) is positive.

Under these rules two expressions are equal iff their canonical forms are
structurally identical, and an expression is zero iff its numerator is.
Polynomial arithmetic and GCDs are delegated to FLINT (``python-flint``).
"""
from __future__ import annotations

import threading
from fractions import Fraction
from numbers import Integral, Rational

import flint

__all__ = [
    "KernelError",
    "DivisionByZeroExpression",
    "UnknownGenerator",
    "Field",
    "DiffExpr",
]


class KernelError(Exception):
    """Base class for kernel failures."""


class DivisionByZeroExpression(KernelError, ZeroDivisionError):
    """Raised when dividing by an expression whose canonical form is zero."""


class UnknownGenerator(KernelError, KeyError):
    """Raised for coordinates or constants that the field does not know."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown generator"


def _xi_gen(k):
    return f"xi{k}"


class Field:
    """The differential field of one chart.

    The generator set is fixed at construction, which keeps canonical forms
    (and their rendering) independent of evaluation history.  ``extend``
    returns a larger field; ``convert`` moves expressions between fields.
    """

    def __init__(self, coordinates, constants=(), *, xi_variable=None,
                 xi_order=6, xi_name="xi"):
        coordinates = tuple(coordinates)
        constants = tuple(constants)
        if len(set(coordinates)) != len(coordinates):
            raise KernelError(f"duplicate coordinate names: {coordinates}")
        if len(set(constants)) != len(constants):
            raise KernelError(f"duplicate constant names: {constants}")
        clash = set(coordinates) & set(constants)
        if clash:
            raise KernelError(f"names used both as coordinate and constant: {sorted(clash)}")
        reserved = {xi_name, "sin", "cos"}
        bad = (set(coordinates) | set(constants)) & reserved
        if bad:
            raise KernelError(f"reserved names cannot be generators: {sorted(bad)}")
        if xi_order < 0:
            raise KernelError("xi_order must be non-negative")
        if xi_variable is None:
            xi_variable = "t" if "t" in coordinates else (coordinates[0] if coordinates else None)
        if xi_variable is not None and xi_variable not in coordinates:
            raise UnknownGenerator(f"xi variable {xi_variable!r} is not a coordinate")
        self.coordinates = coordinates
        self.constants = constants
        self.xi_variable = xi_variable
        self.xi_order = xi_order
        self.xi_name = xi_name

        names = [f"c_{c}" for c in coordinates]
        names += [_xi_gen(k) for k in range(xi_order + 1)]
        # cos before sin: under graded lex cos^2 then leads cos^2 + sin^2 - 1,
        # so polynomial remainder performs exactly the cos^2 -> 1 - sin^2 rewrite.
        for c in coordinates:
            names += [f"cos_{c}", f"sin_{c}"]
        names += [f"k_{c}" for c in constants]
        self._names = tuple(names)
        self._index = {name: i for i, name in enumerate(names)}
        self.ctx = flint.fmpz_mpoly_ctx.get(self._names, "deglex")
        gens = self.ctx.gens()
        self._gens = gens
        self._trig = []
        for c in coordinates:
            ci = self._index[f"cos_{c}"]
            si = self._index[f"sin_{c}"]
            self._trig.append((ci, si, gens[ci] ** 2 + gens[si] ** 2 - 1))
        self._lock = threading.Lock()
        self._key = (coordinates, constants, xi_variable, xi_order, xi_name)
        self.zero = DiffExpr._raw(self, self.ctx.from_dict({}), self.ctx.constant(1))
        self.one = DiffExpr._raw(self, self.ctx.constant(1), self.ctx.constant(1))

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Field) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (f"Field(coordinates={self.coordinates!r}, constants={self.constants!r}, "
                f"xi_variable={self.xi_variable!r}, xi_order={self.xi_order})")

    def extend(self, *, constants=(), xi_order=None):
        """Return a field with extra constants and/or a deeper xi tower."""
        extra = tuple(c for c in constants if c not in self.constants)
        return Field(self.coordinates, self.constants + extra,
                     xi_variable=self.xi_variable,
                     xi_order=self.xi_order if xi_order is None else max(xi_order, self.xi_order),
                     xi_name=self.xi_name)

    def convert(self, e):
        """Map an expression of another field into this one, matching generators by name."""
        if isinstance(e, (int, Fraction, Rational)):
            return self(e)
        if e.field == self:
            return e
        mapping = {}
        for name in e.field._names:
            if name not in self._index:
                used = e.num.degrees()[e.field._index[name]] > 0 or e.den.degrees()[e.field._index[name]] > 0
                if used:
                    raise UnknownGenerator(f"generator {e.field.describe(name)!r} has no counterpart")
            else:
                mapping[name] = name
        num = e.num.project_to_context(self.ctx, mapping)
        den = e.den.project_to_context(self.ctx, mapping)
        return DiffExpr._make(self, num, den)

    # -- generators -----------------------------------------------------
    def __call__(self, value):
        """Coerce an int, Fraction or decimal string into the field."""
        if isinstance(value, DiffExpr):
            return self.convert(value)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Integral):
            return DiffExpr._raw(self, self.ctx.constant(int(value)), self.ctx.constant(1))
        if isinstance(value, Rational):
            q = Fraction(value)
            return DiffExpr._make(self, self.ctx.constant(q.numerator), self.ctx.constant(q.denominator))
        raise TypeError(f"cannot coerce {type(value).__name__} into the field")

    def _gen(self, name):
        return DiffExpr._raw(self, self._gens[self._index[name]], self.ctx.constant(1))

    def coordinate(self, name):
        if name not in self.coordinates:
            raise UnknownGenerator(f"unknown coordinate {name!r}")
        return self._gen(f"c_{name}")

    def constant(self, name):
        if name not in self.constants:
            raise UnknownGenerator(f"unknown constant {name!r}")
        return self._gen(f"k_{name}")

    def xi(self, order=0):
        if order < 0:
            raise KernelError("xi derivative order must be non-negative")
        if self.xi_variable is None:
            raise KernelError("field has no xi variable")
        if order > self.xi_order:
            raise KernelError(f"xi derivative of order {order} exceeds the field's tower depth "
                              f"{self.xi_order}; use Field.extend(xi_order=...)")
        return self._gen(_xi_gen(order))

    def sin(self, name):
        if name not in self.coordinates:
            raise UnknownGenerator(f"sin of unknown coordinate {name!r}")
        return self._gen(f"sin_{name}")

    def cos(self, name):
        if name not in self.coordinates:
            raise UnknownGenerator(f"cos of unknown coordinate {name!r}")
        return self._gen(f"cos_{name}")

    # -- metadata used by renderers and evaluators -----------------------
    @property
    def generator_names(self):
        return self._names

    def describe(self, gen_name):
        """Human name of an internal generator, in expression-language syntax."""
        kind, _, rest = gen_name.partition("_")
        if gen_name.startswith("xi") and gen_name[2:].isdigit():
            return self.xi_name + "'" * int(gen_name[2:])
        if kind == "c":
            return rest
        if kind == "k":
            return rest
        if kind in ("sin", "cos"):
            return f"{kind}({rest})"
        return gen_name

    def classify(self, gen_name):
        """Return (kind, payload) for an internal generator name."""
        if gen_name.startswith("xi") and gen_name[2:].isdigit():
            return "xi", int(gen_name[2:])
        kind, _, rest = gen_name.partition("_")
        return {"c": "coordinate", "k": "constant", "sin": "sin", "cos": "cos"}[kind], rest

    # -- canonical form --------------------------------------------------
    def _reduce(self, p):
        """Reduce modulo the trigonometric ideal."""
        if p.is_zero():
            return p
        degs = p.degrees()
        for ci, _si, rel in self._trig:
            if degs[ci] >= 2:
                p = divmod(p, rel)[1]
                degs = p.degrees()
        return p

    def _rationalize(self, num, den):
        """Multiply through by conjugates until the denominator is cosine-free."""
        for ci, _si, _rel in self._trig:
            if den.degrees()[ci] == 0:
                continue
            b = den.derivative(ci)
            a = den - b * self._gens[ci]
            conj = a - b * self._gens[ci]
            num = self._reduce(num * conj)
            den = self._reduce(den * conj)
        return num, den

    def derive_gen(self, index, coordinate):
        """Derivative of a single generator (as a polynomial) along ``coordinate``."""
        kind, payload = self.classify(self._names[index])
        ctx = self.ctx
        if kind == "coordinate":
            return ctx.constant(1) if payload == coordinate else None
        if kind == "constant":
            return None
        if kind == "xi":
            if coordinate != self.xi_variable:
                return None
            if payload + 1 > self.xi_order:
                raise KernelError(
                    f"differentiating {self.xi_name}{chr(39) * payload} needs order {payload + 1} "
                    f"beyond the tower depth {self.xi_order}")
            return self._gens[self._index[_xi_gen(payload + 1)]]
        if payload != coordinate:
            return None
        if kind == "sin":
            return self._gens[self._index[f"cos_{payload}"]]
        return -self._gens[self._index[f"sin_{payload}"]]

    def _pdiff(self, p, coordinate):
        out = self.ctx.from_dict({})
        if p.is_zero():
            return out
        for i, d in enumerate(p.degrees()):
            if d == 0:
                continue
            dg = self.derive_gen(i, coordinate)
            if dg is None:
                continue
            out += p.derivative(i) * dg
        return out

    def differentiate(self, e, coordinate):
        if coordinate not in self.coordinates:
            raise UnknownGenerator(f"unknown coordinate {coordinate!r}")
        e = self.convert(e)
        dn = self._pdiff(e.num, coordinate)
        dd = self._pdiff(e.den, coordinate)
        if dd.is_zero():
            return DiffExpr._make(self, self._reduce(dn), e.den)
        return DiffExpr._make(self, self._reduce(dn * e.den - e.num * dd), e.den * e.den)


class DiffExpr:
    """Immutable canonical element of a :class:`Field`."""

    __slots__ = ("field", "num", "den", "_hash")

    @classmethod
    def _raw(cls, field, num, den):
        self = object.__new__(cls)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None
        return self

    @classmethod
    def _make(cls, field, num, den, *, reduced=True):
        """Canonicalise ``num/den``; ``reduced`` says num is already trig-reduced."""
        if den.is_zero():
            raise DivisionByZeroExpression("division by a zero expression")
        if not reduced:
            num = field._reduce(num)
        den = field._reduce(den)
        if den.is_zero():
            raise DivisionByZeroExpression("division by a zero expression")
        num, den = field._rationalize(num, den)
        if num.is_zero():
            return field.zero
        if not den.is_constant() or den.leading_coefficient() != 1:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            if den.leading_coefficient() < 0:
                num = -num
                den = -den
        return cls._raw(field, num, den)

    # -- coercion --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, DiffExpr):
            if other.field == self.field:
                return other
            raise KernelError("cannot combine expressions of different fields; use Field.convert")
        if isinstance(other, (Integral, Rational)):
            return self.field(other)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return DiffExpr._make(self.field, self.num + other.num, self.den)
        if self.den.is_constant() or other.den.is_constant():
            return DiffExpr._make(self.field, self.num * other.den + other.num * self.den,
                                  self.den * other.den)
        # cofactors over the gcd keep the intermediate sizes small
        g = self.den.gcd(other.den)
        a = other.den / g
        b = self.den / g
        return DiffExpr._make(self.field, self.num * a + other.num * b, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        if self.num.is_zero():
            return self
        return DiffExpr._raw(self.field, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return self.field.zero
        f = self.field
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g = n1.gcd(d2)
        if not g.is_one():
            n1, d2 = n1 / g, d2 / g
        g = n2.gcd(d1)
        if not g.is_one():
            n2, d1 = n2 / g, d1 / g
        num = n1 * n2
        den = d1 * d2
        reduced = f._reduce(num)
        if reduced != num or den.is_constant():
            # trig reduction may expose new common factors
            return DiffExpr._make(f, reduced, den)
        # both cross pairs are coprime and the cosine-free denominators need
        # no reduction, so num/den is already in lowest terms
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return DiffExpr._raw(f, num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZeroExpression("division by a zero expression")
        return DiffExpr._make(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise DivisionByZeroExpression("division by a zero expression")
        if self.num.is_zero():
            return self.field.zero
        return DiffExpr._make(self.field, self.num * other.den, self.den * other.num,
                              reduced=False)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("only integer powers are supported")
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.field.one
        return DiffExpr._make(self.field, self.num ** k, self.den ** k, reduced=False)

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, DiffExpr):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (Integral, Rational)):
            q = Fraction(other)
            return (self.num.is_constant() and self.den.is_constant()
                    and Fraction(int(self.num.leading_coefficient()) if not self.num.is_zero() else 0,
                                 int(self.den.leading_coefficient())) == q)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.as_fraction())
            else:
                self._hash = hash((tuple(self.num.to_dict().items()),
                                   tuple(self.den.to_dict().items())))
        return self._hash

    def as_fraction(self):
        """The rational value of a constant expression."""
        if not self.is_constant():
            raise KernelError("expression is not a rational constant")
        if self.num.is_zero():
            return Fraction(0)
        return Fraction(int(self.num.leading_coefficient()), int(self.den.leading_coefficient()))

    # -- calculus --------------------------------------------------------
    def diff(self, coordinate):
        return self.field.differentiate(self, coordinate)

    def free_generators(self):
        """Names (expression syntax) of generators occurring in the expression."""
        out = []
        nd, dd = self.num.degrees(), self.den.degrees()
        for i, name in enumerate(self.field.generator_names):
            if nd[i] > 0 or dd[i] > 0:
                out.append(self.field.describe(name))
        return out

    def xi_orders(self):
        """Orders of the xi derivatives occurring in the expression."""
        nd, dd = self.num.degrees(), self.den.degrees()
        f = self.field
        return [k for k in range(f.xi_order + 1)
                if nd[f._index[_xi_gen(k)]] > 0 or dd[f._index[_xi_gen(k)]] > 0]

    def substitute(self, images):
        """Replace generators by expressions.

        ``images`` maps expression-syntax names (``"t"``, ``"xi''"``,
        ``"C1"``, ``"sin(theta)"``) to :class:`DiffExpr` of the same field.
        """
        f = self.field
        by_index = {}
        for name, value in images.items():
            idx = f._index.get(_internal_name(f, name))
            if idx is None:
                raise UnknownGenerator(f"unknown generator {name!r}")
            by_index[idx] = f.convert(value)
        return _subst_poly(f, self.num, by_index) / _subst_poly(f, self.den, by_index)

    def evaluate(self, values):
        """Float evaluation; ``values`` maps internal generator names to numbers."""
        return _eval_poly(self.field, self.num, values)[0] / _eval_poly(self.field, self.den, values)[0]

    def evaluate_with_scale(self, values):
        """``(value, numerator, denominator, scale)`` where ``scale`` is the sum of
        absolute numerator term values divided by ``|denominator|``.

        ``|value| / scale`` measures cancellation, which is the meaningful
        relative error when the exact value is zero.
        """
        num, num_abs = _eval_poly(self.field, self.num, values)
        den, _ = _eval_poly(self.field, self.den, values)
        if den == 0:
            return float("nan"), num, den, float("inf")
        return num / den, num, den, num_abs / abs(den)

    # -- display ---------------------------------------------------------
    def __repr__(self):
        from .render import render
        return f"DiffExpr({render(self)!r})"

    def __str__(self):
        from .render import render
        return render(self)


def _internal_name(field, name):
    if name.startswith(field.xi_name) and set(name[len(field.xi_name):]) <= {"'"}:
        return _xi_gen(len(name) - len(field.xi_name))
    for fn in ("sin", "cos"):
        if name.startswith(fn + "(") and name.endswith(")"):
            return f"{fn}_{name[len(fn) + 1:-1]}"
    if name in field.coordinates:
        return f"c_{name}"
    if name in field.constants:
        return f"k_{name}"
    return name


def _subst_poly(field, p, by_index):
    if not any(p.degrees()[i] > 0 for i in by_index):
        return DiffExpr._make(field, p, field.ctx.constant(1))
    powers = {}
    total = field.zero
    for monom, coeff in zip(p.monoms(), p.coeffs()):
        kept = [0] * len(monom)
        term = field(int(coeff))
        for i, e in enumerate(monom):
            if not e:
                continue
            if i in by_index:
                key = (i, e)
                if key not in powers:
                    powers[key] = by_index[i] ** int(e)
                term = term * powers[key]
            else:
                kept[i] = e
        if any(kept):
            term = term * DiffExpr._raw(field, field.ctx.term(1, kept), field.ctx.constant(1))
        total = total + term
    return total


def _eval_poly(field, p, values):
    names = field.generator_names
    vals = [values.get(n) for n in names]
    acc = 0.0
    acc_abs = 0.0
    for monom, coeff in zip(p.monoms(), p.coeffs()):
        term = float(int(coeff))
        for i, e in enumerate(monom):
            if e:
                v = vals[i]
                if v is None:
                    raise KernelError(f"no value supplied for {field.describe(names[i])!r}")
                term *= v ** int(e)
        acc += term
        acc_abs += abs(term)
    return acc, acc_abs


def substitute_xi(e, closed_form, constants=()):
    """Replace every ``xi^(k)`` by the k-th derivative of ``closed_form``.

    ``closed_form`` is a DiffExpr or an expression string in the xi variable
    and symbolic constants.  Constants not yet known to the field are
    adjoined; the result lives in the (possibly extended) field.
    """
    field = e.field
    if isinstance(closed_form, str):
        from .exprparse import parse, Ident, Call
        names = _identifiers(closed_form)
        new_consts = [n for n in names
                      if n not in field.coordinates and n not in field.constants
                      and n.rstrip("'") != field.xi_name and n not in ("sin", "cos")]
        field = field.extend(constants=tuple(constants) + tuple(new_consts))
        from .exprparse import lower
        closed_form = lower(parse(closed_form, field), field)
    else:
        field = field.extend(constants=tuple(constants) + tuple(closed_form.field.constants))
        closed_form = field.convert(closed_form)
    e = field.convert(e)
    for name in closed_form.free_generators():
        if name == field.xi_variable or name in field.constants:
            continue
        raise KernelError(f"closed form for {field.xi_name} may only depend on "
                          f"{field.xi_variable!r} and constants, found {name!r}")
    orders = e.xi_orders()
    if not orders:
        return e
    images = {}
    d = closed_form
    for k in range(max(orders) + 1):
        if k in orders:
            images[field.xi_name + "'" * k] = d
        if k < max(orders):
            d = d.diff(field.xi_variable)
    return e.substitute(images)


def _identifiers(source):
    import re
    return re.findall(r"[A-Za-z_][A-Za-z0-9_]*'*", source)
