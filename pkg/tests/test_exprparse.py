import pytest

from pseudosym.exprparse import ParseError, UnknownIdentifier, parse_expr
from pseudosym.render import render, render_latex
from pseudosym.symkernel import Field


@pytest.fixture(scope="module")
def F():
    return Field(("t", "z", "theta", "phi"), ("m",))


@pytest.mark.parametrize("src", [
    "-1/(2*xi/t - 1)", "t^2*sin(theta)^2", "2*xi/t - 1", "xi'' - 3*xi'/t",
    "(t - 2*xi)*(t*xi' - xi)/t^3", "1.25*m", "t^-2", "-(-(t))",
])
def test_render_round_trip(F, src):
    e = parse_expr(src, F)
    assert parse_expr(render(e), F) == e


def test_decimal_is_exact(F):
    assert parse_expr("0.1 + 0.2", F) == parse_expr("3/10", F)


@pytest.mark.parametrize("src, offset", [("t +", 3), ("t * (z", 6), ("2 $ t", 2), ("sin(t^2)", 5)])
def test_parse_errors_report_offset(F, src, offset):
    with pytest.raises(ParseError) as exc:
        parse_expr(src, F)
    assert exc.value.offset == offset


def test_unknown_identifier(F):
    with pytest.raises(UnknownIdentifier) as exc:
        parse_expr("t + q", F)
    assert exc.value.name == "q"


def test_latex(F):
    assert render_latex(parse_expr("xi'/t", F)) == "\\frac{\\dot{\\xi}}{t}"
    assert render_latex(F.zero) == "0"
