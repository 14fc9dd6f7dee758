from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import VARS, scalars, series
from duval.errors import PreconditionError
from duval.expr import parse_expr
from duval.scalar import from_sympy, to_sympy
from duval.series.core import INFINITY, CoordChange, TruncSeries, compose

SYMS = sympy.symbols("x y z")


def P(text, precision=None, vars=VARS):
    return parse_expr(text, vars, precision)


def to_expr(f):
    out = sympy.Integer(0)
    for e, c in f.terms.items():
        term = to_sympy(c)
        for s, a in zip(SYMS, e):
            term *= s ** a
        out += term
    return sympy.expand(out)


def from_expr(expr, precision):
    poly = sympy.Poly(sympy.expand(expr), *SYMS)
    terms = {e: from_sympy(c) for e, c in poly.terms() if sum(e) <= precision}
    return TruncSeries(VARS, terms, precision)


def test_examples():
    assert P("1+x", 2) * P("1-x", 2) == P("1-x^2", 2)
    assert P("x^2+y^3+z^4").derivative("z") == P("4*z^3")
    assert P("y^2*z + z^3").order() == 3
    assert TruncSeries.zero(VARS, 4).order() == INFINITY


def test_truncation_drops_high_terms():
    f = P("1 + x + x^2 + x^3", 2)
    assert f == P("1 + x + x^2")
    assert f.precision == 2
    assert (P("x", 5) * P("y", 3)).precision == 3


def test_variable_mismatch():
    with pytest.raises(PreconditionError):
        P("x", 3) + P("y", 3, ("y", "z"))


@settings(max_examples=80, deadline=None)
@given(series(), series())
def test_product_matches_sympy(f, g):
    assert f * g == from_expr(to_expr(f) * to_expr(g), 6)


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f + g) - g == f


@settings(max_examples=60, deadline=None)
@given(series(), series(), st.sampled_from(VARS))
def test_leibniz(f, g, v):
    lhs = (f * g).derivative(v)
    rhs = f.derivative(v) * g + f * g.derivative(v)
    n = lhs.precision
    assert lhs.truncate(n) == rhs.truncate(n)


@settings(max_examples=40, deadline=None)
@given(series(), series(min_order=1, max_terms=3), series(min_order=1, max_terms=3),
       series(min_order=1, max_terms=3))
def test_compose_matches_sympy(f, a, b, c):
    got = compose(f, [a, b, c])
    expected = from_expr(to_expr(f).subs(dict(zip(SYMS, [to_expr(a), to_expr(b), to_expr(c)])),
                         simultaneous=True), 6)
    assert got == expected


def test_compose_example():
    f = P("x^2", 12)
    c = CoordChange(VARS, [P("x + 1/2*y^4", 12), P("y", 12), P("z", 12)])
    assert c.apply(f) == P("x^2 + x*y^4 + 1/4*y^8", 12)
    assert CoordChange.identity(VARS, 12).apply(f) == f


@settings(max_examples=25, deadline=None)
@given(series(min_order=2, max_terms=3, precision=5), series(min_order=2, max_terms=3, precision=5),
       series(max_terms=5, precision=5))
def test_compose_associative(p, q, f):
    x, y, z = (TruncSeries.var(v, VARS, 5) for v in VARS)
    c1 = CoordChange(VARS, [x + p, y, z + q])
    c2 = CoordChange(VARS, [x, y + q, z - p])
    assert c2.apply(c1.apply(f)) == c1.then(c2).apply(f)


@settings(max_examples=25, deadline=None)
@given(series(min_order=2, max_terms=3, precision=6), series(min_order=2, max_terms=3, precision=6))
def test_inverse_round_trip(p, q):
    x, y, z = (TruncSeries.var(v, VARS, 6) for v in VARS)
    c = CoordChange(VARS, [x.scale(2) + y + p, y - z + q, z.scale(-3) + p * q])
    inv = c.inverse()
    for k, v in enumerate(VARS):
        assert c.then(inv).images[k] == TruncSeries.var(v, VARS, 6)
        assert inv.then(c).images[k] == TruncSeries.var(v, VARS, 6)


def test_singular_change_rejected():
    x = TruncSeries.var("x", VARS, 4)
    with pytest.raises(PreconditionError):
        CoordChange(VARS, [x, x, x])
    with pytest.raises(PreconditionError):
        CoordChange(VARS, [x + 1, x, x])


def test_exact_polynomials_substitute_freely():
    f = P("x^2 + y")
    g = compose(f, [P("1 + z"), P("z^3"), P("0")])
    assert g == P("1 + 2*z + z^2 + z^3")
    assert f(2, 3, 0) == 7
