import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import VARS
from duval.errors import PreconditionError
from duval.expr import parse_expr
from duval.series.core import TruncSeries
from duval.series.ideal import (
    GradedIdeal,
    graded_ideal_membership,
    milnor_number,
    monomials_up_to,
    ruiz_equivalent,
    ruiz_generators,
)


def P(text, precision=None):
    return parse_expr(text, VARS, precision)


def _check_witness(h, gens, q, N):
    total = TruncSeries.zero(VARS, N)
    for qi, g in zip(q, gens):
        total = total + (qi * g.with_precision(N)).truncate(N)
    assert total.truncate(N) == h.truncate(N)


def test_examples():
    q = graded_ideal_membership(P("x^3", 6), [P("x")], 6)
    assert q == [P("x^2", 6)]
    f = P("x^2+y^3+z^4", 8)
    gens = ruiz_generators(f)
    w = graded_ideal_membership(P("z^7", 8), gens, 8)
    assert w is not None
    _check_witness(P("z^7", 8), gens, w, 8)
    assert graded_ideal_membership(P("z^3", 8), gens, 8) is None


def _monomial_oracle(h, gens, N):
    gexps = [next(iter(g.terms)) for g in gens]
    return all(sum(e) > N or any(all(a >= b for a, b in zip(e, ge)) for ge in gexps)
               for e in h.terms)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
                min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
                min_size=1, max_size=4),
       st.integers(3, 7))
def test_monomial_ideals_against_divisibility(gexps, hexps, N):
    gens = [TruncSeries(VARS, {e: 1}, None) for e in gexps]
    h = TruncSeries(VARS, {e: k + 1 for k, e in enumerate(hexps)}, N)
    w = graded_ideal_membership(h, gens, N)
    assert (w is not None) == _monomial_oracle(h, gens, N)
    if w is not None:
        _check_witness(h, gens, w, N)


def test_monomials_up_to_counts():
    for n in range(6):
        assert len(monomials_up_to(3, n)) == (n + 1) * (n + 2) * (n + 3) // 6


def test_ruiz_examples():
    f = P("x^2+y^3+z^4", 8)
    assert ruiz_equivalent(f, f)
    assert ruiz_equivalent(f, f + P("z^7", 8))
    assert not ruiz_equivalent(f, f + P("z^3", 8))


def test_ruiz_order_precondition():
    with pytest.raises(PreconditionError):
        ruiz_equivalent(P("x + y^2", 6), P("x", 6))


@pytest.mark.parametrize("text", ["x^2+y^3+z^4", "x^2+y^3+y*z^3", "x^2+y^2*z+z^5", "x*y-z^4"])
def test_constructive_positives(text):
    N = 10
    f = P(text, N)
    J = f.gradient()
    rng = random.Random(text)
    for _ in range(15):
        m = P(rng.choice(["x", "y", "z", "x+2*y", "z^2-y"]), N)
        p = sum((J[k].scale(rng.randint(-2, 2)) for k in range(3)), TruncSeries.zero(VARS, N))
        q = sum((J[k].scale(rng.randint(-2, 2)) * P(rng.choice(["1", "x", "y+z"]), N)
                 for k in range(3)), TruncSeries.zero(VARS, N))
        h = (m * p * q).truncate(N)
        assert ruiz_equivalent(f, f + h)


@pytest.mark.parametrize("text,mu", [("x^2+y^2+z^2", 1), ("x*y-z^5", 4), ("x^2+y^2*z+z^5", 6),
                                     ("x^2+y^3+z^4", 6), ("x^2+y^3+y*z^3", 7),
                                     ("x^2+y^3+z^5", 8)])
def test_milnor_numbers(text, mu):
    assert milnor_number(P(text, 12)) == mu


def test_milnor_not_certified_for_non_isolated():
    assert milnor_number(P("x^2+y^2", 8)) is None


def test_graded_ideal_dimension():
    # the ideal (x, y, z) modulo degree > 3 has every monomial but 1
    ideal = GradedIdeal([P("x"), P("y"), P("z")], 3)
    assert ideal.dimension == len(monomials_up_to(3, 3)) - 1
