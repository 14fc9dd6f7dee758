from fractions import Fraction

from hypothesis import strategies as st

from duval.scalar import GaussianRational
from duval.series.core import TruncSeries

VARS = ("x", "y", "z")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def scalars(draw, gaussian=True):
    re = draw(small_fractions)
    im = draw(small_fractions) if gaussian and draw(st.booleans()) else Fraction(0)
    return GaussianRational.make(re, im)


@st.composite
def series(draw, vars=VARS, precision=6, max_terms=6, min_order=0, gaussian=True):
    n = len(vars)
    exps = st.tuples(*[st.integers(0, precision) for _ in range(n)]).filter(
        lambda e: min_order <= sum(e) <= precision)
    terms = draw(st.dictionaries(exps, scalars(gaussian), max_size=max_terms))
    return TruncSeries(vars, terms, precision)
