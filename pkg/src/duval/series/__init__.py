"""Exact truncated power series and the normal-form lemmas built on them."""

from .classify import ade_classify, classify
from .core import INFINITY, CoordChange, TruncSeries, compose
from .hensel import nth_root, nth_root_of_unit, reciprocal
from .ideal import GradedIdeal, graded_ideal_membership, milnor_number, ruiz_equivalent
from .normal import dnen_normalize, splitting_lemma

__all__ = [
    "INFINITY", "CoordChange", "TruncSeries", "compose", "nth_root", "nth_root_of_unit",
    "reciprocal", "GradedIdeal", "graded_ideal_membership", "milnor_number",
    "ruiz_equivalent", "dnen_normalize", "splitting_lemma", "ade_classify", "classify",
]
