import itertools

import pytest
from hypothesis import given, settings, strategies as st

from duval.errors import PreconditionError
from duval.lattice import admissible_indices, all_types, class_of, intersection_matrix, multiplicity
from duval.reduce import (
    ReductionResult,
    brute_force_reduce,
    reduce_by_cases,
    reduce_by_solving,
    reduce_to_admissible,
    target_residual,
    verify_reduction,
)

TYPES = all_types(8)


def test_examples():
    assert reduce_to_admissible("A2", (1, 0)) == ReductionResult((0, 0), (1, 0))
    assert reduce_to_admissible("A3", (0, 2, 0)) == ReductionResult((1, 2, 1), (0, 0, 0))
    r = reduce_to_admissible("E8", (1,) + (0,) * 7)
    assert r.residual == (0,) * 8 and min(r.g) >= 0


def test_oracle_examples():
    assert brute_force_reduce("A1", (2,), 2) == ReductionResult((1,), (0,))
    for t in TYPES:
        zero = (0,) * t.rank
        assert brute_force_reduce(t, zero, 0) == ReductionResult(zero, zero)
    r = brute_force_reduce("D4", (1, 0, 1, 1), 4)
    assert r is not None and verify_reduction("D4", (1, 0, 1, 1), r)
    assert r.residual == target_residual("D4", (1, 0, 1, 1))


def test_oracle_reports_not_found():
    # the only solution for E8 with s = e_1 has coefficient 6
    assert brute_force_reduce("E8", (1,) + (0,) * 7, 5) is None
    assert brute_force_reduce("E8", (1,) + (0,) * 7, 6) is not None


def test_negative_profile_rejected():
    with pytest.raises(PreconditionError):
        reduce_to_admissible("A3", (0, -1, 0))
    with pytest.raises(PreconditionError):
        brute_force_reduce("A3", (0, -1, 0), 3)


def test_verify_rejects_tampering():
    s = (0, 2, 0)
    good = reduce_to_admissible("A3", s)
    assert verify_reduction("A3", s, good)
    bad_g = ReductionResult((-1,) + good.g[1:], good.residual)
    assert not verify_reduction("A3", s, bad_g)
    # a unit at a non-admissible index is never an acceptable residual
    s8 = (0, 0, 0, 0, 1, 0, 0, 0)
    assert not verify_reduction("E8", s8, ReductionResult((0,) * 8, s8))
    # residual that does not match s + C g
    assert not verify_reduction("A3", s, ReductionResult(good.g, (1, 0, 0)))


@pytest.mark.parametrize("t", [t for t in TYPES if t.rank <= 6], ids=str)
def test_cases_match_oracle_exhaustively(t):
    # coefficients never exceed 42 for rank <= 6 with entries <= 2
    for s in itertools.product(range(3), repeat=t.rank):
        r = reduce_to_admissible(t, s)
        assert verify_reduction(t, s, r)
        assert brute_force_reduce(t, s, 42) == r


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_residual_determined_by_class(t):
    seen = {}
    for s in itertools.product(range(3), repeat=min(t.rank, 5)):
        s = s + (0,) * (t.rank - len(s))
        r = reduce_by_cases(t, s)
        c = class_of(t, s)
        assert seen.setdefault(c, r.residual) == r.residual
        assert multiplicity(t, r.residual) <= 1
        assert (r.residual_index() is None) == c.is_zero()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_larger_profiles(t, data):
    s = data.draw(st.lists(st.integers(0, 6), min_size=t.rank, max_size=t.rank))
    r = reduce_to_admissible(t, s)
    assert verify_reduction(t, s, r)
    shortcut = reduce_by_solving(t, s)
    assert shortcut == r


def test_admissible_units_are_fixed():
    for t in TYPES:
        for i in admissible_indices(t):
            u = tuple(int(k == i - 1) for k in range(t.rank))
            assert reduce_to_admissible(t, u) == ReductionResult((0,) * t.rank, u)


def test_g_is_unique():
    # the matrix is invertible, so any two valid results with equal residual agree
    t = "E7"
    lat = intersection_matrix(t)
    s = (2, 0, 1, 0, 2, 1, 0)
    r = reduce_to_admissible(t, s)
    assert tuple(a + b for a, b in zip(s, lat.apply(r.g))) == r.residual
    assert brute_force_reduce(t, s, max(r.g)) == r
    assert brute_force_reduce(t, s, max(r.g) - 1) is None
