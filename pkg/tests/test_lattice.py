import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from duval.errors import PreconditionError
from duval.lattice import (
    DynkinType,
    admissible_indices,
    all_types,
    class_group,
    class_of,
    determinant,
    ej_class,
    fundamental_cycle,
    intersection_matrix,
    is_negative_definite,
    laufer_sequence,
    multiplicity,
    smith_normal_form,
    unit_vector,
)

TYPES = all_types(12)


def _sympy_factors(t):
    m = sympy.Matrix(intersection_matrix(t).matrix)
    d = sympy_snf(m, domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(t.rank) if abs(d[i, i]) != 1)


def test_small_matrices():
    assert intersection_matrix("A2").matrix == ((-2, 1), (1, -2))
    d4 = intersection_matrix("D4").matrix
    ones = {(i + 1, j + 1) for i in range(4) for j in range(i + 1, 4) if d4[i][j] == 1}
    assert ones == {(1, 2), (2, 3), (2, 4)}
    e6 = intersection_matrix("E6").matrix
    ones = {(i + 1, j + 1) for i in range(6) for j in range(i + 1, 6) if e6[i][j] == 1}
    assert ones == {(1, 2), (2, 3), (3, 4), (3, 5), (5, 6)}


@pytest.mark.parametrize("bad", [("A", 0), ("D", 3), ("E", 5), ("E", 9), ("B", 3)])
def test_invalid_types_rejected(bad):
    with pytest.raises(PreconditionError):
        DynkinType(*bad)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_matrix_invariants(t):
    m = intersection_matrix(t).matrix
    n = t.rank
    assert all(m[i][j] == m[j][i] for i in range(n) for j in range(n))
    assert all(m[i][i] == -2 for i in range(n))
    assert all(m[i][j] in (0, 1) for i in range(n) for j in range(n) if i != j)
    assert is_negative_definite(m)
    # a tree: n - 1 edges
    assert sum(m[i][j] for i in range(n) for j in range(i + 1, n)) == n - 1


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_class_group_against_sympy(t):
    g = class_group(t)
    assert sorted(g.invariant_factors) == _sympy_factors(t)
    assert g.order == abs(determinant(intersection_matrix(t).matrix))
    assert abs(determinant(intersection_matrix(t).matrix)) == abs(
        sympy.Matrix(intersection_matrix(t).matrix).det())


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_projection_kills_columns_and_is_onto(t):
    lat = intersection_matrix(t)
    g = class_group(t)
    rng = random.Random(str(t))
    for _ in range(1000):
        v = [rng.randint(-50, 50) for _ in range(t.rank)]
        assert g.project(lat.apply(v)).is_zero()
    # images of the unit vectors generate the whole group
    seen = {g.zero()}
    frontier = [g.zero()]
    gens = [ej_class(t, j) for j in range(1, t.rank + 1)]
    while frontier:
        x = frontier.pop()
        for e in gens:
            y = x + e
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert len(seen) == g.order


def test_snf_transforms_are_exact():
    for t in TYPES:
        m = intersection_matrix(t).matrix
        D, U, V = smith_normal_form(m)
        prod = [[sum(U[i][k] * m[k][l] * V[l][j] for k in range(t.rank) for l in range(t.rank))
                 for j in range(t.rank)] for i in range(t.rank)]
        assert prod == D
        assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


def test_class_of_examples():
    assert class_of("A3", (0, 1, 0)).residues == (2,)
    assert class_of("D4", (0, 1, 0, 0)).is_zero()
    for t in TYPES:
        assert class_of(t, (0,) * t.rank).is_zero()


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_class_zero_iff_in_column_span(t):
    inv = sympy.Matrix(intersection_matrix(t).matrix).inv()
    rng = random.Random(t.rank)
    for _ in range(50):
        s = [rng.randint(-3, 3) for _ in range(t.rank)]
        in_span = all(x.is_integer for x in inv * sympy.Matrix(s))
        assert class_of(t, s).is_zero() == in_span


def test_class_of_length_mismatch():
    with pytest.raises(PreconditionError):
        class_of("A3", (1, 0))


def test_d_parity():
    for n in range(4, 13):
        expected = (4,) if n % 2 else (2, 2)
        assert class_group(DynkinType("D", n)).invariant_factors == expected


def test_ej_examples():
    assert ej_class("A5", 3).residues == (3,)
    assert all(ej_class("E8", j).residues == () for j in range(1, 9))
    e1, e5, e6 = (ej_class("D6", j) for j in (1, 5, 6))
    assert e5 != e6 and e5.order() == e6.order() == 2
    assert e5 + e6 == e1
    with pytest.raises(PreconditionError):
        ej_class("A3", 4)


@pytest.mark.parametrize("n", range(1, 13))
def test_an_classes_are_multiples(n):
    e1 = ej_class(DynkinType("A", n), 1)
    for j in range(1, n + 1):
        assert ej_class(DynkinType("A", n), j) == j * e1


def _brute_fundamental_cycle(t, bound=6):
    lat = intersection_matrix(t)
    best = None
    for z in itertools.product(range(bound + 1), repeat=t.rank):
        if any(z) and all(v <= 0 for v in lat.apply(z)):
            if best is None or all(a <= b for a, b in zip(z, best)):
                best = z
    return best


@pytest.mark.parametrize("t", [DynkinType(f, n) for f, n in
                               [("A", 1), ("A", 3), ("A", 5), ("D", 4), ("D", 5), ("D", 6),
                                ("E", 6)]], ids=str)
def test_fundamental_cycle_is_least(t):
    assert fundamental_cycle(t) == _brute_fundamental_cycle(t, 3 if t.rank <= 6 else 2)


def test_fundamental_cycle_values():
    assert fundamental_cycle("A4") == (1, 1, 1, 1)
    assert fundamental_cycle("D6") == (1, 2, 2, 2, 1, 1)
    assert fundamental_cycle("E6") == (1, 2, 3, 2, 2, 1)
    assert fundamental_cycle("E7") == (1, 2, 3, 4, 2, 3, 2)
    assert fundamental_cycle("E8") == (2, 3, 4, 5, 6, 3, 4, 2)


def _all_laufer_runs(t):
    lat = intersection_matrix(t)
    results = set()

    def walk(z):
        s = lat.apply(z)
        pos = [j for j, v in enumerate(s) if v > 0]
        if not pos:
            results.add(tuple(z))
            return
        for j in pos:
            z2 = list(z)
            z2[j] += 1
            walk(z2)

    for i in range(1, t.rank + 1):
        walk(list(unit_vector(t.rank, i)))
    return results


@pytest.mark.parametrize("t", [t for t in TYPES if t.rank <= 6], ids=str)
def test_laufer_independent_of_choices(t):
    assert _all_laufer_runs(t) == {fundamental_cycle(t)}


@pytest.mark.parametrize("t", [t for t in TYPES if t.rank > 6], ids=str)
def test_laufer_randomized_choices(t):
    rng = random.Random(7)
    for _ in range(30):
        start = rng.randint(1, t.rank)
        assert laufer_sequence(t, start, rng.choice) == fundamental_cycle(t)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_fundamental_cycle_minimality(t):
    lat = intersection_matrix(t)
    xi = fundamental_cycle(t)
    assert all(v <= 0 for v in lat.apply(xi))
    for i, a in enumerate(xi):
        z = list(xi)
        z[i] -= 1
        broken = any(v < 0 for v in z) or not any(z) or any(v > 0 for v in lat.apply(z))
        assert broken


def test_admissible_examples():
    assert admissible_indices("A7") == frozenset(range(1, 8))
    assert admissible_indices("D6") == frozenset({1, 5, 6})
    assert admissible_indices("E8") == frozenset()


def test_multiplicity_examples():
    assert multiplicity("D6", unit_vector(6, 1)) == 1
    assert multiplicity("E8", unit_vector(8, 1)) == 2
    assert multiplicity("E6", (0,) * 6) == 0
    with pytest.raises(PreconditionError):
        multiplicity("A2", (1, -1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_multiplicity_linear(t, data):
    vec = st.lists(st.integers(0, 20), min_size=t.rank, max_size=t.rank)
    s1, s2 = data.draw(vec), data.draw(vec)
    k = data.draw(st.integers(0, 5))
    total = [k * a + b for a, b in zip(s1, s2)]
    assert multiplicity(t, total) == k * multiplicity(t, s1) + multiplicity(t, s2)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_unit_multiplicity_marks_admissible(t):
    for i in range(1, t.rank + 1):
        assert (multiplicity(t, unit_vector(t.rank, i)) == 1) == (i in admissible_indices(t))
