"""Reducing an intersection profile to zero or a single admissible unit.

Given ``s_i = F . E_i >= 0`` for some divisor ``F``, find an effective
exceptional divisor ``G = sum g_i E_i`` such that ``(F + G) . E_i`` vanishes
for all ``i`` except possibly one admissible index, where it equals 1.

Two independent routes are provided: the family-by-family case analysis
(:func:`reduce_to_admissible`) and an exhaustive box search
(:func:`brute_force_reduce`) that only uses the local equations of the
diagram.  Since the intersection matrix is invertible, ``G`` is determined
by the residual, and the residual is determined by the class of ``s``; so
both routes must return identical results whenever both succeed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .lattice import (
    DynkinType,
    Vector,
    admissible_indices,
    as_type,
    class_of,
    edges,
    fundamental_cycle,
    intersection_matrix,
    unit_vector,
)


@dataclass(frozen=True)
class ReductionResult:
    g: Vector
    residual: Vector

    def residual_index(self) -> Optional[int]:
        """1-based index of the residual unit, or ``None`` when it is zero."""
        for i, v in enumerate(self.residual):
            if v:
                return i + 1
        return None


def _check_profile(t: DynkinType, s: Sequence[int]) -> Vector:
    s = tuple(int(v) for v in s)
    if len(s) != t.rank:
        raise PreconditionError(f"expected a profile of length {t.rank}")
    if any(v < 0 for v in s):
        raise PreconditionError("intersection profile must be non-negative")
    return s


class _Reducer:
    """Mutable (g, s) pair on a set of curves of the ambient lattice.

    ``idx`` lists the ambient 0-based indices of the curves in the
    subdiagram being processed; sub-algorithms address curves by their local
    1-based position in ``idx``.
    """

    def __init__(self, matrix, s):
        self.matrix = matrix
        self.s = list(s)
        self.g = [0] * len(s)

    def add(self, coeffs: Dict[int, int]):
        """Add ``sum coeffs[k] E_k`` (ambient 0-based keys) to G."""
        for k, c in coeffs.items():
            if not c:
                continue
            self.g[k] += c
            row = self.matrix[k]
            for i, m in enumerate(row):
                if m:
                    self.s[i] += c * m

    def add_local(self, idx: Sequence[int], vec: Sequence[int]):
        self.add({idx[p]: c for p, c in enumerate(vec)})

    def local(self, idx: Sequence[int], pos: int) -> int:
        return self.s[idx[pos - 1]]


def _reduce_A(r: _Reducer, idx: Sequence[int]):
    n = len(idx)
    while True:
        positive = [p for p in range(1, n + 1) if r.local(idx, p) > 0]
        if not positive:
            return
        i, j = positive[0], positive[-1]
        if i == j:
            if r.local(idx, i) == 1:
                return
            r.add({idx[i - 1]: 1})
            continue
        # the chain E_i + ... + E_j lowers s_i and s_j and pushes outward
        r.add({idx[p - 1]: 1 for p in range(i, j + 1)})


def _reduce_D4(r: _Reducer, idx: Sequence[int]):
    leaves = (1, 3, 4)
    for p in leaves:
        while r.local(idx, p) >= 2:
            r.add({idx[p - 1]: 1})
    xi = (1, 2, 1, 1)
    while r.local(idx, 2) > 0:
        r.add_local(idx, xi)
    on = [p for p in leaves if r.local(idx, p) == 1]
    if len(on) == 2:
        a, b = on
        r.add({idx[a - 1]: 1, idx[1]: 1, idx[b - 1]: 1})
    elif len(on) == 3:
        r.add_local(idx, (2, 3, 2, 2))


def _reduce_D(r: _Reducer, idx: Sequence[int]):
    n = len(idx)
    if n == 4:
        _reduce_D4(r, idx)
        return
    _reduce_D(r, idx[1:])
    # (2,...,2,1,1) = xi + E_1 changes only s_1, by -2
    while r.local(idx, 1) >= 2:
        r.add_local(idx, (2,) * (n - 2) + (1, 1))
    xi = (1,) + (2,) * (n - 3) + (1, 1)
    while r.local(idx, 2) > 0:
        r.add_local(idx, xi)
    if r.local(idx, 1) == 1:
        if r.local(idx, n - 1) == 1:
            r.add_local(idx, (1,) * (n - 1) + (0,))
        elif r.local(idx, n) == 1:
            r.add_local(idx, (1,) * (n - 2) + (0, 1))


def _reduce_E6(r: _Reducer, idx: Sequence[int]):
    chain = [idx[p - 1] for p in (1, 2, 3, 5, 6)]
    _reduce_A(r, chain)
    xi = (1, 2, 3, 2, 2, 1)
    while r.local(idx, 4) > 0:
        r.add_local(idx, xi)
    if r.local(idx, 2) == 1:
        r.add_local(idx, (1, 2, 2, 1, 1, 0))
    elif r.local(idx, 5) == 1:
        r.add_local(idx, (0, 1, 2, 1, 2, 1))
    elif r.local(idx, 3) == 1:
        r.add_local(idx, (2, 4, 6, 3, 4, 2))


def _reduce_E7(r: _Reducer, idx: Sequence[int]):
    _reduce_D(r, idx[:6])
    xi = (1, 2, 3, 4, 2, 3, 2)
    while r.local(idx, 7) > 0:
        r.add_local(idx, xi)
    if r.local(idx, 5) == 1:
        r.add_local(idx, (0, 1, 2, 3, 2, 2, 1))
    elif r.local(idx, 6) == 1:
        r.add_local(idx, (2, 4, 6, 8, 4, 6, 3))


def _reduce_E8(r: _Reducer, idx: Sequence[int]):
    _reduce_E7(r, idx[1:])
    xi = (2, 3, 4, 5, 6, 3, 4, 2)
    while r.local(idx, 1) > 0:
        r.add_local(idx, xi)
    if r.local(idx, 2) == 1:
        r.add_local(idx, (3, 6, 8, 10, 12, 6, 8, 4))


def reduce_by_cases(t, s: Sequence[int]) -> ReductionResult:
    """The per-family case analysis."""
    t = as_type(t)
    s = _check_profile(t, s)
    lat = intersection_matrix(t)
    r = _Reducer(lat.matrix, s)
    idx = list(range(t.rank))
    if t.family == "A":
        _reduce_A(r, idx)
    elif t.family == "D":
        _reduce_D(r, idx)
    else:
        {6: _reduce_E6, 7: _reduce_E7, 8: _reduce_E8}[t.rank](r, idx)
    return ReductionResult(tuple(r.g), tuple(r.s))


# -- linear-solve shortcut ---------------------------------------------------

@lru_cache(maxsize=None)
def _inverse(t: DynkinType):
    from .series.linalg import invert_matrix

    return invert_matrix(intersection_matrix(t).matrix)


@lru_cache(maxsize=None)
def _targets(t: DynkinType):
    """Map each class to its representative residual (zero or admissible unit)."""
    table = {class_of(t, (0,) * t.rank): (0,) * t.rank}
    for i in sorted(admissible_indices(t)):
        u = unit_vector(t.rank, i)
        # lower index wins if two admissible units ever shared a class
        table.setdefault(class_of(t, u), u)
    return table


def target_residual(t, s: Sequence[int]) -> Vector:
    t = as_type(t)
    return _targets(t)[class_of(t, s)]


def reduce_by_solving(t, s: Sequence[int]) -> Optional[ReductionResult]:
    """``g = matrix^-1 (target - s)``; ``None`` unless integral and effective."""
    t = as_type(t)
    s = _check_profile(t, s)
    target = target_residual(t, s)
    inv = _inverse(t)
    diff = [a - b for a, b in zip(target, s)]
    g = [sum((row[j] * diff[j] for j in range(t.rank)), Fraction(0)) for row in inv]
    if any(x.denominator != 1 or x < 0 for x in g):
        return None
    return ReductionResult(tuple(int(x) for x in g), target)


def reduce_to_admissible(t, s: Sequence[int]) -> ReductionResult:
    """Case analysis, cross-checked against the linear-solve shortcut."""
    t = as_type(t)
    result = reduce_by_cases(t, s)
    shortcut = reduce_by_solving(t, s)
    if shortcut is not None and shortcut != result:
        raise AssertionError(f"case analysis {result} disagrees with linear solve {shortcut}")
    if not verify_reduction(t, s, result):
        raise AssertionError(f"case analysis produced an invalid result {result}")
    return result


# -- brute-force oracle ------------------------------------------------------

def brute_force_reduce(t, s: Sequence[int], coeff_bound: int) -> Optional[ReductionResult]:
    """Exhaustive search over ``0 <= g_i <= coeff_bound``.

    Works directly with the local equations
    ``r_v = s_v - 2 g_v + sum_{u ~ v} g_u`` and the requirement that ``r`` is
    zero or an admissible unit.  Returns the lexicographically least ``g``,
    or ``None`` when nothing fits in the box.
    """
    t = as_type(t)
    s = _check_profile(t, s)
    if coeff_bound < 0:
        raise PreconditionError("coefficient bound must be non-negative")
    n = t.rank
    nbrs: List[List[int]] = [[] for _ in range(n)]
    for i, j in edges(t):
        nbrs[i - 1].append(j - 1)
        nbrs[j - 1].append(i - 1)
    adm = {i - 1 for i in admissible_indices(t)}
    found: List[Tuple[int, ...]] = []

    def residual(v, g):
        return s[v] - 2 * g[v] + sum(g[u] for u in nbrs[v])

    def search(g: List[Optional[int]], used_one: bool):
        # propagate: find an equation with exactly one unknown
        for v in range(n):
            unknown = [u for u in [v] + nbrs[v] if g[u] is None]
            if len(unknown) != 1:
                continue
            x = unknown[0]
            known = s[v] + sum(g[u] for u in nbrs[v] if g[u] is not None)
            if x != v:
                known -= 2 * g[v]
            choices = (0, 1) if (v in adm and not used_one) else (0,)
            for r in choices:
                if x == v:
                    num = known - r
                    if num % 2:
                        continue
                    val = num // 2
                else:
                    val = r - known
                if 0 <= val <= coeff_bound:
                    g[x] = val
                    search(g, used_one or r == 1)
                    g[x] = None
            return
        free = next((v for v in range(n) if g[v] is None), None)
        if free is None:
            r = [residual(v, g) for v in range(n)]
            if all(x in (0, 1) for x in r) and sum(r) <= 1 and all(
                    r[v] == 0 or v in adm for v in range(n)):
                found.append(tuple(g))
            return
        for val in range(coeff_bound + 1):
            g[free] = val
            search(g, used_one)
        g[free] = None

    search([None] * n, False)
    if not found:
        return None
    best = min(found)
    lat = intersection_matrix(t)
    res = tuple(a + b for a, b in zip(s, lat.apply(best)))
    return ReductionResult(best, res)


def verify_reduction(t, s: Sequence[int], r: ReductionResult) -> bool:
    t = as_type(t)
    n = t.rank
    if len(s) != n or len(r.g) != n or len(r.residual) != n:
        return False
    if any(v < 0 for v in r.g):
        return False
    lat = intersection_matrix(t)
    if tuple(a + b for a, b in zip(s, lat.apply(r.g))) != tuple(r.residual):
        return False
    if any(v not in (0, 1) for v in r.residual) or sum(r.residual) > 1:
        return False
    idx = r.residual_index()
    if idx is not None and idx not in admissible_indices(t):
        return False
    return class_of(t, s) == class_of(t, r.residual)
