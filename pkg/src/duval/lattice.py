"""Exceptional lattices of ADE singularities.

Curves are numbered as follows (1-based, as in the printed diagrams):

* ``A_n``: a chain ``E_1 - E_2 - ... - E_n``.
* ``D_n``: a chain ``E_1 - ... - E_{n-2}`` with ``E_{n-1}`` and ``E_n`` both
  attached to ``E_{n-2}``.
* ``E_n``: a chain ``E_1 - ... - E_{n-3} - E_{n-1} - E_n`` with ``E_{n-2}``
  attached to ``E_{n-3}``.

Vectors (divisor coefficients, intersection profiles) are plain integer
tuples indexed from 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .errors import PreconditionError

MAX_RANK = 64

Vector = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in ("A", "D", "E"):
            raise PreconditionError(f"unknown Dynkin family {self.family!r}")
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise PreconditionError("rank must be an integer")
        lo = {"A": 1, "D": 4, "E": 6}[self.family]
        if self.rank < lo or self.rank > MAX_RANK:
            raise PreconditionError(f"{self.family}_{self.rank} is not a supported type")
        if self.family == "E" and self.rank > 8:
            raise PreconditionError(f"E_{self.rank} is not a supported type")

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        m = re.fullmatch(r"\s*([ADE])_?(\d+)\s*", text)
        if not m:
            raise PreconditionError(f"cannot read a Dynkin type from {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def as_type(t) -> DynkinType:
    return t if isinstance(t, DynkinType) else DynkinType.parse(t)


def edges(t) -> List[Tuple[int, int]]:
    """Edges of the diagram as 1-based index pairs ``(i, j)`` with ``i < j``."""
    t = as_type(t)
    n = t.rank
    if t.family == "A":
        return [(i, i + 1) for i in range(1, n)]
    if t.family == "D":
        chain = [(i, i + 1) for i in range(1, n - 2)]
        return chain + [(n - 2, n - 1), (n - 2, n)]
    chain = list(range(1, n - 2)) + [n - 1, n]
    es = [tuple(sorted(p)) for p in zip(chain, chain[1:])]
    es.append((n - 3, n - 2))
    return sorted(es)


@dataclass(frozen=True)
class IntersectionLattice:
    dynkin: DynkinType
    matrix: Matrix

    @property
    def rank(self) -> int:
        return self.dynkin.rank

    def apply(self, v: Sequence[int]) -> Vector:
        """``matrix . v``: the intersection numbers ``(sum v_j E_j) . E_i``."""
        if len(v) != self.rank:
            raise PreconditionError(f"expected a vector of length {self.rank}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(u, self.apply(v)))


@lru_cache(maxsize=None)
def intersection_matrix(t) -> IntersectionLattice:
    t = as_type(t)
    n = t.rank
    m = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges(t):
        m[i - 1][j - 1] = m[j - 1][i - 1] = 1
    return IntersectionLattice(t, tuple(tuple(r) for r in m))


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def is_negative_definite(m: Sequence[Sequence[int]]) -> bool:
    # leading principal minors of -m must all be positive
    n = len(m)
    neg = [[-x for x in row] for row in m]
    return all(determinant([r[:k] for r in neg[:k]]) > 0 for k in range(1, n + 1))


# -- Smith normal form -------------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U * m * V = D`` diagonal, ``U, V`` unimodular.

    The diagonal entries are non-negative and each divides the next.
    """
    a = [list(r) for r in m]
    rows, cols = len(a), len(a[0]) if a else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (a, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for M in (a, V):
            for r in M:
                r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(t, i, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(t, j, -q)
                if a[t][j]:
                    done = False
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return a, U, V


# -- class groups ------------------------------------------------------------

@dataclass(frozen=True)
class ClassElement:
    residues: Tuple[int, ...]
    moduli: Tuple[int, ...] = field(compare=True)

    def __post_init__(self):
        reduced = tuple(r % d for r, d in zip(self.residues, self.moduli))
        object.__setattr__(self, "residues", reduced)

    def __add__(self, other: "ClassElement") -> "ClassElement":
        if self.moduli != other.moduli:
            raise PreconditionError("elements of different groups")
        return ClassElement(tuple(a + b for a, b in zip(self.residues, other.residues)),
                            self.moduli)

    def __neg__(self):
        return ClassElement(tuple(-a for a in self.residues), self.moduli)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int) -> "ClassElement":
        return ClassElement(tuple(k * a for a in self.residues), self.moduli)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.residues)

    def order(self) -> int:
        from math import gcd

        result = 1
        for r, d in zip(self.residues, self.moduli):
            o = d // gcd(r, d)
            result = result * o // gcd(result, o)
        return result

    def __str__(self):
        if not self.moduli:
            return "0"
        return "(" + ", ".join(f"{r} mod {d}" for r, d in zip(self.residues, self.moduli)) + ")"


@dataclass(frozen=True)
class ClassGroup:
    dynkin: DynkinType
    invariant_factors: Tuple[int, ...]
    projection: Matrix

    @property
    def order(self) -> int:
        p = 1
        for d in self.invariant_factors:
            p *= d
        return p

    def zero(self) -> ClassElement:
        return ClassElement((0,) * len(self.invariant_factors), self.invariant_factors)

    def project(self, v: Sequence[int]) -> ClassElement:
        if len(v) != self.dynkin.rank:
            raise PreconditionError(f"expected a vector of length {self.dynkin.rank}")
        res = tuple(sum(a * b for a, b in zip(row, v)) for row in self.projection)
        return ClassElement(res, self.invariant_factors)


def _canonicalize(rows: List[List[int]], mods: List[int]) -> List[List[int]]:
    """Pick a deterministic basis of the (cyclic or 2-elementary) target group."""
    if len(mods) == 1:
        d = mods[0]
        row = [x % d for x in rows[0]]
        unit = next((x for x in row if _gcd(x, d) == 1), None)
        if unit is not None:
            inv = pow(unit, -1, d)
            row = [(x * inv) % d for x in row]
        return [row]
    if set(mods) == {2}:
        k = len(mods)
        cols = [tuple(r[j] % 2 for r in rows) for j in range(len(rows[0]))]
        for idx in combinations(range(len(cols)), k):
            basis = [cols[j] for j in idx]
            inv = _invert_mod2([list(c) for c in zip(*basis)])
            if inv is not None:
                return [[sum(inv[a][b] * r[j] for b, r in enumerate(rows)) % 2
                         for j in range(len(rows[0]))] for a in range(k)]
    return [[x % d for x in r] for r, d in zip(rows, mods)]


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def _invert_mod2(m):
    n = len(m)
    a = [[x % 2 for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        for r in range(n):
            if r != c and a[r][c]:
                a[r] = [(x + y) % 2 for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@lru_cache(maxsize=None)
def class_group(t) -> ClassGroup:
    """Cokernel of the intersection matrix with an explicit projection map."""
    lat = intersection_matrix(t)
    D, U, _ = smith_normal_form(lat.matrix)
    rows, mods = [], []
    for i in range(lat.rank):
        d = D[i][i]
        if d != 1:
            rows.append(U[i])
            mods.append(d)
    rows = _canonicalize(rows, mods)
    return ClassGroup(lat.dynkin, tuple(mods), tuple(tuple(r) for r in rows))


def class_of(t, s: Sequence[int]) -> ClassElement:
    return class_group(t).project(tuple(s))


def unit_vector(rank: int, i: int) -> Vector:
    """Unit vector at the 1-based index ``i``."""
    return tuple(int(k == i - 1) for k in range(rank))


def ej_class(t, j: int) -> ClassElement:
    t = as_type(t)
    if not 1 <= j <= t.rank:
        raise PreconditionError(f"index {j} out of range 1..{t.rank}")
    return class_of(t, unit_vector(t.rank, j))


# -- fundamental cycle -------------------------------------------------------

def laufer_sequence(t, start: int = 1, choose=None) -> Vector:
    """Laufer iteration from ``E_start``; ``choose`` picks among positive indices.

    ``choose`` receives the sorted list of 1-based indices ``j`` with
    ``z . E_j > 0`` and returns one of them (default: the smallest).
    """
    lat = intersection_matrix(t)
    z = list(unit_vector(lat.rank, start))
    while True:
        s = lat.apply(z)
        positive = [j + 1 for j, v in enumerate(s) if v > 0]
        if not positive:
            return tuple(z)
        j = choose(positive) if choose else positive[0]
        z[j - 1] += 1


@lru_cache(maxsize=None)
def fundamental_cycle(t) -> Vector:
    return laufer_sequence(as_type(t))


def admissible_indices(t) -> frozenset:
    """1-based indices whose fundamental-cycle coefficient is 1."""
    return frozenset(i + 1 for i, a in enumerate(fundamental_cycle(t)) if a == 1)


def multiplicity(t, s: Sequence[int]) -> int:
    t = as_type(t)
    if len(s) != t.rank:
        raise PreconditionError(f"expected a vector of length {t.rank}")
    if any(v < 0 for v in s):
        raise PreconditionError("intersection profile must be non-negative")
    return sum(a * b for a, b in zip(fundamental_cycle(t), s))


def all_types(max_rank: int = 8) -> List[DynkinType]:
    out = [DynkinType("A", n) for n in range(1, max_rank + 1)]
    out += [DynkinType("D", n) for n in range(4, max_rank + 1)]
    out += [DynkinType("E", n) for n in range(6, min(max_rank, 8) + 1)]
    return out
