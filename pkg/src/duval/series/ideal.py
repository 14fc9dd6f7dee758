"""Ideal membership modulo high degree, by linear algebra on graded pieces.

The question "does ``h`` agree with an element of ``(g_1, ..., g_r)`` modulo
terms of degree ``> N``" is a finite linear system: the ideal modulo
``m**(N+1)`` is spanned by the truncations of ``mu * g_j`` for monomials
``mu``.  We row-reduce those products, pivoting on the lowest monomial in
graded order, and keep track of the combinations so that a witness
``h = sum q_j g_j`` can be returned.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import PreconditionError
from ..scalar import Scalar
from .core import TruncSeries, grlex_key

Row = Dict[int, Scalar]


def monomials_up_to(nvars: int, n: int) -> List[Tuple[int, ...]]:
    """All exponent tuples of total degree ``<= n``, in graded order."""
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, k + 1)

    for d in range(n + 1):
        if nvars == 0:
            if d == 0:
                out.append(())
            continue
        rec((), d, 0)
    return sorted(out, key=grlex_key)


class GradedIdeal:
    """Row-echelon form of an ideal modulo ``m**(N+1)``."""

    def __init__(self, gens: Sequence[TruncSeries], N: int):
        if not gens:
            raise PreconditionError("need at least one generator")
        self.vars = gens[0].vars
        for g in gens:
            if g.vars != self.vars:
                raise PreconditionError("generators must share variables")
            if g.precision is not None and g.precision < N:
                raise PreconditionError(
                    f"generator known only to degree {g.precision} < {N}")
        self.gens = list(gens)
        self.N = N
        self.monomials = monomials_up_to(len(self.vars), N)
        self.index = {e: k for k, e in enumerate(self.monomials)}
        # pivot column -> (row normalized to 1 at pivot, combination)
        self.pivots: Dict[int, Tuple[Row, Dict[Tuple[int, int], Scalar]]] = {}
        self._build()

    def _row(self, f: TruncSeries) -> Row:
        return {self.index[e]: c for e, c in f.terms.items() if sum(e) <= self.N}

    def _reduce(self, row: Row, combo: Optional[dict]):
        """Reduce in place; returns the leading column left, or ``None``."""
        while row:
            lead = min(row)
            if lead not in self.pivots:
                return lead
            prow, pcombo = self.pivots[lead]
            c = row[lead]
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
            if combo is not None:
                for k, v in pcombo.items():
                    nv = combo.get(k, 0) - c * v
                    if nv == 0:
                        combo.pop(k, None)
                    else:
                        combo[k] = nv
        return None

    def _build(self):
        N = self.N
        for j, g in enumerate(self.gens):
            gorder = g.order()
            if gorder > N:
                continue
            for m, mu in enumerate(self.monomials):
                if sum(mu) + gorder > N:
                    break
                row: Row = {}
                for e, c in g.terms.items():
                    ee = tuple(a + b for a, b in zip(e, mu))
                    if sum(ee) <= N:
                        row[self.index[ee]] = c
                combo = {(j, m): 1}
                lead = self._reduce(row, combo)
                if lead is None:
                    continue
                inv = 1 / row[lead]
                self.pivots[lead] = ({k: v * inv for k, v in row.items()},
                                     {k: v * inv for k, v in combo.items()})

    @property
    def dimension(self) -> int:
        """Dimension of the ideal modulo ``m**(N+1)``."""
        return len(self.pivots)

    def contains(self, h: TruncSeries) -> bool:
        return self._reduce(self._row(h), None) is None

    def witness(self, h: TruncSeries) -> Optional[List[TruncSeries]]:
        if h.vars != self.vars:
            raise PreconditionError("variable mismatch")
        row = self._row(h)
        combo: Dict[Tuple[int, int], Scalar] = {}
        if self._reduce(row, combo) is not None:
            return None
        # h - sum(combo) reduced to zero, so h = -sum(combo)
        q: List[Dict] = [dict() for _ in self.gens]
        for (j, m), c in combo.items():
            q[j][self.monomials[m]] = -c
        return [TruncSeries(self.vars, t, self.N) for t in q]


def graded_ideal_membership(h: TruncSeries, gens: Sequence[TruncSeries],
                            N: int) -> Optional[List[TruncSeries]]:
    """Witness ``q`` with ``h == sum q_j gens_j`` modulo degree ``> N``, else ``None``."""
    if h.precision is not None and h.precision < N:
        raise PreconditionError(f"h known only to degree {h.precision} < {N}")
    return GradedIdeal(gens, N).witness(h)


def jacobian(f: TruncSeries) -> List[TruncSeries]:
    return f.gradient()


def ruiz_generators(f: TruncSeries) -> List[TruncSeries]:
    """Generators ``x_k * p * q`` of ``m * J_f**2`` (``p, q`` partials of ``f``).

    If ``f`` is known through degree ``N``, its partials are known through
    ``N - 1`` and each product ``x_k * p * q`` (with ``p, q`` of order ``>= 1``)
    is known through degree ``N + 1``.
    """
    J = jacobian(f.with_precision(None))
    gens = []
    for a, b in combinations_with_replacement(range(len(J)), 2):
        pq = J[a] * J[b]
        if pq.is_zero():
            continue
        for v in f.vars:
            g = TruncSeries.var(v, f.vars, None) * pq
            gens.append(g if f.precision is None else g.truncate(f.precision + 1))
    return gens


@lru_cache(maxsize=64)
def _ruiz_ideal(f: TruncSeries, N: int) -> GradedIdeal:
    return GradedIdeal(ruiz_generators(f), N)


def ruiz_equivalent(f: TruncSeries, g: TruncSeries, N: Optional[int] = None) -> bool:
    """Sufficient test for right equivalence: ``f - g`` in ``m * J_f**2`` mod degree ``> N``.

    ``True`` means ``f`` and ``g`` are formally equivalent; ``False`` only
    means this criterion does not apply.
    """
    if f.vars != g.vars:
        raise PreconditionError("variable mismatch")
    if f.order() < 2:
        raise PreconditionError("f must have order at least 2")
    if N is None:
        from .core import min_precision

        N = min_precision(f.precision, g.precision)
        if N is None:
            raise PreconditionError("exact polynomials need an explicit degree bound")
    gens = ruiz_generators(f)
    if not gens:
        return (f - g).truncate(N).is_zero()
    return _ruiz_ideal(f, N).contains((f - g).truncate(N))


def milnor_number(f: TruncSeries, N: Optional[int] = None) -> Optional[int]:
    """``dim C[[x]]/J_f`` when it is visibly finite (``m**N`` inside ``J_f``).

    Returns ``None`` if the truncation is too coarse to certify finiteness.
    """
    if N is None:
        if f.precision is None:
            raise PreconditionError("exact polynomials need an explicit degree bound")
        N = f.precision - 1
    J = [d if d.precision is None or d.precision >= N else None for d in jacobian(f)]
    if any(d is None for d in J):
        raise PreconditionError("precision too low for the requested degree")
    J = [d for d in J if not d.is_zero()]
    if not J:
        return None
    ideal = GradedIdeal(J, N)
    nv = len(f.vars)
    top = [e for e in ideal.monomials if sum(e) == N]
    for e in top:
        if not ideal.contains(TruncSeries(f.vars, {e: 1}, N)):
            return None
    return len(ideal.monomials) - ideal.dimension
