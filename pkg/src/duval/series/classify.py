"""Recognition of ADE germs ``f(x, y, z) = 0``.

After splitting off squares, the type is read from the residual in at most
two variables: the order of a one-variable residual (type A), or the
factorization of the cubic part of a two-variable residual followed by a
few normalization rounds (types D and E).  Every answer is cross-checked
against the Milnor number of the residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ..errors import PreconditionError, UnclassifiedError
from ..lattice import DynkinType
from ..scalar import Scalar
from .core import INFINITY, CoordChange, TruncSeries, compose
from .hensel import nth_root_of_unit
from .ideal import milnor_number
from .normal import splitting_residual


@dataclass(frozen=True)
class Classification:
    dynkin: DynkinType
    rank: int
    residual: TruncSeries
    milnor: int


def _cubic_coeffs(c3: TruncSeries) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    return tuple(c3.coeff((3 - k, k)) for k in range(4))


def binary_cubic_discriminant(a, b, c, d) -> Scalar:
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _linear_to(R: TruncSeries, rows) -> TruncSeries:
    """Rewrite ``R(u, v)`` in new coordinates where ``(U, V) = rows * (u, v)``."""
    from .linalg import invert_matrix

    inv = invert_matrix(rows)
    return CoordChange.linear(R.vars, inv, precision=R.precision).apply(R)


def _split_u(R: TruncSeries, top: int):
    """``R = u^top * A + sum_{j < top} u^j * parts[j](v)``."""
    parts = R.split_by(0)
    high = TruncSeries.zero(R.vars, R.precision)
    low = {}
    for j, p in parts.items():
        if j >= top:
            high = high + p * TruncSeries.monomial((j - top, 0), R.vars, 1, R.precision)
        else:
            low[j] = p
    for j in range(top):
        low.setdefault(j, TruncSeries.zero(R.vars, R.precision))
    return high, low


def _d_index(R: TruncSeries, max_rounds: int) -> int:
    """``R = u^2 v + ...``: return ``k`` with ``R ~ u^2 v + v^(k-1)``."""
    N = R.precision
    u = TruncSeries.var(R.vars[0], R.vars, N)
    v = TruncSeries.var(R.vars[1], R.vars, N)
    for _ in range(max_rounds):
        A, low = _split_u(R, 2)
        if A == v:
            break
        # v' = A(u, v) absorbs the u^2 terms; substitute v = inverse
        change = CoordChange(R.vars, [u, A]).inverse(N)
        R = change.apply(R)
    else:
        raise UnclassifiedError("D-type normalization did not stabilize")
    B, C = low[1], low[0]
    # u^2 v + u B + C = v (u + B/2v)^2 + C - B^2/4v
    B2 = (B * B).truncate(N)
    if B2.is_zero():
        P = C
    else:
        P = C - B2.divide_by_monomial((0, 1)).scale(Fraction(1, 4))
    order = P.order()
    if order == INFINITY:
        raise UnclassifiedError("D-type residual vanishes to the working precision")
    return order + 1


def _e_index(R: TruncSeries, lam: Scalar, max_rounds: int) -> int:
    """``R = lam u^3 + ...`` with no other cubic terms: return 6, 7 or 8."""
    # E6, E7 and E8 are told apart by the 5-jet, so a little margin suffices
    N = min(R.precision, 6)
    R = R.truncate(N)
    u = TruncSeries.var(R.vars[0], R.vars, N)
    v = TruncSeries.var(R.vars[1], R.vars, N)
    for _ in range(max_rounds):
        W, low = _split_u(R, 3)
        if W == TruncSeries.const(lam, R.vars, N):
            break
        root = nth_root_of_unit(W.scale(1 / lam), 3, 1, 1)
        change = CoordChange(R.vars, [u * root, v]).inverse(N)
        R = change.apply(R)
    else:
        raise UnclassifiedError("E-type normalization did not stabilize")
    # remove the u^2 term: u -> u - P/(3 lam)
    P = low[2]
    if not P.is_zero():
        R = compose(R, [u - P.scale(1 / (3 * lam)), v])
    _, low = _split_u(R, 3)
    if not low[2].is_zero():
        raise AssertionError("Tschirnhaus step left a u^2 term")
    Q, Rt = low[1], low[0]
    if Rt.order() == 4:
        return 6
    if Q.order() == 3:
        return 7
    if Rt.order() == 5:
        return 8
    raise UnclassifiedError("cubic with a triple root but not of type E6, E7 or E8")


def _rank_one(R: TruncSeries, max_index: int) -> DynkinType:
    N = R.precision
    if R.order() < 3:
        raise AssertionError("residual should start in degree 3")
    c3 = R.homogeneous_part(3)
    if c3.is_zero():
        raise UnclassifiedError("corank 2 germ with vanishing cubic part is not ADE")
    a, b, c, d = _cubic_coeffs(c3)
    if binary_cubic_discriminant(a, b, c, d) != 0:
        return DynkinType("D", 4)
    # Hessian (up to a constant): (6a u + 2b v)(2c u + 6d v) - (2b u + 2c v)^2
    p = 12 * a * c - 4 * b * b
    q = 36 * a * d - 4 * b * c
    r = 12 * b * d - 4 * c * c
    rounds = N + 2
    if p == 0 and q == 0 and r == 0:
        # triple root: c3 = lam * l^3
        if a != 0:
            rows = [[Fraction(1), b / (3 * a)], [Fraction(0), Fraction(1)]]
            lam = a
        else:
            rows = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
            lam = d
        k = _e_index(_linear_to(R, rows), lam, rounds)
        return DynkinType("E", k)
    # double root l1 (H is a multiple of l1^2); c3 = l1^2 * l2
    l1 = (2 * p, q) if p != 0 else (q, 2 * r)
    l1 = _primitive(l1)
    l2 = _divide_cubic(c3, l1)
    rows = [list(l1), list(l2)]
    k = _d_index(_linear_to(R, rows), rounds)
    if k < 5:
        raise AssertionError("double-root cubic gave D index below 5")
    return DynkinType("D", k)


def _primitive(l):
    a, b = l
    if a != 0:
        return (Fraction(1), b / a)
    return (Fraction(0), Fraction(1))


def _divide_cubic(c3: TruncSeries, l1):
    """Linear ``l2`` with ``c3 = l1^2 * l2`` (``l1`` normalized)."""
    vars = c3.vars
    L = TruncSeries(vars, {(1, 0): l1[0], (0, 1): l1[1]}, None)
    sq = L * L
    # match coefficients: solve for l2 = alpha u + beta v
    from .linalg import solve

    cols = [sq * TruncSeries.monomial((1, 0), vars), sq * TruncSeries.monomial((0, 1), vars)]
    mons = [(3 - k, k) for k in range(4)]
    A = [[col.coeff(m) for col in cols] for m in mons]
    x = solve(A, [c3.coeff(m) for m in mons])
    if x is None:
        raise AssertionError("cubic is not divisible by the square of its double root")
    return tuple(x)


def classify(f: TruncSeries, max_index: int) -> Classification:
    if f.nvars != 3:
        raise PreconditionError("expected a germ in three variables")
    if f.precision is None:
        raise PreconditionError("classification needs a truncation degree")
    if f.precision < max_index + 2:
        raise PreconditionError(f"precision must be at least max_index + 2 = {max_index + 2}")
    if f.constant_term() != 0:
        raise PreconditionError("germ must vanish at the origin")
    order = f.order()
    if order < 2:
        raise UnclassifiedError("smooth point, not a singularity")
    if order > 2:
        raise UnclassifiedError("order at least 3: not a rational double point")
    rank, R, _ = splitting_residual(f)
    if rank == 3:
        dyn = DynkinType("A", 1)
    elif rank == 2:
        o = R.order()
        if o == INFINITY or o - 1 > max_index:
            raise UnclassifiedError(f"A_k with k > {max_index} or not isolated")
        dyn = DynkinType("A", o - 1)
    else:
        dyn = _rank_one(R, max_index)
    if dyn.rank > max_index:
        raise UnclassifiedError(f"{dyn} exceeds max_index {max_index}")
    # a Milnor number mu forces m^mu into the Jacobian ideal, so degree mu + 2 certifies it
    g = R if rank < 3 else f
    mu = milnor_number(g, min(g.precision - 1, dyn.rank + 2))
    if mu is None or mu != dyn.rank:
        raise UnclassifiedError(
            f"normal form suggests {dyn} but the Milnor number is {mu}")
    return Classification(dyn, rank, R, mu)


def ade_classify(f: TruncSeries, max_index: int) -> DynkinType:
    """The ADE type of the germ ``f = 0`` at the origin; never guesses."""
    return classify(f, max_index).dynkin
