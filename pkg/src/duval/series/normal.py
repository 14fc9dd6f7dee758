"""Normal forms: the ``y^a z + z^s - b y^t`` reduction and the splitting lemma."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import FieldError, PreconditionError
from ..scalar import Scalar, as_scalar, sqrt_exact
from .core import CoordChange, TruncSeries, compose, min_precision
from .hensel import nth_root_of_unit, reciprocal
from .linalg import solve


# -- y^a z + z^s - b y^t ------------------------------------------------------

@dataclass(frozen=True)
class DnEnStep:
    """One round of the substitution ``z -> z - b y^(k-a)``, ``y -> w y``."""

    k: int
    b: TruncSeries
    v: TruncSeries
    w: TruncSeries


@dataclass(frozen=True)
class WeightedStep:
    """One round of ``y -> y - P``, ``z -> z - Q`` removing weighted degree ``d``."""

    d: int
    p: TruncSeries
    q: TruncSeries


@dataclass(frozen=True)
class DnEnNormalForm:
    """``forward`` writes ``(Y, Z)`` in ``(y, z)``; ``inverse`` writes ``(y, z)`` in ``(Y, Z)``."""

    a: int
    s: int
    t: int
    method: str
    precision: int
    forward: CoordChange
    inverse: CoordChange
    certificate: Tuple = field(default_factory=tuple)


def dnen_equation(a, s, t, b, vars=("y", "z"), precision=None) -> TruncSeries:
    y = TruncSeries.var(vars[0], vars, precision)
    z = TruncSeries.var(vars[1], vars, precision)
    return y ** a * z + z ** s - b * y ** t


def dnen_normalize(a: int, s: int, t: int, b, precision: int = 12, method: str = "auto",
                   vars: Sequence[str] = ("y", "z"),
                   target: Sequence[str] = ("Y", "Z")) -> DnEnNormalForm:
    """Coordinates ``Y, Z`` with ``y^a z + z^s - b y^t = Y^a Z + Z^s`` mod degree ``> N``.

    ``method="rounds"`` runs the substitution rounds ``z -> z - b y^(k-a)``,
    ``y -> w y`` (needs ``t >= 2a``); ``method="jacobian"`` removes the
    perturbation one weighted degree at a time by solving against the
    partials of ``Y^a Z + Z^s``; ``"auto"`` takes the first whenever it
    applies.  The result is checked by substitution before returning.
    """
    for name, val in (("a", a), ("s", s), ("t", t)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise PreconditionError(f"{name} must be an integer")
    if not (s > a > 1):
        raise PreconditionError("need s > a > 1")
    if not t > a + 1:
        raise PreconditionError("need t > a + 1")
    if precision is None or precision < 1:
        raise PreconditionError("precision must be a positive integer")
    vars, target = tuple(vars), tuple(target)
    if not isinstance(b, TruncSeries):
        b = TruncSeries.const(b, vars, precision)
    if b.vars != vars:
        raise PreconditionError(f"b must be a series in {vars}")
    b = b.with_precision(min_precision(b.precision, precision))
    if b.constant_term() == 0:
        raise PreconditionError("b must be a unit")
    N = b.precision
    if method == "auto":
        method = "rounds" if t >= 2 * a else "jacobian"
    if method == "rounds":
        if t < 2 * a:
            raise PreconditionError("the substitution rounds need t >= 2a")
        forward, steps = _dnen_rounds(a, s, t, b, N, vars, target)
        inverse = forward.inverse(N)
    elif method == "jacobian":
        inverse, steps = _dnen_weighted(a, s, t, b, N, vars, target)
        forward = inverse.inverse(N)
    else:
        raise PreconditionError(f"unknown method {method!r}")
    result = DnEnNormalForm(a, s, t, method, N, forward, inverse, tuple(steps))
    _check_dnen(result, b)
    return result


def _dnen_rounds(a, s, t, b, N, vars, target):
    y = TruncSeries.var(vars[0], vars, N)
    z = TruncSeries.var(vars[1], vars, N)
    k = t
    steps = []
    # invariant: f = y^a z + z^s - b y^k, everything a series in the original (y, z)
    while k <= N:
        z_next = z - b * y ** (k - a)
        v = TruncSeries.const(1, vars, N)
        for j in range(1, s):
            v = v + (b ** j * z_next ** (s - j - 1) * y ** (j * (k - a) - a)).scale(comb(s, j))
        w = nth_root_of_unit(v, a, 1, 1)
        steps.append(DnEnStep(k, b, v, w))
        b = -(b ** s) * reciprocal(w ** (s * (k - a)))
        y = w * y
        z = z_next
        k = s * (k - a)
    forward = CoordChange(target, [y, z])
    return forward, steps


def _weighted_parts(f: TruncSeries, wy: int, wz: int):
    parts: Dict[int, Dict] = {}
    for e, c in f.terms.items():
        parts.setdefault(wy * e[0] + wz * e[1], {})[e] = c
    return parts


def _dnen_weighted(a, s, t, b, N, vars, target):
    g0 = gcd(s - 1, a)
    wy, wz = (s - 1) // g0, a // g0
    D = wy * a + wz
    f = dnen_equation(a, s, t, b, vars, N)
    Y = TruncSeries.var(target[0], target, N)
    Z = TruncSeries.var(target[1], target, N)
    f0 = TruncSeries.var(vars[0], vars) ** a * TruncSeries.var(vars[1], vars) \
        + TruncSeries.var(vars[1], vars) ** s
    dy, dz = f0.derivative(0), f0.derivative(1)
    change = CoordChange.identity(vars, N)
    current = f
    steps = []
    for _ in range(max(wy, wz) * N + 2):
        h = current - f0
        if h.is_zero():
            break
        parts = _weighted_parts(h, wy, wz)
        d = min(parts)
        if d <= D:
            raise PreconditionError("perturbation is not above the weighted degree of Y^a Z + Z^s")
        p, q = _solve_weighted(parts[d], d, D, wy, wz, dy, dz, vars, N)
        sigma = CoordChange(vars, [TruncSeries.var(vars[0], vars, N) - p,
                                   TruncSeries.var(vars[1], vars, N) - q], check=False)
        current = sigma.apply(current)
        change = change.then(sigma)
        steps.append(WeightedStep(d, p, q))
    else:
        raise AssertionError("weighted normalization did not terminate")
    inverse = CoordChange(vars, [g.rename(target) for g in change.images])
    return inverse, steps


def _solve_weighted(hd, d, D, wy, wz, dy, dz, vars, N):
    """Weighted-homogeneous ``P, Q`` with ``hd = dy * P + dz * Q`` through degree ``N``."""
    def monos(deg):
        out = []
        for i in range(deg // wy + 1):
            rest = deg - wy * i
            if rest >= 0 and rest % wz == 0:
                out.append((i, rest // wz))
        return out

    # dy has weighted degree D - wy, so P has weighted degree d - D + wy
    unknowns = [(0, m) for m in monos(d - D + wy)] + [(1, m) for m in monos(d - D + wz)]
    columns = []
    for which, m in unknowns:
        prod = (dy if which == 0 else dz) * TruncSeries(vars, {m: 1}, N)
        columns.append(prod)
    targets = sorted({e for col in columns for e in col.terms} | set(hd))
    targets = [e for e in targets if sum(e) <= N]
    A = [[col.coeff(e) for col in columns] for e in targets]
    rhs = [hd.get(e, Fraction(0)) for e in targets]
    x = solve(A, rhs) if targets else [Fraction(0)] * len(unknowns)
    if x is None:
        raise PreconditionError(f"weighted degree {d} part is not in the Jacobian ideal")
    p = {m: c for (which, m), c in zip(unknowns, x) if which == 0 and c != 0}
    q = {m: c for (which, m), c in zip(unknowns, x) if which == 1 and c != 0}
    return TruncSeries(vars, p, N), TruncSeries(vars, q, N)


def _check_dnen(result: DnEnNormalForm, b: TruncSeries):
    N, a, s = result.precision, result.a, result.s
    vars = b.vars
    target = result.forward.vars
    f = dnen_equation(a, s, result.t, b, vars, N)
    g = result.inverse.apply(f)
    Y = TruncSeries.var(target[0], target, N)
    Z = TruncSeries.var(target[1], target, N)
    if not (g - (Y ** a * Z + Z ** s)).is_zero():
        raise AssertionError("normal form failed the substitution check")
    for k, img in enumerate(result.forward.images):
        lin = img.truncate(1)
        if lin != TruncSeries.var(vars[k], vars, 1):
            raise AssertionError("coordinate change is not the identity modulo m^2")


# -- splitting lemma ---------------------------------------------------------

@dataclass(frozen=True)
class Splitting:
    """``f(change) = sum squares[k] * var_k^2 + residual(rest)``.

    ``change`` substitutes the old variables by series in the new ones (same
    names); the square variables come first in ``square_vars``.
    """

    change: Optional[CoordChange]
    residual: TruncSeries
    rank: int
    square_vars: Tuple[str, ...]
    squares: Tuple[Scalar, ...]


def quadratic_matrix(f: TruncSeries):
    n = f.nvars
    Q = [[Fraction(0)] * n for _ in range(n)]
    for e, c in f.terms.items():
        if sum(e) != 2:
            continue
        idx = [i for i in range(n) for _ in range(e[i])]
        i, j = idx
        if i == j:
            Q[i][i] = Q[i][i] + c
        else:
            Q[i][j] = Q[i][j] + c / 2
            Q[j][i] = Q[j][i] + c / 2
    return Q


def diagonalize_quadratic(Q):
    """Linear ``T`` (old = T * new) and pivots with ``T^t Q T`` diagonal.

    Returns ``(T, pivots, diag)`` where ``pivots`` lists the new coordinates
    carrying the nonzero diagonal entries ``diag``.
    """
    n = len(Q)
    A = [[as_scalar(v) for v in row] for row in Q]
    T = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def substitute(M):
        # old = M * new: A <- M^t A M, T <- T M
        nonlocal A, T
        A = [[sum((M[k][i] * A[k][l] * M[l][j] for k in range(n) for l in range(n)), Fraction(0))
              for j in range(n)] for i in range(n)]
        T = [[sum((T[i][k] * M[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
             for i in range(n)]

    pivots, diag = [], []
    remaining = list(range(n))
    while remaining:
        p = next((i for i in remaining if A[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in remaining for j in remaining if i < j and A[i][j] != 0),
                        None)
            if pair is None:
                break
            i, j = pair
            M = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
            M[j][i] = Fraction(1)  # x_j -> x_j + x_i puts 2 A_ij x_i^2 on the diagonal
            substitute(M)
            p = i
        # complete the square in x_p: x_p -> x_p - sum A_pj/A_pp x_j
        M = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        for j in remaining:
            if j != p:
                M[p][j] = -A[p][j] / A[p][p]
        substitute(M)
        pivots.append(p)
        diag.append(A[p][p])
        remaining.remove(p)
    return T, pivots, diag


def _critical_manifold(f: TruncSeries, sq: Sequence[int], rest: Sequence[int], coeffs, N):
    """Series ``phi(rest)`` solving ``df/dx_i = 0`` for the square variables."""
    rest_vars = tuple(f.vars[k] for k in rest)
    H = f - TruncSeries(f.vars, {tuple(2 if k == i else 0 for k in range(f.nvars)): c
                                 for i, c in zip(sq, coeffs)}, f.precision)
    grads = [H.derivative(i) for i in sq]
    images = [None] * f.nvars
    for k in rest:
        images[k] = TruncSeries.var(f.vars[k], rest_vars, N)
    phi = [TruncSeries.zero(rest_vars, N) for _ in sq]
    for _ in range(N + 2):
        for i, p in zip(sq, phi):
            images[i] = p
        new = [compose(gr, images).scale(-1 / (2 * c)) for gr, c in zip(grads, coeffs)]
        new = [g.truncate(N) for g in new]
        if new == phi:
            break
        phi = new
    for i, p in zip(sq, phi):
        images[i] = p
    return images


def splitting_residual(f: TruncSeries):
    """Fast path: ``(rank, residual, squares)`` without building the coordinate change."""
    lin, pivots, diag, rest_names = _linear_split(f)
    g = lin.apply(f)
    N = f.precision
    sq = [g.vars.index(f.vars[p]) for p in pivots]
    rest = [k for k in range(g.nvars) if k not in sq]
    images = _critical_manifold(g, sq, rest, diag, N)
    residual = compose(g, images) if rest else TruncSeries.zero((), N)
    return len(pivots), residual, tuple(diag)


def _linear_split(f: TruncSeries):
    if f.precision is None:
        raise PreconditionError("the splitting lemma needs a truncation degree")
    if f.order() < 2:
        raise PreconditionError("f must lie in m^2")
    Q = quadratic_matrix(f)
    if all(v == 0 for row in Q for v in row):
        raise PreconditionError("quadratic part is zero")
    T, pivots, diag = diagonalize_quadratic(Q)
    # normalize the squares when an exact root exists
    for idx, (p, c) in enumerate(zip(pivots, diag)):
        r = sqrt_exact(c)
        if r is not None:
            for row in T:
                row[p] = row[p] / r
            diag[idx] = Fraction(1)
    lin = CoordChange.linear(f.vars, T, precision=f.precision)
    rest_names = tuple(v for k, v in enumerate(f.vars) if k not in pivots)
    return lin, pivots, diag, rest_names


def splitting_lemma(f: TruncSeries, with_change: bool = True) -> Splitting:
    """Split off the nondegenerate quadratic part of ``f``.

    One square variable at a time: move to the critical point in that
    variable, then rescale it by the square root of the remaining unit.
    """
    lin, pivots, diag, rest_names = _linear_split(f)
    N = f.precision
    sq_names = tuple(f.vars[p] for p in pivots)
    if not with_change:
        rank, residual, squares = splitting_residual(f)
        return Splitting(None, residual.restrict(rest_names) if rest_names else residual,
                         rank, sq_names, squares)
    g = lin.apply(f)
    change = lin
    vars = f.vars
    for p, c in zip(pivots, diag):
        others = [k for k in range(len(vars)) if k != p]
        # critical point in x_p with all other variables as parameters
        images = _critical_manifold(g, [p], others, [c], N)
        shift_images = []
        for k in range(len(vars)):
            x = TruncSeries.var(vars[k], vars, N)
            shift_images.append(x + images[p].embed(vars) if k == p else x)
        shift = CoordChange(vars, shift_images, check=False)
        g = shift.apply(g)
        change = change.then(shift)
        base = g.set_zero(p)
        U = (g - base).divide_by_monomial(tuple(2 if k == p else 0 for k in range(len(vars))))
        unit = U.with_precision(N).scale(1 / c)
        root = nth_root_of_unit(unit, 2, 1, 1)
        scale_images = [TruncSeries.var(v, vars, N) for v in vars]
        scale_images[p] = scale_images[p] * root
        # new x_p = x_p * root; substitute old x_p by the inverse of that
        scaling = CoordChange(vars, scale_images).inverse(N)
        change = change.then(scaling)
        g = base + TruncSeries(vars, {tuple(2 if k == p else 0 for k in range(len(vars))): c}, N)
    residual = g
    for p in pivots:
        residual = residual.set_zero(p)
    residual = residual.restrict(rest_names) if rest_names else TruncSeries(
        (), {(): residual.constant_term()} if residual.constant_term() else {}, N)
    return Splitting(change, residual, len(pivots), sq_names, tuple(diag))
