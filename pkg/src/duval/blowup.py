"""Blow-ups of surface germs in affine 3-space and curve-class tracking.

Charts follow one convention: chart ``Z`` is ``(x, y, z) -> (X z, Y z, z)``,
chart ``Y`` is ``(X y, y, Z y)`` and chart ``X`` is ``(x, Y x, Z x)``.  The
exceptional divisor of a chart is the plane where its chart variable
vanishes.

:func:`track_class` follows a smooth curve through successive blow-ups at
the singular point its strict transform passes through, until that point
is smooth, and converts the history into the index of the exceptional curve
the curve meets in the minimal resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .errors import BookkeepingError, PreconditionError, UnclassifiedError
from .lattice import ClassElement, DynkinType, class_of, ej_class, multiplicity, unit_vector
from .scalar import Scalar, from_sympy, to_sympy
from .series.classify import ade_classify
from .series.core import INFINITY, TruncSeries, compose

CHARTS = ("X", "Y", "Z")
CHART_INDEX = {"X": 0, "Y": 1, "Z": 2}
CHART_VARS = {"X": ("x", "Y", "Z"), "Y": ("X", "y", "Z"), "Z": ("X", "Y", "z")}
XYZ = ("x", "y", "z")
MAX_DEPTH = 64
CURVE_PRECISION = 24


@dataclass(frozen=True)
class SurfaceGerm:
    """A surface ``f = 0`` in affine 3-space, studied near the origin.

    Strict transforms may miss their chart's origin (as for the cone after
    one blow-up), so ``f(0) = 0`` is checked by the operations that need it.
    """

    f: TruncSeries
    detected_type: Optional[DynkinType] = None

    def __post_init__(self):
        if self.f.nvars != 3:
            raise PreconditionError("a surface germ needs three variables")

    @property
    def vars(self):
        return self.f.vars

    def multiplicity(self):
        return self.f.order()


@dataclass(frozen=True)
class CurveParam:
    """``t -> (p1(t), p2(t), p3(t))``, smooth at ``t = 0``."""

    p: Tuple[TruncSeries, TruncSeries, TruncSeries]

    def __post_init__(self):
        if len(self.p) != 3:
            raise PreconditionError("a curve needs three components")
        for c in self.p:
            if c.vars != ("t",):
                raise PreconditionError("curve components must be series in t")
            if c.constant_term() != 0:
                raise PreconditionError("the curve must pass through the origin")
        if min(c.order() for c in self.p) != 1:
            raise PreconditionError("the curve must be smooth at t = 0")

    @property
    def precision(self):
        from .series.core import min_precision

        return min_precision(*(c.precision for c in self.p))

    def orders(self):
        return tuple(c.order() for c in self.p)

    def lies_on(self, f: TruncSeries) -> bool:
        return compose(f.with_precision(None) if f.precision is None else f,
                       list(self.p)).is_zero()

    def __str__(self):
        return ", ".join(str(c) for c in self.p)


def _check_chart(chart: str) -> int:
    if chart not in CHART_INDEX:
        raise PreconditionError(f"unknown chart {chart!r}; expected X, Y or Z")
    return CHART_INDEX[chart]


def chart_images(chart: str, vars=None) -> List[TruncSeries]:
    c = _check_chart(chart)
    new = vars or CHART_VARS[chart]
    images = []
    for k in range(3):
        v = TruncSeries.var(new[k], new)
        images.append(v if k == c else v * TruncSeries.var(new[c], new))
    return images


def total_transform(S: SurfaceGerm, chart: str) -> TruncSeries:
    return compose(S.f, chart_images(chart))


def blow_up_surface(S: SurfaceGerm, chart: str) -> SurfaceGerm:
    """Strict transform ``f(substitution) / (chart variable)^m``."""
    c = _check_chart(chart)
    m = S.multiplicity()
    if m == 0:
        raise PreconditionError("the germ does not pass through the origin")
    if m < 2:
        raise PreconditionError("the germ is smooth at the origin")
    total = total_transform(S, chart)
    exp = tuple(m if k == c else 0 for k in range(3))
    try:
        strict = total.divide_by_monomial(exp)
    except ArithmeticError as exc:
        raise AssertionError("total transform not divisible by the multiplicity power") from exc
    return SurfaceGerm(strict)


def _reparametrize(curve: CurveParam, k: int) -> CurveParam:
    """Change the parameter so that component ``k`` becomes exactly ``t``."""
    p = curve.p[k]
    lin = p.coeff((1,))
    if p == TruncSeries.var("t", ("t",)).scale(lin) or (
            p.precision is not None and p.truncate(p.precision) == TruncSeries.var(
                "t", ("t",), p.precision).scale(lin)):
        tau = TruncSeries.var("t", ("t",), p.precision).scale(1 / lin)
    else:
        from .series.core import CoordChange

        N = curve.precision or CURVE_PRECISION
        tau = CoordChange(("t",), [p.with_precision(N)]).inverse(N).images[0]
    return CurveParam(tuple(compose(c, [tau]) for c in curve.p))


def compatible_charts(curve: CurveParam) -> List[str]:
    orders = curve.orders()
    low = min(orders)
    return [ch for ch in ("Z", "Y", "X") if orders[CHART_INDEX[ch]] == low]


def blow_up_curve(curve: CurveParam, chart: str) -> CurveParam:
    c = _check_chart(chart)
    if chart not in compatible_charts(curve):
        raise PreconditionError(f"chart {chart} is not compatible with the curve")
    curve = _reparametrize(curve, c)
    comps = []
    for k, comp in enumerate(curve.p):
        comps.append(comp if k == c else comp.divide_by_monomial((1,)))
    # the new curve starts on the exceptional plane, not necessarily at the origin
    return _Shifted(tuple(comps))


class _Shifted(CurveParam):
    """A curve in chart coordinates; may start away from the origin."""

    def __post_init__(self):
        pass

    def start(self) -> Tuple[Scalar, ...]:
        return tuple(c.constant_term() for c in self.p)


def translate_surface(f: TruncSeries, point: Sequence[Scalar], vars=XYZ) -> TruncSeries:
    images = [TruncSeries.var(v, vars) + pt for v, pt in zip(vars, point)]
    return compose(f.rename(vars), images)


def translate_curve(curve: CurveParam, point: Sequence[Scalar]) -> CurveParam:
    return CurveParam(tuple(c - pt for c, pt in zip(curve.p, point)))


# -- singular points via the sympy Groebner basis ---------------------------

def _to_sympy_expr(f: TruncSeries, syms):
    import sympy

    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        term = to_sympy(c)
        for s, a in zip(syms, e):
            term = term * s ** a
        expr += term
    return expr


@dataclass(frozen=True)
class SingularPoint:
    point: Tuple[Scalar, Scalar, Scalar]
    dynkin: DynkinType


def singular_points_on_exceptional(S: SurfaceGerm, chart: str,
                                   max_index: int = 12) -> List[SingularPoint]:
    """Singular points of a strict transform on its chart's exceptional plane."""
    import sympy

    c = _check_chart(chart)
    f = S.f
    free = [k for k in range(3) if k != c]
    syms = sympy.symbols(" ".join(f"w{k}" for k in range(3)))
    expr = _to_sympy_expr(f, syms)
    eqs = [expr] + [sympy.diff(expr, s) for s in syms]
    eqs = [sympy.expand(e.subs(syms[c], 0)) for e in eqs]
    eqs = [e for e in eqs if e != 0]
    gens = [syms[k] for k in free]
    if not eqs:
        raise UnclassifiedError("strict transform is singular along the whole exceptional line")
    G = sympy.groebner(eqs, *gens, order="lex", domain=sympy.QQ_I)
    if list(G.exprs) == [1]:
        return []
    if not G.is_zero_dimensional:
        raise UnclassifiedError("singular locus meets the exceptional line in a curve")
    points = []
    for sol in sympy.solve_poly_system(list(G.exprs), *gens):
        coords = [Fraction(0)] * 3
        for k, v in zip(free, sol):
            coords[k] = from_sympy(v)
        points.append(tuple(coords))
    out = []
    for pt in sorted(points, key=lambda p: tuple((str(x)) for x in p)):
        g = translate_surface(f, pt).with_precision(max_index + 2)
        out.append(SingularPoint(pt, ade_classify(g, max_index)))
    return out


# -- tracking ----------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    dynkin: DynkinType
    chart: str
    strict_transform: TruncSeries
    point: Tuple[Scalar, Scalar, Scalar]
    detected: str

    def as_dict(self):
        from .scalar import scalar_to_json

        return {
            "type": str(self.dynkin),
            "chart": self.chart,
            "strict_transform": str(self.strict_transform),
            "point": [scalar_to_json(v) for v in self.point],
            "detected": self.detected,
        }


@dataclass(frozen=True)
class TrackResult:
    dynkin: DynkinType
    indices: FrozenSet[int]
    trace: Tuple[TraceStep, ...]

    @property
    def is_pair(self) -> bool:
        return len(self.indices) > 1

    @property
    def classes(self) -> List[ClassElement]:
        return [ej_class(self.dynkin, j) for j in sorted(self.indices)]

    @property
    def order(self) -> int:
        orders = {c.order() for c in self.classes}
        if len(orders) != 1:
            raise BookkeepingError("members of the pair have different orders")
        return orders.pop()

    def profile(self, j: Optional[int] = None):
        """Intersection profile of the curve with the exceptional curves."""
        j = min(self.indices) if j is None else j
        return unit_vector(self.dynkin.rank, j)

    def multiplicities(self):
        return [multiplicity(self.dynkin, self.profile(j)) for j in sorted(self.indices)]


def _mirror_A(n: int, idx) -> FrozenSet[int]:
    return frozenset(idx) | frozenset(n + 1 - j for j in idx)


def _direction(chart: str, point) -> Tuple[Scalar, Scalar, Scalar]:
    c = CHART_INDEX[chart]
    return tuple(Fraction(1) if k == c else point[k] for k in range(3))


def _same_direction(u, v) -> bool:
    # projective equality of two nonzero vectors
    return all(u[i] * v[j] == u[j] * v[i] for i in range(3) for j in range(3))


def _prev_direction(f: TruncSeries, prev_plane: Optional[int]):
    """Tangent direction of the previous exceptional curve at a D4 point."""
    if prev_plane is None:
        return (Fraction(0), Fraction(1), Fraction(0))
    q = f.homogeneous_part(2)
    from .series.normal import quadratic_matrix

    Q = quadratic_matrix(q)
    row = next((r for r in Q if any(v != 0 for v in r)), None)
    if row is None:
        return None
    # the tangent cone is a double plane l = 0 with l proportional to row
    e = [Fraction(int(k == prev_plane)) for k in range(3)]
    d = (row[1] * e[2] - row[2] * e[1], row[2] * e[0] - row[0] * e[2],
         row[0] * e[1] - row[1] * e[0])
    return d if any(v != 0 for v in d) else None


def _lift(parent: DynkinType, child: Optional[DynkinType], sub: FrozenSet[int],
          at_prev: bool) -> FrozenSet[int]:
    """Translate indices on a child singularity (or a smooth point) to the parent."""
    fam, n = parent.family, parent.rank
    if child is None:
        if fam == "A":
            return frozenset({1, n})
        raise BookkeepingError(
            f"curve meets the first exceptional curve of {parent} at a smooth point; "
            "that curve is not admissible")
    if fam == "A":
        if child == DynkinType("A", n - 2):
            return _mirror_A(n, {j + 1 for j in sub})
    elif fam == "D":
        if n >= 5 and child == DynkinType("A", 1):
            return frozenset({1})
        if n >= 6 and child == DynkinType("D", n - 2):
            return frozenset(j + 2 for j in sub)
        if n == 5 and child == DynkinType("A", 3):
            out = set()
            for j in sub:
                out |= {4, 5} if j in (1, 3) else {3}
            return frozenset(out)
        if n == 4 and child == DynkinType("A", 1):
            return frozenset({1}) if at_prev else frozenset({3, 4})
    elif fam == "E":
        if n == 6 and child == DynkinType("A", 5):
            image = {1: 1, 2: 2, 3: 3, 4: 5, 5: 6}
            out = {image[j] for j in sub}
            swap = {1: 6, 6: 1, 2: 5, 5: 2, 3: 3}
            return frozenset(out | {swap[j] for j in out})
        if n == 7 and child == DynkinType("D", 6):
            out = set()
            for j in sub:
                out |= {5, 6} if j in (5, 6) else {j}
            return frozenset(out)
        if n == 8 and child == DynkinType("E", 7):
            return frozenset(j + 1 for j in sub)
    raise BookkeepingError(f"no rule for a {child} point after blowing up {parent}")


def _resolve(f: TruncSeries, curve: CurveParam, dyn: DynkinType, prev_plane: Optional[int],
             depth: int, trace: List[TraceStep], max_depth: int) -> FrozenSet[int]:
    if depth > max_depth:
        raise BookkeepingError(f"recursion deeper than {max_depth}")
    chart = compatible_charts(curve)[0]
    c = CHART_INDEX[chart]
    strict = blow_up_surface(SurfaceGerm(f), chart).f
    moved = blow_up_curve(curve, chart)
    point = moved.start()
    g = translate_surface(strict, point)
    new_curve = translate_curve(moved, point)
    if g.order() == 1:
        trace.append(TraceStep(dyn, chart, strict, point, "smooth"))
        return _lift(dyn, None, frozenset(), False)
    if g.order() == 0:
        raise AssertionError("translated strict transform does not pass through the point")
    child = ade_classify(g.with_precision(dyn.rank + 4), dyn.rank)
    if child.rank >= dyn.rank:
        raise BookkeepingError(f"{child} after blowing up {dyn}: rank did not drop")
    trace.append(TraceStep(dyn, chart, strict, point, str(child)))
    at_prev = False
    if dyn == DynkinType("D", 4):
        d_prev = _prev_direction(f, prev_plane)
        at_prev = d_prev is not None and _same_direction(_direction(chart, point), d_prev)
    sub = _resolve(g, new_curve, child, c, depth + 1, trace, max_depth)
    return _lift(dyn, child, sub, at_prev)


def track_class(S: SurfaceGerm, C: CurveParam, max_index: int = 12,
                max_depth: int = MAX_DEPTH) -> TrackResult:
    """The exceptional curve(s) met by ``C`` and hence its class in the class group.

    Returns a single index, or a pair of indices exchanged by a symmetry of
    the diagram when the blow-up history cannot tell them apart.
    """
    f = S.f.rename(XYZ)
    if not C.lies_on(f):
        raise PreconditionError("the curve does not lie on the surface")
    if f.order() < 2:
        raise PreconditionError("the surface is smooth at the origin")
    dyn = S.detected_type or ade_classify(f.with_precision(max_index + 2), max_index)
    trace: List[TraceStep] = []
    top_d4 = dyn == DynkinType("D", 4)
    indices = _resolve(f, C, dyn, None, 0, trace, max_depth)
    if top_d4 and not _has_standard_d4_direction(f):
        indices = frozenset({1, 3, 4}) if indices & {1, 3, 4} else indices
    return TrackResult(dyn, indices, tuple(trace))


def _has_standard_d4_direction(f: TruncSeries) -> bool:
    """Whether one of the three A1 points of a top-level D4 lies over ``[0:1:0]``."""
    try:
        pts = singular_points_on_exceptional(blow_up_surface(SurfaceGerm(f), "Y"), "Y", 4)
    except UnclassifiedError:
        return False
    return any(all(v == 0 for v in p.point) for p in pts)


def curve_from_text(texts: Sequence[str], precision=None) -> CurveParam:
    from .expr import parse_expr

    return CurveParam(tuple(parse_expr(t, ("t",), precision) for t in texts))
