from fractions import Fraction

import pytest

from conftest import VARS
from duval.blowup import (
    CurveParam,
    SurfaceGerm,
    blow_up_curve,
    blow_up_surface,
    chart_images,
    compatible_charts,
    curve_from_text,
    singular_points_on_exceptional,
    total_transform,
    track_class,
)
from duval.errors import BookkeepingError, PreconditionError
from duval.expr import parse_expr
from duval.lattice import DynkinType, ej_class
from duval.series.core import compose


def S(text):
    return SurfaceGerm(parse_expr(text, VARS))


def C(*texts):
    return curve_from_text(texts)


def test_cone_chart_z():
    T = blow_up_surface(S("x^2+y^2+z^2"), "Z")
    assert str(T.f) == "1 + X^2 + Y^2"
    assert singular_points_on_exceptional(T, "Z") == []


@pytest.mark.parametrize("text", ["x^2+y^2*z-z^5", "x*y-z^4", "x^2+y^3+z^4"])
@pytest.mark.parametrize("chart", ["X", "Y", "Z"])
def test_total_equals_strict_times_power(text, chart):
    s = S(text)
    total = total_transform(s, chart)
    strict = blow_up_surface(s, chart).f
    c = "XYZ".index(chart)
    var = chart_images(chart)[c]
    assert total == strict * var ** s.multiplicity()


def test_chart_symmetry():
    # swapping x and y exchanges the X and Y charts
    a = blow_up_surface(S("x^2 + 2*y^2 + z^3 + x*y*z"), "X").f
    b = blow_up_surface(S("y^2 + 2*x^2 + z^3 + x*y*z"), "Y").f
    assert {(e[1], e[0], e[2]): c for e, c in a.terms.items()} == dict(b.terms)


def test_singular_points_after_one_blowup():
    pts = singular_points_on_exceptional(blow_up_surface(S("x^2+y^2*z-z^5"), "Z"), "Z")
    assert [(p.point, p.dynkin) for p in pts] == [((0, 0, 0), DynkinType("D", 4))]
    pts = singular_points_on_exceptional(blow_up_surface(S("x^2+y^2*z-z^5"), "Y"), "Y")
    assert [p.dynkin for p in pts] == [DynkinType("A", 1)]
    pts = singular_points_on_exceptional(blow_up_surface(S("x^2+y^2*z-2*z^4"), "Z"), "Z")
    assert [(p.point, p.dynkin) for p in pts] == [((0, 0, 0), DynkinType("A", 3))]


def test_a_n_two_points():
    pts = singular_points_on_exceptional(blow_up_surface(S("x*y-z^6"), "Z"), "Z")
    assert [p.dynkin for p in pts] == [DynkinType("A", 3)]


def test_blow_up_curve():
    curve = C("0", "t^2", "t")
    assert compatible_charts(curve) == ["Z"]
    lifted = blow_up_curve(curve, "Z")
    assert [str(c) for c in lifted.p] == ["0", "t", "t"]
    with pytest.raises(PreconditionError):
        blow_up_curve(curve, "Y")


def test_lifted_curve_lies_on_strict_transform():
    s, curve = S("x^2+y^2*z-z^7"), C("0", "t^3", "t")
    for chart in compatible_charts(curve):
        assert blow_up_curve(curve, chart).lies_on(blow_up_surface(s, chart).f)


@pytest.mark.parametrize("n", range(4, 11))
def test_dn_line(n):
    r = track_class(S(f"x^2+y^2*z-z^{n-1}"), C("0", "t", "0"))
    assert r.indices == {1}
    assert r.order == 2


@pytest.mark.parametrize("n", [6, 8, 10])
def test_dn_pair(n):
    r = track_class(S(f"x^2+y^2*z-z^{n-1}"), C("0", f"t^{(n - 2) // 2}", "t"))
    assert r.indices == {n - 1, n}
    assert r.is_pair
    assert [c.order() for c in r.classes] == [2, 2]


def test_d5_trace():
    r = track_class(S("x^2+y^2*z-z^4"), C("t^2", "0", "t"))
    assert r.indices == {4, 5}
    assert r.order == 4
    assert r.trace[0].dynkin == DynkinType("D", 5)
    # the curve passes through the A3 point sitting at the chart origin
    assert r.trace[0].detected == "A3"
    assert r.trace[0].point == (0, 0, 0)
    assert r.trace[1].dynkin == DynkinType("A", 3)


def test_e6_e7():
    r = track_class(S("x^2+y^3+z^4"), C("i*t^2", "0", "t"))
    assert r.indices == {1, 6} and r.order == 3
    r = track_class(S("x^2+y^3+y*z^3"), C("0", "0", "t"))
    assert r.indices == {1} and r.order == 2


@pytest.mark.parametrize("n", range(1, 9))
def test_a_n_axis(n):
    r = track_class(S(f"x*y-z^{n+1}"), C("0", "t", "0"))
    assert r.indices == {1, n}
    assert r.order == n + 1
    assert all(ej_class(r.dynkin, j).order() == n + 1 for j in r.indices)


def test_multiplicity_of_tracked_curves():
    r = track_class(S("x^2+y^3+z^4"), C("i*t^2", "0", "t"))
    assert r.multiplicities() == [1, 1]


def test_curve_not_on_surface():
    with pytest.raises(PreconditionError):
        track_class(S("x^2+y^2*z+z^5"), C("0", "t^2", "t"))


def test_curve_must_be_smooth():
    with pytest.raises(PreconditionError):
        C("t^2", "t^3", "0")


def test_e8_has_no_curve_class():
    # E8 has trivial class group and a smooth curve lands on a non-admissible end
    with pytest.raises((BookkeepingError, PreconditionError)):
        track_class(S("x^2+y^3+z^5"), C("t^3", "-t^2", "0"))


def test_trace_dicts():
    r = track_class(S("x*y-z^3"), C("0", "t", "0"))
    d = r.trace[0].as_dict()
    assert set(d) == {"type", "chart", "strict_transform", "point", "detected"}
    assert d["type"] == "A2"


@pytest.mark.parametrize("n", [4, 5, 7])
def test_dn_chart_y_strict_transform(n):
    T = blow_up_surface(S(f"x^2+y^2*z+z^{n-1}"), "Y")
    expected = parse_expr(f"X^2 + y*Z + y^{n-3}*Z^{n-1}", ("X", "y", "Z"))
    assert T.f == expected


def test_dn_chart_z_keeps_d_type():
    pts = singular_points_on_exceptional(blow_up_surface(S("x^2+y^2*z+z^7"), "Z"), "Z")
    assert [p.dynkin for p in pts] == [DynkinType("D", 6)]
