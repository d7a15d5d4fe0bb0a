from __future__ import annotations

from fractions import Fraction

from realocus.coding import n_cycle
from realocus.plot import cycle_arcs, render_svg
from realocus.qform import Form


def test_arcs_follow_the_cycle():
    c = n_cycle(13, Form(-13, 108, -213))
    arcs = cycle_arcs(c)
    assert [a.form for a in arcs] == list(c.forms)
    for a in arcs:
        for x, y2 in (a.start, a.end):
            assert abs(x) <= Fraction(13, 2) and y2 > 0
            # both ends lie on the geodesic
            assert (x - a.center) ** 2 + y2 == a.radius2


def test_arc_direction():
    c = n_cycle(5, Form(1, -1, -3))
    for a in cycle_arcs(c):
        assert (a.end[0] > a.start[0]) == (a.form.a > 0)


def test_svg_marks_elliptic_points():
    svg = render_svg(n_cycle(5, Form(1, -1, -3)))
    # k^2 = -1 mod 5 for k = -2, 2
    assert svg.count("<circle") == 2 and "<title>2+i</title>" in svg
    assert render_svg(n_cycle(5, Form(1, -1, -3))) == svg


def test_to_dict_rounding():
    a = cycle_arcs(n_cycle(5, Form(1, -1, -3)))[0]
    d = a.to_dict()
    assert d["form"] == [1, -1, -3] and d["tag"] == "4"
    assert all(isinstance(v, float) for v in d["from"] + d["to"])
