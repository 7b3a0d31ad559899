import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import monte_carlo_area, random_convex_polygon
from rastergraph.geometry import (
    EPSILON,
    GeometryCollection,
    GeometryError,
    GeometryValidityError,
    LineString,
    Point,
    Polygon,
    Rectangle,
    area,
    buffer,
    contains,
    convex_hull,
    difference,
    distance,
    envelope,
    equals,
    intersection,
    intersects,
    parse_wkt,
    sf_predicate,
    to_wkt,
    union,
)
from rastergraph.namespaces import UOM

METER = UOM + "metre"
KM = UOM + "km"
UNIT_SQUARE = Rectangle(0, 0, 1, 1)

# -- WKT -----------------------------------------------------------------------------------


def test_parse_point():
    assert parse_wkt("POINT(49.2 36.2)") == Point(49.2, 36.2)


def test_parse_point_with_comma_separator():
    assert parse_wkt("POINT(49.2,36.2)") == Point(49.2, 36.2)


def test_parse_unit_square_polygon():
    g = parse_wkt("POLYGON((0 0,1 0,1 1,0 1,0 0))")
    assert isinstance(g, Polygon)
    assert equals(g, UNIT_SQUARE)
    assert area(g) == 1.0


def test_bow_tie_rejected():
    with pytest.raises(GeometryValidityError):
        parse_wkt("POLYGON((0 0,1 1,1 0,0 1,0 0))")


@pytest.mark.parametrize("text", ["POINT(1)", "LINESTRING(0 0)", "POLYGON((0 0,1 0,0 0))", "CIRCLE(0 0 1)", "POINT(1 2"])
def test_malformed_wkt(text):
    with pytest.raises(GeometryError):
        parse_wkt(text)


def test_write_point_and_rectangle():
    assert to_wkt(Point(0, 0)) == "POINT(0 0)"
    assert to_wkt(Rectangle(0, 0, 1, 1)) == "POLYGON((0 0,1 0,1 1,0 1,0 0))"


@pytest.mark.parametrize(
    "text",
    [
        "POINT(1.5 -2.25)",
        "LINESTRING(0 0,3 4,5 0.125)",
        "POLYGON((0 0,4 0,4 3,0 3,0 0))",
        "GEOMETRYCOLLECTION(POINT(1 1),LINESTRING(0 0,1 2))",
    ],
)
def test_wkt_round_trip(text):
    g = parse_wkt(text)
    assert parse_wkt(to_wkt(g)) == g


def test_corpus_geometries_round_trip(corpus_ws):
    from rastergraph.namespaces import WKT_LITERAL

    literals = [t.object for t in corpus_ws.graph if getattr(t.object, "datatype", None) == WKT_LITERAL]
    assert len(literals) > 300
    for lit in literals:
        g = parse_wkt(lit.lexical)
        assert parse_wkt(to_wkt(g)) == g


def test_random_coordinates_round_trip_exactly():
    rng = random.Random(5)
    for _ in range(200):
        pts = [(rng.uniform(-1e6, 1e6), rng.uniform(-1e6, 1e6)) for _ in range(3)]
        g = LineString(tuple(pts))
        assert parse_wkt(to_wkt(g)) == g


# -- set operations and metrics ---------------------------------------------------------------


def test_intersection_idempotent_on_square():
    assert equals(intersection(UNIT_SQUARE, UNIT_SQUARE), UNIT_SQUARE)


def test_axis_aligned_overlap():
    assert equals(intersection(Rectangle(0, 0, 2, 2), Rectangle(1, 1, 3, 3)), Rectangle(1, 1, 2, 2))


def test_union_with_itself():
    g = Polygon(((0, 0), (3, 0), (0, 2), (0, 0)))
    assert equals(union(g, g), g)


def test_difference_of_rectangles():
    assert equals(difference(Rectangle(0, 0, 2, 1), Rectangle(1, 0, 2, 1)), Rectangle(0, 0, 1, 1))


def test_shared_edge_intersection_is_regularized_away():
    assert intersection(Rectangle(0, 0, 1, 1), Rectangle(1, 0, 2, 1)).is_empty()


def test_envelope_of_line():
    assert envelope(LineString(((0, 0), (2, 1)))) == Rectangle(0, 0, 2, 1)


def test_convex_hull_drops_interior_point():
    pts = GeometryCollection(tuple(Point(x, y) for x, y in ((0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5))))
    assert equals(convex_hull(pts), UNIT_SQUARE)


def test_buffer_is_grown_bounding_box():
    assert buffer(Point(0, 0), 1, METER) == Rectangle(-1, -1, 1, 1)
    assert buffer(Point(0, 0), 1, KM) == Rectangle(-1000, -1000, 1000, 1000)
    line = LineString(((0, 0), (2, 1)))
    assert buffer(line, 0, METER) == envelope(line)


def test_buffer_rejects_unknown_unit():
    with pytest.raises(GeometryError):
        buffer(Point(0, 0), 1, "http://example.org/furlong")


def test_distance_examples():
    assert distance(Point(0, 0), Point(3, 4)) == 5.0
    assert distance(Rectangle(0, 0, 2, 2), Rectangle(1, 1, 3, 3)) == 0.0


def test_area_examples():
    assert area(UNIT_SQUARE) == 1.0
    assert area(parse_wkt("POLYGON((0 0,1 0,1 1,0 1,0 0))")) == 1.0
    assert area(LineString(((0, 0), (5, 5)))) == 0.0
    assert area(Point(1, 1)) == 0.0


def test_area_against_monte_carlo():
    rng = random.Random(7)
    for _ in range(20):
        ring = random_convex_polygon(rng)
        est = monte_carlo_area(ring, 20000, rng)
        assert area(Polygon(tuple(ring))) == pytest.approx(est, rel=3e-2)


# -- predicates against a sampled point-set oracle ---------------------------------------------


def _classify(x, y, shape):
    """'i' interior, 'b' boundary, 'e' exterior for a rectangle or point tuple."""
    if len(shape) == 2:
        return "i" if (x, y) == shape else "e"
    xmin, ymin, xmax, ymax = shape
    if xmin < x < xmax and ymin < y < ymax:
        return "i"
    if xmin <= x <= xmax and ymin <= y <= ymax:
        return "b"
    return "e"


def _sampled_predicates(a, b):
    step = 0.25
    pts = [(k * step, m * step) for k in range(-8, 33) for m in range(-8, 33)]
    ca = [_classify(x, y, a) for x, y in pts]
    cb = [_classify(x, y, b) for x, y in pts]
    in_a = [c != "e" for c in ca]
    in_b = [c != "e" for c in cb]
    meet = any(p and q for p, q in zip(in_a, in_b))
    interiors = any(p == "i" and q == "i" for p, q in zip(ca, cb))
    a_in_b = all(q for p, q in zip(in_a, in_b) if p)
    b_in_a = all(p for p, q in zip(in_a, in_b) if q)
    return {
        "equals": a_in_b and b_in_a,
        "intersects": meet,
        "disjoint": not meet,
        "contains": b_in_a,
        "within": a_in_b,
        "covers": b_in_a,
        "coveredBy": a_in_b,
        # point-set reading: any proper, non-empty intersection, shared edges included
        "overlaps": meet and not a_in_b and not b_in_a,
        "touches": meet and not interiors,
        "crosses": False,
    }


def _geom(shape):
    return Point(*shape) if len(shape) == 2 else Rectangle(*shape)


PREDICATE_CASES = [
    ((0, 0, 4, 4), (0, 0, 4, 4)),  # equal
    ((0, 0, 4, 4), (1, 1, 2, 2)),  # strict containment
    ((0, 0, 4, 4), (2, 2, 6, 6)),  # proper overlap
    ((0, 0, 4, 4), (4, 0, 6, 4)),  # shared edge
    ((0, 0, 1, 1), (3, 3, 5, 5)),  # disjoint
    ((0, 0, 4, 4), (2.0, 2.0)),  # point inside
]


@pytest.mark.parametrize("a, b", PREDICATE_CASES)
@pytest.mark.parametrize(
    "pred", ["equals", "intersects", "disjoint", "contains", "within", "covers", "coveredBy", "overlaps", "touches", "crosses"]
)
def test_predicates_against_point_sets(a, b, pred):
    expected = _sampled_predicates(a, b)[pred]
    assert sf_predicate(pred, _geom(a), _geom(b)) is expected


def test_contains_point_in_square():
    assert contains(UNIT_SQUARE, Point(0.5, 0.5))


def test_line_crosses_polygon():
    line = LineString(((-1, 0.5), (2, 0.5)))
    assert sf_predicate("crosses", line, UNIT_SQUARE)
    assert not sf_predicate("crosses", LineString(((0.2, 0.5), (0.8, 0.5))), UNIT_SQUARE)


def test_unknown_predicate():
    with pytest.raises(GeometryError):
        sf_predicate("relate", UNIT_SQUARE, UNIT_SQUARE)


# -- hypothesis properties ---------------------------------------------------------------------

coord = st.integers(-40, 40).map(lambda v: v / 4)


@st.composite
def rectangles(draw):
    x0, y0 = draw(coord), draw(coord)
    w, h = draw(st.integers(1, 40)), draw(st.integers(1, 40))
    return Rectangle(x0, y0, x0 + w / 4, y0 + h / 4)


@st.composite
def geometries(draw):
    kind = draw(st.sampled_from(["point", "line", "rect", "convex"]))
    if kind == "point":
        return Point(draw(coord), draw(coord))
    if kind == "line":
        pts = draw(st.lists(st.tuples(coord, coord), min_size=2, max_size=4, unique=True))
        return LineString(tuple(pts))
    if kind == "rect":
        return draw(rectangles())
    ring = random_convex_polygon(random.Random(draw(st.integers(0, 10**6))), n=6)
    return Polygon(tuple(ring))


@settings(max_examples=150, deadline=None)
@given(geometries(), geometries())
def test_intersects_symmetric(a, b):
    assert intersects(a, b) == intersects(b, a)


@settings(max_examples=150, deadline=None)
@given(geometries())
def test_intersection_and_union_idempotent(g):
    assert equals(intersection(g, g), g)
    assert equals(union(g, g), g)


@settings(max_examples=150, deadline=None)
@given(geometries(), geometries())
def test_intersection_area_bounded(a, b):
    assert area(intersection(a, b)) <= min(area(a), area(b)) + 1e-9


@settings(max_examples=150, deadline=None)
@given(geometries(), geometries())
def test_intersects_iff_zero_distance(a, b):
    assert intersects(a, b) == (distance(a, b) <= EPSILON)


@settings(max_examples=150, deadline=None)
@given(geometries(), st.floats(0, 50), st.floats(0, 50))
def test_buffer_monotone(g, r1, r2):
    lo, hi = sorted((r1, r2))
    assert contains(buffer(g, hi, METER), buffer(g, lo, METER))


@settings(max_examples=150, deadline=None)
@given(geometries())
def test_envelope_holds_every_vertex(g):
    env = envelope(g)
    for x, y in g.coords():
        assert env.xmin <= x <= env.xmax and env.ymin <= y <= env.ymax


def test_unit_square_area_and_pythagorean_distance():
    assert area(UNIT_SQUARE) == 1.0
    assert math.isclose(distance(Point(0, 0), Point(3, 4)), 5.0)
