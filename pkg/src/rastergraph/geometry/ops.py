"""Set operations, metrics and simple-features predicates on planar geometries.

Overlay and predicate evaluation is delegated to shapely (GEOS). Results of
set operations between two areal inputs are regularized: lower-dimensional
slivers such as a shared edge are dropped.
"""

from __future__ import annotations

import shapely

from ..namespaces import UOM_KM_IRIS, UOM_METER_IRIS
from .model import (
    EMPTY,
    Geometry,
    GeometryCollection,
    GeometryError,
    LineString,
    Point,
    Polygon,
    Rectangle,
    dimension,
    from_shapely,
    iter_flat,
    shoelace,
)

# coincidence tolerance for intersects/distance comparisons
EPSILON = 1e-9

# fixed placeholder; CRS handling is not implemented
DEFAULT_SRID = "http://www.opengis.net/def/crs/OGC/1.3/CRS84"


def _shape(g: Geometry):
    s = g.to_shapely()
    if isinstance(g, GeometryCollection) and not s.is_empty:
        s = shapely.unary_union(s)
    return s


def _areal(g: Geometry) -> bool:
    return all(dimension(m) == 2 for m in iter_flat(g)) and not g.is_empty()


def _regularize(shape, keep_polygons: bool) -> Geometry:
    if keep_polygons and not shape.is_empty:
        parts = [p for p in shapely.get_parts(shape) if p.geom_type in ("Polygon", "MultiPolygon") and p.area > 0]
        if not parts:
            return EMPTY
        shape = shapely.unary_union(parts) if len(parts) > 1 else parts[0]
    return from_shapely(shape)


def intersection(a: Geometry, b: Geometry) -> Geometry:
    if a.is_empty() or b.is_empty():
        return EMPTY
    if a == b:
        # overlaying a self-crossing line with itself would re-node it with rounding
        return a
    return _regularize(shapely.intersection(_shape(a), _shape(b)), _areal(a) and _areal(b))


def union(a: Geometry, b: Geometry) -> Geometry:
    if a.is_empty():
        return b
    if b.is_empty() or a == b:
        return a
    return _regularize(shapely.union(_shape(a), _shape(b)), _areal(a) and _areal(b))


def difference(a: Geometry, b: Geometry) -> Geometry:
    if a.is_empty():
        return EMPTY
    if b.is_empty():
        return a
    return _regularize(shapely.difference(_shape(a), _shape(b)), _areal(a))


def sym_difference(a: Geometry, b: Geometry) -> Geometry:
    if a.is_empty():
        return b
    if b.is_empty():
        return a
    return _regularize(shapely.symmetric_difference(_shape(a), _shape(b)), _areal(a) and _areal(b))


SET_OPERATIONS = {
    "intersection": intersection,
    "union": union,
    "difference": difference,
    "symDifference": sym_difference,
}


def set_operation(op: str, a: Geometry, b: Geometry) -> Geometry:
    try:
        return SET_OPERATIONS[op](a, b)
    except KeyError:
        raise GeometryError(f"unknown set operation {op!r}") from None


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(g: Geometry) -> Geometry:
    """Andrew's monotone chain over every vertex of ``g``."""
    pts = sorted(set(g.coords()))
    if not pts:
        return EMPTY
    if len(pts) == 1:
        return Point(*pts[0])
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return LineString([pts[0], pts[-1]])
    ring = tuple(hull) + (hull[0],)
    return from_shapely(shapely.Polygon(ring))


def boundary(g: Geometry) -> Geometry:
    if isinstance(g, Point):
        return EMPTY
    if isinstance(g, LineString):
        if g.points[0] == g.points[-1]:
            return EMPTY
        return GeometryCollection((Point(*g.points[0]), Point(*g.points[-1])))
    if isinstance(g, Rectangle):
        if dimension(g) < 2:
            return boundary(from_shapely(g.to_shapely()))
        return LineString(g.ring())
    if isinstance(g, Polygon):
        if not g.holes:
            return LineString(g.ring)
        return GeometryCollection(tuple(LineString(r) for r in (g.ring, *g.holes)))
    members = tuple(b for b in (boundary(m) for m in g.members) if not b.is_empty())
    return GeometryCollection(members)


def envelope(g: Geometry) -> Rectangle:
    coords = g.coords()
    if not coords:
        raise GeometryError("envelope of an empty geometry")
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    return Rectangle(min(xs), min(ys), max(xs), max(ys))


def unit_factor(unit: str) -> float:
    if unit in UOM_METER_IRIS:
        return 1.0
    if unit in UOM_KM_IRIS:
        return 1000.0
    raise GeometryError(f"unknown unit {unit!r}")


def buffer(g: Geometry, radius: float, unit: str) -> Rectangle:
    """Bounding box of ``g`` grown by ``radius`` (in ``unit``) on every side."""
    if radius < 0:
        raise GeometryError("buffer radius must be non-negative")
    r = float(radius) * unit_factor(unit)
    env = envelope(g)
    return Rectangle(env.xmin - r, env.ymin - r, env.xmax + r, env.ymax + r)


def distance(a: Geometry, b: Geometry) -> float:
    if a.is_empty() or b.is_empty():
        raise GeometryError("distance to an empty geometry")
    return float(shapely.distance(_shape(a), _shape(b)))


def area(g: Geometry) -> float:
    if isinstance(g, (Point, LineString)):
        return 0.0
    if isinstance(g, Rectangle):
        return g.width * g.height
    if isinstance(g, Polygon):
        return abs(shoelace(g.ring)) - sum(abs(shoelace(h)) for h in g.holes)
    members = [m for m in iter_flat(g) if dimension(m) == 2]
    if len(members) <= 1:
        return sum(area(m) for m in members)
    # overlapping members are merged first so shared area counts once
    merged = from_shapely(shapely.unary_union([m.to_shapely() for m in members]))
    return sum(area(m) for m in iter_flat(merged))


# -- predicates ---------------------------------------------------------------

def intersects(a: Geometry, b: Geometry) -> bool:
    if a.is_empty() or b.is_empty():
        return False
    sa, sb = _shape(a), _shape(b)
    if shapely.intersects(sa, sb):
        return True
    return bool(shapely.distance(sa, sb) <= EPSILON)


def disjoint(a: Geometry, b: Geometry) -> bool:
    return not intersects(a, b)


def equals(a: Geometry, b: Geometry) -> bool:
    if a.is_empty() or b.is_empty():
        return a.is_empty() and b.is_empty()
    return bool(shapely.equals(_shape(a), _shape(b)))


def contains(a: Geometry, b: Geometry) -> bool:
    """Point-set containment: every point of ``b`` lies in ``a``."""
    if b.is_empty():
        return True
    if a.is_empty():
        return False
    return bool(shapely.covers(_shape(a), _shape(b)))


def within(a: Geometry, b: Geometry) -> bool:
    return contains(b, a)


covers = contains


def covered_by(a: Geometry, b: Geometry) -> bool:
    return contains(b, a)


def overlaps(a: Geometry, b: Geometry) -> bool:
    """Intersection is non-empty and a proper subset of both inputs."""
    return intersects(a, b) and not contains(a, b) and not contains(b, a)


def touches(a: Geometry, b: Geometry) -> bool:
    if a.is_empty() or b.is_empty():
        return False
    return bool(shapely.touches(_shape(a), _shape(b)))


def crosses(a: Geometry, b: Geometry) -> bool:
    if a.is_empty() or b.is_empty():
        return False
    return bool(shapely.crosses(_shape(a), _shape(b)))


PREDICATES = {
    "equals": equals,
    "intersects": intersects,
    "disjoint": disjoint,
    "contains": contains,
    "within": within,
    "covers": covers,
    "coveredBy": covered_by,
    "overlaps": overlaps,
    "touches": touches,
    "crosses": crosses,
}


def sf_predicate(pred: str, a: Geometry, b: Geometry) -> bool:
    try:
        fn = PREDICATES[pred]
    except KeyError:
        raise GeometryError(f"unknown predicate {pred!r}") from None
    return fn(a, b)


def getsrid(g: Geometry) -> str:
    return DEFAULT_SRID
