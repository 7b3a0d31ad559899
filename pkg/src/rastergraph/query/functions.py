"""Builtin function registry keyed by function IRI.

Every builtin receives already-evaluated native arguments (see
:mod:`.values`). Type problems raise :class:`EvalError`; the evaluator turns
that into an unsatisfied FILTER or a dropped BIND solution.

Rasters met by ``intersects`` stand for their non-NODATA cells, so a FILTER
on a thresholded raster only matches where cells survived the threshold.
Every other geometric use of a raster (``equals``, set operations, raster
relations) uses its full domain rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..geometry import (
    Geometry,
    Point,
    area,
    boundary,
    buffer,
    convex_hull,
    distance,
    envelope,
    getsrid,
    intersects,
    set_operation,
    sf_predicate,
)
from ..geometry.ops import unit_factor
from ..namespaces import COVJSON_LITERAL, GEO, GEO2, GEOF, RASTER_HEXWKB_LITERAL
from ..raster import (
    Raster,
    accessor,
    aggregate,
    as_region,
    cellval,
    cellval2,
    cellwise_binary,
    cellwise_binary_const,
    cellwise_unary,
    domain_rect,
    geom2raster,
    geometry_intersection,
    raster_intersection,
    raster_relation,
    raster_union,
    raster_val_eq,
    rescale,
    write_coverage_json,
    write_raster_hex_wkb,
)
from ..rdf import Iri, Literal
from .values import EvalError, is_number


@dataclass(frozen=True)
class Builtin:
    iri: str
    min_args: int
    max_args: int
    fn: Callable

    def __call__(self, *args):
        if not self.min_args <= len(args) <= self.max_args:
            expected = str(self.min_args) if self.min_args == self.max_args else f"{self.min_args}-{self.max_args}"
            raise EvalError(f"<{self.iri}> takes {expected} arguments, got {len(args)}")
        return self.fn(*args)


REGISTRY: dict[str, Builtin] = {}


def register(names, min_args: int, max_args: int | None = None):
    def deco(fn):
        for name in names:
            REGISTRY[name] = Builtin(name, min_args, max_args if max_args is not None else min_args, fn)
        return fn

    return deco


def lookup(iri: str) -> Builtin:
    try:
        return REGISTRY[iri]
    except KeyError:
        raise EvalError(f"unknown function <{iri}>") from None


# -- argument checks ---------------------------------------------------------------


def _geom(v) -> Geometry:
    if isinstance(v, Geometry):
        return v
    raise EvalError(f"expected a geometry, got {_kind(v)}")


def _raster(v) -> Raster:
    if isinstance(v, Raster):
        return v
    raise EvalError(f"expected a raster, got {_kind(v)}")


def _spatial(v):
    if isinstance(v, (Geometry, Raster)):
        return v
    raise EvalError(f"expected a geometry or raster, got {_kind(v)}")


def _region(v) -> Geometry:
    return as_region(_spatial(v))


def _num(v) -> float:
    if is_number(v):
        return float(v)
    raise EvalError(f"expected a number, got {_kind(v)}")


def _unit(v) -> str:
    if isinstance(v, Iri):
        return v.value
    if isinstance(v, str):
        return v
    raise EvalError(f"expected a unit IRI, got {_kind(v)}")


def _kind(v) -> str:
    if isinstance(v, Literal):
        return f"literal of type <{v.datatype}>"
    return type(v).__name__


def _names(local: str, *namespaces: str) -> list[str]:
    return [ns + local for ns in namespaces]


# -- GeoSPARQL geometry functions ------------------------------------------------


@register(_names("buffer", GEOF, GEO), 3)
def _buffer(g, r, unit):
    return buffer(_geom(g), _num(r), _unit(unit))


@register(_names("distance", GEOF, GEO), 2, 3)
def _distance(a, b, unit=None):
    d = distance(_geom(a), _geom(b))
    return d / unit_factor(_unit(unit)) if unit is not None else d


@register(_names("area", GEOF, GEO), 1)
def _area(g):
    return area(_geom(g))


for _op in ("intersection", "union", "difference", "symDifference"):
    register(_names(_op, GEOF, GEO), 2)(
        lambda a, b, _op=_op: set_operation(_op, _geom(a), _geom(b))
    )


@register(_names("convexHull", GEOF, GEO), 1)
def _hull(g):
    return convex_hull(_geom(g))


@register(_names("boundary", GEOF, GEO), 1)
def _boundary(g):
    return boundary(_geom(g))


@register(_names("envelope", GEOF, GEO), 1)
def _envelope(g):
    return envelope(_geom(g))


@register(_names("getSRID", GEOF, GEO) + _names("getsrid", GEOF, GEO), 1)
def _getsrid(g):
    return Iri(getsrid(_geom(g)))


# -- intersects / equals over geometries and rasters ------------------------------


def spatial_intersects(a, b) -> bool:
    a, b = _spatial(a), _spatial(b)
    if isinstance(a, Raster) and isinstance(b, Raster):
        return a.valid_region_meets_raster(b)
    if isinstance(a, Raster):
        return a.valid_meets(b)
    if isinstance(b, Raster):
        return b.valid_meets(a)
    return intersects(a, b)


def spatial_equals(a, b) -> bool:
    return sf_predicate("equals", _region(a), _region(b))


_INTERSECTS_NAMES = (
    _names("intersects", GEO, GEOF, GEO2) + _names("sfIntersects", GEO, GEOF, GEO2)
)
_EQUALS_NAMES = _names("equals", GEO, GEOF, GEO2) + _names("sfEquals", GEO, GEOF, GEO2)

register(_INTERSECTS_NAMES, 2)(spatial_intersects)
register(_EQUALS_NAMES, 2)(spatial_equals)
register(_names("disjoint", GEO, GEOF, GEO2) + _names("sfDisjoint", GEO, GEOF, GEO2), 2)(
    lambda a, b: not spatial_intersects(a, b)
)

for _pred, _locals in {
    "contains": ("contains", "sfContains"),
    "within": ("within", "sfWithin"),
    "covers": ("covers", "sfCovers", "ehCovers"),
    "coveredBy": ("coveredBy", "ehCoveredBy"),
    "overlaps": ("overlaps", "sfOverlaps"),
    "touches": ("touches", "sfTouches"),
    "crosses": ("crosses", "sfCrosses"),
}.items():
    _iris = [ns + loc for loc in _locals for ns in (GEO, GEOF, GEO2)]
    register(_iris, 2)(lambda a, b, _pred=_pred: sf_predicate(_pred, _region(a), _region(b)))


# -- raster algebra ---------------------------------------------------------------

_BINARY = {
    "rasterPlus": "plus",
    "rasterSubtract": "subtract",
    "rasterMult": "mult",
    "rasterDiv": "div",
    "rasterAnd": "and",
    "rasterOr": "or",
    "rasterXor": "xor",
}
for _local, _op in _BINARY.items():
    register([GEO2 + _local], 2)(lambda a, b, _op=_op: cellwise_binary(_op, _raster(a), _raster(b)))
    register([GEO2 + _local + "Const"], 2)(
        lambda r, c, _op=_op: cellwise_binary_const(_op, _raster(r), _num(c))
    )


@register([GEO2 + "rasterEquals"], 2)
def _raster_equals(a, b):
    # the same name is both the cellwise equality and the raster/geometry relation
    if isinstance(a, Raster) and isinstance(b, Raster):
        return cellwise_binary("equals", a, b)
    if isinstance(a, Raster) or isinstance(b, Raster):
        return raster_relation("equalsGeom", _spatial(a), _spatial(b))
    raise EvalError("rasterEquals needs a raster argument")


@register([GEO2 + "rasterEqualsConst"], 2)
def _raster_equals_const(r, c):
    return cellwise_binary_const("equals", _raster(r), _num(c))


@register([GEO2 + "rasterExp"], 2)
def _raster_exp(r, c):
    return cellwise_binary_const("exp", _raster(r), _num(c))


@register([GEO2 + "rasterSmaller"], 2)
def _raster_smaller(r, c):
    return cellwise_binary_const("smallerKeep", _raster(r), _num(c))


@register([GEO2 + "rasterGreater", GEO2 + "isGreater"], 2)
def _raster_greater(r, c):
    return cellwise_binary_const("greaterKeep", _raster(r), _num(c))


@register([GEO2 + "rasterNot"], 1)
def _raster_not(r):
    return cellwise_unary("not", _raster(r))


@register([GEO2 + "rasterInvert"], 1)
def _raster_invert(r):
    return cellwise_unary("invert", _raster(r))


for _local, _op in {"max": "max", "rasterMax": "max", "rasterMin": "min", "rasterMean": "mean"}.items():
    register([GEO2 + _local], 1)(lambda r, _op=_op: aggregate(_op, _raster(r)))


# -- cells, conversions, accessors -------------------------------------------------


@register([GEO2 + "cellval"], 2, 3)
def _cellval(r, x, y=None):
    if y is None:
        p = _geom(x)
        if not isinstance(p, Point):
            raise EvalError("cellval needs a point or two coordinates")
        return cellval(_raster(r), p.x, p.y)
    return cellval(_raster(r), _num(x), _num(y))


@register([GEO2 + "cellval2"], 1)
def _cellval2(r):
    return cellval2(_raster(r))


@register([GEO2 + "raster2geom"], 1)
def _raster2geom(r):
    return domain_rect(_raster(r))


@register([GEO2 + "geom2raster"], 4)
def _geom2raster(g, value, cols, rows):
    return geom2raster(_geom(g), _num(value), _num(cols), _num(rows))


@register([GEO2 + "rastervaleq", GEO2 + "rasterValEq"], 2)
def _rastervaleq(a, b):
    return raster_val_eq(_raster(a), _raster(b))


@register([GEO2 + "rasterIntersection"], 2)
def _raster_intersection(a, b):
    a, b = _spatial(a), _spatial(b)
    if not isinstance(a, Raster) and not isinstance(b, Raster):
        raise EvalError("rasterIntersection needs a raster argument")
    return raster_intersection(a, b)


@register([GEO2 + "rasterUnion"], 2)
def _raster_union(a, b):
    a, b = _spatial(a), _spatial(b)
    if not isinstance(a, Raster) and not isinstance(b, Raster):
        raise EvalError("rasterUnion needs a raster argument")
    return raster_union(a, b)


@register([GEO2 + "geometryIntersection"], 2)
def _geometry_intersection(a, b):
    return geometry_intersection(_spatial(a), _spatial(b))


for _local, _which in {
    "rasterWidth": "width",
    "rasterHeight": "height",
    "rasterCellWidth": "cellWidth",
    "rasterCellHeight": "cellHeight",
    "rasterEnvelope": "envelope",
}.items():
    register([GEO2 + _local], 1)(lambda r, _which=_which: accessor(_raster(r), _which))


@register([GEO2 + "rasterCell"], 3)
def _raster_cell(r, x, y):
    return accessor(_raster(r), "cellAt", _num(x), _num(y))


@register([GEO2 + "rasterRescale", GEO2 + "rasterResize"], 3)
def _rescale(r, cols, rows):
    return rescale(_raster(r), _num(cols), _num(rows))


for _local, _pred in {
    "rasterCoveredBy": "coveredBy",
    "rasterOverlaps": "overlaps",
    "rasterTouches": "touches",
    "rasterWithin": "within",
    "rasterEqualsContent": "equalsContent",
}.items():
    register([GEO2 + _local], 2)(
        lambda a, b, _pred=_pred: raster_relation(_pred, _spatial(a), _spatial(b))
    )


@register([GEO2 + "rasterWithinDistance"], 3)
def _raster_within_distance(a, b, d):
    return raster_relation("withinDistance", _spatial(a), _spatial(b), _num(d))


@register([GEO2 + "asCoverageJSON"], 1)
def _as_covjson(r):
    return Literal(write_coverage_json(_raster(r)), COVJSON_LITERAL)


@register([GEO2 + "asRasterHexWKB"], 1)
def _as_hexwkb(r):
    return Literal(write_raster_hex_wkb(_raster(r)), RASTER_HEXWKB_LITERAL)
