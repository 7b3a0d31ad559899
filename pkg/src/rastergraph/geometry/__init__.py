from .model import (
    EMPTY,
    GEOMETRY_TYPES,
    Geometry,
    GeometryCollection,
    GeometryError,
    GeometryValidityError,
    LineString,
    Point,
    Polygon,
    Rectangle,
    dimension,
    from_shapely,
    iter_flat,
)
from .ops import (
    EPSILON,
    area,
    boundary,
    buffer,
    contains,
    convex_hull,
    covered_by,
    covers,
    crosses,
    difference,
    disjoint,
    distance,
    envelope,
    equals,
    getsrid,
    intersection,
    intersects,
    overlaps,
    set_operation,
    sf_predicate,
    sym_difference,
    touches,
    union,
    within,
)
from .wkt import WktParseError, parse_wkt, to_wkt

