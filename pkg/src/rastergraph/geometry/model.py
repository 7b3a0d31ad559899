"""Planar geometry values.

All geometries are immutable. Each one lazily builds (and keeps) a shapely
counterpart, which backs the regularized set operations and predicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

import shapely
from shapely import geometry as sg

Coord = tuple[float, float]


class GeometryError(ValueError):
    pass


class GeometryValidityError(GeometryError):
    pass


class _Base:
    __slots__ = ()

    def to_shapely(self):
        cached = self._shape
        if cached is None:
            cached = self._build_shapely()
            object.__setattr__(self, "_shape", cached)
        return cached

    def is_empty(self) -> bool:
        return False


@dataclass(frozen=True)
class Point(_Base):
    x: float
    y: float
    _shape: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def coords(self) -> list[Coord]:
        return [(self.x, self.y)]

    def _build_shapely(self):
        return sg.Point(self.x, self.y)


def _as_coords(points) -> tuple[Coord, ...]:
    out = []
    for p in points:
        if isinstance(p, Point):
            out.append((p.x, p.y))
        else:
            x, y = p
            out.append((float(x), float(y)))
    return tuple(out)


@dataclass(frozen=True)
class LineString(_Base):
    points: tuple[Coord, ...]
    _shape: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pts = _as_coords(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise GeometryValidityError("LineString needs at least two points")
        if len(set(pts)) < 2:
            raise GeometryValidityError("LineString needs at least two distinct points")

    def coords(self) -> list[Coord]:
        return list(self.points)

    def _build_shapely(self):
        return sg.LineString(self.points)


def _validate_ring(ring: tuple[Coord, ...], what: str) -> None:
    if len(ring) < 4:
        raise GeometryValidityError(f"{what} needs at least four points (closed)")
    if ring[0] != ring[-1]:
        raise GeometryValidityError(f"{what} is not closed")
    inner = ring[:-1]
    if len(set(inner)) != len(inner):
        raise GeometryValidityError(f"{what} repeats a vertex")
    lr = sg.LinearRing(ring)
    if not lr.is_simple:
        raise GeometryValidityError(f"{what} self-intersects")
    if abs(shoelace(ring)) == 0.0:
        raise GeometryValidityError(f"{what} has zero area")


@dataclass(frozen=True)
class Polygon(_Base):
    """Single closed ring enclosing an area; ``holes`` only appears on computed results."""

    ring: tuple[Coord, ...]
    holes: tuple[tuple[Coord, ...], ...] = ()
    _shape: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        ring = _as_coords(self.ring)
        holes = tuple(_as_coords(h) for h in self.holes)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "holes", holes)
        _validate_ring(ring, "polygon ring")
        for h in holes:
            _validate_ring(h, "polygon hole")
        if holes and not self.to_shapely().is_valid:
            raise GeometryValidityError("polygon holes are not valid")

    def coords(self) -> list[Coord]:
        out = list(self.ring)
        for h in self.holes:
            out.extend(h)
        return out

    def _build_shapely(self):
        return sg.Polygon(self.ring, self.holes)


@dataclass(frozen=True)
class Rectangle(_Base):
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    _shape: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise GeometryValidityError(f"inverted rectangle {self}")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    def ring(self) -> tuple[Coord, ...]:
        return (
            (self.xmin, self.ymin),
            (self.xmax, self.ymin),
            (self.xmax, self.ymax),
            (self.xmin, self.ymax),
            (self.xmin, self.ymin),
        )

    def coords(self) -> list[Coord]:
        return list(self.ring()[:-1])

    def contains_point(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def _build_shapely(self):
        # degenerate rectangles collapse to the matching lower-dimensional shape
        if self.width == 0 and self.height == 0:
            return sg.Point(self.xmin, self.ymin)
        if self.width == 0 or self.height == 0:
            return sg.LineString([(self.xmin, self.ymin), (self.xmax, self.ymax)])
        return shapely.box(self.xmin, self.ymin, self.xmax, self.ymax, ccw=True)


@dataclass(frozen=True)
class GeometryCollection(_Base):
    members: tuple = ()
    _shape: object = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        members = tuple(self.members)
        for m in members:
            if not isinstance(m, _Base):
                raise GeometryError(f"collection member is not a geometry: {m!r}")
        object.__setattr__(self, "members", members)

    def is_empty(self) -> bool:
        return all(m.is_empty() for m in self.members)

    def coords(self) -> list[Coord]:
        return [c for m in self.members for c in m.coords()]

    def _build_shapely(self):
        return sg.GeometryCollection([m.to_shapely() for m in self.members])

    def __iter__(self) -> Iterator:
        return iter(self.members)


Geometry = Union[Point, LineString, Polygon, Rectangle, GeometryCollection]
GEOMETRY_TYPES = (Point, LineString, Polygon, Rectangle, GeometryCollection)

EMPTY = GeometryCollection(())


def shoelace(ring) -> float:
    """Signed area of a closed ring."""
    total = 0.0
    for (x1, y1), (x2, y2) in zip(ring, ring[1:]):
        total += x1 * y2 - x2 * y1
    return total / 2.0


def _ring_as_rectangle(ring) -> Rectangle | None:
    pts = ring[:-1]
    if len(pts) != 4:
        return None
    xs = sorted({x for x, _ in pts})
    ys = sorted({y for _, y in pts})
    if len(xs) != 2 or len(ys) != 2:
        return None
    corners = {(x, y) for x in xs for y in ys}
    if set(pts) != corners:
        return None
    # consecutive vertices must share one coordinate (no diagonal edges)
    for (x1, y1), (x2, y2) in zip(ring, ring[1:]):
        if x1 != x2 and y1 != y2:
            return None
    return Rectangle(xs[0], ys[0], xs[1], ys[1])


def from_shapely(shape) -> Geometry:
    """Convert a shapely geometry back to the value types above."""
    if shape is None or shape.is_empty:
        return EMPTY
    kind = shape.geom_type
    if kind == "Point":
        return Point(shape.x, shape.y)
    if kind in ("LineString", "LinearRing"):
        coords = [tuple(c[:2]) for c in shape.coords]
        return LineString(coords)
    if kind == "Polygon":
        ring = tuple(tuple(c[:2]) for c in shape.exterior.coords)
        holes = tuple(tuple(tuple(c[:2]) for c in h.coords) for h in shape.interiors)
        if not holes:
            rect = _ring_as_rectangle(ring)
            if rect is not None:
                return rect
        return _computed_polygon(_dedupe_ring(ring), tuple(_dedupe_ring(h) for h in holes), shape)
    if kind.startswith("Multi") or kind == "GeometryCollection":
        members = tuple(from_shapely(g) for g in shape.geoms if not g.is_empty)
        return GeometryCollection(members)
    raise GeometryError(f"unsupported shapely geometry {kind}")


def _computed_polygon(ring, holes, shape) -> Polygon:
    # GEOS output is valid by its own rules (e.g. a hole touching the shell at
    # one vertex) which the stricter input checks would reject
    poly = object.__new__(Polygon)
    object.__setattr__(poly, "ring", ring)
    object.__setattr__(poly, "holes", holes)
    object.__setattr__(poly, "_shape", shape)
    return poly


def _dedupe_ring(ring):
    out = [ring[0]]
    for c in ring[1:]:
        if c != out[-1]:
            out.append(c)
    return tuple(out)


def iter_flat(g: Geometry) -> Iterator[Geometry]:
    """Leaf geometries of ``g`` (collections flattened)."""
    if isinstance(g, GeometryCollection):
        for m in g.members:
            yield from iter_flat(m)
    else:
        yield g


def dimension(g: Geometry) -> int:
    """Topological dimension; -1 for an empty collection."""
    if isinstance(g, Point):
        return 0
    if isinstance(g, LineString):
        return 1
    if isinstance(g, Polygon):
        return 2
    if isinstance(g, Rectangle):
        if g.width > 0 and g.height > 0:
            return 2
        return 1 if (g.width > 0 or g.height > 0) else 0
    return max((dimension(m) for m in g.members), default=-1)
