"""2D Well-Known Text reading and writing.

The reader is case-insensitive on keywords, skips a leading ``<crs-iri>`` as
found in GeoSPARQL ``wktLiteral`` values, and accepts ``POINT(x,y)`` with a
comma between the two ordinates.
"""

from __future__ import annotations

import math
import re

from .model import (
    EMPTY,
    Geometry,
    GeometryCollection,
    GeometryError,
    LineString,
    Point,
    Polygon,
    Rectangle,
)


class WktParseError(GeometryError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<word>[A-Za-z]+)|(?P<punct>[(),]))"
)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN_RE.match(stripped, pos)
            if m is None or m.end() == pos:
                raise WktParseError(f"unexpected character {stripped[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def take(self):
        tok = self.peek()
        if tok[0] == "eof":
            raise WktParseError("unexpected end of WKT", tok[2])
        self.i += 1
        return tok

    def expect(self, ch: str):
        kind, value, pos = self.take()
        if kind != "punct" or value != ch:
            raise WktParseError(f"expected {ch!r}, found {value!r}", pos)

    def at(self, ch: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "punct" and value == ch

    def number(self) -> float:
        kind, value, pos = self.take()
        if kind != "num":
            raise WktParseError(f"expected number, found {value!r}", pos)
        return float(value)

    def coord(self, allow_comma: bool = False) -> tuple[float, float]:
        x = self.number()
        if allow_comma and self.at(","):
            self.take()
        y = self.number()
        if self.peek()[0] == "num":
            raise WktParseError("only 2D coordinates are supported", self.peek()[2])
        return (x, y)

    def coord_list(self) -> list[tuple[float, float]]:
        self.expect("(")
        coords = [self.coord()]
        while self.at(","):
            self.take()
            coords.append(self.coord())
        self.expect(")")
        return coords

    def empty(self) -> bool:
        kind, value, _ = self.peek()
        if kind == "word" and value.upper() == "EMPTY":
            self.take()
            return True
        return False

    def geometry(self) -> Geometry:
        kind, value, pos = self.take()
        if kind != "word":
            raise WktParseError(f"expected geometry keyword, found {value!r}", pos)
        tag = value.upper()
        nk, nv, npos = self.peek()
        if nk == "word" and nv.upper() in ("Z", "M", "ZM"):
            raise WktParseError("only 2D coordinates are supported", npos)
        if self.empty():
            return EMPTY
        try:
            if tag == "POINT":
                self.expect("(")
                x, y = self.coord(allow_comma=True)
                self.expect(")")
                return Point(x, y)
            if tag == "LINESTRING":
                return LineString(self.coord_list())
            if tag == "POLYGON":
                return self.polygon_body()
            if tag == "MULTIPOINT":
                self.expect("(")
                members = [self.multipoint_member()]
                while self.at(","):
                    self.take()
                    members.append(self.multipoint_member())
                self.expect(")")
                return GeometryCollection(tuple(members))
            if tag == "MULTILINESTRING":
                return GeometryCollection(tuple(LineString(c) for c in self.nested(self.coord_list)))
            if tag == "MULTIPOLYGON":
                return GeometryCollection(tuple(self.nested(self.polygon_body)))
            if tag == "GEOMETRYCOLLECTION":
                return GeometryCollection(tuple(self.nested(self.geometry)))
        except GeometryError as exc:
            if isinstance(exc, WktParseError):
                raise
            raise type(exc)(f"{exc} (geometry starting at position {pos})") from None
        raise WktParseError(f"unsupported geometry type {value!r}", pos)

    def nested(self, item):
        self.expect("(")
        out = [item()]
        while self.at(","):
            self.take()
            out.append(item())
        self.expect(")")
        return out

    def polygon_body(self) -> Polygon:
        rings = self.nested(self.coord_list)
        return Polygon(tuple(rings[0]), tuple(tuple(r) for r in rings[1:]))

    def multipoint_member(self) -> Point:
        if self.at("("):
            self.take()
            x, y = self.coord()
            self.expect(")")
            return Point(x, y)
        return Point(*self.coord())


def parse_wkt(text: str) -> Geometry:
    body = text.strip()
    if body.startswith("<"):
        end = body.find(">")
        if end < 0:
            raise WktParseError("unterminated CRS IRI", 0)
        body = body[end + 1:]
    reader = _Reader(body)
    geom = reader.geometry()
    kind, value, pos = reader.peek()
    if kind != "eof":
        raise WktParseError(f"trailing input {value!r}", pos)
    return geom


def format_number(v: float) -> str:
    if v == 0:
        return "0"
    if math.isfinite(v) and v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _coords_text(coords) -> str:
    return ",".join(f"{format_number(x)} {format_number(y)}" for x, y in coords)


def to_wkt(g: Geometry) -> str:
    if isinstance(g, Point):
        return f"POINT({format_number(g.x)} {format_number(g.y)})"
    if isinstance(g, LineString):
        return f"LINESTRING({_coords_text(g.points)})"
    if isinstance(g, Rectangle):
        return f"POLYGON(({_coords_text(g.ring())}))"
    if isinstance(g, Polygon):
        rings = [g.ring, *g.holes]
        return "POLYGON(" + ",".join(f"({_coords_text(r)})" for r in rings) + ")"
    if isinstance(g, GeometryCollection):
        if not g.members:
            return "GEOMETRYCOLLECTION EMPTY"
        return "GEOMETRYCOLLECTION(" + ",".join(to_wkt(m) for m in g.members) + ")"
    raise GeometryError(f"cannot serialize {g!r}")
