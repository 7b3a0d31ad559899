"""Conversions between RDF terms and the native values builtins work on.

Native values are ``float``, ``bool``, ``str``, ``datetime``, geometries,
rasters, IRIs and, for ``cellval2``, lists of floats. Geometry and raster
literals are parsed once per lexical form; the cache hands back the same
object each time, so identity-keyed memoization downstream keeps working.
"""

from __future__ import annotations

import math
from datetime import datetime
from functools import lru_cache

from ..geometry import Geometry, GeometryError, parse_wkt, to_wkt
from ..namespaces import (
    COVJSON_LITERAL,
    NUMERIC_DATATYPES,
    RASTER_HEXWKB_LITERAL,
    RDF_LANGSTRING,
    WKT_LITERAL,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DOUBLE,
    XSD_STRING,
)
from ..raster import Raster, RasterError, parse_coverage_json, parse_raster_hex_wkb, write_coverage_json
from ..rdf import BlankNode, Iri, Literal


class EvalError(Exception):
    """An expression has no value under the current binding."""


def is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def parse_datetime(text: str) -> datetime:
    body = text.strip()
    if body.endswith("Z"):
        body = body[:-1] + "+00:00"
    return datetime.fromisoformat(body)


@lru_cache(maxsize=1024)
def _parse_literal(lexical: str, datatype: str):
    if datatype == WKT_LITERAL:
        return parse_wkt(lexical)
    if datatype == COVJSON_LITERAL:
        return parse_coverage_json(lexical)
    if datatype == RASTER_HEXWKB_LITERAL:
        return parse_raster_hex_wkb(lexical)
    raise AssertionError(datatype)


_PARSED_DATATYPES = frozenset({WKT_LITERAL, COVJSON_LITERAL, RASTER_HEXWKB_LITERAL})


def native(value):
    """Map a bound value to its native form; unknown literals stay terms."""
    if not isinstance(value, Literal):
        return value
    dt = value.datatype
    try:
        if dt in _PARSED_DATATYPES:
            return _parse_literal(value.lexical, dt)
        if dt in NUMERIC_DATATYPES:
            return float(value.lexical)
        if dt == XSD_BOOLEAN:
            if value.lexical in ("true", "1"):
                return True
            if value.lexical in ("false", "0"):
                return False
            raise EvalError(f"invalid boolean {value.lexical!r}")
        if dt == XSD_DATETIME:
            return parse_datetime(value.lexical)
    except (GeometryError, RasterError, ValueError) as exc:
        raise EvalError(f"ill-formed {dt} literal: {exc}") from None
    if dt == XSD_STRING or dt == RDF_LANGSTRING:
        return value.lexical
    return value


def _format_float(v: float) -> str:
    if math.isinf(v):
        return "INF" if v > 0 else "-INF"
    if math.isnan(v):
        return "NaN"
    return repr(float(v))


def to_term(value):
    """Turn a native value back into an RDF term for output."""
    if isinstance(value, (Iri, Literal, BlankNode)):
        return value
    if isinstance(value, bool):
        return Literal("true" if value else "false", XSD_BOOLEAN)
    if is_number(value):
        return Literal(_format_float(value), XSD_DOUBLE)
    if isinstance(value, str):
        return Literal(value, XSD_STRING)
    if isinstance(value, datetime):
        return Literal(value.isoformat(), XSD_DATETIME)
    if isinstance(value, Geometry):
        return Literal(to_wkt(value), WKT_LITERAL)
    if isinstance(value, Raster):
        return Literal(write_coverage_json(value), COVJSON_LITERAL)
    raise EvalError(f"value {value!r} has no RDF form")
