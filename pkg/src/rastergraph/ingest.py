"""Turning GeoJSON features and ESRI ASCII rasters into triples.

Vector features get a feature node typed with the requested class, a
geometry node and a WKT literal, plus one typed literal per scalar
property. A raster gets a feature node, a coverage node holding the
CoverageJSON literal and a scale node holding the unit label and NODATA.

Node IRIs are ``<base>/<kind>/<n>`` with ``n`` counting up from the highest
number already used in the graph, so repeated loads never collide.
"""

from __future__ import annotations

import json
import os
import re
from datetime import datetime
from pathlib import Path

from .geometry import LineString, Point, Polygon, to_wkt
from .namespaces import (
    COVJSON_LITERAL,
    EX,
    GEO,
    GEO2,
    OM,
    RDF_TYPE,
    WKT_LITERAL,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)
from .raster import Raster, Scale, parse_asc_grid, write_coverage_json
from .rdf import Graph, Iri, Literal, Triple

DEFAULT_BASE_IRI = "http://example.org/data"
BASE_IRI_ENV = "RASTERGRAPH_BASE_IRI"

HAS_GEOMETRY = Iri(GEO + "hasGeometry")
AS_WKT = Iri(GEO + "asWKT")
GEOMETRY_CLASS = Iri(GEO + "Geometry")
HAS_COVERAGE = Iri(GEO2 + "hasCoverage")
AS_COVERAGE = Iri(GEO2 + "asCoverage")
AS_COVERAGE_JSON = Iri(GEO2 + "asCoverageJSON")
RASTER_CLASS = Iri(GEO2 + "Raster")
HAS_SCALE = Iri(GEO2 + "hasScale")
SCALE_CLASS = Iri(OM + "Scale")
UNIT_LABEL = Iri(GEO2 + "unitLabel")
NODATA = Iri(GEO2 + "nodata")
SCALE_KIND = Iri(GEO2 + "scaleKind")
TYPE = Iri(RDF_TYPE)


class IngestError(ValueError):
    pass


def base_iri(explicit: str | None = None) -> str:
    return (explicit or os.environ.get(BASE_IRI_ENV) or DEFAULT_BASE_IRI).rstrip("/")


class IriMinter:
    def __init__(self, graph: Graph, base: str | None = None):
        self.base = base_iri(base)
        pattern = re.compile(re.escape(self.base) + r"/[a-z]+/(\d+)$")
        highest = 0
        for t in graph:
            for term in (t.subject, t.object):
                if isinstance(term, Iri):
                    m = pattern.match(term.value)
                    if m:
                        highest = max(highest, int(m.group(1)))
        self.next = highest + 1

    def mint(self, *kinds: str) -> list[Iri]:
        """One IRI per kind, all sharing the same sequence number."""
        n = self.next
        self.next += 1
        return [Iri(f"{self.base}/{kind}/{n}") for kind in kinds]


# -- GeoJSON -------------------------------------------------------------------------------


def _ring(coords) -> tuple:
    return tuple((float(x), float(y)) for x, y, *_ in coords)


def geojson_geometry(obj: dict):
    kind = obj.get("type")
    coords = obj.get("coordinates")
    try:
        if kind == "Point":
            return Point(float(coords[0]), float(coords[1]))
        if kind == "LineString":
            return LineString(_ring(coords))
        if kind == "Polygon":
            return Polygon(_ring(coords[0]), tuple(_ring(r) for r in coords[1:]))
    except (TypeError, IndexError, ValueError) as exc:
        raise IngestError(f"malformed {kind} coordinates: {exc}") from None
    raise IngestError(f"unsupported geometry type {kind!r}")


def _looks_like_datetime(text: str) -> bool:
    if "T" not in text:
        return False
    try:
        datetime.fromisoformat(text[:-1] + "+00:00" if text.endswith("Z") else text)
    except ValueError:
        return False
    return True


def property_literal(value) -> Literal | None:
    if isinstance(value, bool):
        return Literal("true" if value else "false", XSD_BOOLEAN)
    if isinstance(value, int):
        return Literal(str(value), XSD_INTEGER)
    if isinstance(value, float):
        return Literal(repr(value), XSD_DOUBLE)
    if isinstance(value, str):
        return Literal(value, XSD_DATETIME if _looks_like_datetime(value) else XSD_STRING)
    return None  # nulls, arrays and objects are not scalar


def geojson_triples(doc: dict, class_iri: str, minter: IriMinter) -> list[Triple]:
    if doc.get("type") != "FeatureCollection":
        raise IngestError("expected a GeoJSON FeatureCollection")
    out: list[Triple] = []
    for k, feature in enumerate(doc.get("features") or []):
        if not isinstance(feature, dict) or feature.get("type") != "Feature":
            raise IngestError(f"feature #{k} is not a GeoJSON Feature")
        geom = geojson_geometry(feature.get("geometry") or {})
        node, gnode = minter.mint("feature", "geom")
        out += [
            Triple(node, TYPE, Iri(class_iri)),
            Triple(node, HAS_GEOMETRY, gnode),
            Triple(gnode, TYPE, GEOMETRY_CLASS),
            Triple(gnode, AS_WKT, Literal(to_wkt(geom), WKT_LITERAL)),
        ]
        for name, value in sorted((feature.get("properties") or {}).items()):
            lit = property_literal(value)
            if lit is not None and re.fullmatch(r"[A-Za-z_][\w\-]*", name):
                out.append(Triple(node, Iri(EX + name), lit))
    return out


def ingest_geojson(graph: Graph, source, class_iri: str, base: str | None = None) -> int:
    """Add the features of ``source`` (a path, JSON text or parsed dict); returns triples added."""
    doc = _load_json(source)
    return graph.update(geojson_triples(doc, class_iri, IriMinter(graph, base)))


def _load_json(source):
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = Path(source).read_text(encoding="utf-8")
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise IngestError(f"invalid GeoJSON: {exc}") from None


# -- rasters -------------------------------------------------------------------------------


def raster_triples(r: Raster, class_iri: str, minter: IriMinter) -> list[Triple]:
    node, cov, scale = minter.mint("feature", "coverage", "scale")
    return [
        Triple(node, TYPE, Iri(class_iri)),
        Triple(node, HAS_COVERAGE, cov),
        Triple(node, AS_COVERAGE, cov),
        Triple(cov, TYPE, RASTER_CLASS),
        Triple(cov, AS_COVERAGE_JSON, Literal(write_coverage_json(r), COVJSON_LITERAL)),
        Triple(cov, HAS_SCALE, scale),
        Triple(scale, TYPE, SCALE_CLASS),
        Triple(scale, UNIT_LABEL, Literal(r.scale.unit_label)),
        Triple(scale, SCALE_KIND, Literal(r.scale.kind)),
        Triple(scale, NODATA, Literal(repr(r.nodata), XSD_DOUBLE)),
    ]


def ingest_raster(graph: Graph, r: Raster, class_iri: str, unit_label: str | None = None,
                  base: str | None = None) -> int:
    if unit_label is not None:
        r = Raster(r.origin_x, r.origin_y, r.cell_width, r.cell_height, r.values,
                   Scale(r.scale.kind, unit_label, r.nodata))
    return graph.update(raster_triples(r, class_iri, IriMinter(graph, base)))


def ingest_asc(graph: Graph, source, class_iri: str, unit_label: str = "",
               base: str | None = None) -> int:
    """Add an ESRI ASCII grid given as a path or as grid text."""
    text = source
    if isinstance(source, Path) or "\n" not in str(source):
        text = Path(source).read_text(encoding="utf-8")
    return ingest_raster(graph, parse_asc_grid(text), class_iri, unit_label, base)
