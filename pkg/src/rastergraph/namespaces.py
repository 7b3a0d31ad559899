"""IRI namespaces shared by the store, the query parser and ingestion."""

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"
GEO = "http://www.opengis.net/ont/geosparql#"
GEOF = "http://www.opengis.net/def/function/geosparql/"
GEO2 = "http://example.org/geo2#"
EX = "http://example.org/ex#"
UOM = "http://www.opengis.net/def/uom/OGC/1.0/"
OM = "http://www.ontology-of-units-of-measure.org/resource/om-2/"

RDF_TYPE = RDF + "type"
RDF_LANGSTRING = RDF + "langString"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_FLOAT = XSD + "float"
XSD_BOOLEAN = XSD + "boolean"
XSD_DATETIME = XSD + "dateTime"

NUMERIC_DATATYPES = frozenset(
    XSD + name
    for name in (
        "integer", "decimal", "double", "float", "int", "long", "short", "byte",
        "nonNegativeInteger", "positiveInteger", "negativeInteger",
        "nonPositiveInteger", "unsignedInt", "unsignedLong", "unsignedShort",
        "unsignedByte",
    )
)

WKT_LITERAL = GEO + "wktLiteral"
# The raster datatype IRIs are not fixed by any standard vocabulary.
COVJSON_LITERAL = GEO2 + "covJSONLiteral"
RASTER_HEXWKB_LITERAL = GEO2 + "rasterHexWKBLiteral"

UOM_METER = UOM + "metre"
UOM_METER_IRIS = frozenset({UOM + "meter", UOM_METER})
UOM_KM_IRIS = frozenset({UOM + "km", UOM + "kilometre", UOM + "kilometer"})

# Canonical prefix table available to every query without PREFIX declarations.
DEFAULT_PREFIXES = {
    "geo": GEO,
    "geof": GEOF,
    "geo2": GEO2,
    "ex": EX,
    "rdf": RDF,
    "xsd": XSD,
    "uom": UOM,
}
