"""The four hazard-analysis queries shipped with the synthetic corpus.

``QUERIES`` maps a short name to query text ready to run. The evacuation
query declares its ``ear:`` prefix and tests the element-at-risk geometry
literal, and the coverage query binds its location first and divides by the
area of the raster domain. ``UNCORRECTED`` holds variants without those fixes
for parser tests.
"""

FLOOD_ROADS = """\
SELECT ?road WHERE {
?road a ex:Road ; geo:hasGeometry ?roadseg . ?roadseg geo:asWKT ?roadseg_wkt .
?floodarea a ex:FloodRiskArea ; geo2:asCoverage ?floodarea_cov .
?floodarea_cov geo2:asCoverageJSON ?floodarea_covjson .
BIND(geo2:rasterSmaller(?floodarea_covjson,10) AS ?relfloodarea)
FILTER(geo2:intersects(?roadseg_wkt,?relfloodarea))}
"""

BUILDING_RISK = """\
SELECT ?building (MAX(?riskvalue) AS ?riskmax) WHERE {
?building a ex:Building ; geo:hasGeometry ?building_geom .
?building_geom geo:asWKT ?building_wkt .
?floodarea a ex:FloodRiskArea ; geo2:hasCoverage ?floodcov.
?floodcov geo2:asCoverageJSON ?floodcov_covjson .
?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov.
?firecov geo2:asCoverageJSON ?firecov_covjson .
BIND (geo2:rasterPlus(?firecov_covjson,?floodcov_covjson) AS ?riskarea)
BIND (geo2:cellval2(geo2:rasterIntersection(?building_wkt,?riskarea)) AS ?riskvalue)
FILTER(geo2:intersects(?building_wkt,?riskarea))}
"""

_EVACUATION_BODY = """\
SELECT ?road WHERE{
?road a ex:Road ; geo:hasGeometry ?roadgeom . ?roadgeom geo:asWKT ?road_wkt .
?ear a ear:ElementAtRisk ; geo:hasGeometry ?eargeom ; ex:openTime ?earopen ; ex:closeTime ?earclose .
?eargeom geo:asWKT ?ear_wkt .
?floodarea a ex:FloodRiskArea ; geo2:hasCoverage ?floodcov. ?floodcov geo2:asCoverageJSON ?floodcov_covjson .
?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov. ?firecov geo2:asCoverageJSON ?firecov_covjson .
BIND (geo2:rasterPlus(?firecov_covjson,?floodcov_covjson) AS ?riskarea)
BIND("2019-05-23T10:20:13+05:30"^^xsd:dateTime AS ?givendate)
FILTER(?givendate>?earopen AND ?givendate<?earclose)
FILTER(geo:intersects(geo:buffer(?road_wkt,2,uom:meter),{target}))
FILTER(!geo:intersects(?road_wkt,?riskarea))}
"""

EAR_NAMESPACE = "http://example.org/ear#"

EVACUATION_ROADS = f"PREFIX ear: <{EAR_NAMESPACE}>\n" + _EVACUATION_BODY.replace("{target}", "?ear_wkt")

HAZARD_COVERAGE = """\
SELECT ?hazardcoveragepercentage WHERE {
BIND("POINT(49.2,36.2)"^^geo:wktLiteral AS ?locationtocheck)
?floodarea a ex:FloodRiskArea; geo2:hasCoverage ?floodcov.
?floodcov geo2:asCoverageJSON ?floodcov_covjson .
?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov.
?firecov geo2:asCoverageJSON ?firecov_covjson .
BIND(geo2:rasterUnion(?firecov_covjson,?floodcov_covjson) AS ?hazardriskarea)
BIND(geo2:geometryIntersection(?hazardriskarea,geo:buffer(?locationtocheck,10,uom:km)) AS ?intersectarea)
BIND(geo:area(?intersectarea)/geo:area(geo2:raster2geom(?hazardriskarea)) AS ?hazardcoveragepercentage)}
"""

QUERIES = {
    "flood_roads": FLOOD_ROADS,
    "building_risk": BUILDING_RISK,
    "evacuation_roads": EVACUATION_ROADS,
    "hazard_coverage": HAZARD_COVERAGE,
}

UNCORRECTED = {
    "flood_roads": FLOOD_ROADS,
    "building_risk": BUILDING_RISK,
    "evacuation_roads": _EVACUATION_BODY.replace("{target}", "?ear"),
    "hazard_coverage": """\
SELECT ?hazardcoveragepercentage WHERE {
?floodarea a ex:FloodRiskArea; geo2:hasCoverage ?floodcov.
?floodcov geo2:asCoverageJSON ?floodcov_covjson .
?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov.
?firecov geo2:asCoverageJSON ?firecov_covjson .
BIND(geo2:rasterUnion(?firecov_covjson,?floodcov_covjson) AS ?hazardriskarea)
BIND(geo2:geometryIntersection(?hazardriskarea,geo:buffer(?locationtocheck,10,uom:km)) AS ?intersectarea)
BIND(geo:area(?intersectarea)/geo2:raster2geom(?hazardriskarea) AS ?hazardcoveragepercentage)
BIND("POINT(49.2,36.2)"^^geo:wktLiteral AS ?locationtocheck)}
""",
}
