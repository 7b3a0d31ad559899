import json
import struct
from pathlib import Path

import numpy as np
import pytest

from rastergraph.raster import (
    AscGridError,
    CoverageJsonError,
    HexWkbError,
    NonUniformSpacingError,
    Raster,
    RasterFormatError,
    Scale,
    ShapeMismatchError,
    parse_asc_grid,
    parse_coverage_json,
    parse_raster_hex_wkb,
    raster_val_eq,
    write_asc_grid,
    write_coverage_json,
    write_raster_hex_wkb,
)

FIXTURES = Path(__file__).parent / "fixtures"
NODATA = -9999.0


def _same(a: Raster, b: Raster) -> bool:
    return (
        (a.origin_x, a.origin_y, a.cell_width, a.cell_height) == (b.origin_x, b.origin_y, b.cell_width, b.cell_height)
        and a.values.shape == b.values.shape
        and a.values.tobytes() == b.values.tobytes()
        and a.nodata == b.nodata
    )


# -- CoverageJSON -------------------------------------------------------------------------


def test_malformed_flood_document_is_not_json():
    with pytest.raises(CoverageJsonError, match="invalid JSON"):
        parse_coverage_json((FIXTURES / "covjson_flood_malformed.txt").read_text())


def test_flood_document_with_three_x_values_is_a_shape_mismatch():
    with pytest.raises(ShapeMismatchError) as err:
        parse_coverage_json((FIXTURES / "covjson_flood_wellformed.json").read_text())
    assert "x has 3 values" in str(err.value)


def test_corrected_flood_document():
    r = parse_coverage_json((FIXTURES / "covjson_flood_corrected.json").read_text())
    assert (r.n_cols, r.n_rows) == (2, 2)
    assert (r.cell_width, r.cell_height) == (5.0, 10.0)
    assert (r.origin_x, r.origin_y) == (-12.5, 35.0)
    assert r.flat_values() == [0.5, 0.6, 0.4, 0.6]


def _doc(**overrides):
    doc = {
        "type": "Coverage",
        "domain": {"type": "Domain", "domainType": "Grid",
                   "axes": {"x": {"values": [0.5, 1.5]}, "y": {"values": [0.5, 1.5]}}},
        "ranges": {"v": {"type": "NdArray", "axisNames": ["y", "x"], "shape": [2, 2], "values": [1, 2, 3, 4]}},
    }
    for path, value in overrides.items():
        target = doc
        keys = path.split("__")
        for k in keys[:-1]:
            target = target[k]
        target[keys[-1]] = value
    return json.dumps(doc)


def test_minimal_document_gives_raster_a(raster_a):
    assert raster_val_eq(parse_coverage_json(_doc()), raster_a)


def test_null_values_become_nodata():
    r = parse_coverage_json(_doc(ranges__v__values=[1, None, 3, None]))
    assert r.flat_values() == [1.0, NODATA, 3.0, NODATA]


def test_x_major_axis_order(raster_a):
    r = parse_coverage_json(_doc(ranges__v__axisNames=["x", "y"], ranges__v__values=[1, 3, 2, 4]))
    assert raster_val_eq(r, raster_a)


def test_descending_y_axis(raster_a):
    r = parse_coverage_json(_doc(domain__axes__y={"values": [1.5, 0.5]}, ranges__v__values=[3, 4, 1, 2]))
    assert raster_val_eq(r, raster_a)


def test_start_stop_num_axes(raster_a):
    r = parse_coverage_json(_doc(domain__axes__x={"start": 0.5, "stop": 1.5, "num": 2}))
    assert raster_val_eq(r, raster_a)


@pytest.mark.parametrize(
    "overrides, error",
    [
        (dict(type="Point"), CoverageJsonError),
        (dict(domain__domainType="PointSeries"), CoverageJsonError),
        (dict(domain__axes__x={"values": [0.5, 1.5, 4.0]}, ranges__v__shape=[2, 3],
              ranges__v__values=[1, 2, 3, 4, 5, 6]), NonUniformSpacingError),
        (dict(ranges__v__values=[1, 2, 3]), ShapeMismatchError),
        (dict(ranges__v__values=[1, 2, 3, "x"]), CoverageJsonError),
        (dict(ranges__v__axisNames=["t", "x"]), CoverageJsonError),
        (dict(domain__axes__x={"values": [0.5]}, ranges__v__shape=[2, 1], ranges__v__values=[1, 2]), CoverageJsonError),
    ],
)
def test_malformed_documents(overrides, error):
    with pytest.raises(error):
        parse_coverage_json(_doc(**overrides))


def test_single_cell_axis_with_bounds():
    r = Raster.from_rows((3.0, 4.0), (2.0, 0.5), 1, 1, [7.0])
    back = parse_coverage_json(write_coverage_json(r))
    assert _same(r, back)


def test_writer_layout_is_plain_json(raster_sparse):
    doc = json.loads(write_coverage_json(raster_sparse))
    (rng,) = doc["ranges"].values()
    assert rng["shape"] == [2, 2]
    assert rng["values"] == [1.0, None, 3.0, None]
    assert doc["domain"]["axes"]["x"]["values"] == [0.5, 1.5]


@pytest.mark.parametrize("fixture", ["raster_a", "raster_sparse"])
def test_covjson_round_trip(fixture, request):
    r = request.getfixturevalue(fixture)
    back = parse_coverage_json(write_coverage_json(r))
    assert _same(r, back)


def test_covjson_round_trip_corrected_flood():
    r = parse_coverage_json((FIXTURES / "covjson_flood_corrected.json").read_text())
    assert _same(parse_coverage_json(write_coverage_json(r)), r)


def test_scale_metadata_survives():
    r = Raster.from_rows((0, 0), 1.0, 1, 1, [2.0], Scale("ordinal", "cm", -1.0))
    back = parse_coverage_json(write_coverage_json(r))
    assert back.scale == r.scale


# -- ESRI ASCII -----------------------------------------------------------------------------

ASC_A = """ncols 2
nrows 2
xllcorner 0
yllcorner 0
cellsize 1
3 4
1 2
"""


def test_asc_rows_run_top_down(raster_a):
    assert raster_val_eq(parse_asc_grid(ASC_A), raster_a)


def test_asc_nodata_cell():
    r = parse_asc_grid(ASC_A.replace("cellsize 1\n", "cellsize 1\nNODATA_value -9999\n").replace("3 4", "3 -9999"))
    assert r.values[1, 1] == NODATA
    assert not r.valid_mask()[1, 1]


def test_asc_custom_nodata_and_center_origin():
    text = "NCOLS 1\nNROWS 1\nXLLCENTER 0.5\nYLLCENTER 0.5\nCELLSIZE 1\nNODATA_VALUE -1\n-1\n"
    r = parse_asc_grid(text)
    assert (r.origin_x, r.origin_y, r.nodata) == (0.0, 0.0, -1.0)
    assert not r.valid_mask().any()


def test_asc_column_count_mismatch():
    with pytest.raises(AscGridError) as err:
        parse_asc_grid(ASC_A.replace("1 2\n", "1 2 5\n"))
    assert err.value.line == 7


@pytest.mark.parametrize("text", [ASC_A.replace("cellsize 1\n", ""), ASC_A + "5 6\n", ASC_A.replace("3 4", "3 x")])
def test_asc_errors(text):
    with pytest.raises(AscGridError):
        parse_asc_grid(text)


def test_asc_round_trip(raster_sparse):
    assert _same(parse_asc_grid(write_asc_grid(raster_sparse)), raster_sparse)


def test_asc_needs_square_cells():
    with pytest.raises(RasterFormatError):
        write_asc_grid(Raster.from_rows((0, 0), (1.0, 2.0), 1, 1, [1.0]))


# -- hex WKB ----------------------------------------------------------------------------------


def test_hex_wkb_deterministic():
    r = Raster.from_rows((0, 0), 1.0, 1, 1, [0.0])
    first = write_raster_hex_wkb(r)
    assert first == write_raster_hex_wkb(Raster.from_rows((0, 0), 1.0, 1, 1, [0.0]))
    assert first == first.upper()


def test_hex_wkb_layout_decoded_by_hand(raster_a):
    data = bytes.fromhex(write_raster_hex_wkb(raster_a))
    head = struct.unpack_from("<HHddddHHd", data)
    assert head == (0, 1, 1.0, 1.0, 0.0, 0.0, 2, 2, NODATA)
    body = struct.unpack_from("<4d", data, struct.calcsize("<HHddddHHd"))
    assert body == (1.0, 2.0, 3.0, 4.0)


def test_hex_wkb_differs_when_a_cell_differs(raster_a):
    other = raster_a.with_values(np.array([[1.0, 2.0], [3.0, 4.5]]))
    assert write_raster_hex_wkb(raster_a) != write_raster_hex_wkb(other)


@pytest.mark.parametrize("fixture", ["raster_a", "raster_sparse"])
def test_hex_wkb_round_trip(fixture, request):
    r = request.getfixturevalue(fixture)
    assert _same(parse_raster_hex_wkb(write_raster_hex_wkb(r)), r)


@pytest.mark.parametrize("text", ["zz", "0000", write_raster_hex_wkb(Raster.from_rows((0, 0), 1.0, 1, 1, [1.0]))[:-2]])
def test_hex_wkb_errors(text):
    with pytest.raises(HexWkbError):
        parse_raster_hex_wkb(text)


def test_hex_wkb_rejects_other_versions(raster_a):
    data = bytearray(bytes.fromhex(write_raster_hex_wkb(raster_a)))
    data[0] = 7
    with pytest.raises(HexWkbError, match="version"):
        parse_raster_hex_wkb(data.hex())


def test_exact_grid_member_keeps_cell_size_bits():
    r = Raster.from_rows((-97544.35052040491, 12.3), (392.84343317712705, 0.1), 3, 2, [1, 2, 3, 4, 5, 6])
    assert _same(parse_coverage_json(write_coverage_json(r)), r)


def test_exact_grid_member_ignored_when_axes_disagree(raster_a):
    doc = json.loads(write_coverage_json(raster_a))
    doc["rastergraph:grid"] = {"origin": [100.0, 100.0], "cellSize": [1.0, 1.0]}
    back = parse_coverage_json(json.dumps(doc))
    assert (back.origin_x, back.origin_y) == (0.0, 0.0)
