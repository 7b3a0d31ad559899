"""Raster serializations: CoverageJSON grids, ESRI ASCII grids, hex raster WKB.

CoverageJSON axis ``values`` are read as cell centers with uniform spacing.
Written documents additionally carry per-axis ``bounds`` (needed for
single-cell axes), a ``rastergraph:scale`` member holding the scale kind
and NODATA value, and a ``rastergraph:grid`` member with the exact origin and
cell size; all three are optional on input.
"""

from __future__ import annotations

import json
import math
import struct

import numpy as np

from .model import DEFAULT_NODATA, Raster, RasterError, Scale

SPACING_RTOL = 1e-9
SCALE_MEMBER = "rastergraph:scale"
GRID_MEMBER = "rastergraph:grid"


class RasterFormatError(RasterError):
    pass


class CoverageJsonError(RasterFormatError):
    """Structural problem in a CoverageJSON document."""


class ShapeMismatchError(CoverageJsonError):
    pass


class NonUniformSpacingError(CoverageJsonError):
    pass


class AscGridError(RasterFormatError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class HexWkbError(RasterFormatError):
    pass


# -- CoverageJSON ------------------------------------------------------------

def _require(obj, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise CoverageJsonError(f"missing field {where}.{key}")
    return obj[key]


def _axis_values(axes: dict, name: str) -> list[float]:
    axis = _require(axes, name, "domain.axes")
    if not isinstance(axis, dict):
        raise CoverageJsonError(f"domain.axes.{name} must be an object")
    if "values" in axis:
        values = axis["values"]
        if not isinstance(values, list) or not values or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise CoverageJsonError(f"domain.axes.{name}.values must be a non-empty numeric array")
        return [float(v) for v in values]
    if {"start", "stop", "num"} <= axis.keys():
        num = axis["num"]
        if not isinstance(num, int) or num < 1:
            raise CoverageJsonError(f"domain.axes.{name}.num must be a positive integer")
        return [float(v) for v in np.linspace(axis["start"], axis["stop"], num)]
    raise CoverageJsonError(f"domain.axes.{name} needs 'values' or 'start'/'stop'/'num'")


def _axis_layout(axes: dict, name: str, centers: list[float]) -> tuple[float, float, bool]:
    """Return ``(origin, cell_size, descending)`` for one axis."""
    bounds = axes[name].get("bounds")
    n = len(centers)
    if bounds is not None:
        if not isinstance(bounds, list) or len(bounds) != 2 * n:
            raise CoverageJsonError(f"domain.axes.{name}.bounds must hold two numbers per axis value")
        lo = min(bounds[0], bounds[1], bounds[-2], bounds[-1])
        hi = max(bounds[0], bounds[1], bounds[-2], bounds[-1])
        size = (hi - lo) / n
        descending = n > 1 and centers[1] < centers[0]
        if size <= 0:
            raise CoverageJsonError(f"domain.axes.{name}.bounds are degenerate")
        return float(lo), float(size), descending
    if n == 1:
        raise CoverageJsonError(f"cannot infer cell size of single-value axis {name!r} without bounds")
    steps = np.diff(centers)
    step = (centers[-1] - centers[0]) / (n - 1)
    if step == 0 or np.any(np.abs(steps - step) > SPACING_RTOL * max(abs(step), 1e-300)):
        raise NonUniformSpacingError(f"axis {name!r} values are not uniformly spaced: {centers}")
    size = abs(step)
    low_center = min(centers[0], centers[-1])
    return low_center - size / 2.0, size, step < 0


def _exact_grid(member, approx, n_cols: int, n_rows: int):
    """Origin and cell size written by this module, used when they agree with the axes.

    Axis bounds only pin the cell size to within rounding; the member keeps it bit-exact.
    """
    if not isinstance(member, dict):
        return None
    try:
        x0, y0 = (float(v) for v in member["origin"])
        cw, ch = (float(v) for v in member["cellSize"])
    except (KeyError, TypeError, ValueError):
        return None
    ax0, ay0, acw, ach = approx
    extent = max(abs(ax0) + n_cols * acw, abs(ay0) + n_rows * ach)
    tol = SPACING_RTOL * max(extent, 1.0)
    close = (abs(x0 - ax0) <= tol and abs(y0 - ay0) <= tol
             and abs(cw - acw) * n_cols <= tol and abs(ch - ach) * n_rows <= tol)
    return (x0, y0, cw, ch) if close and cw > 0 and ch > 0 else None


def _label(obj) -> str:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        if "en" in obj:
            return str(obj["en"])
        for v in obj.values():
            return str(v)
    return ""


def parse_coverage_json(text: str) -> Raster:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CoverageJsonError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "Coverage":
        raise CoverageJsonError("document type must be 'Coverage'")
    domain = _require(doc, "domain", "coverage")
    domain_type = _require(domain, "domainType", "domain")
    if domain_type != "Grid":
        raise CoverageJsonError(f"domain.domainType must be 'Grid', got {domain_type!r}")
    axes = _require(domain, "axes", "domain")
    xs = _axis_values(axes, "x")
    ys = _axis_values(axes, "y")

    ranges = _require(doc, "ranges", "coverage")
    if not isinstance(ranges, dict) or len(ranges) != 1:
        raise CoverageJsonError("coverage must hold exactly one range")
    (range_key, nd), = ranges.items()
    if not isinstance(nd, dict) or nd.get("type") != "NdArray":
        raise CoverageJsonError(f"ranges.{range_key}.type must be 'NdArray'")
    axis_names = _require(nd, "axisNames", f"ranges.{range_key}")
    if axis_names not in (["y", "x"], ["x", "y"]):
        raise CoverageJsonError(f"ranges.{range_key}.axisNames must be ['y','x'], got {axis_names!r}")
    shape = _require(nd, "shape", f"ranges.{range_key}")
    values = _require(nd, "values", f"ranges.{range_key}")
    if not isinstance(shape, list) or len(shape) != 2 or not all(isinstance(s, int) for s in shape):
        raise CoverageJsonError(f"ranges.{range_key}.shape must be two integers")
    expected_shape = [len(ys), len(xs)] if axis_names == ["y", "x"] else [len(xs), len(ys)]
    if shape != expected_shape:
        raise ShapeMismatchError(
            f"shape mismatch: ranges.{range_key}.shape is {shape} but axes give "
            f"{dict(zip(axis_names, expected_shape))} (x has {len(xs)} values, y has {len(ys)})"
        )
    if not isinstance(values, list) or len(values) != shape[0] * shape[1]:
        n = len(values) if isinstance(values, list) else "no"
        raise ShapeMismatchError(f"shape mismatch: shape {shape} needs {shape[0] * shape[1]} values, got {n}")

    x0, cw, x_desc = _axis_layout(axes, "x", xs)
    y0, ch, y_desc = _axis_layout(axes, "y", ys)
    exact = _exact_grid(doc.get(GRID_MEMBER), (x0, y0, cw, ch), len(xs), len(ys))
    if exact is not None:
        x0, y0, cw, ch = exact

    meta = doc.get(SCALE_MEMBER, {}) if isinstance(doc.get(SCALE_MEMBER), dict) else {}
    nodata = float(meta.get("nodata", DEFAULT_NODATA))
    kind = meta.get("kind", "ratio")
    unit_label = ""
    params = doc.get("parameters")
    if isinstance(params, dict) and isinstance(params.get(range_key), dict):
        param = params[range_key]
        unit_label = _label(param.get("observedProperty", {}).get("label")) if isinstance(
            param.get("observedProperty"), dict) else ""
    if "unitLabel" in meta:
        unit_label = str(meta["unitLabel"])

    arr = np.empty(len(values), dtype=np.float64)
    for k, v in enumerate(values):
        if v is None:
            arr[k] = nodata
        elif isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
            arr[k] = float(v)
        else:
            raise CoverageJsonError(f"range value #{k} is not a number or null: {v!r}")
    grid = arr.reshape(shape)
    if axis_names == ["x", "y"]:
        grid = grid.T
    if y_desc:
        grid = grid[::-1, :]
    if x_desc:
        grid = grid[:, ::-1]
    return Raster(x0, y0, cw, ch, grid, Scale(kind, unit_label, nodata))


def write_coverage_json(r: Raster, range_key: str = "value") -> str:
    xs = [r.origin_x + (i + 0.5) * r.cell_width for i in range(r.n_cols)]
    ys = [r.origin_y + (j + 0.5) * r.cell_height for j in range(r.n_rows)]
    x_bounds = []
    for i in range(r.n_cols):
        x_bounds += [r.origin_x + i * r.cell_width, r.origin_x + (i + 1) * r.cell_width]
    y_bounds = []
    for j in range(r.n_rows):
        y_bounds += [r.origin_y + j * r.cell_height, r.origin_y + (j + 1) * r.cell_height]
    valid = r.valid_mask()
    values = [float(v) if ok else None for v, ok in zip(r.values.ravel(), valid.ravel())]
    doc = {
        "type": "Coverage",
        "domain": {
            "type": "Domain",
            "domainType": "Grid",
            "axes": {
                "x": {"values": xs, "bounds": x_bounds},
                "y": {"values": ys, "bounds": y_bounds},
            },
            "referencing": [],
        },
        "parameters": {
            range_key: {
                "type": "Parameter",
                "observedProperty": {"label": {"en": r.scale.unit_label}},
            }
        },
        "ranges": {
            range_key: {
                "type": "NdArray",
                "dataType": "float",
                "axisNames": ["y", "x"],
                "shape": [r.n_rows, r.n_cols],
                "values": values,
            }
        },
        SCALE_MEMBER: {"kind": r.scale.kind, "nodata": r.nodata, "unitLabel": r.scale.unit_label},
        GRID_MEMBER: {"origin": [r.origin_x, r.origin_y], "cellSize": [r.cell_width, r.cell_height]},
    }
    return json.dumps(doc, separators=(",", ":"))


# -- ESRI ASCII grid -----------------------------------------------------------

_ASC_KEYS = {"ncols", "nrows", "xllcorner", "yllcorner", "xllcenter", "yllcenter", "cellsize", "nodata_value"}


def parse_asc_grid(text: str) -> Raster:
    lines = text.splitlines()
    header: dict[str, float] = {}
    k = 0
    while k < len(lines):
        parts = lines[k].split()
        if not parts:
            k += 1
            continue
        key = parts[0].lower()
        if key not in _ASC_KEYS:
            break
        if len(parts) != 2:
            raise AscGridError(f"malformed header entry {lines[k]!r}", k + 1)
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise AscGridError(f"non-numeric header value {parts[1]!r}", k + 1) from None
        k += 1
    for required in ("ncols", "nrows", "cellsize"):
        if required not in header:
            raise AscGridError(f"missing header field {required}", k + 1)
    ncols, nrows = header["ncols"], header["nrows"]
    if ncols != int(ncols) or nrows != int(nrows) or ncols < 1 or nrows < 1:
        raise AscGridError("ncols/nrows must be positive integers")
    ncols, nrows = int(ncols), int(nrows)
    size = header["cellsize"]
    if size <= 0:
        raise AscGridError("cellsize must be positive")
    if "xllcorner" in header:
        x0 = header["xllcorner"]
    elif "xllcenter" in header:
        x0 = header["xllcenter"] - size / 2.0
    else:
        raise AscGridError("missing header field xllcorner")
    if "yllcorner" in header:
        y0 = header["yllcorner"]
    elif "yllcenter" in header:
        y0 = header["yllcenter"] - size / 2.0
    else:
        raise AscGridError("missing header field yllcorner")
    nodata = header.get("nodata_value", DEFAULT_NODATA)

    rows: list[list[float]] = []
    for lineno in range(k, len(lines)):
        parts = lines[lineno].split()
        if not parts:
            continue
        if len(parts) != ncols:
            raise AscGridError(f"expected {ncols} values, found {len(parts)}", lineno + 1)
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise AscGridError(str(exc), lineno + 1) from None
    if len(rows) != nrows:
        raise AscGridError(f"expected {nrows} data rows, found {len(rows)}", len(lines))
    # file rows run top to bottom
    grid = np.array(rows[::-1], dtype=np.float64)
    return Raster(x0, y0, size, size, grid, Scale(nodata=nodata))


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e16 else repr(float(v))


def write_asc_grid(r: Raster) -> str:
    if not math.isclose(r.cell_width, r.cell_height, rel_tol=1e-12):
        raise RasterFormatError("ESRI ASCII grids need square cells")
    out = [
        f"ncols {r.n_cols}",
        f"nrows {r.n_rows}",
        f"xllcorner {r.origin_x!r}",
        f"yllcorner {r.origin_y!r}",
        f"cellsize {r.cell_width!r}",
        f"NODATA_value {_fmt(r.nodata)}",
    ]
    for row in r.values[::-1]:
        out.append(" ".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


# -- hex raster WKB --------------------------------------------------------------

# version u16, bands u16, scaleX, scaleY, originX, originY (f64), cols u16, rows u16, nodata f64
_HEADER = struct.Struct("<HHddddHHd")
WKB_VERSION = 0


def write_raster_wkb(r: Raster) -> bytes:
    if r.n_cols > 0xFFFF or r.n_rows > 0xFFFF:
        raise RasterFormatError("raster too large for the WKB layout (u16 dimensions)")
    head = _HEADER.pack(
        WKB_VERSION, 1, r.cell_width, r.cell_height, r.origin_x, r.origin_y, r.n_cols, r.n_rows, r.nodata
    )
    return head + r.values.astype("<f8").tobytes(order="C")


def write_raster_hex_wkb(r: Raster) -> str:
    return write_raster_wkb(r).hex().upper()


def parse_raster_wkb(data: bytes) -> Raster:
    if len(data) < _HEADER.size:
        raise HexWkbError(f"raster WKB needs at least {_HEADER.size} bytes, got {len(data)}")
    version, bands, sx, sy, ox, oy, cols, rows, nodata = _HEADER.unpack_from(data)
    if version != WKB_VERSION:
        raise HexWkbError(f"unsupported raster WKB version {version}")
    if bands != 1:
        raise HexWkbError(f"expected one band, got {bands}")
    expected = _HEADER.size + 8 * cols * rows
    if len(data) != expected:
        raise HexWkbError(f"raster WKB length {len(data)} does not match {cols}x{rows} grid ({expected})")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(rows, cols)
    return Raster(ox, oy, sx, sy, values.astype(np.float64), Scale(nodata=nodata))


def parse_raster_hex_wkb(text: str) -> Raster:
    try:
        data = bytes.fromhex(text.strip())
    except ValueError as exc:
        raise HexWkbError(f"invalid hex: {exc}") from None
    return parse_raster_wkb(data)
