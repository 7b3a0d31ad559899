"""Map algebra over rasters, plus raster/geometry mixing operations.

Cellwise operations are vectorized with numpy. Results always live on the
first raster's grid and scale. A computed value that happens to equal the
NODATA sentinel is moved to the next float above it so that NODATA only
ever appears where an operation rule puts it.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import (
    EPSILON,
    Geometry,
    Rectangle,
    buffer,
    distance,
    intersection,
    sf_predicate,
)
from ..namespaces import UOM_METER
from .model import Raster, RasterError, as_region, domain_rect, raster_val_eq


class AlignmentError(RasterError):
    pass


class RasterTypeError(RasterError, TypeError):
    pass


BINARY_OPS = ("plus", "subtract", "mult", "div", "and", "or", "xor", "equals")
CONST_OPS = BINARY_OPS + ("exp", "greaterKeep", "smallerKeep")
UNARY_OPS = ("not", "invert")
AGGREGATES = ("min", "max", "mean")
RELATIONS = ("coveredBy", "overlaps", "touches", "within", "equalsGeom", "equalsContent", "withinDistance")


def _finish(values: np.ndarray, computed: np.ndarray, nodata: float) -> np.ndarray:
    """Non-finite computed cells become NODATA; sentinel collisions are nudged."""
    out = values.copy()
    bad = ~np.isfinite(out)
    clash = computed & ~bad & (out == nodata)
    out[clash] = np.nextafter(nodata, math.inf)
    out[computed & bad] = nodata
    return out


def _apply(op: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        if op == "plus":
            return a + b
        if op == "subtract":
            return a - b
        if op == "mult":
            return a * b
        if op == "div":
            return np.where(b == 0, np.nan, a / np.where(b == 0, 1.0, b))
        if op == "and":
            return ((a != 0) & (b != 0)).astype(np.float64)
        if op == "or":
            return ((a != 0) | (b != 0)).astype(np.float64)
        if op == "xor":
            return ((a != 0) ^ (b != 0)).astype(np.float64)
        if op == "equals":
            return (a == b).astype(np.float64)
        if op == "exp":
            return np.power(a, b)
    raise RasterError(f"unknown raster operation {op!r}")


def cellwise_binary(op: str, r1: Raster, r2: Raster) -> Raster:
    if op not in BINARY_OPS:
        raise RasterError(f"unknown binary raster operation {op!r}")
    cx, cy = r1.cell_centers()
    i, j, inside = r2.locate(cx, cy)
    other = r2.values[j, i]
    computed = inside & r1.valid_mask() & (other != r2.nodata)
    result = np.where(computed, _apply(op, r1.values, other), r1.values)
    return r1.with_values(_finish(result, computed, r1.nodata))


def cellwise_binary_const(op: str, r: Raster, c: float) -> Raster:
    if op not in CONST_OPS:
        raise RasterError(f"unknown constant raster operation {op!r}")
    c = float(c)
    valid = r.valid_mask()
    if op == "smallerKeep":
        return r.with_values(np.where(valid & (r.values < c), r.values, r.nodata))
    if op == "greaterKeep":
        return r.with_values(np.where(valid & (r.values > c), r.values, r.nodata))
    result = np.where(valid, _apply(op, r.values, np.full_like(r.values, c)), r.nodata)
    return r.with_values(_finish(result, valid, r.nodata))


def cellwise_unary(op: str, r: Raster) -> Raster:
    valid = r.valid_mask()
    if op == "not":
        result = np.where(r.values != 0, 0.0, 1.0)
    elif op == "invert":
        result = -r.values
    else:
        raise RasterError(f"unknown unary raster operation {op!r}")
    result = np.where(valid, result, r.nodata)
    return r.with_values(_finish(result, valid, r.nodata))


def aggregate(op: str, r: Raster) -> float:
    vals = r.values[r.valid_mask()]
    if vals.size == 0:
        raise RasterError(f"raster {op} of a raster without valid cells")
    if op == "min":
        return float(vals.min())
    if op == "max":
        return float(vals.max())
    if op == "mean":
        return math.fsum(vals.tolist()) / vals.size
    raise RasterError(f"unknown raster aggregate {op!r}")


def _raster_and_region(a, b) -> tuple[Raster, Geometry]:
    if isinstance(a, Raster):
        return a, as_region(b)
    if isinstance(b, Raster):
        return b, a
    raise RasterTypeError("needs at least one raster argument")


def raster_intersection(a, b) -> Raster:
    """Keep the cells of the first raster argument that meet the other argument.

    A cell is kept when its overlap with the other region has the region's
    full dimension (area for polygons and raster domains, length for lines).
    """
    r, region = _raster_and_region(a, b)
    keep = r.cells_covering(region)
    return r.with_values(np.where(keep, r.values, r.nodata))


def _aligned(a: Raster, b: Raster) -> bool:
    return a.values.shape == b.values.shape and all(
        abs(p - q) <= EPSILON
        for p, q in zip(
            (a.origin_x, a.origin_y, a.cell_width, a.cell_height),
            (b.origin_x, b.origin_y, b.cell_width, b.cell_height),
        )
    )


def raster_union(a, b) -> Raster:
    """Merge two aligned rasters, or drop the cells a geometry selects."""
    if isinstance(a, Raster) and isinstance(b, Raster):
        if not _aligned(a, b):
            raise AlignmentError("raster union needs rasters on the same grid")
        take_b = ~a.valid_mask() & b.valid_mask()
        result = np.where(take_b, b.values, a.values)
        return a.with_values(_finish(result, take_b, a.nodata))
    r, region = _raster_and_region(a, b)
    drop = r.cells_covering(region)
    return r.with_values(np.where(drop, r.nodata, r.values))


def geometry_intersection(a, b) -> Geometry:
    return intersection(as_region(a), as_region(b))


def geom2raster(g: Geometry, value: float, n_cols: float, n_rows: float) -> Raster:
    if isinstance(g, Raster):
        raise RasterTypeError("geom2raster expects a geometry")
    cols, rows = float(n_cols), float(n_rows)
    if not (cols.is_integer() and rows.is_integer()) or cols < 1 or rows < 1:
        raise RasterError(f"cell counts must be positive integers, got {n_cols} x {n_rows}")
    cols, rows = int(cols), int(rows)
    dom = buffer(g, 1.0, UOM_METER)
    grid = Raster(
        dom.xmin, dom.ymin, dom.width / cols, dom.height / rows, np.zeros((rows, cols))
    )
    hit = grid.cells_covering(g)
    values = np.where(hit, float(value), grid.nodata)
    return grid.with_values(_finish(values, hit, grid.nodata))


def raster_relation(pred: str, a, b, d: float | None = None) -> bool:
    if not isinstance(a, Raster) and not isinstance(b, Raster):
        raise RasterTypeError("raster relation needs at least one raster argument")
    if pred == "equalsContent":
        if not (isinstance(a, Raster) and isinstance(b, Raster)):
            raise RasterTypeError("content equality compares two rasters")
        return raster_val_eq(a, b)
    ga, gb = as_region(a), as_region(b)
    if pred == "equalsGeom":
        return sf_predicate("equals", ga, gb)
    if pred == "withinDistance":
        if d is None:
            raise RasterError("withinDistance needs a distance")
        return distance(ga, gb) <= float(d)
    if pred in ("coveredBy", "overlaps", "touches", "within"):
        return sf_predicate(pred, ga, gb)
    raise RasterError(f"unknown raster relation {pred!r}")


def rescale(r: Raster, n_cols: float, n_rows: float) -> Raster:
    """Nearest-neighbour resample onto an ``n_cols`` x ``n_rows`` grid over the same domain."""
    cols, rows = float(n_cols), float(n_rows)
    if not (cols.is_integer() and rows.is_integer()) or cols < 1 or rows < 1:
        raise RasterError(f"target size must be positive integers, got {n_cols} x {n_rows}")
    cols, rows = int(cols), int(rows)
    if (cols, rows) == (r.n_cols, r.n_rows):
        return r
    dom: Rectangle = domain_rect(r)
    target = Raster(dom.xmin, dom.ymin, dom.width / cols, dom.height / rows, np.zeros((rows, cols)), r.scale)
    cx, cy = target.cell_centers()
    i, j, _ = r.locate(cx, cy)
    return target.with_values(r.values[j, i])
