"""Uniform rectangular rasters with a NODATA sentinel.

Layout: ``values[j, i]`` is the cell in row ``j`` and column ``i``; row 0 is
the bottom row, so y grows with ``j``. Cell ``(i, j)`` covers
``[x0 + i*cw, x0 + (i+1)*cw] x [y0 + j*ch, y0 + (j+1)*ch]``.

Point lookup is half-open: a point on an interior cell edge belongs to the
cell with the larger index, while the domain's right and top edges stay
inside the last column/row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np
import shapely

from ..geometry import EPSILON, Geometry, Rectangle, dimension, iter_flat

DEFAULT_NODATA = -9999.0
SCALE_KINDS = ("nominal", "ordinal", "interval", "ratio")


class RasterError(ValueError):
    pass


class OutOfDomainError(RasterError):
    pass


@dataclass(frozen=True)
class Scale:
    kind: str = "ratio"
    unit_label: str = ""
    nodata: float = DEFAULT_NODATA

    def __post_init__(self):
        if self.kind not in SCALE_KINDS:
            raise RasterError(f"unknown scale kind {self.kind!r}")
        object.__setattr__(self, "nodata", float(self.nodata))
        if not math.isfinite(self.nodata):
            raise RasterError("NODATA value must be finite")


class Cell(NamedTuple):
    i: int
    j: int
    geometry: Rectangle
    value: float


@dataclass(frozen=True, eq=False)
class Raster:
    origin_x: float
    origin_y: float
    cell_width: float
    cell_height: float
    values: np.ndarray
    scale: Scale = Scale()
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for name in ("origin_x", "origin_y", "cell_width", "cell_height"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise RasterError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.cell_width <= 0 or self.cell_height <= 0:
            raise RasterError("cell sizes must be positive")
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise RasterError(f"values must be a non-empty 2D grid, got shape {arr.shape}")
        # NaN has no place on a scale; treat it as missing
        arr[np.isnan(arr)] = self.scale.nodata
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_rows(cls, origin, cell_size, n_cols, n_rows, flat_values, scale: Scale | None = None) -> "Raster":
        """Build from row-major values, bottom row first."""
        flat = np.asarray(flat_values, dtype=np.float64)
        if flat.size != n_cols * n_rows:
            raise RasterError(f"expected {n_cols * n_rows} values, got {flat.size}")
        cw, ch = cell_size if isinstance(cell_size, tuple) else (cell_size, cell_size)
        return cls(origin[0], origin[1], cw, ch, flat.reshape(n_rows, n_cols), scale or Scale())

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def nodata(self) -> float:
        return self.scale.nodata

    @property
    def x_max(self) -> float:
        return self.origin_x + self.n_cols * self.cell_width

    @property
    def y_max(self) -> float:
        return self.origin_y + self.n_rows * self.cell_height

    def with_values(self, values: np.ndarray) -> "Raster":
        return Raster(self.origin_x, self.origin_y, self.cell_width, self.cell_height, values, self.scale)

    def valid_mask(self) -> np.ndarray:
        mask = self._cache.get("valid")
        if mask is None:
            mask = self.values != self.nodata
            mask.flags.writeable = False
            self._cache["valid"] = mask
        return mask

    def is_nodata(self, value: float) -> bool:
        return value == self.nodata

    def flat_values(self) -> list[float]:
        return [float(v) for v in self.values.ravel()]

    def __repr__(self) -> str:
        return (
            f"Raster({self.n_cols}x{self.n_rows} at ({self.origin_x}, {self.origin_y}), "
            f"cell {self.cell_width}x{self.cell_height}, nodata={self.nodata})"
        )

    # -- cells -----------------------------------------------------------------

    def cell_rect(self, i: int, j: int) -> Rectangle:
        if not (0 <= i < self.n_cols and 0 <= j < self.n_rows):
            raise IndexError(f"cell ({i}, {j}) outside {self.n_cols}x{self.n_rows} grid")
        # (i + 1) * cw rather than x0 + cw keeps shared edges bit-identical
        return Rectangle(
            self.origin_x + i * self.cell_width,
            self.origin_y + j * self.cell_height,
            self.origin_x + (i + 1) * self.cell_width,
            self.origin_y + (j + 1) * self.cell_height,
        )

    def cells(self) -> Iterator[Cell]:
        for j in range(self.n_rows):
            for i in range(self.n_cols):
                yield Cell(i, j, self.cell_rect(i, j), float(self.values[j, i]))

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Grids ``(cx, cy)`` of shape (n_rows, n_cols)."""
        xs = self.origin_x + (np.arange(self.n_cols) + 0.5) * self.cell_width
        ys = self.origin_y + (np.arange(self.n_rows) + 0.5) * self.cell_height
        return np.meshgrid(xs, ys)

    def locate(self, x, y):
        """Vectorized half-open cell lookup.

        Returns ``(i, j, inside)``; ``i``/``j`` are only meaningful where
        ``inside`` is true.
        """
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        inside = (x >= self.origin_x) & (x <= self.x_max) & (y >= self.origin_y) & (y <= self.y_max)
        i = np.clip(np.floor((x - self.origin_x) / self.cell_width), 0, self.n_cols - 1).astype(np.int64)
        j = np.clip(np.floor((y - self.origin_y) / self.cell_height), 0, self.n_rows - 1).astype(np.int64)
        return i, j, inside

    def cell_boxes(self) -> np.ndarray:
        """Shapely boxes for every cell, flattened row-major."""
        boxes = self._cache.get("boxes")
        if boxes is None:
            xs = self.origin_x + np.arange(self.n_cols + 1) * self.cell_width
            ys = self.origin_y + np.arange(self.n_rows + 1) * self.cell_height
            x0, y0 = np.meshgrid(xs[:-1], ys[:-1])
            x1, y1 = np.meshgrid(xs[1:], ys[1:])
            boxes = shapely.box(x0.ravel(), y0.ravel(), x1.ravel(), y1.ravel())
            self._cache["boxes"] = boxes
        return boxes

    def cell_tree(self) -> shapely.STRtree:
        tree = self._cache.get("tree")
        if tree is None:
            tree = shapely.STRtree(self.cell_boxes())
            self._cache["tree"] = tree
        return tree

    def cells_meeting(self, g: Geometry) -> np.ndarray:
        """Boolean grid of cells that share a closed-set point with ``g``."""
        mask = np.zeros(self.values.size, dtype=bool)
        if not g.is_empty():
            idx = self.cell_tree().query(g.to_shapely(), predicate="dwithin", distance=EPSILON)
            mask[idx] = True
        return mask.reshape(self.values.shape)

    def cells_covering(self, g: Geometry) -> np.ndarray:
        """Boolean grid of cells whose intersection with ``g`` keeps ``g``'s dimension.

        A polygon selects the cells it overlaps in area, a line the cells it
        runs through for a positive length, a point every cell containing it.
        Contacts of lower dimension (a polygon sharing only an edge with a
        cell) do not select the cell.
        """
        mask = np.zeros(self.values.size, dtype=bool)
        boxes = self.cell_boxes()
        tree = self.cell_tree()
        for part in iter_flat(g):
            if part.is_empty():
                continue
            shape = part.to_shapely()
            dim = dimension(part)
            candidates = tree.query(shape, predicate="intersects")
            if candidates.size == 0:
                continue
            if dim == 0:
                mask[candidates] = True
                continue
            matrices = shapely.relate(boxes[candidates], shape)
            want = str(dim)
            # DE-9IM positions 0 (interior/interior) and 3 (boundary/interior)
            hit = np.fromiter((m[0] == want or m[3] == want for m in matrices), dtype=bool, count=len(matrices))
            mask[candidates[hit]] = True
        return mask.reshape(self.values.shape)

    def valid_meets(self, g: Geometry) -> bool:
        """True when ``g`` touches or enters any non-NODATA cell."""
        if g.is_empty():
            return False
        idx = self.cell_tree().query(g.to_shapely(), predicate="dwithin", distance=EPSILON)
        return bool(self.valid_mask().ravel()[idx].any())

    def valid_region_meets_raster(self, other: "Raster") -> bool:
        """Closed valid-cell regions of two rasters share at least one point."""
        mine = self.valid_mask().ravel()
        theirs = other.valid_mask().ravel()
        if not mine.any() or not theirs.any():
            return False
        a = self.cell_boxes()[mine]
        b = other.cell_boxes()[theirs]
        tree = shapely.STRtree(b)
        pairs = tree.query(a, predicate="dwithin", distance=EPSILON)
        return pairs.shape[1] > 0


def domain_rect(r: Raster) -> Rectangle:
    return Rectangle(r.origin_x, r.origin_y, r.x_max, r.y_max)


def cellval(r: Raster, x: float, y: float) -> float:
    i, j, inside = r.locate(x, y)
    if not bool(inside):
        raise OutOfDomainError(f"({x}, {y}) lies outside the raster domain {domain_rect(r)}")
    return float(r.values[int(j), int(i)])


def cellval2(r: Raster) -> list[float]:
    """All non-NODATA values, row-major from the bottom row."""
    return [float(v) for v in r.values[r.valid_mask()]]


def raster_val_eq(a: Raster, b: Raster) -> bool:
    if a.values.shape != b.values.shape:
        return False
    da, db = domain_rect(a), domain_rect(b)
    if any(abs(p - q) > EPSILON for p, q in zip(
        (da.xmin, da.ymin, da.xmax, da.ymax), (db.xmin, db.ymin, db.xmax, db.ymax)
    )):
        return False
    va, vb = a.valid_mask(), b.valid_mask()
    if not np.array_equal(va, vb):
        return False
    return bool(np.array_equal(a.values[va], b.values[vb]))


def accessor(r: Raster, which: str, *args: float):
    if which == "width":
        return float(r.n_cols)
    if which == "height":
        return float(r.n_rows)
    if which == "cellWidth":
        return r.cell_width
    if which == "cellHeight":
        return r.cell_height
    if which == "envelope":
        return domain_rect(r)
    if which == "cellAt":
        x, y = args
        return cellval(r, x, y)
    raise RasterError(f"unknown accessor {which!r}")


def as_region(g) -> Geometry:
    """Rasters stand in for their domain rectangle in geometric contexts."""
    if isinstance(g, Raster):
        return domain_rect(g)
    return g

