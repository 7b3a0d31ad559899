import math

import numpy as np
import pytest

from oracles import GridOracle, binary_oracle
from rastergraph.geometry import LineString, Point, Rectangle, equals
from rastergraph.raster import (
    AlignmentError,
    Raster,
    RasterError,
    aggregate,
    cellwise_binary,
    cellwise_binary_const,
    cellwise_unary,
    domain_rect,
    geom2raster,
    geometry_intersection,
    raster_intersection,
    raster_relation,
    raster_union,
    raster_val_eq,
    rescale,
)

N = -9999.0


def flat(r):
    return r.flat_values()


def grid(values, origin=(0.0, 0.0), size=1.0, cols=2):
    return Raster.from_rows(origin, size, cols, len(values) // cols, values)


# -- cellwise binary -------------------------------------------------------------------------


def test_plus_doubles(raster_a):
    assert flat(cellwise_binary("plus", raster_a, raster_a)) == [2, 4, 6, 8]


def test_plus_zero_is_identity(raster_a):
    assert raster_val_eq(cellwise_binary("plus", raster_a, grid([0, 0, 0, 0])), raster_a)


def test_plus_on_half_overlapping_grids_matches_oracle():
    r1 = grid([1, 2, 3, 4, 5, 6, 7, 8, 9], cols=3)
    r2 = grid([10, 20, N, 40], origin=(1.0, 1.0), size=1.5)
    got = flat(cellwise_binary("plus", r1, r2))
    o1 = GridOracle(0, 0, 1, 1, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    o2 = GridOracle(1, 1, 1.5, 1.5, [[10, 20], [N, 40]])
    assert got == [v for row in binary_oracle("plus", o1, o2) for v in row]


def test_nodata_rules():
    r1 = grid([1, N, 3, 4])
    r2 = grid([10, 10, N, 10])
    assert flat(cellwise_binary("plus", r1, r2)) == [11, N, 3, 14]


def test_division_by_zero_is_nodata():
    assert flat(cellwise_binary("div", grid([1, 2, 3, 4]), grid([1, 0, 2, 0]))) == [1, N, 1.5, N]


def test_boolean_ops():
    a, b = grid([0, 0, 2, 3]), grid([0, 5, 0, -1])
    assert flat(cellwise_binary("and", a, b)) == [0, 0, 0, 1]
    assert flat(cellwise_binary("or", a, b)) == [0, 1, 1, 1]
    assert flat(cellwise_binary("xor", a, b)) == [0, 1, 1, 0]
    assert flat(cellwise_binary("equals", a, grid([0, 1, 2, 4]))) == [1, 0, 1, 0]


def test_computed_sentinel_is_nudged():
    out = cellwise_binary("plus", grid([-9998.0, 1, 1, 1]), grid([-1.0, 1, 1, 1]))
    assert out.values[0, 0] != N
    assert out.values[0, 0] == math.nextafter(N, math.inf)
    assert out.valid_mask().all()


def test_plus_and_mult_commute():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a = grid(list(rng.integers(-9, 9, 9).astype(float)), cols=3)
        b = grid(list(rng.integers(-9, 9, 9).astype(float)), cols=3)
        for op in ("plus", "mult"):
            assert flat(cellwise_binary(op, a, b)) == flat(cellwise_binary(op, b, a))


def test_domain_of_first_raster_is_kept(raster_a):
    other = grid([1, 1, 1, 1], origin=(5.0, 5.0))
    out = cellwise_binary("subtract", raster_a, other)
    assert domain_rect(out) == domain_rect(raster_a)
    assert raster_val_eq(out, raster_a)


def test_unknown_binary_op(raster_a):
    with pytest.raises(RasterError):
        cellwise_binary("modulo", raster_a, raster_a)


# -- constants and unary -----------------------------------------------------------------------


def test_smaller_keep(raster_a):
    assert flat(cellwise_binary_const("smallerKeep", raster_a, 3)) == [1, 2, N, N]


def test_plus_const_zero_and_greater_keep(raster_a):
    assert raster_val_eq(cellwise_binary_const("plus", raster_a, 0), raster_a)
    assert raster_val_eq(cellwise_binary_const("greaterKeep", raster_a, 0), raster_a)


def test_keep_with_infinite_thresholds(raster_a):
    assert raster_val_eq(cellwise_binary_const("smallerKeep", raster_a, math.inf), raster_a)
    assert raster_val_eq(cellwise_binary_const("greaterKeep", raster_a, -math.inf), raster_a)


def test_exp_is_power(raster_a):
    assert flat(cellwise_binary_const("exp", raster_a, 2)) == [1, 4, 9, 16]
    assert flat(cellwise_binary_const("exp", grid([-8, 4, N, 0]), 0.5))[1:] == [2.0, N, 0.0]


def test_not_and_invert():
    r = grid([0, 5, N, 1])
    assert flat(cellwise_unary("not", r)) == [1, 0, N, 0]
    assert flat(cellwise_unary("invert", r)) == [0, -5, N, -1]


# -- aggregates -----------------------------------------------------------------------------------


def test_aggregates(raster_a, raster_sparse):
    assert aggregate("max", raster_a) == 4
    assert aggregate("min", raster_a) == 1
    assert aggregate("mean", raster_a) == 2.5
    assert aggregate("mean", raster_sparse) == 2


def test_aggregate_of_empty_raster():
    with pytest.raises(RasterError):
        aggregate("max", grid([N, N, N, N]))


# -- intersection, union, conversions ------------------------------------------------------------------


def test_intersection_examples(raster_a):
    assert raster_val_eq(raster_intersection(raster_a, domain_rect(raster_a)), raster_a)
    assert flat(raster_intersection(raster_a, Rectangle(0, 0, 1, 1))) == [1, N, N, N]
    assert flat(raster_intersection(raster_a, Rectangle(5, 5, 6, 6))) == [N] * 4


def test_intersection_with_line_and_point(raster_a):
    assert flat(raster_intersection(raster_a, LineString(((0.5, 0.5), (0.5, 1.5))))) == [1, N, 3, N]
    # a line on the shared edge meets both closed cells along its full length
    assert flat(raster_intersection(raster_a, LineString(((1, 0.2), (1, 0.8))))) == [1, 2, N, N]
    # a polygon sharing only an edge selects nothing
    assert flat(raster_intersection(raster_a, Rectangle(2, 0, 3, 1))) == [N] * 4
    assert flat(raster_intersection(raster_a, Point(1.5, 0.5))) == [N, 2, N, N]


def test_union_examples(raster_a):
    assert raster_val_eq(raster_union(raster_a, Rectangle(5, 5, 6, 6)), raster_a)
    assert flat(raster_union(raster_a, Rectangle(0, 0, 1, 1))) == [N, 2, 3, 4]


def test_union_of_aligned_rasters():
    assert flat(raster_union(grid([1, N, N, 4]), grid([9, 2, N, 9]))) == [1, 2, N, 4]


def test_union_of_misaligned_rasters(raster_a):
    with pytest.raises(AlignmentError):
        raster_union(raster_a, grid([1, 1, 1, 1], origin=(0.5, 0.0)))


def test_intersection_and_union_partition_valid_cells():
    r = grid([1, N, 3, 4, 5, 6, N, 8, 9], cols=3)
    g = Rectangle(0.5, 0.5, 1.7, 2.2)
    kept = raster_intersection(r, g).valid_mask()
    rest = raster_union(r, g).valid_mask()
    assert not (kept & rest).any()
    assert np.array_equal(kept | rest, r.valid_mask())


def test_geometry_intersection(raster_a):
    assert equals(geometry_intersection(raster_a, raster_a), Rectangle(0, 0, 2, 2))
    assert equals(geometry_intersection(Rectangle(1, 1, 3, 3), raster_a), Rectangle(1, 1, 2, 2))


def test_geom2raster_examples():
    r = geom2raster(Rectangle(0, 0, 2, 2), 7, 2, 2)
    assert domain_rect(r) == Rectangle(-1, -1, 3, 3)
    assert flat(r) == [7, 7, 7, 7]
    p = geom2raster(Point(0, 0), 1, 1, 1)
    assert domain_rect(p) == Rectangle(-1, -1, 1, 1)
    assert flat(p) == [1]


def test_geom2raster_selects_only_overlapping_cells():
    r = geom2raster(Rectangle(0, 0, 1, 1), 5, 3, 3)
    assert flat(r) == [N, N, N, N, 5, N, N, N, N]


def test_geom2raster_rejects_fractional_counts():
    with pytest.raises(RasterError):
        geom2raster(Point(0, 0), 1, 1.5, 1)


# -- relations and rescale --------------------------------------------------------------------------


def test_relations(raster_a):
    assert raster_relation("within", raster_a, Rectangle(-1, -1, 3, 3))
    assert raster_relation("coveredBy", raster_a, Rectangle(0, 0, 2, 2))
    assert raster_relation("touches", raster_a, Rectangle(2, 0, 3, 1))
    assert raster_relation("overlaps", raster_a, Rectangle(1, 1, 3, 3))
    assert raster_relation("equalsGeom", raster_a, Rectangle(0, 0, 2, 2))
    assert raster_relation("withinDistance", raster_a, Point(5, 2), 3)
    assert not raster_relation("withinDistance", raster_a, Point(5, 2), 2.9)


def test_equals_content(raster_a):
    assert raster_relation("equalsContent", raster_a, raster_a)
    assert not raster_relation("equalsContent", raster_a, cellwise_binary_const("plus", raster_a, 1))


def test_relation_needs_a_raster():
    with pytest.raises(RasterError):
        raster_relation("within", Point(0, 0), Point(0, 0))


def test_rescale_identity_and_round_trip(raster_a):
    assert raster_val_eq(rescale(raster_a, 2, 2), raster_a)
    fine = rescale(raster_a, 4, 4)
    assert flat(fine) == [1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 4, 4, 3, 3, 4, 4]
    assert domain_rect(fine) == domain_rect(raster_a)
    assert raster_val_eq(rescale(fine, 2, 2), raster_a)
