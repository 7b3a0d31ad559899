from .algebra import (
    AGGREGATES,
    BINARY_OPS,
    CONST_OPS,
    RELATIONS,
    UNARY_OPS,
    AlignmentError,
    RasterTypeError,
    aggregate,
    cellwise_binary,
    cellwise_binary_const,
    cellwise_unary,
    geom2raster,
    geometry_intersection,
    raster_intersection,
    raster_relation,
    raster_union,
    rescale,
)
from .io import (
    AscGridError,
    CoverageJsonError,
    HexWkbError,
    NonUniformSpacingError,
    RasterFormatError,
    ShapeMismatchError,
    parse_asc_grid,
    parse_coverage_json,
    parse_raster_hex_wkb,
    write_asc_grid,
    write_coverage_json,
    write_raster_hex_wkb,
)
from .model import (
    DEFAULT_NODATA,
    Cell,
    OutOfDomainError,
    Raster,
    RasterError,
    Scale,
    accessor,
    as_region,
    cellval,
    cellval2,
    domain_rect,
    raster_val_eq,
)
