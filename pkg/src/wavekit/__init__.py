"""wavekit: simple wavelet sets as exact polytope unions.

Constructs finite unions of convex polytopes that tile space both under
integer translation and under dilation by a scalar or matrix, and verifies
both tiling conditions exactly over the rationals (with Monte Carlo
cross-checks).  All values are immutable and all functions pure, so the API
is safe to drive from multiple threads.
"""

__version__ = "0.1.0"

from .construct import (
    ConstructionParams,
    ConstructionTrace,
    apply_unimodular,
    build_matrix,
    build_negative_scalar,
    build_positive_scalar,
    notched_cube_region,
    notched_parallelotope_region,
    run_construction,
    stein_lattice,
    w_vector,
)
from .errors import (
    ComplexityGuardError,
    ConstructionError,
    DimensionError,
    InfiniteRangeError,
    ModeError,
    ParameterError,
    SingularMatrixError,
    UnboundedCellError,
    UnsupportedMatrixError,
    WavekitError,
)
from .polytopes import (
    ConvexCell,
    HalfSpace,
    Lattice,
    Parallelotope,
    Region,
    cell_volume,
    enumerate_vertices,
    interior_empty,
    intersect,
    parallelotope_of,
    regions_interior_disjoint,
    subtract_convex,
)
from .rational import (
    DilationSpec,
    Mat,
    Rat,
    Vec,
    as_rat,
    cyclic_matrix,
    nearest_integer_vector,
    rat_str,
    scalar_power_probe,
)
from .regionio import (
    load_region,
    parse_matrix,
    region_dilation,
    region_from_dict,
    region_to_dict,
    save_region,
)
from .spectral import expansive_check, min_singular_exceeds, singular_values
from .verify import (
    FloatDilation,
    TilingReport,
    WaveletVerdict,
    dilation_j_range,
    satellite_notch_identity,
    translation_offsets,
    verify_dilation_exact,
    verify_dilation_mc,
    verify_translation_exact,
    verify_translation_mc,
    verify_wavelet_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]
