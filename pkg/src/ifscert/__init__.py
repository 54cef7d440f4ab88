"""Certified computations for contractive iterated function systems on R^d.

The package computes attractors, address points and canonical projections
of parent-child and orbital contractive systems; every output carries a
radius bounding its Hausdorff-Pompeiu distance to the mathematical set it
approximates, derived from certified tail sums of the system's comparison
function.
"""

from .comparison import (
    ClosedFormTail,
    ComparisonFn,
    GeometricEnvelope,
    custom,
    eval_phi,
    iterate,
    linear,
    power_affine,
    spot_verify,
    tail_upper_bound,
)
from .metric_sets import (
    AnnotatedSet,
    CertifiedSet,
    PointSet,
    diam,
    directed_dist,
    epsilon_net,
    hausdorff,
    load_csv,
    save_csv,
    within_ball,
)
from .shift_space import (
    EMPTY_WORD,
    FiniteWord,
    InfiniteWordSpec,
    TotalWord,
    concat,
    dc_distance,
    format_word,
    parse_word,
    prefix,
    shift_map,
    word_eq_to_depth,
)
from .system import (
    AffineMap,
    Box,
    ExprMap,
    IndexFamily,
    IteratedSystem,
    PiecewiseAffineMap,
    SimilarityMap,
    apply_map,
    apply_word,
    check_family_regularity,
    check_orbital,
    check_parent_child,
)
from .attractor import (
    AttractorApprox,
    OrbitApprox,
    ProbeReport,
    attractor_of_point,
    fractal_step,
    iterate_certified,
    orbit,
    picard_probe,
    single_map_fixed_point,
)
from .address import (
    AddressResult,
    address_point,
    address_set,
    cylinder_set,
    pi,
    pi_t,
    psi,
    theta,
)
from .config import SystemConfig, load_config, parse_config, serialize_config

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
