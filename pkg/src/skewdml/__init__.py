"""Exact arithmetic for skew-linear maps (x, y) -> (g(x), A(x) y) over Q.

Orbits, zero sets of recurrences driven by a rational base map, their
decomposition into arithmetic progressions with certificates, p-adic zero
bounds, and sequence-ring checks.
"""

from .algebra import (
    Poly,
    ProjPoint,
    RatFunc,
    RFMatrix,
    SNFResult,
    matrix_det,
    poly_gcd,
    ratfunc_eval,
    smith_normal_form,
)
from .base import (
    BaseMap,
    FixedPoints,
    NotDetected,
    Preperiodic,
    detect_preperiodic,
    fixed_points_linear,
    iterate_base,
    map_degree,
    weil_height,
)
from .errors import *  # noqa: F401,F403
from .padic import (
    PadicContext,
    attuned_iterate,
    dml_classify,
    mahler_profile,
    residue_orbit,
    select_prime,
    strassmann_bound,
    strassmann_zero_bound,
)
from .seqring import (
    FundMatrix,
    Seq,
    classify_element,
    embed_ratfunc,
    find_linear_recurrence,
    fundamental_matrix,
    idempotent_cycle_check,
    shift_sigma,
)
from .skew import (
    LinearFamily,
    MPoly,
    SingularLocus,
    SkewPoint,
    SkewSystem,
    cocycle,
    discover_linear_relations,
    image_filtration,
    invariance_certificate,
    iterate_skew,
    orbit_intersection,
    singular_locus,
    symbolic_cocycle,
)
from .sml import (
    Certificate,
    ProgressionSet,
    Recurrence,
    certify_progression,
    companion_system,
    decompose_progressions,
    sequence_terms,
    zero_set,
)

__version__ = "0.1.0"
