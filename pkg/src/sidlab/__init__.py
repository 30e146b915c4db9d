"""Bigraph symmetry certificates and density inequality testing.

Construct incidence bigraphs of complete hypergraphs, search for and
verify fold/percolation certificates, and numerically test Sidorenko-type
density inequalities over finite step bigraphons.
"""

from .bigraph import (
    Bigraph,
    ColoredBigraph,
    Flag,
    GraphTooLargeError,
    amalgamate_left,
    automorphisms,
    book,
    colored_automorphisms,
    cycle4,
    dual_star,
    from_json_dict,
    induced_subgraph,
    is_color_edge_transitive,
    left_labeled,
    rho,
    star,
    to_json_dict,
    two_core,
    two_core_flag,
)
from .bigraphon import (
    BigraphonTuple,
    SinkhornError,
    StepBigraphon,
    random_step_bigraphon,
    sinkhorn_biregularize,
)
from .checkers import (
    DegreeProfile,
    PreconditionError,
    ReflectiveTreeDecomposition,
    check_conlonlee_divisibility,
    check_largeright,
    check_orbit_hypotheses,
    verify_rtd,
)
from .density import (
    colored_density,
    density,
    density_brute_force,
    exponent_balance,
    flag_density,
    left_regularize_tuple,
    weighted_density,
)
from .folds import Fold, complete_to_fold, enumerate_folds, folding_maps, is_cut_involution
from .fractional import (
    ColoredFractionalBigraph,
    color_power,
    fractional_density,
    from_right_uniform,
    rainbow_star,
)
from .percolation import (
    NotFound,
    PercolationCertificate,
    find_cut_percolating,
    find_left_cut_percolating,
    lift_certificate,
    verify_certificate,
)
from .reflection import IncidenceBigraph, TypeAReflectionSystem, build_incidence, reflection_fold, reflection_fold_pool

__version__ = "0.1.0"
