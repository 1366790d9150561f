"""reszeta: zeta series of symmetric plane valuations and their inverse.

Forward: from a blow-up graph with a finite symmetry and a collection of
divisorial or curve valuation targets, compute the reduced zeta series as a
finite binomial product.  Inverse: from the series (plus the group order and
the orbit count) recover the topological profile and rebuild the minimal
resolution graph.
"""

from . import errors
from .reconstruct import (
    BranchProfile,
    TopologicalProfile,
    build_minimal_graph,
    infer_group_order,
    reconstruct_curves,
    reconstruct_divisorial,
    reconstruct_single_divisorial,
)
from .resolution import (
    Arrow,
    BlowUpGraph,
    SymmetrySpec,
    build_graph,
    canonical_key,
    classify_shape,
    contract_to_minimal,
    from_char_pairs,
    is_isomorphic,
    trivial_symmetry,
    validate_action,
)
from .series import (
    FactoredSeries,
    SparseSeries,
    binomial_expand,
    decompose,
    expand_factored,
    series_mul,
    stable_decompose,
    substitute,
)
from .zeta import (
    ValuationTargets,
    check_full_projection,
    check_projection_curve,
    collapse_to_one_variable,
    multiplicity_vectors,
    targets_from,
    zeta_factored,
)

__version__ = "0.1.0"
