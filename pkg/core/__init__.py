"""
Core utilities package for the Bell-diagonal separability lab

Modules:
- matrix_utils: 4x4 linear algebra, eigensolvers and spectral functions
- bell_utils: Bell basis, Bell-diagonal states and canonical frames
- validation_utils: Input validation functions
- decomposition_utils: Closed-form best separable approximation
- measure_utils: Concurrence and relative entropy
- optimality_utils: Maximality and rank checks
- lqcc_utils: Local filtering operations
- oracle_utils: Numerical reference optimizers
- sampling_utils: Seeded random states and operations
- report_utils: JSON reports and geometry tables
"""

from .bell_utils import (
    BDState,
    CanonicalFrame,
    canonicalize,
    to_density_matrix,
    werner_state,
)

from .decomposition_utils import (
    LSDecomposition,
    bsa_bd,
    project_to_face,
    reconstruct,
)

from .measure_utils import (
    closest_separable_bd,
    relative_entropy,
    wootters_concurrence,
)

from .optimality_utils import (
    VerificationReport,
    rank_conditions,
    verify_bsa,
)

from .lqcc_utils import (
    Filtration,
    LqccPair,
    apply_lqcc,
    transform_decomposition,
)

from .oracle_utils import (
    BsaSearchConfig,
    bsa_numeric,
    rel_entropy_min_numeric,
)

__all__ = [
    # Bell-diagonal states
    "BDState",
    "CanonicalFrame",
    "canonicalize",
    "to_density_matrix",
    "werner_state",
    # Decomposition
    "LSDecomposition",
    "bsa_bd",
    "project_to_face",
    "reconstruct",
    # Measures
    "closest_separable_bd",
    "relative_entropy",
    "wootters_concurrence",
    # Verification
    "VerificationReport",
    "rank_conditions",
    "verify_bsa",
    # Local operations
    "Filtration",
    "LqccPair",
    "apply_lqcc",
    "transform_decomposition",
    # Oracles
    "BsaSearchConfig",
    "bsa_numeric",
    "rel_entropy_min_numeric",
]
