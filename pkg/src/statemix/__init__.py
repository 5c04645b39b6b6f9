"""statemix: density-operator decompositions, preparation measures, and
entropy-ascent relaxation on finite-dimensional Hilbert spaces.

The package works with explicit finite-dimensional matrices throughout
(hbar = 1, k_B = 1, natural logarithms); dimensions up to a few dozen are the
intended scale.
"""

from .coins import (
    ClassificationResult,
    CoinPreparation,
    DistinguishResult,
    TossBatch,
    TossRecord,
    distinguish_boxes,
    posterior_type_a,
    repeated_toss_classify,
    simulate_tosses,
    single_toss_frequency,
)
from .decomposition import (
    Decomposition,
    complete_from_vector,
    decompositions_distinct,
    haar_isometry,
    haar_vector,
    isometry_decomposition,
    park_qubit_example,
    reconstruct,
    spectral_decomposition,
    weight_from_vector,
)
from .dynamics import (
    AsymptoteReport,
    DissipativeDirection,
    SeaConfig,
    Trajectory,
    asymptote_check,
    canonical_on_range,
    dissipative_direction,
    sea_evolve,
    sea_step,
)
from .equilibrium import (
    EntropyReport,
    canonical_state,
    entropy_report,
    shannon_entropy,
    solve_beta,
    von_neumann_entropy,
)
from .measures import (
    ComparisonReport,
    StatisticalWeightMeasure,
    barycenter,
    dirac_measure,
    make_measure,
    measure_expectation,
    measure_from_decomposition,
    measures_equal,
    projective_outcome_probabilities,
    sample_preparation,
    sample_projective,
    single_shot_indistinguishable,
)
from .operators import (
    EigenSystem,
    HermitianOperator,
    RangeRestriction,
    StateOperator,
    eig_hermitian,
    expectation,
    is_idempotent,
    make_hermitian,
    pure_state,
    range_restrict,
    validate_state_operator,
)

__version__ = "0.1.0"
