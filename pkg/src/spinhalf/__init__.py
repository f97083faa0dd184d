"""spinhalf: a spin-1/2 kinematics engine.

Deduces the x and y basis states from the z-basis axioms (unbiasedness,
Hilbert orthogonality, commutator handedness), simulates sequential
Stern-Gerlach measurements with seeded reproducibility, and carries an
exact noncommutative Weyl-algebra rewriter for orbital angular momentum
commutators. A CLI and a JSON-over-HTTP service expose everything.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCE, get_tolerance, set_tolerance, tolerance
from .core import (
    RSQRT2,
    Axis,
    SpinOperator,
    SpinState,
    axis_operator,
    bloch_vector,
    canonical_state,
    commutator,
    equatorial_state,
    expectation,
    identity,
    inner_product,
    normalize,
    projector,
    same_ray,
    spin_operator,
)
from .deduction import (
    Ansatz,
    DeductionReport,
    FixedSlot,
    FreeSlot,
    PhaseFamily,
    RelativeSlot,
    YCandidatePair,
    candidate_y_pairs,
    canonical_states,
    deduce_all,
    enforce_hilbert_orthogonal,
    enforce_unbiased,
    fix_convention,
    select_handedness,
)
from .errors import (
    ConstraintInfeasibleError,
    DegreeOverflowError,
    EmptyChainError,
    ExpressionSyntaxError,
    NoRightHandedCandidateError,
    NonHermitianObservableError,
    NotNormalizedError,
    SpinHalfError,
    UnknownSymbolError,
    UnresolvedSlotError,
    UsageError,
    ZeroVectorError,
)
from .measurement import (
    ChainSpec,
    ChainStatistics,
    MeasurementOutcome,
    Stage,
    measure_once,
    probabilities,
    resolve_state,
    run_chain,
)
from .phase import PhaseAngle, parse_phase
from .weyl import (
    GaussianRational,
    Handedness,
    WeylExpression,
    angular_momentum,
    commute,
    normal_order,
    verify_orbital_commutator,
)
