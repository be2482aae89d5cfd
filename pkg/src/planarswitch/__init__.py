"""Exact stability classification of planar switched linear systems
x' = u(t) A x + (1 - u(t)) B x with at least one nondiagonalizable matrix.
"""

__version__ = "0.1.0"

from .classifier import (  # noqa: F401
    Certificate,
    RatioR,
    Verdict,
    VerdictKind,
    b_flow_time,
    classify,
    half_turn_ratio,
    projective_guas_check,
    semidefinite_lyapunov_check,
    static_instability_certificate,
)
from .collinearity import (  # noqa: F401
    CollinearityData,
    Orientation,
    Slope,
    ZKind,
    ZSet,
    clockwise_check,
    collinearity_data,
    collinearity_discriminant,
    collinearity_factors,
    orientation,
    quadratic_form,
    slopes,
)
from .errors import (  # noqa: F401
    BothDiagonalizableError,
    InconsistentInvariantsError,
    NotCollinearError,
    NotHurwitzError,
    PlanarSwitchError,
    PreconditionError,
    ShapeMismatchError,
)
from .invariants import (  # noqa: F401
    CaseTag,
    InvariantTriple,
    NormalForm,
    PairContext,
    Rejection,
    SystemPair,
    case_tag,
    compute_invariants,
    normal_form,
    validate_pair,
)
from .linalg2 import (  # noqa: F401
    SpectralKind,
    SpectralTag,
    commutator,
    det,
    expm_normal,
    expm_reference,
    spectral_kind,
    trace,
)
from .trajectory import (  # noqa: F401
    ConstantU,
    RandomDwell,
    Sample,
    SwitchEvent,
    Trajectory,
    WorstCase,
    crossing_times,
    simulate,
    worst_trajectory,
)
