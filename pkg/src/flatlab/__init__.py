"""Flat surface laboratory: build, renormalize, count, classify."""

from .errors import (
    BackendMismatch,
    BasisConstructionFailed,
    BudgetExceeded,
    ConfigError,
    DegenerateBase,
    FlatlabError,
    FlowBudgetExceeded,
    InconsistentInvariants,
    InvalidStratum,
    NonClosingPolygon,
    NonConvergence,
    NonGenericSurface,
    NonIrreducible,
    NonPositiveDeterminant,
    NonSmoothableLoop,
    NumericError,
    OddDegreePresent,
    SamplingExhausted,
    SelfIntersectingBoundary,
    SeparatrixHit,
    SingularIntersectionForm,
    TieBreak,
    TransversalMissesFlow,
    VersionMismatch,
    WrongDimension,
    ZeroEdge,
)
from .counting import (
    ConfigurationCount,
    Cylinder,
    SaddleConnection,
    SiegelVeechEstimate,
    configuration_counts,
    cylinders,
    homologous_groups,
    retrace_connection,
    saddle_connections,
    siegel_veech_estimate,
    siegel_veech_transform,
)
from .homology import (
    CycleSpace,
    asymptotic_cycle,
    cycle_space,
    dual_of_re_omega,
    ergodic_cycle,
    first_return_cycles,
)
from .iet import Iet, intersection_matrix
from .lyapunov import (
    CONVENTIONS,
    DeviationReport,
    ExponentEstimate,
    LevelFit,
    cocycle_exponents,
    deviation_csv_rows,
    deviation_experiment,
    lagrangian_check,
)
from .surface import (
    Stratum,
    TranslationSurface,
    build_from_polygon,
    build_surface,
)
from .transversal import Transversal, canonical_transversal, first_return_iet
from .zippered import (
    ZipperedRectangles,
    from_zippered_rectangles,
    make_zippered,
    teich_return_time,
    teich_step,
    to_zippered_rectangles,
    unit_base,
)

__version__ = "0.1.0"
