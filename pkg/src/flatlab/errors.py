"""Exception hierarchy.

Every flatlab error carries an ``exit_code`` so the command line driver can
map failures onto its contract: 2 for invalid input or configuration, 3 for
exhausted numeric budgets and degenerate data met at run time, 4 for calling
an exact-only operation on the wrong backend.
"""


class FlatlabError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(FlatlabError):
    """Invalid input data or configuration."""

    exit_code = 2


class NumericError(FlatlabError):
    """Run-time failure: budget exhausted, degenerate data, no convergence."""

    exit_code = 3


class BackendMismatch(FlatlabError):
    """An exact-only operation was asked to run on a float-backed surface."""

    exit_code = 4


# --- surface construction ---

class NonClosingPolygon(ConfigError):
    """Edge vectors of a polygon do not sum to zero."""


class SelfIntersectingBoundary(ConfigError):
    """A polygon boundary crosses itself."""


class ZeroEdge(ConfigError):
    """A polygon edge has zero length."""


class NonPositiveDeterminant(ConfigError):
    """apply_gl2 got a matrix with determinant <= 0."""


class InvalidStratum(ConfigError):
    """Stratum signature violates the even total degree constraint."""


class SamplingExhausted(NumericError):
    """Rejection sampling hit its attempt budget without a valid draw."""


# --- interval exchanges and renormalization ---

class TieBreak(NumericError):
    """Rauzy induction hit two equal candidate lengths (a saddle connection)."""


class NonIrreducible(ConfigError):
    """Interval exchange permutation splits into smaller invariant blocks."""


class FlowBudgetExceeded(NumericError):
    """A straight-line trace crossed more triangles than its budget allows."""


class TransversalMissesFlow(NumericError):
    """Some flow trajectory never returns to the chosen cross-section."""


class NonGenericSurface(NumericError):
    """The direction field has a saddle connection where none is tolerated."""


class DegenerateBase(NumericError):
    """No usable cross-section exists at the requested base point."""


# --- homology and experiments ---

class SeparatrixHit(NumericError):
    """An orbit landed exactly on an interval exchange discontinuity."""


class SingularIntersectionForm(NumericError):
    """The intersection form restricted to a proposed basis is degenerate."""


class NonConvergence(NumericError):
    """An estimate failed to reach the requested confidence interval."""


class WrongDimension(ConfigError):
    """A vector collection has the wrong size for the requested check."""


class BudgetExceeded(NumericError):
    """A search or enumeration exceeded its work budget."""


# --- classification ---

class OddDegreePresent(ConfigError):
    """Spin parity was requested on a stratum with an odd cone degree."""


class NonSmoothableLoop(ConfigError):
    """A piecewise-geodesic loop has no consistent smoothing (turning sum is
    not a multiple of a full turn)."""


class BasisConstructionFailed(NumericError):
    """Could not build a symplectic basis from the computed cycles."""


class InconsistentInvariants(NumericError):
    """Two independent invariant computations disagree."""


# --- warnings ---

class VersionMismatch(UserWarning):
    """A replayed record was produced by a different package version."""
