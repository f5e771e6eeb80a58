"""Exception types shared across the package."""


class EitatError(Exception):
    """Base class for every error raised by this package."""


class TopologyError(EitatError, ValueError):
    """A decay matrix populates channels the level scheme does not allow."""


class DegenerateThresholdError(EitatError, ValueError):
    """The weak/strong threshold is not positive, so a threshold factor is undefined."""

    def __init__(self, message: str, threshold: float):
        super().__init__(message)
        self.threshold = threshold


class DegeneratePoleError(EitatError):
    """The pole pair coincides (coupling exactly at threshold).

    The two-resonance split is singular there even though the closed-form
    coherence stays finite.  ``threshold`` carries the coupling strength at
    which the degeneracy occurs so callers can suggest a nudge.
    """

    def __init__(self, message: str, threshold: float):
        super().__init__(message)
        self.threshold = threshold


class NearSingularDenominatorError(EitatError, ArithmeticError):
    """A closed-form denominator fell below the numeric floor.

    Only reachable for pathological inputs (all decay rates zero together
    with zero field and zero detuning), never for the built-in decay sets.
    """


class GridError(EitatError, ValueError):
    """A detuning grid is unusable for the requested analysis."""


class SingularSteadyStateError(EitatError):
    """The trace-constrained steady-state system is rank deficient.

    Signals an unphysical parameter set, e.g. a disconnected level with no
    decay path, for which no unique stationary density matrix exists.
    """
