"""Probe-absorption spectra of driven three-level systems.

The package computes the weak-probe response of the four canonical
three-level coupling schemes (lambda, both cascades, vee), splits each
spectrum into its two complex resonances via the pole pair of the response
denominator, classifies operating points into weak/strong coupling regimes
and the resulting spectral phenomena, and verifies the closed forms against
an independent steady-state density-matrix solver.
"""
from .atomic import (
    DecayMatrix,
    FieldParams,
    PolarizationRates,
    SystemKind,
    derive_gammas,
    reference_decay,
    threshold_expression,
    threshold_factor,
    threshold_of,
    validate_topology,
)
from .errors import (
    DegeneratePoleError,
    DegenerateThresholdError,
    EitatError,
    GridError,
    NearSingularDenominatorError,
    SingularSteadyStateError,
    TopologyError,
)
from .lineshape import (
    PolePair,
    ResonanceDecomposition,
    SpectrumTable,
    coherence_closed_form,
    default_grid,
    linear_grid,
    poles,
    prefactor,
    resonance_pair,
    spectrum_table,
)
from .analysis import (
    Category,
    DipReport,
    EvolutionEntry,
    Phenomenon,
    RatioPoint,
    RatioScanResult,
    Regime,
    RegimeReport,
    classify,
    dip_report,
    evolution_suite,
    ratio_scan,
    resonance_peak,
)
from .bloch import (
    Liouvillian,
    OracleVerdict,
    SteadyState,
    build_liouvillian,
    compare_to_closed_form,
    probe_response,
    steady_state,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # atomic
    "SystemKind",
    "DecayMatrix",
    "PolarizationRates",
    "FieldParams",
    "derive_gammas",
    "validate_topology",
    "threshold_expression",
    "threshold_of",
    "threshold_factor",
    "reference_decay",
    # lineshape
    "PolePair",
    "ResonanceDecomposition",
    "SpectrumTable",
    "poles",
    "prefactor",
    "coherence_closed_form",
    "resonance_pair",
    "spectrum_table",
    "default_grid",
    "linear_grid",
    # analysis
    "Regime",
    "Category",
    "Phenomenon",
    "RatioPoint",
    "RatioScanResult",
    "RegimeReport",
    "DipReport",
    "EvolutionEntry",
    "resonance_peak",
    "ratio_scan",
    "classify",
    "dip_report",
    "evolution_suite",
    # bloch
    "Liouvillian",
    "SteadyState",
    "OracleVerdict",
    "build_liouvillian",
    "steady_state",
    "probe_response",
    "compare_to_closed_form",
    # errors
    "EitatError",
    "TopologyError",
    "DegenerateThresholdError",
    "DegeneratePoleError",
    "NearSingularDenominatorError",
    "GridError",
    "SingularSteadyStateError",
]
