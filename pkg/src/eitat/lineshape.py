"""Closed-form probe coherences, pole pairs, and the two-resonance split.

Each scheme's weak-probe coherence is a ratio of low-order polynomials in the
probe detuning.  Its denominator has exactly two complex roots; reflecting
them into the lower half plane gives the pole pair ``Z_I``/``Z_II`` and a
partial-fraction split of the spectrum into two complex resonances::

    r1 =  N(Z_I)  / ((Z_I - Z_II) * (delta_p - Z_I))
    r2 = -N(Z_II) / ((Z_I - Z_II) * (delta_p - Z_II))

The split reproduces the closed form up to a real-part sign flip that the
package records rather than hides: at every real detuning,
``r1 + r2 == -conjugate(closed form)``, so the imaginary parts (and hence the
absorption ``A = -Im``) agree identically.  See ``resonance_pair`` and the
tests for the numeric statement of that identity.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .atomic import (
    DecayMatrix,
    PolarizationRates,
    SystemKind,
    derive_gammas,
    threshold_expression,
)
from .errors import DegeneratePoleError, GridError, NearSingularDenominatorError

__all__ = [
    "EPS_POLE",
    "EPS_DEN",
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
]

# Pole-pair degeneracy tolerance (scaled frequency units).
EPS_POLE = 1e-9
# Floor protecting the closed-form denominator for pathological all-zero input.
EPS_DEN = 1e-300

DEFAULT_GRID_POINTS = 2001
# Half-width multiplier of the default grid, wide enough to contain both
# displaced peaks at any coupling strength.
DEFAULT_GRID_SPAN = 5.0


@dataclass(frozen=True)
class PolePair:
    """The two complex poles of a scheme's probe response.

    ``z1 + z2`` is purely imaginary for every coupling strength; ``z1 - z2``
    is purely real above the threshold and purely imaginary below it
    (principal square root).
    """

    z1: complex
    z2: complex

    @property
    def splitting(self) -> complex:
        return self.z1 - self.z2

    def is_degenerate(self, eps: float = EPS_POLE) -> bool:
        return abs(self.z1 - self.z2) <= eps


@dataclass(frozen=True)
class ResonanceDecomposition:
    """Both resonances and the closed form evaluated at one real detuning."""

    pole_pair: PolePair
    r1: complex
    r2: complex
    total_closed_form: complex


@dataclass(frozen=True)
class SpectrumTable:
    """Per-detuning resonance decomposition over an increasing grid.

    ``absorption`` is ``-Im(total)``, signed so the bare single-resonance
    peak is positive.  ``total`` is ``r1 + r2``.
    """

    system: SystemKind
    omega_c: float
    include_prefactor: bool
    gammas: PolarizationRates
    pole_pair: PolePair
    delta_p: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    total: np.ndarray
    absorption: np.ndarray

    def __len__(self) -> int:
        return len(self.delta_p)


def _principal_sqrt(x: float) -> complex:
    # Explicit branch instead of complex sqrt: keeps the nonnegative-real /
    # positive-imaginary convention immune to signed-zero surprises.
    if x >= 0.0:
        return complex(math.sqrt(x))
    return complex(0.0, math.sqrt(-x))


def _gamma_sum(system: SystemKind, g: PolarizationRates) -> float:
    if system in (SystemKind.LAMBDA, SystemKind.CASCADE_EIT):
        return g.gamma23
    return g.gamma23 + g.gamma13


def poles(system: SystemKind, g: PolarizationRates, omega_c: float) -> PolePair:
    """Pole pair Z_I (+ branch) and Z_II (- branch) for one coupling strength.

    ``Z = (-i * gamma_sum +/- sqrt(omega_c**2 - threshold**2)) / 2`` with the
    principal square root, so ``omega_c = 0`` collapses to the two bare poles
    ``-i * gamma`` of the uncoupled lines.
    """
    if omega_c < 0.0:
        raise ValueError(f"omega_c must be >= 0, got {omega_c!r}")
    combo = threshold_expression(system, g)
    s = _principal_sqrt(omega_c * omega_c - combo * combo)
    half_damping = -0.5j * _gamma_sum(system, g)
    return PolePair(z1=half_damping + 0.5 * s, z2=half_damping - 0.5 * s)


def prefactor(system: SystemKind, g: PolarizationRates, omega_c: float) -> float:
    """Overall real weight restoring the "physical" scale of the response.

    Unity for Lambda and Cascade-EIT.  For Cascade-AT it is the saturated
    intermediate-level population, for Vee the saturation depletion of the
    shared lower level; both vanish or saturate with the coupling power.
    """
    if system is SystemKind.CASCADE_AT:
        quarter = omega_c * omega_c / 4.0
        return quarter / (g.gamma12 * g.gamma12 + 2.0 * quarter)
    if system is SystemKind.VEE:
        return 1.0 / (1.0 + omega_c * omega_c / (2.0 * g.gamma12 * g.gamma12))
    return 1.0


def _closed_form_values(system, g, omega_c, delta, include_prefactor):
    """Vectorized closed-form coherence; ``delta`` is a float ndarray."""
    quarter = omega_c * omega_c / 4.0
    if system is SystemKind.LAMBDA:
        numerator = delta - 1j * g.gamma12
        denominator = quarter - (delta - 1j * g.gamma13) * (delta - 1j * g.gamma12)
    elif system is SystemKind.CASCADE_EIT:
        numerator = delta - 1j * g.gamma13
        denominator = quarter - (delta - 1j * g.gamma12) * (delta - 1j * g.gamma13)
    elif system is SystemKind.CASCADE_AT:
        numerator = delta - 1j * g.gamma23
        denominator = quarter - (delta - 1j * g.gamma23) * (delta - 1j * g.gamma13)
    else:
        weight = quarter / (g.gamma12 * g.gamma12)
        numerator = (delta - 1j * g.gamma13) * weight + (delta - 1j * g.gamma23)
        denominator = quarter - (delta - 1j * g.gamma23) * (delta - 1j * g.gamma13)
    if np.any(np.abs(denominator) < EPS_DEN):
        raise NearSingularDenominatorError(
            "closed-form denominator below the numeric floor; "
            "all decay rates, the coupling, and the detuning are (near) zero"
        )
    scale = prefactor(system, g, omega_c) if include_prefactor else 1.0
    return scale * numerator / denominator


def coherence_closed_form(
    system: SystemKind,
    g: PolarizationRates,
    omega_c: float,
    delta_p,
    *,
    include_prefactor: bool,
) -> complex:
    """The scheme's probe coherence at one real detuning.

    ``delta_p`` may also be an array, in which case an array is returned.
    The prefactor flag is required so no caller relies on an implicit scale.
    """
    delta = np.asarray(delta_p, dtype=float)
    values = _closed_form_values(system, g, omega_c, delta, include_prefactor)
    if np.ndim(delta_p) == 0:
        return complex(values)
    return values


def _resonance_numerator(system, g, omega_c, z):
    if system is SystemKind.LAMBDA:
        return z + 1j * g.gamma12
    if system is SystemKind.CASCADE_EIT:
        return z + 1j * g.gamma13
    if system is SystemKind.CASCADE_AT:
        return z + 1j * g.gamma23
    # Vee: the numerator keeps a second term weighted by the saturation
    # parameter; the weight is exactly zero at zero coupling.
    if omega_c == 0.0:
        weight = 0.0
    else:
        weight = omega_c * omega_c / (4.0 * g.gamma12 * g.gamma12)
    return z * (1.0 + weight) + 1j * (g.gamma23 + g.gamma13 * weight)


def _resonance_values(system, g, omega_c, delta, include_prefactor):
    """Shared evaluation core; ``delta`` is a float ndarray.

    Returns ``(pole_pair, r1, r2)`` with r1/r2 shaped like ``delta``.
    """
    pair = poles(system, g, omega_c)
    if pair.is_degenerate():
        threshold = abs(threshold_expression(system, g))
        raise DegeneratePoleError(
            f"pole pair is degenerate for {system.label} at omega_c={omega_c!r} "
            f"(threshold {threshold!r}); the two-resonance split does not exist "
            "exactly at threshold",
            threshold=threshold,
        )
    splitting = pair.splitting
    scale = prefactor(system, g, omega_c) if include_prefactor else 1.0
    c1 = scale * _resonance_numerator(system, g, omega_c, pair.z1) / splitting
    c2 = -scale * _resonance_numerator(system, g, omega_c, pair.z2) / splitting
    r1 = c1 / (delta - pair.z1)
    r2 = c2 / (delta - pair.z2)
    return pair, r1, r2


def resonance_pair(
    system: SystemKind,
    g: PolarizationRates,
    omega_c: float,
    delta_p: float,
    *,
    include_prefactor: bool,
) -> ResonanceDecomposition:
    """Split the response at one detuning into its two complex resonances.

    The prefactor, when enabled, multiplies both resonances identically.

    Raises
    ------
    DegeneratePoleError
        If the coupling sits exactly at (within ``EPS_POLE`` of) threshold.
    """
    delta = np.asarray(delta_p, dtype=float)
    pair, r1, r2 = _resonance_values(system, g, omega_c, delta, include_prefactor)
    total = _closed_form_values(system, g, omega_c, delta, include_prefactor)
    return ResonanceDecomposition(
        pole_pair=pair,
        r1=complex(r1),
        r2=complex(r2),
        total_closed_form=complex(total),
    )


def linear_grid(lo: float, hi: float, points: int) -> np.ndarray:
    """Evenly spaced grid from lo to hi inclusive.

    A symmetric range (lo == -hi) with an odd point count is built by
    mirroring the nonnegative half, so it contains the exact value 0 and is
    bit-for-bit symmetric; dip detection and peak-symmetry checks rely on
    both properties.
    """
    if points < 1:
        raise GridError(f"grid needs at least one point, got {points}")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise GridError("grid bounds must be finite")
    if points == 1:
        if lo != hi:
            raise GridError("a single-point grid needs equal bounds")
        return np.array([lo], dtype=float)
    if lo >= hi:
        raise GridError(f"grid bounds must satisfy lo < hi, got {lo!r} >= {hi!r}")
    if lo == -hi and points % 2 == 1:
        positive = np.linspace(0.0, hi, points // 2 + 1)
        return np.concatenate((-positive[:0:-1], positive))
    return np.linspace(lo, hi, points)


def default_grid(
    omega_c: float, g: PolarizationRates, points: int = DEFAULT_GRID_POINTS
) -> np.ndarray:
    """Symmetric detuning grid wide enough for any feature of the spectrum."""
    half_width = DEFAULT_GRID_SPAN * max(omega_c, g.gamma23)
    if half_width <= 0.0:
        half_width = 1.0  # all-zero input still deserves a usable axis
    return linear_grid(-half_width, half_width, points)


def spectrum_table(
    system: SystemKind,
    w: DecayMatrix,
    omega_c: float,
    grid,
    *,
    include_prefactor: bool,
) -> SpectrumTable:
    """Evaluate both resonances, their sum, and the absorption over a grid.

    The grid must be nonempty, finite, and strictly increasing (a single
    point is allowed).  Absorption is ``-Im(r1 + r2)``; a value below
    ``-1e-9`` anywhere is reported as a warning, not an error.
    """
    delta = np.asarray(grid, dtype=float)
    if delta.ndim != 1 or delta.size == 0:
        raise GridError("grid must be a nonempty one-dimensional array")
    if not np.all(np.isfinite(delta)):
        raise GridError("grid values must be finite")
    if delta.size > 1 and not np.all(np.diff(delta) > 0):
        raise GridError("grid must be strictly increasing")

    g = derive_gammas(system, w)
    pair, r1, r2 = _resonance_values(system, g, omega_c, delta, include_prefactor)
    total = r1 + r2
    absorption = -total.imag
    if absorption.min() < -1e-9:
        warnings.warn(
            f"absorption dips to {absorption.min():g} below the -1e-9 floor "
            f"for {system.label} at omega_c={omega_c!r}",
            RuntimeWarning,
            stacklevel=2,
        )
    return SpectrumTable(
        system=system,
        omega_c=float(omega_c),
        include_prefactor=include_prefactor,
        gammas=g,
        pole_pair=pair,
        delta_p=delta,
        r1=r1,
        r2=r2,
        total=total,
        absorption=absorption,
    )
