"""Regime classification, resonance dominance, dip detection, evolution scans.

The coupling threshold splits every scheme's behaviour in two: above it the
pole pair separates in frequency (two displaced peaks), below it the poles
share the line center and differ only in width.  Which below-threshold
behaviour occurs - a destructive-interference transparency dip or a single
surviving resonance - depends on the scheme, not on the numbers, so it is
encoded as a per-scheme category.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .atomic import (
    DecayMatrix,
    SystemKind,
    derive_gammas,
    threshold_factor,
    threshold_of,
)
from .errors import GridError
from .lineshape import (
    EPS_POLE,
    SpectrumTable,
    _resonance_values,
    default_grid,
    spectrum_table,
)

__all__ = [
    "EPS_CLASSIFY",
    "EPS_DIP",
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
]

# Half-width of the indeterminate band around threshold factor 1.
EPS_CLASSIFY = 1e-6
# Minimum relative depth for a central minimum to count as a dip.
EPS_DIP = 1e-3

# Relative tolerance of the golden-section peak refinement.
_PEAK_REL_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    DEGENERATE = "degenerate"


class Category(enum.Enum):
    """Below-threshold character of the scheme, fixed by its topology."""

    INTERFERENCE = "interference"
    SINGLE_DOMINANT = "single-dominant"


class Phenomenon(enum.Enum):
    AT_SPLITTING = "at-splitting"
    EIT = "eit"
    SINGLE_RESONANCE = "single-resonance"
    INDETERMINATE = "indeterminate"


_CATEGORY = {
    SystemKind.LAMBDA: Category.INTERFERENCE,
    SystemKind.CASCADE_EIT: Category.INTERFERENCE,
    SystemKind.CASCADE_AT: Category.SINGLE_DOMINANT,
    SystemKind.VEE: Category.SINGLE_DOMINANT,
}


@dataclass(frozen=True)
class RatioPoint:
    """Dominance of the narrow resonance at one sub-threshold coupling."""

    threshold_factor: float
    ratio: float
    dominance: float


@dataclass(frozen=True)
class RatioScanResult:
    points: Tuple[RatioPoint, ...]
    skipped: Tuple[float, ...]

    def __iter__(self) -> Iterator[RatioPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class RegimeReport:
    system: SystemKind
    omega_c: float
    threshold: float
    threshold_factor: float
    regime: Regime
    category: Category
    phenomenon: Phenomenon


@dataclass(frozen=True)
class DipReport:
    """Outcome of probing the line center for a transparency dip.

    ``depth`` is ``1 - A(0)/max(A)``; ``peak_positions`` are the grid-level
    locations of the flanking maxima (empty when there is no dip).
    """

    has_dip: bool
    depth: float
    peak_positions: Tuple[float, ...]


@dataclass(frozen=True)
class EvolutionEntry:
    """One rung of a coupling-strength ladder.

    ``table`` is None when the rung sits exactly at threshold and the
    two-resonance split is undefined there.
    """

    factor: float
    omega_c: float
    degenerate: bool
    table: Optional[SpectrumTable]


def _golden_section_max(fn, lo: float, hi: float, rel_tol: float) -> float:
    """Maximize a unimodal scalar function on [lo, hi]."""
    scale = max(abs(lo), abs(hi), 1.0)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > rel_tol * scale:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def resonance_peak(
    system: SystemKind,
    w: DecayMatrix,
    omega_c: float,
    which: int,
    metric: str = "abs-imag",
    grid=None,
) -> Tuple[float, float]:
    """Location and height of one resonance's peak along the detuning axis.

    ``which`` selects the resonance (1 or 2); ``metric`` is ``"abs-imag"``
    (peak of |Im r|, the signed absorptive part) or ``"modulus"`` (peak of
    |r|).  The scan uses a coarse grid argmax, ties broken toward zero
    detuning, refined by golden-section search.  The overall prefactor is
    left out: it cancels from every ratio built on top of this.
    """
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    if metric not in ("abs-imag", "modulus"):
        raise ValueError(f"unknown metric {metric!r}")
    g = derive_gammas(system, w)
    delta = (
        np.asarray(grid, dtype=float) if grid is not None else default_grid(omega_c, g)
    )
    table = spectrum_table(system, w, omega_c, delta, include_prefactor=False)
    values = table.r1 if which == 1 else table.r2
    heights = np.abs(values.imag) if metric == "abs-imag" else np.abs(values)

    best = np.flatnonzero(heights == heights.max())
    idx = int(best[np.argmin(np.abs(delta[best]))])  # tie -> nearest to 0
    lo = delta[max(idx - 1, 0)]
    hi = delta[min(idx + 1, len(delta) - 1)]
    if lo == hi:
        return float(delta[idx]), float(heights[idx])

    # Scalar evaluator against the same resonance and metric.
    def height(x: float) -> float:
        _, r1, r2 = _resonance_values(
            system, g, omega_c, np.asarray(x, dtype=float), False
        )
        value = r1 if which == 1 else r2
        return float(abs(value.imag)) if metric == "abs-imag" else float(abs(value))

    star = _golden_section_max(height, float(lo), float(hi), _PEAK_REL_TOL)
    return star, height(star)


def ratio_scan(
    system: SystemKind,
    w: DecayMatrix,
    factor_grid: Sequence[float],
    metric: str = "abs-imag",
) -> RatioScanResult:
    """Peak-height ratio of the two resonances across coupling strengths.

    Each factor multiplies the scheme's threshold to give the coupling.
    Factors within ``EPS_CLASSIFY`` of 1 are skipped (the split degenerates
    there) and reported in ``skipped``.  ``dominance`` is ``max(ratio,
    1/ratio)``, the peak height of the stronger resonance over the weaker.
    """
    threshold = threshold_of(system, derive_gammas(system, w))
    points = []
    skipped = []
    for factor in factor_grid:
        factor = float(factor)
        if factor <= 0.0:
            raise ValueError(f"threshold factors must be positive, got {factor!r}")
        if abs(factor - 1.0) <= EPS_CLASSIFY:
            skipped.append(factor)
            continue
        omega_c = factor * threshold
        _, peak1 = resonance_peak(system, w, omega_c, 1, metric)
        _, peak2 = resonance_peak(system, w, omega_c, 2, metric)
        ratio = peak1 / peak2
        points.append(
            RatioPoint(
                threshold_factor=factor,
                ratio=ratio,
                dominance=max(ratio, 1.0 / ratio),
            )
        )
    return RatioScanResult(points=tuple(points), skipped=tuple(skipped))


def classify(system: SystemKind, w: DecayMatrix, omega_c: float) -> RegimeReport:
    """Name the operating regime and the resulting spectral phenomenon.

    Strong (factor > 1) always means a split pair of displaced resonances.
    Weak means either a transparency dip (interference category) or one
    dominant line (single-dominant category).  Factors within
    ``EPS_CLASSIFY`` of 1 are indeterminate: the decomposition itself is
    singular there.
    """
    g = derive_gammas(system, w)
    threshold = threshold_of(system, g)
    factor = threshold_factor(omega_c, threshold)
    if abs(factor - 1.0) <= EPS_CLASSIFY:
        regime = Regime.DEGENERATE
    elif factor > 1.0:
        regime = Regime.STRONG
    else:
        regime = Regime.WEAK
    category = _CATEGORY[system]
    if regime is Regime.DEGENERATE:
        phenomenon = Phenomenon.INDETERMINATE
    elif regime is Regime.STRONG:
        phenomenon = Phenomenon.AT_SPLITTING
    elif category is Category.INTERFERENCE:
        phenomenon = Phenomenon.EIT
    else:
        phenomenon = Phenomenon.SINGLE_RESONANCE
    return RegimeReport(
        system=system,
        omega_c=float(omega_c),
        threshold=threshold,
        threshold_factor=factor,
        regime=regime,
        category=category,
        phenomenon=phenomenon,
    )


def dip_report(table: SpectrumTable) -> DipReport:
    """Decide whether the absorption has a genuine transparency dip at center.

    Requirements on the input grid: it must contain the exact detuning 0,
    extend at least ``3 * max(omega_c, gamma23)`` to each side, and must not
    attain its global maximum on either boundary point (that would mean the
    peaks fell outside the window).

    A dip needs both a strict local minimum at zero detuning and a relative
    depth ``1 - A(0)/max(A)`` above ``EPS_DIP``.
    """
    delta = table.delta_p
    absorption = table.absorption
    if len(delta) < 3:
        raise GridError("dip analysis needs at least three grid points")
    center = np.flatnonzero(delta == 0.0)
    if center.size != 1:
        raise GridError("dip analysis needs the exact detuning 0 on the grid")
    required = 3.0 * max(table.omega_c, table.gammas.gamma23)
    if delta[0] > -required or delta[-1] < required:
        raise GridError(
            f"dip analysis needs the grid to span at least +/-{required:g}"
        )
    peak = float(absorption.max())
    if peak <= 0.0:
        raise GridError("absorption is nonpositive everywhere; nothing to analyze")
    boundary = max(absorption[0], absorption[-1])
    if boundary >= peak:
        raise GridError(
            "absorption peaks on the grid boundary; widen the detuning window"
        )

    idx = int(center[0])
    at_zero = float(absorption[idx])
    local_min = (
        0 < idx < len(delta) - 1
        and absorption[idx - 1] > at_zero
        and absorption[idx + 1] > at_zero
    )
    depth = 1.0 - at_zero / peak
    if not (local_min and depth > EPS_DIP):
        return DipReport(has_dip=False, depth=max(depth, 0.0), peak_positions=())

    # Flanking maxima at grid resolution, one on each side of center.
    left = int(np.argmax(absorption[:idx]))
    right = idx + 1 + int(np.argmax(absorption[idx + 1 :]))
    return DipReport(
        has_dip=True,
        depth=depth,
        peak_positions=(float(delta[left]), float(delta[right])),
    )


def evolution_suite(
    system: SystemKind,
    w: DecayMatrix,
    factors: Sequence[float],
    *,
    include_prefactor: bool = True,
    grid=None,
) -> list:
    """Spectra along a descending ladder of threshold factors.

    Factors must be positive and strictly decreasing, walking the scheme from
    the split regime down through threshold into the weak regime.  A rung
    within ``EPS_POLE`` of the threshold coupling is kept in the output but
    flagged degenerate with no table.
    """
    factors = [float(f) for f in factors]
    if any(f <= 0.0 for f in factors):
        raise ValueError("threshold factors must be positive")
    if any(b >= a for a, b in zip(factors, factors[1:])):
        raise ValueError("threshold factors must be strictly decreasing")
    g = derive_gammas(system, w)
    threshold = threshold_of(system, g)
    entries = []
    for factor in factors:
        omega_c = factor * threshold
        delta = (
            np.asarray(grid, dtype=float)
            if grid is not None
            else default_grid(omega_c, g)
        )
        if abs(factor - 1.0) * threshold <= EPS_POLE:
            entries.append(
                EvolutionEntry(
                    factor=factor, omega_c=omega_c, degenerate=True, table=None
                )
            )
            continue
        table = spectrum_table(
            system, w, omega_c, delta, include_prefactor=include_prefactor
        )
        entries.append(
            EvolutionEntry(
                factor=factor, omega_c=omega_c, degenerate=False, table=table
            )
        )
    return entries
