"""Level schemes, population decay inputs, and derived coherence decay rates.

Levels are labeled 1..3 as in the usual three-level diagrams.  All rates are
dimensionless, scaled to the largest population decay rate of the set; no
physical units are carried anywhere in the package.

The one formula that turns population decay rates W_ij into polarization
(coherence) decay rates lives in :func:`derive_gammas` and nowhere else, so
the convention can be audited in a single place:

    gamma_mn = sum_t (W_mt + W_nt)

i.e. the sum of the total decay rates out of the two levels, with no extra
factor of one half.  See :mod:`eitat.bloch` for a switch that lets the
verification oracle run under the halved variant of this convention.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateThresholdError, TopologyError

__all__ = [
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
]


class SystemKind(enum.Enum):
    """One of the four canonical three-level coupling schemes.

    Values double as the wire names used by the CLI and the service.  Each
    scheme fixes the transition the weak probe monitors, the transition the
    strong (resonant) coupling field dresses, and the allowed spontaneous
    decay channels.
    """

    LAMBDA = "lambda"
    CASCADE_EIT = "cascade-eit"
    CASCADE_AT = "cascade-at"
    VEE = "vee"

    @classmethod
    def from_name(cls, name: str) -> "SystemKind":
        """Parse a wire name, tolerating case and underscore spelling."""
        normalized = name.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == normalized:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown system {name!r}; expected one of: {valid}")

    @property
    def probe_transition(self) -> tuple[int, int]:
        """(lower, upper) level labels of the probed transition."""
        return _PROBE[self]

    @property
    def coupling_transition(self) -> tuple[int, int]:
        """(lower, upper) level labels of the coupled transition."""
        return _COUPLING[self]

    @property
    def label(self) -> str:
        return _LABEL[self]


_PROBE = {
    SystemKind.LAMBDA: (1, 3),
    SystemKind.CASCADE_EIT: (1, 2),
    SystemKind.CASCADE_AT: (2, 3),
    SystemKind.VEE: (1, 3),
}

_COUPLING = {
    SystemKind.LAMBDA: (2, 3),
    SystemKind.CASCADE_EIT: (2, 3),
    SystemKind.CASCADE_AT: (1, 2),
    SystemKind.VEE: (1, 2),
}

_LABEL = {
    SystemKind.LAMBDA: "Lambda",
    SystemKind.CASCADE_EIT: "Cascade-EIT",
    SystemKind.CASCADE_AT: "Cascade-AT",
    SystemKind.VEE: "Vee",
}

# Spontaneous decay is downward in all four schemes; the per-scheme sets are
# spelled out so a mismatch stays an explicit, testable error.
_ALLOWED_CHANNELS = {
    SystemKind.LAMBDA: frozenset({(2, 1), (3, 1), (3, 2)}),
    SystemKind.CASCADE_EIT: frozenset({(2, 1), (3, 1), (3, 2)}),
    SystemKind.CASCADE_AT: frozenset({(2, 1), (3, 1), (3, 2)}),
    SystemKind.VEE: frozenset({(2, 1), (3, 1), (3, 2)}),
}

_PAIRS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))


@dataclass(frozen=True)
class DecayMatrix:
    """Population decay rates W_ij from level i to level j.

    All six off-diagonal entries are representable so that forbidden
    (upward) channels can be rejected by :func:`validate_topology` instead
    of being silently dropped.  Entries must be finite and nonnegative;
    diagonal entries are identically zero by construction.
    """

    w21: float = 0.0
    w31: float = 0.0
    w32: float = 0.0
    w12: float = 0.0
    w13: float = 0.0
    w23: float = 0.0

    def __post_init__(self):
        for i, j in _PAIRS:
            value = self.rate(i, j)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"W{i}{j} must be finite and >= 0, got {value!r}")

    def rate(self, i: int, j: int) -> float:
        """W_ij by 1-based level labels; diagonal entries are 0."""
        if i == j:
            if i not in (1, 2, 3):
                raise ValueError(f"level labels must be in 1..3, got {i}")
            return 0.0
        try:
            return float(getattr(self, f"w{i}{j}"))
        except AttributeError:
            raise ValueError(f"level labels must be in 1..3, got ({i}, {j})") from None

    def total_out_of(self, i: int) -> float:
        """Total population decay rate out of level i."""
        return sum(self.rate(i, j) for j in (1, 2, 3))

    def as_matrix(self) -> np.ndarray:
        """3x3 array with [i-1, j-1] = W_ij."""
        return np.array(
            [[self.rate(i, j) for j in (1, 2, 3)] for i in (1, 2, 3)], dtype=float
        )

    def scaled(self, factor: float) -> "DecayMatrix":
        """Every channel multiplied by a common positive constant."""
        if factor <= 0:
            raise ValueError(f"scale factor must be > 0, got {factor!r}")
        return DecayMatrix(
            **{f"w{i}{j}": factor * self.rate(i, j) for i, j in _PAIRS}
        )


@dataclass(frozen=True)
class PolarizationRates:
    """Coherence (polarization) decay rates for the three level pairs.

    Symmetric by construction: ``pair(m, n) == pair(n, m)``.
    """

    gamma12: float
    gamma13: float
    gamma23: float

    def __post_init__(self):
        for name in ("gamma12", "gamma13", "gamma23"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    def pair(self, m: int, n: int) -> float:
        """gamma_mn by 1-based level labels, order-insensitive."""
        lo, hi = sorted((m, n))
        try:
            return getattr(self, f"gamma{lo}{hi}")
        except AttributeError:
            raise ValueError(f"no coherence between levels {m} and {n}") from None

    def halved(self) -> "PolarizationRates":
        """The same rates under the halved-damping convention."""
        return PolarizationRates(
            gamma12=self.gamma12 / 2.0,
            gamma13=self.gamma13 / 2.0,
            gamma23=self.gamma23 / 2.0,
        )


@dataclass(frozen=True)
class FieldParams:
    """Field strengths for one operating point.

    The coupling field is always resonant in this package (``delta_c`` exists
    only so the constraint is explicit).  ``omega_p`` is the nominal probe
    Rabi frequency used by the steady-state oracle; the closed forms are
    independent of the probe amplitude.
    """

    omega_c: float
    omega_p: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.omega_c) or self.omega_c < 0.0:
            raise ValueError(f"omega_c must be finite and >= 0, got {self.omega_c!r}")
        if not np.isfinite(self.omega_p) or self.omega_p < 0.0:
            raise ValueError(f"omega_p must be finite and >= 0, got {self.omega_p!r}")
        if self.delta_c != 0.0:
            raise ValueError("the coupling field is resonant here: delta_c must be 0")


def validate_topology(system: SystemKind, w: DecayMatrix) -> None:
    """Reject decay channels the scheme does not allow.

    Raises
    ------
    TopologyError
        If any channel outside the scheme's allowed set is nonzero.
    """
    allowed = _ALLOWED_CHANNELS[system]
    bad = [(i, j) for i, j in _PAIRS if (i, j) not in allowed and w.rate(i, j) != 0.0]
    if bad:
        names = ", ".join(f"W{i}{j}" for i, j in bad)
        raise TopologyError(
            f"decay channels not allowed in the {system.label} scheme: {names}"
        )


def derive_gammas(system: SystemKind, w: DecayMatrix) -> PolarizationRates:
    """Polarization decay rates gamma_mn = sum_t (W_mt + W_nt).

    The formula is applied exactly as written, with no factor of one half;
    this is the package-wide convention (see the module docstring).
    """
    validate_topology(system, w)

    def gamma(m: int, n: int) -> float:
        return sum(w.rate(m, t) + w.rate(n, t) for t in (1, 2, 3))

    return PolarizationRates(
        gamma12=gamma(1, 2), gamma13=gamma(1, 3), gamma23=gamma(2, 3)
    )


def threshold_expression(system: SystemKind, g: PolarizationRates) -> float:
    """The signed gamma combination under the pole square root.

    May be zero or negative for non-reference decay sets; use
    :func:`threshold_of` when a usable (positive) threshold is required.
    """
    if system is SystemKind.LAMBDA:
        return g.gamma13 - g.gamma12
    if system is SystemKind.CASCADE_EIT:
        return g.gamma12 - g.gamma13
    # Cascade-AT and Vee share the same combination.
    return g.gamma12


def threshold_of(system: SystemKind, g: PolarizationRates) -> float:
    """Coupling strength separating the weak and strong regimes.

    Raises
    ------
    DegenerateThresholdError
        If the combination is <= 0, in which case no threshold factor can
        be formed for this decay set.
    """
    value = threshold_expression(system, g)
    if value <= 0.0:
        raise DegenerateThresholdError(
            f"threshold for {system.label} is {value!r} (must be > 0); "
            "the threshold factor is undefined for this decay set",
            threshold=value,
        )
    return value


def threshold_factor(omega_c: float, threshold: float) -> float:
    """Dimensionless coupling strength omega_c / threshold."""
    if not np.isfinite(omega_c) or omega_c < 0.0:
        raise ValueError(f"omega_c must be finite and >= 0, got {omega_c!r}")
    if not np.isfinite(threshold) or threshold <= 0.0:
        raise DegenerateThresholdError(
            f"threshold must be > 0 to form a threshold factor, got {threshold!r}",
            threshold=float(threshold),
        )
    return omega_c / threshold


_REFERENCE_DECAY = {
    SystemKind.LAMBDA: DecayMatrix(w31=1.0, w32=0.9, w21=0.001),
    SystemKind.CASCADE_EIT: DecayMatrix(w21=1.0, w32=0.2, w31=0.001),
    SystemKind.CASCADE_AT: DecayMatrix(w21=1.0, w32=0.2, w31=0.001),
    SystemKind.VEE: DecayMatrix(w31=1.0, w21=0.9, w32=0.001),
}


def reference_decay(system: SystemKind) -> DecayMatrix:
    """The built-in scaled decay set used for all bundled studies."""
    return _REFERENCE_DECAY[system]
