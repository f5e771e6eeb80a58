"""Steady-state density-matrix oracle, independent of the closed forms.

This module builds the full rotating-wave equations of motion for the 3x3
density matrix, solves them in steady state by direct dense linear algebra,
and compares the resulting probe coherence against the closed-form response
from :mod:`eitat.lineshape`.  Nothing here shares algebra with the closed
forms beyond the level scheme itself, so agreement is evidence, not
tautology.

Vectorization order is fixed and documented so Liouvillian matrices are
comparable across builds: ``vec(rho)[3*m + n] = rho[m, n]`` with 0-based
row-major indices, i.e. ``(rho_11, rho_12, rho_13, rho_21, ...)`` in 1-based
level labels.

The coherence damping rates are injected exactly as produced by
:func:`eitat.atomic.derive_gammas` (the package-wide convention without the
factor of one half).  A ``convention`` switch selects the halved variant for
sensitivity studies; it rescales the damping in the oracle *and* in the
closed form together, never just one side.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atomic import (
    DecayMatrix,
    PolarizationRates,
    SystemKind,
    derive_gammas,
    threshold_expression,
    validate_topology,
)
from .errors import SingularSteadyStateError
from .lineshape import coherence_closed_form

__all__ = [
    "Liouvillian",
    "SteadyState",
    "OracleVerdict",
    "build_liouvillian",
    "steady_state",
    "probe_response",
    "compare_to_closed_form",
    "DEFAULT_PROBE_EPS",
]

DEFAULT_PROBE_EPS = 1e-4

# Self-consistency tolerance on solved density matrices.
_STATE_TOL = 1e-12

_CONVENTIONS = ("full", "halved")


@dataclass(frozen=True)
class Liouvillian:
    """The 9x9 equations-of-motion generator for one operating point."""

    matrix: np.ndarray
    system: SystemKind
    decay: DecayMatrix
    gammas: PolarizationRates
    omega_c: float
    omega_p: float
    delta_p: float


@dataclass(frozen=True)
class SteadyState:
    """A solved density matrix, validated on construction.

    Validation asserts hermiticity, unit trace, and real nonnegative
    populations, all at the 1e-12 level; violations mean the linear solve
    went numerically wrong and are raised, not returned.
    """

    rho: np.ndarray

    def __post_init__(self):
        rho = self.rho
        if rho.shape != (3, 3):
            raise ValueError(f"rho must be 3x3, got shape {rho.shape}")
        hermiticity = np.abs(rho - rho.conj().T).max()
        if hermiticity > _STATE_TOL:
            raise SingularSteadyStateError(
                f"steady state is not Hermitian (deviation {hermiticity:g})"
            )
        trace_error = abs(rho.trace() - 1.0)
        if trace_error > _STATE_TOL:
            raise SingularSteadyStateError(
                f"steady state trace differs from 1 by {trace_error:g}"
            )
        diag = np.diagonal(rho)
        if np.abs(diag.imag).max() > _STATE_TOL or diag.real.min() < -_STATE_TOL:
            raise SingularSteadyStateError(
                "steady state has an invalid population (complex or negative)"
            )

    def population(self, i: int) -> float:
        """Occupation of level i (1-based)."""
        return float(self.rho[i - 1, i - 1].real)

    def coherence(self, m: int, n: int) -> complex:
        """Off-diagonal element rho_mn (1-based labels)."""
        return complex(self.rho[m - 1, n - 1])


@dataclass(frozen=True)
class OracleVerdict:
    """Result of fitting the closed form to the oracle over a grid.

    ``scale`` is the single complex least-squares coefficient;  ``residual``
    is the relative root-mean-square misfit after scaling and ``per_point``
    the worst single-point relative error (so residual <= per_point).
    """

    scale: complex
    residual: float
    per_point: float


def _hamiltonian(
    system: SystemKind, omega_c: float, omega_p: float, delta_p: float
) -> np.ndarray:
    """Rotating-frame Hamiltonian; the coupling field is always resonant."""
    h = np.zeros((3, 3))
    if system in (SystemKind.LAMBDA, SystemKind.CASCADE_EIT):
        h[1, 1] = -delta_p
        h[2, 2] = -delta_p
    else:
        h[2, 2] = -delta_p
    pm, pn = system.probe_transition
    cm, cn = system.coupling_transition
    h[pm - 1, pn - 1] += omega_p / 2.0
    h[pn - 1, pm - 1] += omega_p / 2.0
    h[cm - 1, cn - 1] += omega_c / 2.0
    h[cn - 1, cm - 1] += omega_c / 2.0
    return h


def build_liouvillian(
    system: SystemKind,
    w: DecayMatrix,
    g: PolarizationRates,
    omega_c: float,
    omega_p: float,
    delta_p: float,
) -> Liouvillian:
    """Assemble d vec(rho)/dt = L vec(rho) for one operating point.

    The coherent part drives the scheme's probe transition at Omega_p/2 and
    its coupling transition at Omega_c/2; populations flow along the W_ij
    channels; each coherence rho_mn is damped at the injected gamma_mn.
    Passing ``g`` explicitly (rather than re-deriving it) is what lets the
    caller switch damping conventions.
    """
    validate_topology(system, w)
    for name, value in (("omega_c", omega_c), ("omega_p", omega_p)):
        if not np.isfinite(value) or value < 0.0:
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    if not np.isfinite(delta_p):
        raise ValueError(f"delta_p must be finite, got {delta_p!r}")

    h = _hamiltonian(system, omega_c, omega_p, delta_p)
    matrix = np.zeros((9, 9), dtype=complex)

    # -i [H, rho]
    for m in range(3):
        for n in range(3):
            row = 3 * m + n
            for k in range(3):
                matrix[row, 3 * k + n] += -1j * h[m, k]
                matrix[row, 3 * m + k] += 1j * h[k, n]

    # population flow: gain from feeding levels, loss at the total out-rate
    wmat = w.as_matrix()
    for m in range(3):
        row = 3 * m + m
        for i in range(3):
            if i != m:
                matrix[row, 3 * i + i] += wmat[i, m]
        matrix[row, row] -= wmat[m, :].sum()

    # coherence damping
    for m in range(3):
        for n in range(3):
            if m != n:
                matrix[3 * m + n, 3 * m + n] -= g.pair(m + 1, n + 1)

    matrix.setflags(write=False)
    return Liouvillian(
        matrix=matrix,
        system=system,
        decay=w,
        gammas=g,
        omega_c=float(omega_c),
        omega_p=float(omega_p),
        delta_p=float(delta_p),
    )


def _with_trace_row(matrix: np.ndarray, replaced_population: int):
    """Replace one population equation by the trace constraint.

    Returns the modified matrix and the right-hand side.
    """
    if replaced_population not in (1, 2, 3):
        raise ValueError(
            f"replaced_population must be 1, 2 or 3, got {replaced_population!r}"
        )
    row = 4 * (replaced_population - 1)  # vec index of rho_ii
    a = matrix.copy()
    a[row, :] = 0.0
    a[row, [0, 4, 8]] = 1.0
    b = np.zeros(9, dtype=complex)
    b[row] = 1.0
    return a, b


def steady_state(liouvillian: Liouvillian, replaced_population: int = 1) -> SteadyState:
    """Solve L vec(rho) = 0 subject to Tr rho = 1.

    One population equation (the redundant one; any of the three works and
    must give the same answer) is replaced by the trace constraint and the
    9x9 system is solved directly with partial pivoting.

    Raises
    ------
    SingularSteadyStateError
        If the constrained system is rank-deficient.  Physically this means
        a disconnected level with no decay path, so no unique steady state.
    """
    a, b = _with_trace_row(liouvillian.matrix, replaced_population)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSteadyStateError(
            "steady-state system is singular; the parameter set leaves the "
            "stationary density matrix underdetermined"
        ) from exc
    return SteadyState(rho=x.reshape(3, 3))


def _resolve_convention(g: PolarizationRates, convention: str) -> PolarizationRates:
    if convention not in _CONVENTIONS:
        raise ValueError(
            f"unknown convention {convention!r}; expected one of {_CONVENTIONS}"
        )
    return g.halved() if convention == "halved" else g


def probe_response(
    system: SystemKind,
    w: DecayMatrix,
    omega_c: float,
    delta_grid,
    probe_eps: float = DEFAULT_PROBE_EPS,
    *,
    convention: str = "full",
) -> np.ndarray:
    """Probe-amplitude-normalized steady-state coherence over a detuning grid.

    The probe Rabi frequency is ``probe_eps * max(threshold, gamma23)``; the
    returned values are the probe-transition coherences divided by
    ``omega_p / 2`` so they are directly comparable with the closed forms.
    ``probe_eps`` must lie in (0, 1e-2] to stay in the first-order regime
    (the tests verify linearity rather than trusting this bound).

    The Liouvillian is affine in the probe detuning, so the whole grid is
    assembled as one stacked array and solved in a single batched call.
    """
    if not (0.0 < probe_eps <= 1e-2):
        raise ValueError(f"probe_eps must be in (0, 1e-2], got {probe_eps!r}")
    delta = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    if not np.all(np.isfinite(delta)):
        raise ValueError("delta_grid values must be finite")

    g = _resolve_convention(derive_gammas(system, w), convention)
    amplitude_scale = max(threshold_expression(system, g), g.gamma23)
    if amplitude_scale <= 0.0:
        raise ValueError(
            "all decay rates vanish; there is no scale for the probe amplitude"
        )
    omega_p = probe_eps * amplitude_scale

    base = build_liouvillian(system, w, g, omega_c, omega_p, 0.0).matrix
    slope = build_liouvillian(system, w, g, omega_c, omega_p, 1.0).matrix - base
    a0, b0 = _with_trace_row(base, 1)
    a1 = slope.copy()
    a1[0, :] = 0.0  # the trace constraint does not depend on the detuning

    stacked = a0[np.newaxis, :, :] + delta[:, np.newaxis, np.newaxis] * a1
    rhs = np.zeros((delta.size, 9, 1), dtype=complex)
    rhs[:, 0, 0] = b0[0]
    try:
        solution = np.linalg.solve(stacked, rhs)[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularSteadyStateError(
            "steady-state system is singular at one or more grid points"
        ) from exc

    rho = solution.reshape(delta.size, 3, 3)
    pm, pn = system.probe_transition
    return rho[:, pm - 1, pn - 1] / (omega_p / 2.0)


def compare_to_closed_form(
    system: SystemKind,
    w: DecayMatrix,
    omega_c: float,
    delta_grid,
    probe_eps: float = DEFAULT_PROBE_EPS,
    *,
    convention: str = "full",
) -> OracleVerdict:
    """Fit one complex scale between the oracle and the closed form.

    The closed forms are proportionalities, so a single complex coefficient
    is fitted by least squares over the grid (prefactors enabled) and the
    misfit is reported relative to the oracle's root-mean-square magnitude.
    Large residuals are returned, never clipped: they are the finding.
    """
    delta = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    oracle = probe_response(
        system, w, omega_c, delta, probe_eps, convention=convention
    )
    g = _resolve_convention(derive_gammas(system, w), convention)
    closed = coherence_closed_form(
        system, g, omega_c, delta, include_prefactor=True
    )
    closed = np.atleast_1d(closed)

    denom = np.vdot(closed, closed)
    scale = complex(np.vdot(closed, oracle) / denom) if denom != 0.0 else 0.0j
    diff = oracle - scale * closed
    rms_oracle = float(np.sqrt(np.mean(np.abs(oracle) ** 2)))
    if rms_oracle == 0.0:
        return OracleVerdict(scale=scale, residual=0.0, per_point=0.0)
    residual = float(np.sqrt(np.mean(np.abs(diff) ** 2))) / rms_oracle
    per_point = float(np.abs(diff).max()) / rms_oracle
    return OracleVerdict(scale=scale, residual=residual, per_point=per_point)
