"""Regenerate the frozen regression constants used by the acceptance tests.

Run manually (``python tests/freeze_constants.py``); paste the output into
``tests/test_acceptance.py`` when the underlying model intentionally
changes.  Everything here goes through the public package API so the
constants always describe what the package actually computes, not a
side derivation.
"""
from __future__ import annotations

import numpy as np

from eitat import (
    SystemKind,
    compare_to_closed_form,
    default_grid,
    derive_gammas,
    ratio_scan,
    reference_decay,
    spectrum_table,
    threshold_of,
)

FAN_OUT_FACTORS = (0.05, 0.1, 0.2, 0.5, 0.9)
ORACLE_FACTORS = (0.1, 0.5, 2.0, 5.0)


def fan_out_dominance() -> dict:
    out = {}
    for system in SystemKind:
        w = reference_decay(system)
        result = ratio_scan(system, w, FAN_OUT_FACTORS)
        out[system.value] = tuple(point.dominance for point in result)
    return out


def weak_single_resonance() -> dict:
    """Factor 0.1 single-dominant metrics for Cascade-AT and Vee."""
    out = {}
    for system in (SystemKind.CASCADE_AT, SystemKind.VEE):
        w = reference_decay(system)
        g = derive_gammas(system, w)
        omega_c = 0.1 * threshold_of(system, g)
        table = spectrum_table(
            system, w, omega_c, default_grid(omega_c, g), include_prefactor=True
        )
        ratio = np.abs(table.r2.imag).max() / np.abs(table.r1.imag).max()
        reproduction = (
            np.abs(table.absorption - (-table.r1.imag)).max()
            / table.absorption.max()
        )
        out[system.value] = (float(ratio), float(reproduction))
    return out


def oracle_residuals() -> dict:
    out = {}
    for system in (SystemKind.CASCADE_AT, SystemKind.VEE):
        w = reference_decay(system)
        g = derive_gammas(system, w)
        threshold = threshold_of(system, g)
        residuals = []
        for factor in ORACLE_FACTORS:
            omega_c = factor * threshold
            verdict = compare_to_closed_form(
                system, w, omega_c, default_grid(omega_c, g), 1e-4
            )
            residuals.append(verdict.residual)
        out[system.value] = tuple(residuals)
    return out


def main() -> None:
    print("FAN_OUT_DOMINANCE = {")
    for name, values in fan_out_dominance().items():
        print(f"    {name!r}: {values!r},")
    print("}")
    print()
    print("WEAK_SINGLE_RESONANCE = {")
    for name, values in weak_single_resonance().items():
        print(f"    {name!r}: {values!r},")
    print("}")
    print()
    print("ORACLE_RESIDUALS = {")
    for name, values in oracle_residuals().items():
        print(f"    {name!r}: {values!r},")
    print("}")


if __name__ == "__main__":
    main()
