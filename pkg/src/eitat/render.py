"""Deterministic rendering of results as CSV, JSON payloads, and text reports.

All numeric formatting goes through :func:`fmt`: shortest round-trip decimal
representation, ``.`` separator, no locale involvement.  CSV uses ``\\n``
line endings and a fixed, versioned header so downstream plotting scripts
can rely on column order.  JSON payloads mirror the CSV columns and carry
the same ``schema_version``.
"""
from __future__ import annotations

import json
from typing import Iterable, List, Sequence

from .analysis import EvolutionEntry, RatioScanResult
from .atomic import SystemKind
from .lineshape import PolePair, SpectrumTable

__all__ = [
    "SCHEMA_VERSION",
    "SPECTRUM_COLUMNS",
    "RATIO_COLUMNS",
    "EVOLUTION_COLUMNS",
    "fmt",
    "fmt_complex",
    "spectrum_csv",
    "spectrum_json",
    "ratio_csv",
    "ratio_json",
    "evolution_csv",
    "evolution_json",
    "dumps_json",
]

SCHEMA_VERSION = "1"

SPECTRUM_COLUMNS = (
    "delta_p",
    "re_r1",
    "im_r1",
    "re_r2",
    "im_r2",
    "re_total",
    "im_total",
    "absorption",
)
RATIO_COLUMNS = ("factor", "ratio", "dominance")
EVOLUTION_COLUMNS = ("factor",) + SPECTRUM_COLUMNS


def fmt(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def fmt_complex(value: complex) -> str:
    sign = "+" if value.imag >= 0 else "-"
    return f"{fmt(value.real)} {sign} {fmt(abs(value.imag))}i"


def _csv(lines: Iterable[str]) -> str:
    return "\n".join(lines) + "\n"


def _spectrum_rows(table: SpectrumTable) -> List[List[float]]:
    rows = []
    for k in range(len(table)):
        rows.append(
            [
                float(table.delta_p[k]),
                float(table.r1[k].real),
                float(table.r1[k].imag),
                float(table.r2[k].real),
                float(table.r2[k].imag),
                float(table.total[k].real),
                float(table.total[k].imag),
                float(table.absorption[k]),
            ]
        )
    return rows


def _pole_payload(pair: PolePair) -> dict:
    return {
        "z1": {"re": pair.z1.real, "im": pair.z1.imag},
        "z2": {"re": pair.z2.real, "im": pair.z2.imag},
    }


def spectrum_csv(table: SpectrumTable) -> str:
    lines = [",".join(SPECTRUM_COLUMNS)]
    for row in _spectrum_rows(table):
        lines.append(",".join(fmt(x) for x in row))
    return _csv(lines)


def spectrum_json(table: SpectrumTable) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "spectrum",
        "system": table.system.value,
        "omega_c": table.omega_c,
        "include_prefactor": table.include_prefactor,
        "poles": _pole_payload(table.pole_pair),
        "columns": list(SPECTRUM_COLUMNS),
        "rows": _spectrum_rows(table),
    }


def ratio_csv(result: RatioScanResult) -> str:
    lines = [",".join(RATIO_COLUMNS)]
    for point in result:
        lines.append(
            ",".join(
                fmt(x) for x in (point.threshold_factor, point.ratio, point.dominance)
            )
        )
    return _csv(lines)


def ratio_json(result: RatioScanResult, system: SystemKind, metric: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "ratio-scan",
        "system": system.value,
        "metric": metric,
        "columns": list(RATIO_COLUMNS),
        "rows": [
            [p.threshold_factor, p.ratio, p.dominance] for p in result
        ],
        "skipped_factors": list(result.skipped),
    }


def evolution_csv(entries: Sequence[EvolutionEntry]) -> str:
    """Stacked spectrum blocks, one per ladder rung, keyed by a factor column.

    Degenerate rungs have no rows here; the JSON payload and the text
    channel carry the annotation.
    """
    lines = [",".join(EVOLUTION_COLUMNS)]
    for entry in entries:
        if entry.table is None:
            continue
        prefix = fmt(entry.factor)
        for row in _spectrum_rows(entry.table):
            lines.append(prefix + "," + ",".join(fmt(x) for x in row))
    return _csv(lines)


def evolution_json(
    entries: Sequence[EvolutionEntry],
    system: SystemKind,
    include_prefactor: bool,
) -> dict:
    payload_entries = []
    for entry in entries:
        item = {
            "factor": entry.factor,
            "omega_c": entry.omega_c,
            "degenerate": entry.degenerate,
        }
        if entry.table is not None:
            item["poles"] = _pole_payload(entry.table.pole_pair)
            item["rows"] = _spectrum_rows(entry.table)
        payload_entries.append(item)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "evolution",
        "system": system.value,
        "include_prefactor": include_prefactor,
        "columns": list(SPECTRUM_COLUMNS),
        "entries": payload_entries,
    }


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"
