"""Command-line interface.

Every command is a thin client of the HTTP service in
:mod:`eitat.service`: by default the request is dispatched in-process
through an ASGI transport (no socket, no subprocess), and ``--server URL``
points the same client at a remote instance started with ``eitat serve``.

Exit codes: 0 success; 2 usage or input error; 3 degenerate operating point
(coupling exactly at threshold); 4 verification failure; 1 anything else.

Options can come from a ``--config`` file of ``key = value`` lines using the
long option names (``threshold-factor = 0.5``); explicit flags win over the
file, and built-in defaults fill the rest.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
import tempfile
from typing import Optional

import httpx
import numpy as np

from . import __version__
from .render import fmt, fmt_complex
from .service import create_app

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_VERIFY_FAILED = 4

_SYSTEMS = ("lambda", "cascade-eit", "cascade-at", "vee")
_DEFAULT_FACTORS = "2.0,1.1,0.5,0.1"


class UsageError(Exception):
    pass


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean value, got {text!r}")


def _parse_grid(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be MIN:MAX:N, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be MIN:MAX:N with numeric fields, got {text!r}")
    return {"min": lo, "max": hi, "count": count}


def _parse_factors(text: str) -> list:
    stripped = text.strip()
    if not stripped:
        return []
    try:
        return [float(part) for part in stripped.split(",")]
    except ValueError:
        raise UsageError(f"factors must be comma-separated numbers, got {text!r}")


def _parse_factor_range(text: str, log: bool) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"factor range must be MIN:MAX:N, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(
            f"factor range must be MIN:MAX:N with numeric fields, got {text!r}"
        )
    if count < 0:
        raise UsageError(f"factor range count must be >= 0, got {count}")
    if count == 0:
        return []
    if count == 1:
        if lo != hi:
            raise UsageError("a single-point factor range needs equal bounds")
        return [lo]
    if log:
        if lo <= 0 or hi <= 0:
            raise UsageError("logarithmic factor ranges need positive bounds")
        return [float(x) for x in np.geomspace(lo, hi, count)]
    step = (hi - lo) / (count - 1)
    return [lo + k * step for k in range(count)]


# Option registry: converter applied to config-file strings, plus the
# hard default used when neither the flag nor the file supplies a value.
_CONVERTERS = {
    "system": str,
    "w21": float,
    "w31": float,
    "w32": float,
    "omega_c": float,
    "threshold_factor": float,
    "grid": str,
    "prefactor": str,
    "metric": str,
    "format": str,
    "output": str,
    "probe_eps": float,
    "tol": float,
    "convention": str,
    "factors": str,
    "factor_range": str,
    "log": _parse_bool,
    "dip": _parse_bool,
    "server": str,
    "host": str,
    "port": int,
}


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(
                        f"{path}:{lineno}: expected key = value, got {raw.rstrip()!r}"
                    )
                key, value = line.split("=", 1)
                key = key.strip().replace("-", "_")
                if key not in _CONVERTERS:
                    raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
                values[key] = _CONVERTERS[key](value.strip())
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return values


def _merge(args: argparse.Namespace, config: dict, defaults: dict) -> dict:
    """Flag value if given, else config-file value, else hard default."""
    merged = {}
    for key, fallback in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, fallback)
        merged[key] = value
    return merged


def _require_system(options: dict) -> str:
    system = options.get("system")
    if system is None:
        raise UsageError("--system is required (or set system= in the config file)")
    return system


def _decay_payload(options: dict) -> Optional[dict]:
    overrides = {
        key: options[key]
        for key in ("w21", "w31", "w32")
        if options.get(key) is not None
    }
    return overrides or None


def _strength_payload(options: dict) -> dict:
    omega_c = options.get("omega_c")
    factor = options.get("threshold_factor")
    if (omega_c is None) == (factor is None):
        raise UsageError("exactly one of --omega-c / --threshold-factor is required")
    if omega_c is not None:
        return {"omega_c": omega_c}
    return {"threshold_factor": factor}


async def _post_async(server: Optional[str], path: str, payload: dict):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=120.0) as client:
            return await client.post(path, json=payload)
    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://eitat.internal"
    ) as client:
        return await client.post(path, json=payload)


def _post(server: Optional[str], path: str, payload: dict) -> httpx.Response:
    return asyncio.run(_post_async(server, path, payload))


def _fail_from_response(response: httpx.Response) -> int:
    try:
        body = response.json()
    except ValueError:
        body = {"detail": response.text}
    detail = body.get("detail", "request failed")
    if response.status_code == 409:
        threshold = body.get("threshold")
        nudges = body.get("suggested_factors") or []
        print(f"error: {detail}", file=sys.stderr)
        if threshold is not None:
            print(f"threshold coupling strength: {fmt(threshold)}", file=sys.stderr)
        if nudges:
            printable = ", ".join(fmt(x) for x in nudges)
            print(
                f"try a nearby threshold factor instead, e.g. {printable}",
                file=sys.stderr,
            )
        return EXIT_DEGENERATE
    print(f"error: {detail}", file=sys.stderr)
    if response.status_code == 422:
        return EXIT_USAGE
    return EXIT_OTHER


def _write_output(text: str, output: Optional[str]) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    if output is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".eitat-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_path, output)
    except BaseException:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise


def _tabular_output(response: httpx.Response, fmt_name: str, output) -> None:
    if fmt_name == "csv":
        _write_output(response.text, output)
    else:
        _write_output(json.dumps(response.json(), indent=2) + "\n", output)


def cmd_params(options: dict) -> int:
    payload = {"system": _require_system(options)}
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    response = _post(options.get("server"), "/v1/params", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    body = response.json()
    probe = body["probe_transition"]
    coupling = body["coupling_transition"]
    lines = [
        f"system: {body['system']}",
        f"probe transition: {probe[0]}-{probe[1]}",
        f"coupling transition: {coupling[0]}-{coupling[1]}",
    ]
    for name in ("w21", "w31", "w32"):
        lines.append(f"{name.upper()} = {fmt(body['decay'][name])}")
    for name in ("gamma12", "gamma13", "gamma23"):
        lines.append(f"{name} = {fmt(body['gammas'][name])}")
    if body["threshold_defined"]:
        lines.append(f"threshold = {fmt(body['threshold'])}")
    else:
        lines.append(
            f"threshold = {fmt(body['threshold'])} (not positive: "
            "threshold factor undefined for this decay set)"
        )
    _write_output("\n".join(lines) + "\n", options.get("output"))
    return EXIT_OK


def cmd_poles(options: dict) -> int:
    payload = {"system": _require_system(options), **_strength_payload(options)}
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    response = _post(options.get("server"), "/v1/poles", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    body = response.json()
    z1 = complex(body["poles"]["z1"]["re"], body["poles"]["z1"]["im"])
    z2 = complex(body["poles"]["z2"]["re"], body["poles"]["z2"]["im"])
    split = complex(body["splitting"]["re"], body["splitting"]["im"])
    factor = body["threshold_factor"]
    lines = [
        f"system: {body['system']}",
        f"omega_c = {fmt(body['omega_c'])}",
        "threshold factor = "
        + (fmt(factor) if factor is not None else "undefined"),
        f"Z1 = {fmt_complex(z1)}",
        f"Z2 = {fmt_complex(z2)}",
        f"splitting = {fmt_complex(split)}",
    ]
    if body["degenerate"]:
        lines.append("note: pole pair is degenerate (coupling at threshold)")
    _write_output("\n".join(lines) + "\n", options.get("output"))
    return EXIT_OK


def cmd_spectrum(options: dict) -> int:
    payload = {
        "system": _require_system(options),
        **_strength_payload(options),
        "include_prefactor": options["prefactor"] == "on",
        "format": options["format"],
    }
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    if options.get("grid") is not None:
        payload["grid"] = _parse_grid(options["grid"])
    response = _post(options.get("server"), "/v1/spectrum", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    _tabular_output(response, options["format"], options.get("output"))
    return EXIT_OK


def cmd_ratio_scan(options: dict) -> int:
    if options.get("factors") is not None:
        factors = _parse_factors(options["factors"])
    elif options.get("factor_range") is not None:
        factors = _parse_factor_range(options["factor_range"], options["log"])
    else:
        raise UsageError("one of --factors / --factor-range is required")
    payload = {
        "system": _require_system(options),
        "factors": factors,
        "metric": options["metric"],
        "format": options["format"],
    }
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    response = _post(options.get("server"), "/v1/ratio-scan", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    _tabular_output(response, options["format"], options.get("output"))
    return EXIT_OK


def cmd_classify(options: dict) -> int:
    payload = {
        "system": _require_system(options),
        **_strength_payload(options),
        "dip": bool(options["dip"]),
    }
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    if options.get("grid") is not None:
        payload["grid"] = _parse_grid(options["grid"])
    response = _post(options.get("server"), "/v1/classify", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    body = response.json()
    lines = [
        f"system: {body['system']}",
        f"omega_c = {fmt(body['omega_c'])}",
        f"threshold = {fmt(body['threshold'])}",
        f"threshold factor = {fmt(body['threshold_factor'])}",
        f"regime: {body['regime']}",
        f"category: {body['category']}",
        f"phenomenon: {body['phenomenon']}",
    ]
    dip = body.get("dip")
    if dip is not None:
        if dip["has_dip"]:
            peaks = ", ".join(fmt(p) for p in dip["peak_positions"])
            lines.append(
                f"dip: depth {fmt(dip['depth'])}, flanking peaks at {peaks}"
            )
        else:
            lines.append(f"dip: none (relative depth {fmt(dip['depth'])})")
    _write_output("\n".join(lines) + "\n", options.get("output"))
    return EXIT_OK


def cmd_evolution(options: dict) -> int:
    payload = {
        "system": _require_system(options),
        "factors": _parse_factors(options["factors"]),
        "include_prefactor": options["prefactor"] == "on",
        "format": options["format"],
    }
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    if options.get("grid") is not None:
        payload["grid"] = _parse_grid(options["grid"])
    response = _post(options.get("server"), "/v1/evolution", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    _tabular_output(response, options["format"], options.get("output"))
    return EXIT_OK


def cmd_verify(options: dict) -> int:
    payload = {
        "system": _require_system(options),
        **_strength_payload(options),
        "probe_eps": options["probe_eps"],
        "tolerance": options["tol"],
        "convention": options["convention"],
    }
    decay = _decay_payload(options)
    if decay:
        payload["decay"] = decay
    if options.get("grid") is not None:
        payload["grid"] = _parse_grid(options["grid"])
    response = _post(options.get("server"), "/v1/verify", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    body = response.json()
    scale = complex(body["scale"]["re"], body["scale"]["im"])
    lines = [
        f"system: {body['system']}",
        f"omega_c = {fmt(body['omega_c'])}",
        f"probe_eps = {fmt(body['probe_eps'])}",
        f"convention: {body['convention']}",
        f"grid points: {body['points']}",
        f"fitted scale = {fmt_complex(scale)}",
        f"relative rms residual = {fmt(body['residual'])}",
        f"worst-point residual = {fmt(body['per_point'])}",
        f"tolerance = {fmt(body['tolerance'])}",
        f"result: {'pass' if body['passed'] else 'FAIL'}",
    ]
    _write_output("\n".join(lines) + "\n", options.get("output"))
    return EXIT_OK if body["passed"] else EXIT_VERIFY_FAILED


def cmd_serve(options: dict) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=options["host"], port=options["port"])
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, *, strength: bool) -> None:
    parser.add_argument("--system", choices=_SYSTEMS, default=None)
    parser.add_argument("--w21", type=float, default=None, metavar="F")
    parser.add_argument("--w31", type=float, default=None, metavar="F")
    parser.add_argument("--w32", type=float, default=None, metavar="F")
    if strength:
        parser.add_argument("--omega-c", type=float, default=None, metavar="F")
        parser.add_argument(
            "--threshold-factor", type=float, default=None, metavar="F"
        )
    parser.add_argument("--config", default=None, metavar="PATH")
    parser.add_argument("--output", default=None, metavar="PATH")
    parser.add_argument("--server", default=None, metavar="URL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitat",
        description=(
            "Probe-absorption spectra of driven three-level systems: "
            "two-resonance decompositions, regime classification, and "
            "steady-state verification."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("params", help="decay rates, derived gammas, threshold")
    _add_common(p, strength=False)

    p = sub.add_parser("poles", help="pole pair at one coupling strength")
    _add_common(p, strength=True)

    p = sub.add_parser("spectrum", help="two-resonance spectrum over a grid")
    _add_common(p, strength=True)
    p.add_argument("--grid", default=None, metavar="MIN:MAX:N")
    p.add_argument("--prefactor", choices=("on", "off"), default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("ratio-scan", help="resonance dominance vs threshold factor")
    _add_common(p, strength=False)
    p.add_argument("--factors", default=None, metavar="F1,F2,...")
    p.add_argument("--factor-range", default=None, metavar="MIN:MAX:N")
    p.add_argument("--log", action="store_const", const=True, default=None)
    p.add_argument("--metric", choices=("abs-imag", "modulus"), default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("classify", help="regime, category, and phenomenon")
    _add_common(p, strength=True)
    p.add_argument("--dip", action="store_const", const=True, default=None)
    p.add_argument("--grid", default=None, metavar="MIN:MAX:N")

    p = sub.add_parser("evolution", help="spectra along a factor ladder")
    _add_common(p, strength=False)
    p.add_argument("--factors", default=None, metavar="F1,F2,...")
    p.add_argument("--grid", default=None, metavar="MIN:MAX:N")
    p.add_argument("--prefactor", choices=("on", "off"), default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("verify", help="closed forms vs steady-state solver")
    _add_common(p, strength=True)
    p.add_argument("--grid", default=None, metavar="MIN:MAX:N")
    p.add_argument("--probe-eps", type=float, default=None, metavar="F")
    p.add_argument("--tol", type=float, default=None, metavar="F")
    p.add_argument("--convention", choices=("full", "halved"), default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--config", default=None, metavar="PATH")

    return parser


_DEFAULTS = {
    "params": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "output": None,
        "server": None,
    },
    "poles": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "omega_c": None,
        "threshold_factor": None,
        "output": None,
        "server": None,
    },
    "spectrum": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "omega_c": None,
        "threshold_factor": None,
        "grid": None,
        "prefactor": "on",
        "format": "csv",
        "output": None,
        "server": None,
    },
    "ratio-scan": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "factors": None,
        "factor_range": None,
        "log": False,
        "metric": "abs-imag",
        "format": "csv",
        "output": None,
        "server": None,
    },
    "classify": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "omega_c": None,
        "threshold_factor": None,
        "dip": False,
        "grid": None,
        "output": None,
        "server": None,
    },
    "evolution": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "factors": _DEFAULT_FACTORS,
        "grid": None,
        "prefactor": "on",
        "format": "csv",
        "output": None,
        "server": None,
    },
    "verify": {
        "system": None,
        "w21": None,
        "w31": None,
        "w32": None,
        "omega_c": None,
        "threshold_factor": None,
        "grid": None,
        "probe_eps": 1e-4,
        "tol": 1e-6,
        "convention": "full",
        "output": None,
        "server": None,
    },
    "serve": {"host": "127.0.0.1", "port": 8000},
}

_HANDLERS = {
    "params": cmd_params,
    "poles": cmd_poles,
    "spectrum": cmd_spectrum,
    "ratio-scan": cmd_ratio_scan,
    "classify": cmd_classify,
    "evolution": cmd_evolution,
    "verify": cmd_verify,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        config = _read_config(args.config) if getattr(args, "config", None) else {}
        options = _merge(args, config, _DEFAULTS[args.command])
        return _HANDLERS[args.command](options)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except KeyboardInterrupt:
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
