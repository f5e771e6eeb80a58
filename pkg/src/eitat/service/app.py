"""FastAPI application exposing the library over HTTP.

The CLI talks to this app in-process through an ASGI transport, so every
command-line feature corresponds to one endpoint here.  Endpoints that
produce tabular data accept ``format: "csv"`` and then return exactly the
bytes the CLI writes to disk; JSON responses mirror the CSV columns.

Error mapping: degenerate pole pairs are 409 (a well-formed request hitting
the one singular operating point, with a suggested nudge); every input
problem (bad topology, undefined threshold, unusable grid, bad values) is
422.
"""
from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__, analysis, atomic, bloch, lineshape, render
from ..errors import DegeneratePoleError, EitatError
from . import schemas

_CSV_MEDIA = "text/csv; charset=utf-8"


def _resolve_decay(
    system: atomic.SystemKind, overrides: schemas.DecayOverrides | None
) -> atomic.DecayMatrix:
    base = atomic.reference_decay(system)
    if overrides is None:
        return base
    values = dataclasses.asdict(base)
    for name, value in overrides.model_dump(exclude_none=True).items():
        values[name] = value
    return atomic.DecayMatrix(**values)


def _resolve_omega_c(
    system: atomic.SystemKind,
    w: atomic.DecayMatrix,
    omega_c: float | None,
    threshold_factor: float | None,
) -> float:
    if omega_c is not None:
        return float(omega_c)
    g = atomic.derive_gammas(system, w)
    return float(threshold_factor) * atomic.threshold_of(system, g)


def _resolve_grid(
    grid: schemas.GridSpec | None,
    omega_c: float,
    g: atomic.PolarizationRates,
) -> np.ndarray:
    if grid is None:
        return lineshape.default_grid(omega_c, g)
    return lineshape.linear_grid(grid.min, grid.max, grid.count)


def _poles_payload(pair: lineshape.PolePair) -> schemas.PolesPayload:
    return schemas.PolesPayload(
        z1=schemas.ComplexParts(re=pair.z1.real, im=pair.z1.imag),
        z2=schemas.ComplexParts(re=pair.z2.real, im=pair.z2.imag),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="eitat", version=__version__)

    @app.exception_handler(DegeneratePoleError)
    async def _degenerate_pole(request: Request, exc: DegeneratePoleError):
        return JSONResponse(
            status_code=409,
            content={
                "detail": str(exc),
                "threshold": exc.threshold,
                "suggested_factors": [0.99, 1.01],
            },
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(EitatError)
    async def _domain_error(request: Request, exc: EitatError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    async def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/v1/params", response_model=schemas.ParamsResponse)
    async def params(req: schemas.ParamsRequest) -> schemas.ParamsResponse:
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        g = atomic.derive_gammas(system, w)
        expression = atomic.threshold_expression(system, g)
        return schemas.ParamsResponse(
            schema_version=render.SCHEMA_VERSION,
            system=system.value,
            probe_transition=list(system.probe_transition),
            coupling_transition=list(system.coupling_transition),
            decay={
                "w21": w.w21,
                "w31": w.w31,
                "w32": w.w32,
                "w12": w.w12,
                "w13": w.w13,
                "w23": w.w23,
            },
            gammas={
                "gamma12": g.gamma12,
                "gamma13": g.gamma13,
                "gamma23": g.gamma23,
            },
            threshold=expression,
            threshold_defined=expression > 0.0,
        )

    @app.post("/v1/poles", response_model=schemas.PolesResponse)
    async def poles(req: schemas.PolesRequest) -> schemas.PolesResponse:
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        omega_c = _resolve_omega_c(system, w, req.omega_c, req.threshold_factor)
        g = atomic.derive_gammas(system, w)
        pair = lineshape.poles(system, g, omega_c)
        expression = atomic.threshold_expression(system, g)
        factor = omega_c / expression if expression > 0.0 else None
        return schemas.PolesResponse(
            schema_version=render.SCHEMA_VERSION,
            system=system.value,
            omega_c=omega_c,
            threshold_factor=factor,
            poles=_poles_payload(pair),
            splitting=schemas.ComplexParts(
                re=pair.splitting.real, im=pair.splitting.imag
            ),
            degenerate=pair.is_degenerate(),
        )

    @app.post("/v1/spectrum")
    async def spectrum(req: schemas.SpectrumRequest):
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        omega_c = _resolve_omega_c(system, w, req.omega_c, req.threshold_factor)
        g = atomic.derive_gammas(system, w)
        grid = _resolve_grid(req.grid, omega_c, g)
        table = lineshape.spectrum_table(
            system, w, omega_c, grid, include_prefactor=req.include_prefactor
        )
        if req.format == "csv":
            return PlainTextResponse(render.spectrum_csv(table), media_type=_CSV_MEDIA)
        return JSONResponse(render.spectrum_json(table))

    @app.post("/v1/ratio-scan")
    async def ratio_scan(req: schemas.RatioScanRequest):
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        result = analysis.ratio_scan(system, w, req.factors, req.metric)
        if req.format == "csv":
            return PlainTextResponse(render.ratio_csv(result), media_type=_CSV_MEDIA)
        return JSONResponse(render.ratio_json(result, system, req.metric))

    @app.post("/v1/classify", response_model=schemas.ClassifyResponse)
    async def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        omega_c = _resolve_omega_c(system, w, req.omega_c, req.threshold_factor)
        report = analysis.classify(system, w, omega_c)
        dip_payload = None
        if req.dip:
            if req.grid is not None and (req.grid.count < 3 or req.grid.count % 2 == 0):
                raise ValueError(
                    "dip analysis needs an odd grid count of at least 3 "
                    "(so that detuning 0 is a sample)"
                )
            g = atomic.derive_gammas(system, w)
            grid = _resolve_grid(req.grid, omega_c, g)
            table = lineshape.spectrum_table(
                system, w, omega_c, grid, include_prefactor=True
            )
            dip = analysis.dip_report(table)
            dip_payload = schemas.DipPayload(
                has_dip=dip.has_dip,
                depth=dip.depth,
                peak_positions=list(dip.peak_positions),
            )
        return schemas.ClassifyResponse(
            schema_version=render.SCHEMA_VERSION,
            system=system.value,
            omega_c=report.omega_c,
            threshold=report.threshold,
            threshold_factor=report.threshold_factor,
            regime=report.regime.value,
            category=report.category.value,
            phenomenon=report.phenomenon.value,
            dip=dip_payload,
        )

    @app.post("/v1/evolution")
    async def evolution(req: schemas.EvolutionRequest):
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        grid = None
        if req.grid is not None:
            grid = lineshape.linear_grid(req.grid.min, req.grid.max, req.grid.count)
        entries = analysis.evolution_suite(
            system,
            w,
            req.factors,
            include_prefactor=req.include_prefactor,
            grid=grid,
        )
        if req.format == "csv":
            return PlainTextResponse(
                render.evolution_csv(entries), media_type=_CSV_MEDIA
            )
        return JSONResponse(
            render.evolution_json(entries, system, req.include_prefactor)
        )

    @app.post("/v1/verify", response_model=schemas.VerifyResponse)
    async def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
        system = atomic.SystemKind.from_name(req.system)
        w = _resolve_decay(system, req.decay)
        omega_c = _resolve_omega_c(system, w, req.omega_c, req.threshold_factor)
        g = atomic.derive_gammas(system, w)
        grid = _resolve_grid(req.grid, omega_c, g)
        verdict = bloch.compare_to_closed_form(
            system, w, omega_c, grid, req.probe_eps, convention=req.convention
        )
        passed = verdict.residual <= req.tolerance
        return schemas.VerifyResponse(
            schema_version=render.SCHEMA_VERSION,
            system=system.value,
            omega_c=omega_c,
            probe_eps=req.probe_eps,
            convention=req.convention,
            points=int(len(grid)),
            scale=schemas.ComplexParts(re=verdict.scale.real, im=verdict.scale.imag),
            residual=verdict.residual,
            per_point=verdict.per_point,
            tolerance=req.tolerance,
            passed=passed,
        )

    return app
