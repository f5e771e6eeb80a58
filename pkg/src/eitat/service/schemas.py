"""Request and response models for the HTTP service.

Every computation endpoint takes a JSON body naming the level scheme plus
optional decay-rate overrides; the field strength comes in either as a raw
coupling Rabi frequency ``omega_c`` or as a dimensionless
``threshold_factor`` (exactly one of the two).  Responses carry the same
``schema_version`` as the CSV headers.
"""
from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SystemName = Literal["lambda", "cascade-eit", "cascade-at", "vee"]
MetricName = Literal["abs-imag", "modulus"]
FormatName = Literal["json", "csv"]
ConventionName = Literal["full", "halved"]

DEFAULT_EVOLUTION_FACTORS = (2.0, 1.1, 0.5, 0.1)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DecayOverrides(StrictModel):
    """Per-channel overrides of the scheme's built-in decay set.

    Only supplied channels are replaced; the rest keep their built-in
    values.  Upward channels exist so that a topology mistake is rejected
    with a clear message instead of being unrepresentable.
    """

    w21: Optional[float] = Field(default=None, ge=0)
    w31: Optional[float] = Field(default=None, ge=0)
    w32: Optional[float] = Field(default=None, ge=0)
    w12: Optional[float] = Field(default=None, ge=0)
    w13: Optional[float] = Field(default=None, ge=0)
    w23: Optional[float] = Field(default=None, ge=0)


class GridSpec(StrictModel):
    """Evenly spaced detuning grid, endpoints inclusive."""

    min: float
    max: float
    count: int = Field(ge=1)


class ParamsRequest(StrictModel):
    system: SystemName
    decay: Optional[DecayOverrides] = None


class OperatingPointRequest(StrictModel):
    """Common base: scheme, decay set, and exactly one strength input."""

    system: SystemName
    decay: Optional[DecayOverrides] = None
    omega_c: Optional[float] = Field(default=None, ge=0)
    threshold_factor: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _exactly_one_strength(self):
        if (self.omega_c is None) == (self.threshold_factor is None):
            raise ValueError(
                "exactly one of omega_c / threshold_factor must be supplied"
            )
        return self


class PolesRequest(OperatingPointRequest):
    pass


class SpectrumRequest(OperatingPointRequest):
    grid: Optional[GridSpec] = None
    include_prefactor: bool = True
    format: FormatName = "json"


class RatioScanRequest(StrictModel):
    system: SystemName
    decay: Optional[DecayOverrides] = None
    factors: List[float]
    metric: MetricName = "abs-imag"
    format: FormatName = "json"


class ClassifyRequest(OperatingPointRequest):
    dip: bool = False
    grid: Optional[GridSpec] = None


class EvolutionRequest(StrictModel):
    system: SystemName
    decay: Optional[DecayOverrides] = None
    factors: List[float] = Field(default_factory=lambda: list(DEFAULT_EVOLUTION_FACTORS))
    grid: Optional[GridSpec] = None
    include_prefactor: bool = True
    format: FormatName = "json"


class VerifyRequest(OperatingPointRequest):
    grid: Optional[GridSpec] = None
    probe_eps: float = Field(default=1e-4, gt=0, le=1e-2)
    tolerance: float = Field(default=1e-6, ge=0)
    convention: ConventionName = "full"


class ComplexParts(StrictModel):
    re: float
    im: float


class PolesPayload(StrictModel):
    z1: ComplexParts
    z2: ComplexParts


class ParamsResponse(StrictModel):
    schema_version: str
    system: SystemName
    probe_transition: List[int]
    coupling_transition: List[int]
    decay: dict
    gammas: dict
    threshold: float
    threshold_defined: bool


class PolesResponse(StrictModel):
    schema_version: str
    system: SystemName
    omega_c: float
    threshold_factor: Optional[float]
    poles: PolesPayload
    splitting: ComplexParts
    degenerate: bool


class SpectrumResponse(StrictModel):
    schema_version: str
    kind: Literal["spectrum"]
    system: SystemName
    omega_c: float
    include_prefactor: bool
    poles: PolesPayload
    columns: List[str]
    rows: List[List[float]]


class RatioScanResponse(StrictModel):
    schema_version: str
    kind: Literal["ratio-scan"]
    system: SystemName
    metric: MetricName
    columns: List[str]
    rows: List[List[float]]
    skipped_factors: List[float]


class DipPayload(StrictModel):
    has_dip: bool
    depth: float
    peak_positions: List[float]


class ClassifyResponse(StrictModel):
    schema_version: str
    system: SystemName
    omega_c: float
    threshold: float
    threshold_factor: float
    regime: str
    category: str
    phenomenon: str
    dip: Optional[DipPayload] = None


class EvolutionEntryPayload(StrictModel):
    factor: float
    omega_c: float
    degenerate: bool
    poles: Optional[PolesPayload] = None
    rows: Optional[List[List[float]]] = None


class EvolutionResponse(StrictModel):
    schema_version: str
    kind: Literal["evolution"]
    system: SystemName
    include_prefactor: bool
    columns: List[str]
    entries: List[EvolutionEntryPayload]


class VerifyResponse(StrictModel):
    schema_version: str
    system: SystemName
    omega_c: float
    probe_eps: float
    convention: ConventionName
    points: int
    scale: ComplexParts
    residual: float
    per_point: float
    tolerance: float
    passed: bool


class HealthResponse(StrictModel):
    status: Literal["ok"]
    version: str
