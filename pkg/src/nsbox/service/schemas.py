"""Pydantic request/response models for the analysis service.

Payloads reuse the package's interchange formats: behaviors are
{"scenario": ..., "table": {...}} documents, cells are "abc|xyz" strings and
every probability or coefficient is an exact rational string ("1/5") or
integer.  Responses render all rationals as strings in lowest terms.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ScenarioModel(BaseModel):
    parties: int = Field(ge=1)
    inputs: int = Field(ge=1)
    outputs: int = Field(ge=1)


class BehaviorModel(BaseModel):
    scenario: ScenarioModel
    table: dict[str, dict[str, str | int]]


class PatternModel(BaseModel):
    target: str
    zeros: list[str]


class ExpressionModel(BaseModel):
    cells: dict[str, str | int]


# -- requests


class CheckRequest(BaseModel):
    behavior: BehaviorModel


class HardyRequest(BaseModel):
    behavior: BehaviorModel
    pattern: PatternModel | None = None


class LocalRequest(BaseModel):
    behavior: BehaviorModel


class ToblRequest(BaseModel):
    behavior: BehaviorModel
    cut: str | None = None  # "A|BC", "B|AC", "C|AB"; None checks all three


class GyniRequest(BaseModel):
    behavior: BehaviorModel


class WiringsRequest(BaseModel):
    behavior: BehaviorModel
    cut: str = "A|BC"


class OptimizeRequest(BaseModel):
    set: str  # "local" | "tobl" | "ns"
    pattern: PatternModel | None = None
    expression: ExpressionModel | None = None
    cuts: list[str] | None = None


class ReproduceRequest(BaseModel):
    behavior: BehaviorModel | None = None  # defaults to the embedded table1


# -- responses


class CheckResponse(BaseModel):
    valid: bool
    violations: list[str]
    no_signaling: bool
    signaling_witnesses: list[str]


class HardyResponse(BaseModel):
    success: str
    threshold: str
    residuals: dict[str, str]
    zeros_satisfied: bool
    hardy: bool
    post_quantum: bool


class LocalResponse(BaseModel):
    feasible: bool
    weights: list[dict] | None = None
    certificate: dict[str, str] | None = None


class ToblCutResult(BaseModel):
    feasible: bool
    decomposition: list[dict] | None = None
    certificate: dict[str, str] | None = None


class ToblResponse(BaseModel):
    cuts: dict[str, ToblCutResult]
    feasible_on_requested: bool


class GyniResponse(BaseModel):
    value: str
    classical_bound: str
    satisfied: bool


class WiringCounterexampleModel(BaseModel):
    rank: int
    branches: list[dict]
    behavior: dict
    certificate: dict[str, str]


class WiringsResponse(BaseModel):
    all_local: bool
    wirings_checked: int
    distinct_behaviors: int
    counterexample: WiringCounterexampleModel | None = None


class OptimizeResponse(BaseModel):
    value: str
    behavior: dict


class ClaimModel(BaseModel):
    claim_id: str
    description: str
    expected: str
    computed: str
    passed: bool


class ClaimsResponse(BaseModel):
    claims: list[ClaimModel]
    all_passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
