"""FastAPI application exposing the toolkit's analyses.

Every analysis endpoint is a POST taking interchange-format documents and
returning exact rationals as strings.  Domain errors (malformed documents,
signaling behaviors, scenario mismatches) come back as 400 with a reason;
shape errors caught by pydantic are FastAPI's usual 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..behavior import is_no_signaling, validate
from ..documents import (
    FormatError,
    behavior_from_document,
    behavior_to_document,
    decomposition_to_document,
    expression_from_document,
    pattern_from_document,
)
from ..games import classical_max, evaluate, gyni_expression, no_signaling_max
from ..hardy import canonical_pattern, hardy_check, hardy_max
from ..localmodels import Bipartition, local_membership, tobl_membership
from ..optimize import PolytopeOptimum
from ..rational import rational_str
from ..tables import shipped_document, table1, verify_paper_claims
from ..wirings import wired_locality_scan
from . import schemas


def _behavior(model: schemas.BehaviorModel):
    try:
        return behavior_from_document(model.model_dump())
    except FormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _bipartition(name: str) -> Bipartition:
    try:
        return Bipartition.from_name(name)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _cert_payload(certificate):
    return {label: rational_str(v) for label, v in certificate.entries}


def _tobl_result(result) -> schemas.ToblCutResult:
    if result.feasible:
        return schemas.ToblCutResult(
            feasible=True,
            decomposition=decomposition_to_document(result.decomposition),
        )
    return schemas.ToblCutResult(
        feasible=False, certificate=_cert_payload(result.certificate)
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="nsbox",
        version=__version__,
        description="Exact analysis of no-signaling boxes: Hardy witnesses, "
        "local and time-ordered bilocal membership, games, wirings.",
    )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.get("/data/table1")
    def data_table1():
        return shipped_document("table1.behavior.json")

    @app.get("/data/tobl-model")
    def data_tobl_model():
        return shipped_document("table2-3.tobl.json")

    @app.post("/check", response_model=schemas.CheckResponse)
    def check(request: schemas.CheckRequest):
        behavior = _behavior(request.behavior)
        report = validate(behavior)
        ns = is_no_signaling(behavior) if report.valid else None
        return schemas.CheckResponse(
            valid=report.valid,
            violations=[v.describe() for v in report.violations],
            no_signaling=bool(ns and ns.no_signaling),
            signaling_witnesses=[w.describe() for w in ns.violations] if ns else [],
        )

    @app.post("/hardy", response_model=schemas.HardyResponse)
    def hardy(request: schemas.HardyRequest):
        behavior = _behavior(request.behavior)
        try:
            pattern = (
                pattern_from_document(request.pattern.model_dump(), behavior.scenario)
                if request.pattern is not None
                else canonical_pattern()
            )
            verdict = hardy_check(behavior, pattern)
        except (FormatError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        residuals = {
            "".join(map(str, outs)) + "|" + "".join(map(str, ins)): rational_str(v)
            for (outs, ins), v in verdict.residuals
        }
        return schemas.HardyResponse(
            success=rational_str(verdict.success),
            threshold=rational_str(verdict.threshold),
            residuals=residuals,
            zeros_satisfied=verdict.zeros_satisfied,
            hardy=verdict.hardy,
            post_quantum=verdict.post_quantum,
        )

    @app.post("/local", response_model=schemas.LocalResponse)
    def local(request: schemas.LocalRequest):
        behavior = _behavior(request.behavior)
        try:
            result = local_membership(behavior)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if result.feasible:
            weights = [
                {"strategy": [list(f) for f in s.assignments], "weight": rational_str(w)}
                for s, w in result.weights
            ]
            return schemas.LocalResponse(feasible=True, weights=weights)
        return schemas.LocalResponse(
            feasible=False, certificate=_cert_payload(result.certificate)
        )

    @app.post("/tobl", response_model=schemas.ToblResponse)
    def tobl(request: schemas.ToblRequest):
        behavior = _behavior(request.behavior)
        cuts = (
            [_bipartition(request.cut)]
            if request.cut is not None
            else [Bipartition(0, (1, 2)), Bipartition(1, (0, 2)), Bipartition(2, (0, 1))]
        )
        try:
            results = {cut.name: tobl_membership(behavior, cut) for cut in cuts}
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return schemas.ToblResponse(
            cuts={name: _tobl_result(r) for name, r in results.items()},
            feasible_on_requested=all(r.feasible for r in results.values()),
        )

    @app.post("/gyni", response_model=schemas.GyniResponse)
    def gyni(request: schemas.GyniRequest):
        behavior = _behavior(request.behavior)
        expr = gyni_expression()
        try:
            value = evaluate(expr, behavior)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        bound = classical_max(expr).value
        return schemas.GyniResponse(
            value=rational_str(value),
            classical_bound=rational_str(bound),
            satisfied=value <= bound,
        )

    @app.post("/wirings", response_model=schemas.WiringsResponse)
    def wirings(request: schemas.WiringsRequest):
        behavior = _behavior(request.behavior)
        cut = _bipartition(request.cut)
        try:
            scan = wired_locality_scan(behavior, cut)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        counterexample = None
        if scan.counterexample is not None:
            ce = scan.counterexample
            counterexample = schemas.WiringCounterexampleModel(
                rank=ce.rank,
                branches=[
                    {
                        "first": b.first,
                        "first_input": b.first_input,
                        "second_input": list(b.second_input),
                        "output": [list(row) for row in b.output],
                    }
                    for b in ce.wiring.branches
                ],
                behavior=behavior_to_document(ce.behavior),
                certificate=_cert_payload(ce.certificate),
            )
        return schemas.WiringsResponse(
            all_local=scan.all_local,
            wirings_checked=scan.wirings_checked,
            distinct_behaviors=scan.distinct_behaviors,
            counterexample=counterexample,
        )

    @app.post("/optimize", response_model=schemas.OptimizeResponse)
    def optimize(request: schemas.OptimizeRequest):
        if request.pattern is not None and request.expression is not None:
            raise HTTPException(
                status_code=400, detail="give either a pattern or an expression"
            )
        scenario = table1().scenario
        cuts = None
        if request.cuts:
            cuts = tuple(_bipartition(name) for name in request.cuts)
        try:
            if request.expression is not None:
                expr = expression_from_document(
                    request.expression.model_dump(), scenario
                )
                result = _maximize_expression(request.set, expr, cuts)
            else:
                pattern = (
                    pattern_from_document(request.pattern.model_dump(), scenario)
                    if request.pattern is not None
                    else canonical_pattern()
                )
                result = hardy_max(request.set, pattern, cuts)
        except (FormatError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return schemas.OptimizeResponse(
            value=rational_str(result.value),
            behavior=behavior_to_document(result.behavior),
        )

    @app.post("/reproduce-paper", response_model=schemas.ClaimsResponse)
    def reproduce(request: schemas.ReproduceRequest | None = None):
        behavior = None
        if request is not None and request.behavior is not None:
            behavior = _behavior(request.behavior)
        report = verify_paper_claims(behavior)
        return schemas.ClaimsResponse(
            claims=[
                schemas.ClaimModel(
                    claim_id=c.claim_id,
                    description=c.description,
                    expected=c.expected,
                    computed=c.computed,
                    passed=c.passed,
                )
                for c in report.claims
            ],
            all_passed=report.all_passed,
        )

    return app


def _maximize_expression(set_spec: str, expr, cuts):
    from ..optimize import max_over_local, max_over_tobl

    if set_spec == "ns":
        return no_signaling_max(expr)
    if set_spec == "local":
        return max_over_local(expr.scenario, expr.as_dict())
    if set_spec == "tobl":
        return max_over_tobl(expr.as_dict(), cuts=cuts)
    raise ValueError(f"unknown set {set_spec!r} (expected local, tobl or ns)")


app = create_app()
