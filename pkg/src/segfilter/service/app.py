"""FastAPI application wrapping the filtering pipeline."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..dom import InputTooLarge, parse_html, serialize_html
from ..engine import FilterConfig, filter_page, report_rows
from ..evaluation import (
    EvaluationError,
    MetricsRow,
    PageResult,
    aggregate,
    session_metrics,
)
from ..profiles import ProfileError, make_profile
from ..segmentation import SegmenterConfig, segment_page, segment_to_dict
from .schemas import (
    AggregateRequest,
    AggregateResponse,
    FilterRequest,
    FilterResponse,
    HealthResponse,
    MetricsRowPayload,
    ProfileCheckResponse,
    ProfilePayload,
    SegmentRequest,
    SegmentResponse,
    SessionMetricsRequest,
)


def _profile_from_payload(payload: ProfilePayload):
    try:
        return make_profile(payload.like, payload.unlike, payload.threshold)
    except ProfileError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="segfilter", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/segment", response_model=SegmentResponse)
    def segment(request: SegmentRequest) -> SegmentResponse:
        try:
            cfg = SegmenterConfig(
                wrap_width=request.wrap_width,
                merge_threshold=request.merge_threshold,
                drop_empty=request.drop_empty,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            doc = parse_html(request.html)
        except InputTooLarge as exc:
            raise HTTPException(status_code=413, detail=str(exc))
        segments = segment_page(doc, cfg)
        return SegmentResponse(segments=[segment_to_dict(s) for s in segments])

    @app.post("/filter", response_model=FilterResponse)
    def filter_html(request: FilterRequest) -> FilterResponse:
        bag = _profile_from_payload(request.profile)
        try:
            fcfg = FilterConfig(
                mode=request.mode,
                dummy_message=request.dummy_message,
                threshold_override=request.threshold,
                unique_terms=request.unique_terms,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            doc = parse_html(request.html)
        except InputTooLarge as exc:
            raise HTTPException(status_code=413, detail=str(exc))
        result = filter_page(doc, bag, fcfg=fcfg)
        return FilterResponse(
            html=serialize_html(result.document).decode("utf-8"),
            report=report_rows(result),
        )

    @app.post("/profile/check", response_model=ProfileCheckResponse)
    def profile_check(payload: ProfilePayload) -> ProfileCheckResponse:
        bag = _profile_from_payload(payload)
        return ProfileCheckResponse(
            like=sorted(bag.like),
            unlike=sorted(bag.unlike),
            threshold=bag.threshold,
        )

    @app.post("/metrics/session", response_model=MetricsRowPayload)
    def metrics_session(request: SessionMetricsRequest) -> MetricsRowPayload:
        pages = [
            PageResult(
                page_id=p.page_id,
                segment_count=p.segment_count,
                filtered_count=p.filtered_count,
                false_positives=p.false_positives,
                false_negatives=p.false_negatives,
            )
            for p in request.pages
        ]
        try:
            row = session_metrics(request.session_id, pages)
        except EvaluationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return MetricsRowPayload(**row.__dict__)

    @app.post("/metrics/aggregate", response_model=AggregateResponse)
    def metrics_aggregate(request: AggregateRequest) -> AggregateResponse:
        rows = [
            MetricsRow(
                session_id=r.session_id,
                msc=r.msc,
                mfsc=r.mfsc,
                mfp=r.mfp,
                mfn=r.mfn,
                accuracy_percent=r.accuracy_percent,
            )
            for r in request.rows
        ]
        try:
            summary = aggregate(rows)
        except EvaluationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return AggregateResponse(**summary.__dict__)

    return app
