"""Pydantic request/response models for the HTTP filtering service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class ProfilePayload(BaseModel):
    like: list[str] = Field(default_factory=list)
    unlike: list[str] = Field(default_factory=list)
    threshold: int = 0


class SegmentRequest(BaseModel):
    html: str
    wrap_width: int = 80
    merge_threshold: float = 2.0
    drop_empty: bool = True


class LinkInfo(BaseModel):
    href: str
    anchor_tokens: list[str]
    url_tokens: list[str]


class ImageInfo(BaseModel):
    src: str
    alt_tokens: list[str]


class SegmentInfo(BaseModel):
    index: int
    node_path: list[int]
    density: float
    text_tokens: list[str]
    links: list[LinkInfo]
    images: list[ImageInfo]


class SegmentResponse(BaseModel):
    segments: list[SegmentInfo]


class FilterRequest(BaseModel):
    html: str
    profile: ProfilePayload
    mode: str = "block"
    threshold: Optional[int] = None
    dummy_message: str = "[segment blocked]"
    unique_terms: bool = False


class SegmentReport(BaseModel):
    index: int
    text_weight: int
    link_weight: int
    image_weight: int
    total: int
    disposition: str


class FilterResponse(BaseModel):
    html: str
    report: list[SegmentReport]


class ProfileCheckResponse(BaseModel):
    like: list[str]
    unlike: list[str]
    threshold: int


class PageResultPayload(BaseModel):
    page_id: str
    segment_count: int
    filtered_count: int
    false_positives: int
    false_negatives: int


class SessionMetricsRequest(BaseModel):
    session_id: str
    pages: list[PageResultPayload]


class MetricsRowPayload(BaseModel):
    session_id: str
    msc: float
    mfsc: float
    mfp: float
    mfn: float
    accuracy_percent: float


class AggregateRequest(BaseModel):
    rows: list[MetricsRowPayload]


class AggregateResponse(BaseModel):
    mean_mfsc: float
    mean_mfp: float
    mean_mfn: float
    mean_accuracy: float


class HealthResponse(BaseModel):
    status: str
    version: str
