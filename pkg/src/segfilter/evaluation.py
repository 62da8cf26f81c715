"""Session metrics for filter runs against ground-truth labels.

Per session the harness reports the mean segment count (MSC), mean filtered
segment count (MFSC), mean false positives (MFP, wrongly blocked), mean
false negatives (MFN, wrongly displayed) and the session accuracy
100 * (MSC - MFP - MFN) / MSC.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Optional

from .dom import parse_html
from .engine import BLOCK, Disposition, FilterConfig, filter_page
from .profiles import ProfileBag
from .segmentation import SegmenterConfig


class EvaluationError(ValueError):
    """Base class for evaluation failures."""


class MissingLabel(EvaluationError):
    def __init__(self, page_id: str, segment_index: int):
        super().__init__(f"no label for page {page_id!r} segment {segment_index}")
        self.page_id = page_id
        self.segment_index = segment_index


class EmptySession(EvaluationError):
    pass


class EmptyInput(EvaluationError):
    pass


@dataclass(frozen=True)
class SegmentLabel:
    page_id: str
    segment_index: int
    should_block: bool


@dataclass(frozen=True)
class PageResult:
    page_id: str
    segment_count: int
    filtered_count: int
    false_positives: int
    false_negatives: int


@dataclass(frozen=True)
class MetricsRow:
    session_id: str
    msc: float
    mfsc: float
    mfp: float
    mfn: float
    accuracy_percent: float


@dataclass(frozen=True)
class CorpusSummary:
    mean_mfsc: float
    mean_mfp: float
    mean_mfn: float
    mean_accuracy: float


def _round_half_up(value: float, places: int) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def compare(
    dispositions: list[Disposition],
    labels: list[SegmentLabel],
    page_id: Optional[str] = None,
) -> tuple[int, int]:
    """Count (false positives, false negatives) for one page.

    A blocked segment labeled should_block=False is a false positive; a
    displayed one labeled should_block=True is a false negative. Linkhide
    outcomes count as displayed, since the content remains visible.
    """
    if page_id is None:
        page_id = labels[0].page_id if labels else ""
    expected: dict[int, bool] = {}
    for label in labels:
        if label.segment_index in expected:
            raise EvaluationError(
                f"duplicate label for page {page_id!r} segment {label.segment_index}"
            )
        expected[label.segment_index] = label.should_block
    false_positives = 0
    false_negatives = 0
    for index, disposition in enumerate(dispositions):
        if index not in expected:
            raise MissingLabel(page_id, index)
        blocked = disposition.kind == BLOCK
        if blocked and not expected[index]:
            false_positives += 1
        elif not blocked and expected[index]:
            false_negatives += 1
    return false_positives, false_negatives


def page_result(
    page_id: str,
    dispositions: list[Disposition],
    labels: list[SegmentLabel],
) -> PageResult:
    fp, fn = compare(dispositions, labels, page_id)
    return PageResult(
        page_id=page_id,
        segment_count=len(dispositions),
        filtered_count=sum(1 for d in dispositions if d.kind == BLOCK),
        false_positives=fp,
        false_negatives=fn,
    )


def accuracy_percent(msc: float, mfp: float, mfn: float) -> float:
    """100 * (msc - mfp - mfn) / msc, rounded half-up to 3 decimals."""
    if msc <= 0:
        raise EvaluationError("mean segment count must be positive")
    return _round_half_up(100.0 * (msc - mfp - mfn) / msc, 3)


def metrics_from_means(
    session_id: str, msc: float, mfsc: float, mfp: float, mfn: float
) -> MetricsRow:
    return MetricsRow(
        session_id=session_id,
        msc=msc,
        mfsc=mfsc,
        mfp=mfp,
        mfn=mfn,
        accuracy_percent=accuracy_percent(msc, mfp, mfn),
    )


def session_metrics(session_id: str, pages: list[PageResult]) -> MetricsRow:
    """Column means over a session's pages plus the session accuracy."""
    if not pages:
        raise EmptySession(f"session {session_id!r} has no pages")
    for page in pages:
        if page.segment_count <= 0:
            raise EvaluationError(
                f"page {page.page_id!r} has no segments; cannot compute metrics"
            )
    count = len(pages)
    return metrics_from_means(
        session_id,
        msc=sum(p.segment_count for p in pages) / count,
        mfsc=sum(p.filtered_count for p in pages) / count,
        mfp=sum(p.false_positives for p in pages) / count,
        mfn=sum(p.false_negatives for p in pages) / count,
    )


def aggregate(rows: list[MetricsRow]) -> CorpusSummary:
    """Arithmetic means of the per-session columns, at 2 decimals."""
    if not rows:
        raise EmptyInput("no metrics rows to aggregate")
    count = len(rows)
    return CorpusSummary(
        mean_mfsc=_round_half_up(sum(r.mfsc for r in rows) / count, 2),
        mean_mfp=_round_half_up(sum(r.mfp for r in rows) / count, 2),
        mean_mfn=_round_half_up(sum(r.mfn for r in rows) / count, 2),
        mean_accuracy=_round_half_up(sum(r.accuracy_percent for r in rows) / count, 2),
    )


def load_labels(data: bytes | str) -> list[SegmentLabel]:
    """Parse a label file: JSON array of
    {"page_id": str, "segment_index": int, "should_block": bool}."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        entries = json.loads(data)
    except json.JSONDecodeError as exc:
        raise EvaluationError(f"labels are not valid JSON: {exc}") from exc
    if not isinstance(entries, list):
        raise EvaluationError("labels must be a JSON array")
    labels: list[SegmentLabel] = []
    for entry in entries:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("page_id"), str)
            or not isinstance(entry.get("segment_index"), int)
            or isinstance(entry.get("segment_index"), bool)
            or not isinstance(entry.get("should_block"), bool)
        ):
            raise EvaluationError(f"malformed label entry: {entry!r}")
        labels.append(SegmentLabel(
            page_id=entry["page_id"],
            segment_index=entry["segment_index"],
            should_block=entry["should_block"],
        ))
    return labels


def run_corpus(
    manifest_path: str | Path,
    bag: ProfileBag,
    scfg: Optional[SegmenterConfig] = None,
    fcfg: Optional[FilterConfig] = None,
) -> tuple[list[MetricsRow], CorpusSummary, list[PageResult]]:
    """Filter every page of a labeled corpus and compute session metrics.

    The manifest is JSON: {"sessions": [{"id": str, "pages": [{"file": str,
    "labels": str}]}]}; file and label paths are relative to the manifest.
    """
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise EvaluationError(f"manifest is not valid JSON: {exc}") from exc
    sessions = manifest.get("sessions") if isinstance(manifest, dict) else None
    if not isinstance(sessions, list) or not sessions:
        raise EvaluationError('manifest must contain a non-empty "sessions" array')
    base = manifest_path.parent
    rows: list[MetricsRow] = []
    all_pages: list[PageResult] = []
    for session in sessions:
        if not isinstance(session, dict) or "id" not in session:
            raise EvaluationError(f"malformed session entry: {session!r}")
        pages: list[PageResult] = []
        for page in session.get("pages", []):
            if not isinstance(page, dict) or "file" not in page or "labels" not in page:
                raise EvaluationError(f"malformed page entry: {page!r}")
            page_path = base / page["file"]
            labels_path = base / page["labels"]
            doc = parse_html(page_path.read_bytes(), source_url=str(page_path))
            filtered = filter_page(doc, bag, scfg, fcfg)
            dispositions = [disposition for _, _, disposition in filtered.segments]
            labels = load_labels(labels_path.read_bytes())
            result = page_result(Path(page["file"]).stem, dispositions, labels)
            pages.append(result)
            all_pages.append(result)
        rows.append(session_metrics(str(session["id"]), pages))
    return rows, aggregate(rows), all_pages


def render_table(rows: list[MetricsRow], summary: Optional[CorpusSummary] = None) -> str:
    """Aligned plain-text session table, with an optional mean footer row."""
    header = f"{'Session':<12}{'MSC':>8}{'MFSC':>8}{'MFP':>8}{'MFN':>8}{'Accuracy(%)':>14}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.session_id:<12}{row.msc:>8.2f}{row.mfsc:>8.2f}"
            f"{row.mfp:>8.2f}{row.mfn:>8.2f}{row.accuracy_percent:>14.3f}"
        )
    if summary is not None:
        lines.append("-" * len(header))
        lines.append(
            f"{'Mean':<12}{'':>8}{summary.mean_mfsc:>8.2f}"
            f"{summary.mean_mfp:>8.2f}{summary.mean_mfn:>8.2f}{summary.mean_accuracy:>14.2f}"
        )
    return "\n".join(lines) + "\n"


def results_to_json(rows: list[MetricsRow], summary: CorpusSummary) -> str:
    payload = {
        "sessions": [
            {
                "session_id": row.session_id,
                "msc": row.msc,
                "mfsc": row.mfsc,
                "mfp": row.mfp,
                "mfn": row.mfn,
                "accuracy_percent": row.accuracy_percent,
            }
            for row in rows
        ],
        "summary": {
            "mean_mfsc": summary.mean_mfsc,
            "mean_mfp": summary.mean_mfp,
            "mean_mfn": summary.mean_mfn,
            "mean_accuracy": summary.mean_accuracy,
        },
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)
