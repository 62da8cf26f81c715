"""Score segments against a profile and assemble the filtered page.

Each segment's three channels (text tokens, link tokens, image alt tokens)
earn +1 per occurrence of a liked keyword and -1 per occurrence of an
unliked one. Segments whose channel sum falls below the threshold are
replaced by a marked dummy block, or, in link-hiding mode, first get their
offending hyperlinks stripped and are kept if that rescues the score.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .dom import (
    ELEMENT,
    INVISIBLE_ELEMENTS,
    DomNode,
    PageDocument,
    clone_document,
    element,
    index_in_parent,
    iter_nodes,
    text_node,
)
from .profiles import ProfileBag
from .segmentation import (
    Segment,
    SegmentContent,
    SegmenterConfig,
    extract_triple,
    segment_page,
)

DISPLAY = "display"
BLOCK = "block"
LINKHIDE = "linkhide"

MODE_BLOCK = "block"
MODE_LINKHIDE = "linkhide"

DUMMY_MARKER_ATTRIBUTE = "data-segfilter"
DUMMY_MARKER_VALUE = "blocked"
DEFAULT_DUMMY_MESSAGE = "[segment blocked]"


@dataclass(frozen=True)
class SegmentScore:
    text_weight: int = 0
    link_weight: int = 0
    image_weight: int = 0

    @property
    def total(self) -> int:
        return self.text_weight + self.link_weight + self.image_weight


@dataclass(frozen=True)
class Disposition:
    """Outcome for one segment: display, block, or linkhide (kept after
    de-linking; carries the paths of the anchors that lost their href)."""

    kind: str
    delinked_paths: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (DISPLAY, BLOCK, LINKHIDE):
            raise ValueError(f"unknown disposition kind {self.kind!r}")
        if self.delinked_paths and self.kind != LINKHIDE:
            raise ValueError("only linkhide dispositions carry de-linked paths")


_DISPLAY = Disposition(DISPLAY)
_BLOCK = Disposition(BLOCK)


@dataclass(frozen=True)
class FilterConfig:
    mode: str = MODE_BLOCK
    dummy_message: str = DEFAULT_DUMMY_MESSAGE
    threshold_override: Optional[int] = None
    unique_terms: bool = False

    def __post_init__(self) -> None:
        if self.mode not in (MODE_BLOCK, MODE_LINKHIDE):
            raise ValueError(f"mode must be {MODE_BLOCK!r} or {MODE_LINKHIDE!r}")
        if not self.dummy_message:
            raise ValueError("dummy_message must be non-empty")


@dataclass
class FilteredPage:
    """Per-segment outcomes plus the rewritten document."""

    segments: list[tuple[Segment, SegmentScore, Disposition]]
    document: PageDocument


def component_weight(tokens: list[str], bag: ProfileBag, unique: bool = False) -> int:
    """Sum of +1 per liked and -1 per unliked token occurrence; with
    unique=True each distinct token counts once."""
    weight = 0
    stream = dict.fromkeys(tokens) if unique else tokens
    for token in stream:
        if token in bag.like:
            weight += 1
        elif token in bag.unlike:
            weight -= 1
    return weight


def text_weight(content: SegmentContent, bag: ProfileBag, unique: bool = False) -> int:
    return component_weight(content.text_tokens, bag, unique)


def link_weight(content: SegmentContent, bag: ProfileBag, unique: bool = False) -> int:
    tokens: list[str] = []
    for link in content.links:
        tokens.extend(link.anchor_tokens)
        tokens.extend(link.url_tokens)
    return component_weight(tokens, bag, unique)


def image_weight(content: SegmentContent, bag: ProfileBag, unique: bool = False) -> int:
    tokens: list[str] = []
    for image in content.images:
        tokens.extend(image.alt_tokens)
    return component_weight(tokens, bag, unique)


def score_segment(content: SegmentContent, bag: ProfileBag, unique: bool = False) -> SegmentScore:
    return SegmentScore(
        text_weight=text_weight(content, bag, unique),
        link_weight=link_weight(content, bag, unique),
        image_weight=image_weight(content, bag, unique),
    )


def decide(score: SegmentScore, threshold: int) -> Disposition:
    """Display when the segment total reaches the threshold (inclusive)."""
    return _DISPLAY if score.total >= threshold else _BLOCK


def make_dummy_segment(cfg: Optional[FilterConfig] = None, index: int = 0) -> Segment:
    """The marked placeholder block substituted for a blocked segment."""
    if cfg is None:
        cfg = FilterConfig()
    node = element("div", {DUMMY_MARKER_ATTRIBUTE: DUMMY_MARKER_VALUE})
    node.append(text_node(cfg.dummy_message))
    return Segment(
        index=index,
        node_path=[],
        nodes=[node],
        content=SegmentContent(),
        density=0.0,
        is_dummy=True,
    )


def is_marked_dummy(segment: Segment) -> bool:
    """True when the segment contains a dummy marker node; such segments
    pass through untouched, which keeps filtering idempotent."""
    for root in segment.nodes:
        for node in iter_nodes(root):
            if (
                node.kind == ELEMENT
                and node.attributes.get(DUMMY_MARKER_ATTRIBUTE) == DUMMY_MARKER_VALUE
            ):
                return True
    return False


def _collect_href_anchors(nodes: list[DomNode]) -> list[DomNode]:
    """href-carrying anchors under nodes, in the order extract_triple lists
    them (preorder, invisible subtrees skipped)."""
    anchors: list[DomNode] = []
    for root in nodes:
        stack = [root]
        while stack:
            node = stack.pop()
            if node.kind != ELEMENT or node.tag in INVISIBLE_ELEMENTS:
                continue
            if node.tag == "a" and "href" in node.attributes:
                anchors.append(node)
            stack.extend(reversed(node.children))
    return anchors


def apply_link_hiding(segment: Segment, bag: ProfileBag) -> tuple[Segment, list[list[int]]]:
    """Strip the href from every anchor whose tokens hit the unlike track.

    The anchor element and its text stay in place; the segment's content is
    re-extracted so former anchor text counts as segment text. Returns the
    rebuilt segment and the paths of the de-linked anchors (empty when no
    anchor offends).
    """
    anchors = _collect_href_anchors(segment.nodes)
    delinked: list[list[int]] = []
    for anchor, link in zip(anchors, segment.content.links):
        if (set(link.anchor_tokens) | set(link.url_tokens)) & bag.unlike:
            del anchor.attributes["href"]
            delinked.append(list(link.node_path))
    if not delinked:
        return segment, []
    rebuilt = Segment(
        index=segment.index,
        node_path=segment.node_path,
        nodes=segment.nodes,
        content=extract_triple(segment.nodes),
        density=segment.density,
        is_dummy=segment.is_dummy,
    )
    return rebuilt, delinked


def _replace_with(nodes: list[DomNode], replacement: DomNode) -> None:
    """Swap a segment's sibling nodes for a single replacement node."""
    first = nodes[0]
    parent = first.parent
    assert parent is not None, "segment nodes must be attached"
    parent.children[index_in_parent(first)] = replacement
    replacement.parent = parent
    for node in nodes[1:]:
        owner = node.parent
        assert owner is not None
        del owner.children[index_in_parent(node)]
        node.parent = None
    first.parent = None


def filter_page(
    doc: PageDocument,
    bag: ProfileBag,
    scfg: Optional[SegmenterConfig] = None,
    fcfg: Optional[FilterConfig] = None,
) -> FilteredPage:
    """Segment, score and rewrite a page against a profile.

    The input document is never mutated; all rewriting happens on a clone.
    Segments already carrying the dummy marker pass through untouched with
    a Display disposition and a zero score.
    """
    if scfg is None:
        scfg = SegmenterConfig()
    if fcfg is None:
        fcfg = FilterConfig()
    threshold = (
        fcfg.threshold_override
        if fcfg.threshold_override is not None
        else bag.threshold
    )
    working = clone_document(doc)
    segments = segment_page(working, scfg)

    results: list[tuple[Segment, SegmentScore, Disposition]] = []
    for segment in segments:
        if is_marked_dummy(segment):
            results.append((segment, SegmentScore(), _DISPLAY))
            continue
        score = score_segment(segment.content, bag, fcfg.unique_terms)
        if decide(score, threshold).kind == DISPLAY:
            results.append((segment, score, _DISPLAY))
            continue
        if fcfg.mode == MODE_LINKHIDE:
            rebuilt, paths = apply_link_hiding(segment, bag)
            if paths:
                rescore = score_segment(rebuilt.content, bag, fcfg.unique_terms)
                if decide(rescore, threshold).kind == DISPLAY:
                    disposition = Disposition(
                        LINKHIDE,
                        delinked_paths=tuple(tuple(p) for p in paths),
                    )
                    results.append((rebuilt, rescore, disposition))
                    continue
        dummy = make_dummy_segment(fcfg, segment.index)
        _replace_with(segment.nodes, dummy.nodes[0])
        results.append((segment, score, _BLOCK))
    return FilteredPage(segments=results, document=working)


def report_rows(page: FilteredPage) -> list[dict]:
    return [
        {
            "index": segment.index,
            "text_weight": score.text_weight,
            "link_weight": score.link_weight,
            "image_weight": score.image_weight,
            "total": score.total,
            "disposition": disposition.kind,
        }
        for segment, score, disposition in page.segments
    ]


def report_to_json(page: FilteredPage) -> str:
    return json.dumps(report_rows(page), indent=2, ensure_ascii=False)
