"""Split a parsed page into ordered content segments and extract what each
segment contains: text tokens, links, and images.

Atomic blocks are block-tagged elements with no block-tagged descendant;
inline content sitting next to blocks is wrapped into implicit blocks.
Adjacent sibling blocks whose text densities are close are merged into one
segment, so a ragged run of short list items or paragraphs reads as a unit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .dom import (
    COMMENT,
    ELEMENT,
    INVISIBLE_ELEMENTS,
    TEXT,
    DomNode,
    PageDocument,
    path_from,
    visible_text,
)
from .tokens import tokenize

DEFAULT_BLOCK_TAGS = frozenset({
    "address", "article", "aside", "blockquote", "div", "dl", "fieldset",
    "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section",
    "table", "td", "ul",
})


@dataclass(frozen=True)
class SegmenterConfig:
    block_tags: frozenset[str] = DEFAULT_BLOCK_TAGS
    wrap_width: int = 80
    merge_threshold: float = 2.0
    drop_empty: bool = True

    def __post_init__(self) -> None:
        if self.wrap_width < 1:
            raise ValueError("wrap_width must be >= 1")
        if self.merge_threshold < 0:
            raise ValueError("merge_threshold must be >= 0")


@dataclass
class LinkItem:
    """One hyperlink of a segment: the raw href plus the tokens it is
    scored on (anchor text tokens and tokens split out of the href)."""

    href: str
    anchor_tokens: list[str]
    url_tokens: list[str]
    node_path: list[int] = field(default_factory=list)


@dataclass
class ImageItem:
    """One image of a segment; only alt-attribute tokens are scored."""

    src: str
    alt_tokens: list[str]
    node_path: list[int] = field(default_factory=list)


@dataclass
class SegmentContent:
    text_tokens: list[str] = field(default_factory=list)
    links: list[LinkItem] = field(default_factory=list)
    images: list[ImageItem] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.text_tokens and not self.links and not self.images


@dataclass
class Segment:
    index: int
    node_path: list[int]
    nodes: list[DomNode]
    content: SegmentContent
    density: float
    is_dummy: bool = False


def _combined_text(nodes: list[DomNode]) -> str:
    parts = [visible_text(node) for node in nodes]
    return " ".join(part for part in parts if part)


def _density_of(nodes: list[DomNode], wrap_width: int) -> float:
    text = _combined_text(nodes)
    if not text:
        return 0.0
    lines = math.ceil(len(text) / wrap_width)
    return len(tokenize(text)) / lines


def text_density(block: DomNode, wrap_width: int = 80) -> float:
    """Tokens per wrapped line of the block's visible text (0.0 if empty)."""
    if wrap_width < 1:
        raise ValueError("wrap_width must be >= 1")
    return _density_of([block], wrap_width)


def _path_base(node: DomNode) -> DomNode:
    """The body ancestor if there is one, else the topmost ancestor."""
    top = node
    current: Optional[DomNode] = node
    while current is not None:
        if current.kind == ELEMENT and current.tag == "body":
            return current
        top = current
        current = current.parent
    return top


def extract_triple(nodes: list[DomNode], path_base: Optional[DomNode] = None) -> SegmentContent:
    """Pull a segment's text tokens, links and images out of its nodes.

    Text under an href-carrying anchor is credited to that link, not to the
    segment text, so the three scoring channels never double count. Content
    of invisible elements (script, style, noscript, template, iframe) is
    skipped entirely.
    """
    content = SegmentContent()
    if not nodes:
        return content
    base = path_base if path_base is not None else _path_base(nodes[0])
    for root in nodes:
        stack: list[tuple[DomNode, Optional[LinkItem]]] = [(root, None)]
        while stack:
            node, link = stack.pop()
            if node.kind == COMMENT:
                continue
            if node.kind == TEXT:
                target = link.anchor_tokens if link is not None else content.text_tokens
                target.extend(tokenize(node.text))
                continue
            tag = node.tag
            if tag in INVISIBLE_ELEMENTS:
                continue
            if tag == "img":
                alt = node.attributes.get("alt")
                content.images.append(ImageItem(
                    src=node.attributes.get("src", ""),
                    alt_tokens=tokenize(alt) if alt is not None else [],
                    node_path=path_from(base, node),
                ))
                continue
            current = link
            if tag == "a" and "href" in node.attributes:
                item = LinkItem(
                    href=node.attributes["href"],
                    anchor_tokens=[],
                    url_tokens=tokenize(node.attributes["href"]),
                    node_path=path_from(base, node),
                )
                content.links.append(item)
                current = item
            for child in reversed(node.children):
                stack.append((child, current))
    return content


def _block_descendant_map(body: DomNode, block_tags: frozenset[str]) -> dict[int, bool]:
    """id(element) -> whether it has a block-tagged descendant, treating
    invisible elements as opaque leaves."""
    result: dict[int, bool] = {}
    stack: list[tuple[DomNode, bool]] = [(body, False)]
    while stack:
        node, processed = stack.pop()
        if node.kind != ELEMENT or node.tag in INVISIBLE_ELEMENTS:
            continue
        if processed:
            result[id(node)] = any(
                child.kind == ELEMENT
                and child.tag not in INVISIBLE_ELEMENTS
                and (child.tag in block_tags or result.get(id(child), False))
                for child in node.children
            )
        else:
            stack.append((node, True))
            for child in node.children:
                stack.append((child, False))
    return result


@dataclass
class _Unit:
    parent: DomNode
    nodes: list[DomNode]
    density: float


def _collect_units(body: DomNode, cfg: SegmenterConfig) -> list[_Unit]:
    has_block = _block_descendant_map(body, cfg.block_tags)
    units: list[_Unit] = []

    def flush(parent: DomNode, pending: list[DomNode]) -> None:
        if any(
            node.kind == ELEMENT or (node.kind == TEXT and node.text.strip())
            for node in pending
        ):
            units.append(_Unit(parent, list(pending), _density_of(pending, cfg.wrap_width)))
        pending.clear()

    frames: list[tuple[DomNode, Iterator[DomNode], list[DomNode]]] = [
        (body, iter(body.children), [])
    ]
    while frames:
        container, child_iter, pending = frames[-1]
        child = next(child_iter, None)
        if child is None:
            flush(container, pending)
            frames.pop()
            continue
        if child.kind == COMMENT:
            continue
        if child.kind == TEXT:
            pending.append(child)
            continue
        tag = child.tag
        if tag in INVISIBLE_ELEMENTS:
            continue
        contains_block = has_block.get(id(child), False)
        if tag in cfg.block_tags and not contains_block:
            flush(container, pending)
            units.append(_Unit(container, [child], _density_of([child], cfg.wrap_width)))
        elif contains_block:
            flush(container, pending)
            frames.append((child, iter(child.children), []))
        else:
            pending.append(child)
    return units


def segment_page(doc: PageDocument, cfg: Optional[SegmenterConfig] = None) -> list[Segment]:
    """Segment the document body into an ordered list of content segments.

    Sibling blocks that are adjacent in emission order merge into one
    segment when their densities differ by at most merge_threshold; merge
    decisions compare the two units directly, so raising the threshold can
    only coarsen the segmentation, never refine it.
    """
    if cfg is None:
        cfg = SegmenterConfig()
    body = doc.body
    units = _collect_units(body, cfg)

    groups: list[list[_Unit]] = []
    for unit in units:
        if groups:
            previous = groups[-1][-1]
            if (
                previous.parent is unit.parent
                and abs(previous.density - unit.density) <= cfg.merge_threshold
            ):
                groups[-1].append(unit)
                continue
        groups.append([unit])

    segments: list[Segment] = []
    for group in groups:
        nodes = [node for unit in group for node in unit.nodes]
        content = extract_triple(nodes, path_base=body)
        if cfg.drop_empty and content.is_empty():
            continue
        segments.append(Segment(
            index=len(segments),
            node_path=path_from(body, nodes[0]),
            nodes=nodes,
            content=content,
            density=_density_of(nodes, cfg.wrap_width),
        ))
    return segments


def segment_to_dict(segment: Segment) -> dict:
    return {
        "index": segment.index,
        "node_path": list(segment.node_path),
        "density": segment.density,
        "text_tokens": list(segment.content.text_tokens),
        "links": [
            {
                "href": link.href,
                "anchor_tokens": list(link.anchor_tokens),
                "url_tokens": list(link.url_tokens),
            }
            for link in segment.content.links
        ],
        "images": [
            {"src": image.src, "alt_tokens": list(image.alt_tokens)}
            for image in segment.content.images
        ],
    }


def segments_to_json(segments: list[Segment]) -> str:
    return json.dumps([segment_to_dict(s) for s in segments], indent=2, ensure_ascii=False)
