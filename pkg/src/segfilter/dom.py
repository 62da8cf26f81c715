"""Lenient HTML parsing into a small DOM tree, plus deterministic serialization.

Parsing never fails on malformed markup: missing html/head/body elements are
synthesized, unclosed tags are auto-closed in document order, and undecodable
bytes become replacement characters. The serializer is byte-deterministic and
escapes only &amp; &lt; &gt; (&quot; additionally inside attribute values), so
parse -> serialize reaches a fixpoint after one normalization pass.
"""

from __future__ import annotations

import codecs
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator, Optional

ELEMENT = "element"
TEXT = "text"
COMMENT = "comment"

DEFAULT_MAX_BYTES = 8 * 1024 * 1024

VOID_ELEMENTS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}

# Content of these elements is not part of the page's visible text.
INVISIBLE_ELEMENTS = {"script", "style", "noscript", "template", "iframe"}

# Elements whose content html.parser delivers as raw text; serialized
# verbatim so that serialize -> parse is a fixpoint.
_RAWTEXT_ELEMENTS = set(HTMLParser.CDATA_CONTENT_ELEMENTS)

_HEAD_ONLY_TAGS = {
    "base", "basefont", "bgsound", "link", "meta", "noscript",
    "script", "style", "template", "title",
}

# Start tags that implicitly close an open <p>.
_P_CLOSERS = {
    "address", "article", "aside", "blockquote", "details", "dialog",
    "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer",
    "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup",
    "hr", "li", "main", "menu", "nav", "ol", "p", "pre", "section",
    "table", "ul",
}

# tag -> (tags it implicitly closes, ancestors that bound the search)
_IMPLIED_END = {
    "li": ({"li"}, {"ul", "ol", "menu"}),
    "dt": ({"dt", "dd"}, {"dl"}),
    "dd": ({"dt", "dd"}, {"dl"}),
    "tr": ({"tr"}, {"table"}),
    "td": ({"td", "th"}, {"tr", "table"}),
    "th": ({"td", "th"}, {"tr", "table"}),
    "option": ({"option"}, {"select"}),
    "a": ({"a"}, set()),
}

_WS_RUN = re.compile(r"\s+")
_META_CHARSET = re.compile(
    rb"""<meta[^>]{0,512}?charset\s*=\s*["']?\s*([a-zA-Z0-9_.:\-]+)""",
    re.IGNORECASE,
)


class InputTooLarge(ValueError):
    """Raised when the input byte stream exceeds the configured size cap."""

    def __init__(self, size: int, limit: int):
        super().__init__(f"input is {size} bytes, cap is {limit} bytes")
        self.size = size
        self.limit = limit


@dataclass(eq=True)
class DomNode:
    """One node of the parsed tree.

    kind is "element", "text" or "comment". Elements carry a lowercase tag
    and an ordered attribute map; text/comment nodes carry character data
    and never have children.
    """

    kind: str
    tag: str = ""
    attributes: dict[str, str] = field(default_factory=dict)
    text: str = ""
    children: list["DomNode"] = field(default_factory=list)
    parent: Optional["DomNode"] = field(default=None, compare=False, repr=False)

    def append(self, child: "DomNode") -> None:
        child.parent = self
        self.children.append(child)


def element(tag: str, attributes: Optional[dict[str, str]] = None) -> DomNode:
    return DomNode(ELEMENT, tag=tag, attributes=dict(attributes or {}))


def text_node(data: str) -> DomNode:
    return DomNode(TEXT, text=data)


def comment_node(data: str) -> DomNode:
    return DomNode(COMMENT, text=data)


@dataclass
class PageDocument:
    """A parsed page: the html root element plus source metadata."""

    root: DomNode
    source_url: Optional[str] = None
    raw_byte_length: int = 0

    @property
    def body(self) -> DomNode:
        for child in self.root.children:
            if child.kind == ELEMENT and child.tag == "body":
                return child
        raise AssertionError("parsed document lost its body element")


class _TreeBuilder(HTMLParser):
    """Builds the normalized tree; never raises on malformed input."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = element("html")
        self.head = element("head")
        self.body_node = element("body")
        self.root.append(self.head)
        self.root.append(self.body_node)
        self._stack: list[DomNode] = []
        self._body_started = False

    # -- insertion helpers -------------------------------------------------

    def _insertion_point(self) -> DomNode:
        if self._stack:
            return self._stack[-1]
        return self.body_node if self._body_started else self.head

    def _append_text(self, data: str) -> None:
        target = self._insertion_point()
        last = target.children[-1] if target.children else None
        if last is not None and last.kind == TEXT:
            last.text += data
        else:
            target.append(text_node(data))

    def _merge_attrs(self, node: DomNode, attrs: dict[str, str]) -> None:
        for name, value in attrs.items():
            node.attributes.setdefault(name, value)

    @staticmethod
    def _attr_dict(attrs: list[tuple[str, Optional[str]]]) -> dict[str, str]:
        out: dict[str, str] = {}
        for name, value in attrs:
            if name not in out:
                out[name] = value if value is not None else ""
        return out

    def _apply_implied_end(self, tag: str) -> None:
        if tag in _P_CLOSERS:
            for i in range(len(self._stack) - 1, -1, -1):
                if self._stack[i].tag == "p":
                    del self._stack[i:]
                    break
        rule = _IMPLIED_END.get(tag)
        if rule is not None:
            closers, bounds = rule
            for i in range(len(self._stack) - 1, -1, -1):
                current = self._stack[i].tag
                if current in closers:
                    del self._stack[i:]
                    break
                if current in bounds:
                    break

    # -- HTMLParser callbacks ----------------------------------------------

    def handle_starttag(self, tag: str, attrs: list[tuple[str, Optional[str]]]) -> None:
        attributes = self._attr_dict(attrs)
        if tag == "html":
            self._merge_attrs(self.root, attributes)
            return
        if tag == "head":
            self._merge_attrs(self.head, attributes)
            return
        if tag == "body":
            self._merge_attrs(self.body_node, attributes)
            self._stack.clear()
            self._body_started = True
            return
        if not self._body_started and not self._stack and tag not in _HEAD_ONLY_TAGS:
            self._body_started = True
        self._apply_implied_end(tag)
        node = element(tag, attributes)
        self._insertion_point().append(node)
        if tag not in VOID_ELEMENTS:
            self._stack.append(node)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, Optional[str]]]) -> None:
        # A stray "/" on a non-void start tag is ignored, as browsers do.
        self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag: str) -> None:
        if tag in VOID_ELEMENTS:
            return
        if tag in ("html", "head", "body"):
            self._stack.clear()
            return
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                return
        # No matching open element: ignore the stray end tag.

    def handle_data(self, data: str) -> None:
        if not data:
            return
        if not self._body_started and not self._stack:
            if not data.strip():
                return
            self._body_started = True
        self._append_text(data)

    def handle_comment(self, data: str) -> None:
        self._insertion_point().append(comment_node(data))

    def handle_decl(self, decl: str) -> None:
        pass

    def unknown_decl(self, data: str) -> None:
        pass

    def handle_pi(self, data: str) -> None:
        pass


def _decode_bytes(data: bytes) -> str:
    if data.startswith(codecs.BOM_UTF8):
        return data.decode("utf-8-sig", errors="replace")
    if data.startswith(codecs.BOM_UTF16_LE) or data.startswith(codecs.BOM_UTF16_BE):
        return data.decode("utf-16", errors="replace")
    match = _META_CHARSET.search(data[:4096])
    if match:
        name = match.group(1).decode("ascii", errors="ignore")
        try:
            codecs.lookup(name)
        except LookupError:
            pass
        else:
            return data.decode(name, errors="replace")
    return data.decode("utf-8", errors="replace")


def parse_html(
    data: bytes | str,
    source_url: Optional[str] = None,
    max_bytes: int = DEFAULT_MAX_BYTES,
) -> PageDocument:
    """Parse HTML bytes (or text) into a normalized PageDocument.

    Raises InputTooLarge when the input exceeds max_bytes; any other input
    parses successfully.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    if len(data) > max_bytes:
        raise InputTooLarge(len(data), max_bytes)
    builder = _TreeBuilder()
    builder.feed(_decode_bytes(data))
    builder.close()
    return PageDocument(
        root=builder.root,
        source_url=source_url,
        raw_byte_length=len(data),
    )


def _escape_text(data: str) -> str:
    return data.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(data: str) -> str:
    return (
        data.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def serialize_html(doc: PageDocument) -> bytes:
    """Render the document back to UTF-8 HTML bytes, deterministically."""
    out: list[str] = []
    work: list[tuple[str, object]] = [("node", doc.root)]
    while work:
        op, payload = work.pop()
        if op == "close":
            out.append(f"</{payload}>")
            continue
        node = payload  # type: ignore[assignment]
        assert isinstance(node, DomNode)
        if node.kind == TEXT:
            parent = node.parent
            if parent is not None and parent.tag in _RAWTEXT_ELEMENTS:
                out.append(node.text)
            else:
                out.append(_escape_text(node.text))
        elif node.kind == COMMENT:
            out.append(f"<!--{node.text}-->")
        else:
            attrs = "".join(
                f' {name}="{_escape_attr(value)}"'
                for name, value in node.attributes.items()
            )
            out.append(f"<{node.tag}{attrs}>")
            if node.tag not in VOID_ELEMENTS:
                work.append(("close", node.tag))
                for child in reversed(node.children):
                    work.append(("node", child))
    return "".join(out).encode("utf-8")


def visible_text(node: DomNode) -> str:
    """Text a reader would see under node: in document order, whitespace
    collapsed, with script/style/noscript/template/iframe content and
    comments excluded."""
    parts: list[str] = []
    stack = [node]
    while stack:
        current = stack.pop()
        if current.kind == TEXT:
            parts.append(current.text)
        elif current.kind == ELEMENT and current.tag not in INVISIBLE_ELEMENTS:
            stack.extend(reversed(current.children))
    return _WS_RUN.sub(" ", " ".join(parts)).strip()


def iter_nodes(node: DomNode) -> Iterator[DomNode]:
    """Preorder traversal of node and all its descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        if current.children:
            stack.extend(reversed(current.children))


def clone_node(node: DomNode) -> DomNode:
    """Deep copy of a subtree; the copy's parent is None."""
    copy = DomNode(node.kind, tag=node.tag, attributes=dict(node.attributes), text=node.text)
    work = [(node, copy)]
    while work:
        src, dst = work.pop()
        for child in src.children:
            child_copy = DomNode(
                child.kind, tag=child.tag, attributes=dict(child.attributes), text=child.text
            )
            dst.append(child_copy)
            work.append((child, child_copy))
    return copy


def clone_document(doc: PageDocument) -> PageDocument:
    return PageDocument(
        root=clone_node(doc.root),
        source_url=doc.source_url,
        raw_byte_length=doc.raw_byte_length,
    )


def index_in_parent(node: DomNode) -> int:
    """Identity-based position of node among its parent's children."""
    parent = node.parent
    assert parent is not None, "node has no parent"
    for i, child in enumerate(parent.children):
        if child is node:
            return i
    raise AssertionError("node not found under its parent")


def path_from(ancestor: DomNode, node: DomNode) -> list[int]:
    """Child-index path from ancestor down to node (empty if identical)."""
    path: list[int] = []
    current = node
    while current is not ancestor:
        path.append(index_in_parent(current))
        current = current.parent  # type: ignore[assignment]
        assert current is not None, "node is not a descendant of ancestor"
    path.reverse()
    return path
