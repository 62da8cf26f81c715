"""segfilter: segment-level personalized web page content filtering.

Pages are parsed into a DOM tree, split into coherent segments, and each
segment's text, links and images are scored against a user profile of
liked and unliked keywords. Segments scoring below the profile threshold
are replaced by a marked placeholder, or de-linked in link-hiding mode.
"""

__version__ = "0.1.0"

from .dom import (
    DomNode,
    InputTooLarge,
    PageDocument,
    parse_html,
    serialize_html,
    visible_text,
)
from .engine import (
    Disposition,
    FilterConfig,
    FilteredPage,
    SegmentScore,
    component_weight,
    decide,
    filter_page,
    make_dummy_segment,
)
from .evaluation import (
    CorpusSummary,
    MetricsRow,
    PageResult,
    SegmentLabel,
    aggregate,
    compare,
    session_metrics,
)
from .profiles import ProfileBag, load_profile, make_profile, save_profile
from .segmentation import (
    ImageItem,
    LinkItem,
    Segment,
    SegmentContent,
    SegmenterConfig,
    extract_triple,
    segment_page,
    text_density,
)
from .tokens import normalize_token, tokenize

__all__ = [
    "__version__",
    "DomNode",
    "PageDocument",
    "InputTooLarge",
    "parse_html",
    "serialize_html",
    "visible_text",
    "normalize_token",
    "tokenize",
    "SegmenterConfig",
    "Segment",
    "SegmentContent",
    "LinkItem",
    "ImageItem",
    "segment_page",
    "extract_triple",
    "text_density",
    "ProfileBag",
    "load_profile",
    "save_profile",
    "make_profile",
    "SegmentScore",
    "Disposition",
    "FilterConfig",
    "FilteredPage",
    "component_weight",
    "decide",
    "filter_page",
    "make_dummy_segment",
    "SegmentLabel",
    "PageResult",
    "MetricsRow",
    "CorpusSummary",
    "compare",
    "session_metrics",
    "aggregate",
]
