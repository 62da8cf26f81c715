"""Token normalization shared by the segmenter, profiles and scoring."""

from __future__ import annotations

import re
from typing import Optional

# Maximal runs of Unicode letters/digits; underscore is a separator.
_ALNUM_RUN = re.compile(r"[^\W_]+", re.UNICODE)


def normalize_token(raw: str) -> Optional[str]:
    """Normalize one raw word to a token, or None if nothing survives.

    A token is a single maximal alphanumeric run, lowercased. Inputs that
    contain no alphanumeric characters, or that split into more than one
    run, yield None.
    """
    runs = _ALNUM_RUN.findall(raw.lower())
    if len(runs) == 1:
        return runs[0]
    return None


def tokenize(text: str) -> list[str]:
    """Split text into normalized tokens, preserving order.

    Splits on runs of non-alphanumeric characters (punctuation, whitespace,
    underscores), lowercases each piece, and drops empty pieces.
    """
    return _ALNUM_RUN.findall(text.lower())
