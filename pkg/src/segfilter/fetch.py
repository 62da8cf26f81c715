"""HTTP fetching of pages to filter, with size, time and redirect caps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import httpx

DEFAULT_USER_AGENT = "segfilter/1.0"


class FetchError(Exception):
    """Base class for all fetch failures."""


class FetchTimeout(FetchError):
    pass


class ResponseTooLarge(FetchError):
    pass


class HttpStatusError(FetchError):
    def __init__(self, status_code: int):
        super().__init__(f"unexpected HTTP status {status_code}")
        self.status_code = status_code


class NotHtml(FetchError):
    def __init__(self, content_type: str):
        super().__init__(f"response is not HTML: content-type {content_type!r}")
        self.content_type = content_type


class TooManyRedirects(FetchError):
    pass


class ConnectionFailed(FetchError):
    pass


@dataclass(frozen=True)
class FetchConfig:
    timeout: float = 15.0
    max_bytes: int = 8 * 1024 * 1024
    user_agent: str = DEFAULT_USER_AGENT
    max_redirects: int = 5

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_redirects < 0:
            raise ValueError("max_redirects must be >= 0")


def _is_html_content_type(content_type: str) -> bool:
    if not content_type.strip():
        return True
    media_type = content_type.split(";", 1)[0].strip().lower()
    return media_type in ("text/html", "application/xhtml+xml")


def fetch_url(
    url: str,
    cfg: Optional[FetchConfig] = None,
    transport: Optional[httpx.BaseTransport] = None,
) -> bytes:
    """GET an http(s) URL and return the body bytes of a 2xx HTML response.

    Redirects are followed up to cfg.max_redirects; bodies larger than
    cfg.max_bytes raise ResponseTooLarge rather than being truncated. The
    transport parameter exists for tests.
    """
    if cfg is None:
        cfg = FetchConfig()
    if not url.startswith(("http://", "https://")):
        raise ValueError(f"url must be http or https: {url!r}")
    try:
        with httpx.Client(
            timeout=cfg.timeout,
            follow_redirects=True,
            max_redirects=cfg.max_redirects,
            headers={"User-Agent": cfg.user_agent},
            transport=transport,
        ) as client:
            with client.stream("GET", url) as response:
                if not (200 <= response.status_code < 300):
                    raise HttpStatusError(response.status_code)
                content_type = response.headers.get("content-type", "")
                if not _is_html_content_type(content_type):
                    raise NotHtml(content_type)
                declared = response.headers.get("content-length")
                if declared is not None and declared.isdigit() and int(declared) > cfg.max_bytes:
                    raise ResponseTooLarge(
                        f"declared content-length {declared} exceeds cap {cfg.max_bytes}"
                    )
                chunks: list[bytes] = []
                received = 0
                for chunk in response.iter_bytes():
                    received += len(chunk)
                    if received > cfg.max_bytes:
                        raise ResponseTooLarge(
                            f"body exceeds cap of {cfg.max_bytes} bytes"
                        )
                    chunks.append(chunk)
                return b"".join(chunks)
    except httpx.TimeoutException as exc:
        raise FetchTimeout(str(exc)) from exc
    except httpx.TooManyRedirects as exc:
        raise TooManyRedirects(str(exc)) from exc
    except httpx.TransportError as exc:
        raise ConnectionFailed(str(exc)) from exc
