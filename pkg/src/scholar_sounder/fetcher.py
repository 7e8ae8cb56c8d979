"""Page acquisition: live HTTP with caching and politeness, or a local
fixture corpus for offline runs."""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import FixtureMissingError, HttpStatusError, NetworkError
from .parser import LABEL_RESULTS_MARKER, PROFILE_MARKER

log = logging.getLogger(__name__)

LABEL_SEARCH = "label_search"
AUTHOR_PROFILE = "author_profile"

BASE_URL = "https://scholar.google.com"

CACHE_ENV_VAR = "SCHOLAR_SOUNDER_CACHE"


@dataclass(frozen=True)
class PageRequest:
    """A request for one page: a label-search results page (paginated) or
    an author profile (always page 0)."""

    kind: str  # LABEL_SEARCH | AUTHOR_PROFILE
    key: str   # canonical tag, or author id
    page_index: int = 0

    def __post_init__(self):
        if self.kind not in (LABEL_SEARCH, AUTHOR_PROFILE):
            raise ValueError(f"unknown request kind: {self.kind!r}")
        if not self.key:
            raise ValueError("request key must be nonempty")
        if self.page_index < 0:
            raise ValueError("page_index must be non-negative")
        if self.kind == AUTHOR_PROFILE and self.page_index != 0:
            raise ValueError("author-profile requests are not paginated")


@dataclass
class RawPage:
    request: PageRequest
    url: str
    body: bytes
    retrieved_at: datetime
    source: str  # "live" | "cache" | "fixture"


@dataclass
class FetchPolicy:
    mode: str = "fixture"  # "live" | "fixture"
    fixtures_dir: Path | None = None
    cache_dir: Path | None = None
    min_delay_ms: int = 2000
    max_pages_per_label: int = 5
    max_retries: int = 2
    # Test seam: where live requests actually go. RawPage.url stays canonical.
    base_url: str = BASE_URL

    def __post_init__(self):
        if self.mode not in ("live", "fixture"):
            raise ValueError(f"unknown fetch mode: {self.mode!r}")
        if self.fixtures_dir is not None:
            self.fixtures_dir = Path(self.fixtures_dir)
        if self.cache_dir is not None:
            self.cache_dir = Path(self.cache_dir)
        env_cache = os.environ.get(CACHE_ENV_VAR)
        if env_cache:
            self.cache_dir = Path(env_cache)


def build_url(request: PageRequest, page_token: str | None = None) -> str:
    """Canonical URL for a request.

    Label pages past index 0 need the continuation token the service embeds
    in the preceding results page; when known it is appended along with the
    result offset.
    """
    if request.kind == AUTHOR_PROFILE:
        return f"{BASE_URL}/citations?user={request.key}&hl=en"
    url = (
        f"{BASE_URL}/citations?view_op=search_authors"
        f"&mauthors=label:{request.key}&hl=en"
    )
    if request.page_index > 0:
        if page_token:
            url += f"&after_author={page_token}"
        url += f"&astart={10 * request.page_index}"
    return url


def _relative_page_path(request: PageRequest) -> Path:
    if request.kind == LABEL_SEARCH:
        return Path("labels") / request.key / f"{request.page_index}.html"
    return Path("authors") / f"{request.key}.html"


def _expected_marker(request: PageRequest) -> str:
    return LABEL_RESULTS_MARKER if request.kind == LABEL_SEARCH else PROFILE_MARKER


class Fetcher:
    """Serializes live network access behind one politeness gate; fixture
    and cache reads run without coordination."""

    def __init__(self, policy: FetchPolicy):
        self.policy = policy
        self._gate = threading.Lock()
        self._last_request_at: float | None = None
        # (monotonic timestamp, url) per network hit, for politeness audits
        self.request_log: list[tuple[float, str]] = []
        self.cache_hits = 0
        self.pages_fetched = 0

    def fetch(self, request: PageRequest, page_token: str | None = None) -> RawPage:
        """Return the page body for a request.

        Fixture mode reads only from ``fixtures_dir`` and never touches the
        network. Live mode checks the cache first and writes every fresh
        body to the cache before returning it.
        """
        self.pages_fetched += 1
        if self.policy.mode == "fixture":
            return self._fetch_fixture(request)
        cached = self._read_cache(request)
        if cached is not None:
            self.cache_hits += 1
            return cached
        return self._fetch_live(request, page_token)

    # -- fixture ------------------------------------------------------

    def _fetch_fixture(self, request: PageRequest) -> RawPage:
        root = self.policy.fixtures_dir
        if root is None:
            raise FixtureMissingError("<fixtures_dir unset>")
        path = root / _relative_page_path(request)
        if not path.is_file():
            raise FixtureMissingError(path)
        return RawPage(
            request=request,
            url=build_url(request),
            body=path.read_bytes(),
            retrieved_at=datetime.now(timezone.utc),
            source="fixture",
        )

    # -- cache --------------------------------------------------------

    def _cache_paths(self, request: PageRequest) -> tuple[Path, Path]:
        base = self.policy.cache_dir / _relative_page_path(request)
        return base, base.with_suffix(base.suffix + ".meta.json")

    def _read_cache(self, request: PageRequest) -> RawPage | None:
        if self.policy.cache_dir is None:
            return None
        html_path, meta_path = self._cache_paths(request)
        if not html_path.is_file():
            return None
        meta = {}
        if meta_path.is_file():
            meta = json.loads(meta_path.read_text("utf-8"))
        retrieved = meta.get("retrieved_at")
        return RawPage(
            request=request,
            url=meta.get("url", build_url(request)),
            body=html_path.read_bytes(),
            retrieved_at=(
                datetime.fromisoformat(retrieved)
                if retrieved
                else datetime.now(timezone.utc)
            ),
            source="cache",
        )

    def _write_cache(self, request: PageRequest, url: str, body: bytes, status: int):
        if self.policy.cache_dir is None:
            return
        html_path, meta_path = self._cache_paths(request)
        html_path.parent.mkdir(parents=True, exist_ok=True)
        html_path.write_bytes(body)
        meta = {
            "url": url,
            "retrieved_at": datetime.now(timezone.utc).isoformat(),
            "http_status": status,
        }
        meta_path.write_text(json.dumps(meta, sort_keys=True) + "\n", "utf-8")

    # -- live ---------------------------------------------------------

    def _fetch_live(self, request: PageRequest, page_token: str | None) -> RawPage:
        import requests

        canonical_url = build_url(request, page_token)
        target_url = canonical_url.replace(BASE_URL, self.policy.base_url, 1)
        attempts = self.policy.max_retries + 1
        last_exc: Exception | None = None
        for attempt in range(attempts):
            self._wait_politely(target_url)
            try:
                resp = requests.get(target_url, timeout=30)
            except requests.RequestException as exc:
                last_exc = exc
                log.warning("fetch attempt %d failed for %s: %s", attempt + 1, target_url, exc)
                continue
            if resp.status_code >= 500:
                last_exc = HttpStatusError(
                    f"server error {resp.status_code} for {target_url}",
                    status=resp.status_code,
                )
                continue
            if resp.status_code != 200:
                raise HttpStatusError(
                    f"status {resp.status_code} for {target_url}",
                    status=resp.status_code,
                )
            body = resp.content
            if _expected_marker(request) not in body.decode("utf-8", errors="replace"):
                # Interstitial / anti-bot page: refuse to parse it.
                raise HttpStatusError(
                    f"page at {target_url} lacks marker '{_expected_marker(request)}'",
                    status=resp.status_code,
                )
            self._write_cache(request, canonical_url, body, resp.status_code)
            return RawPage(
                request=request,
                url=canonical_url,
                body=body,
                retrieved_at=datetime.now(timezone.utc),
                source="live",
            )
        raise NetworkError(
            f"giving up on {target_url} after {attempts} attempts: {last_exc}"
        )

    def _wait_politely(self, url: str):
        delay = self.policy.min_delay_ms / 1000.0
        with self._gate:
            now = time.monotonic()
            if self._last_request_at is not None:
                remaining = self._last_request_at + delay - now
                if remaining > 0:
                    time.sleep(remaining)
            self._last_request_at = time.monotonic()
            self.request_log.append((self._last_request_at, url))
