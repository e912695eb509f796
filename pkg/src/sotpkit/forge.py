"""Hosting-platform counts (stars, forks, watchers, pull requests, issues).

Only GitHub-style REST APIs are supported. Fetched values are meant to be
written to a snapshot file straight away so that later runs can replay them
offline.
"""

from __future__ import annotations

import datetime as dt
import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import httpx

from .errors import (
    AuthRequired,
    ForgeNetworkError,
    MissingField,
    RateLimited,
    SnapshotError,
    UnsupportedForge,
)

log = logging.getLogger(__name__)

TOKEN_ENV_VARS = ("SOTPKIT_FORGE_TOKEN", "GITHUB_TOKEN")
GITHUB_API = "https://api.github.com"
COUNT_FIELDS = ("stars", "forks", "watchers", "open_prs", "closed_prs",
                "open_issues", "closed_issues")
OPTIONAL_FIELDS = ("remote", "drafts_included")

_GITHUB_URL = re.compile(
    r"^(?:https?://(?:www\.)?github\.com/|git@github\.com:|ssh://git@github\.com/)"
    r"(?P<owner>[A-Za-z0-9_.-]+)/(?P<repo>[A-Za-z0-9_.-]+?)(?:\.git)?/?$"
)


@dataclass(frozen=True)
class ForgeMetrics:
    stars: int
    forks: int
    watchers: int
    open_prs: int
    closed_prs: int
    open_issues: int
    closed_issues: int
    fetched_at: dt.datetime
    remote: str | None = None
    # draft pull requests are counted among open ones
    drafts_included: bool = True

    def __post_init__(self):
        for name in COUNT_FIELDS:
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise SnapshotError(f"{name} must be a non-negative integer, got {v!r}")
        if self.fetched_at is None:
            raise MissingField("fetched_at")


def token_from_env(environ=None) -> str | None:
    environ = os.environ if environ is None else environ
    for name in TOKEN_ENV_VARS:
        if environ.get(name):
            return environ[name]
    return None


def parse_remote(remote: str) -> tuple[str, str]:
    m = _GITHUB_URL.match(remote.strip())
    if not m:
        raise UnsupportedForge(f"unsupported forge URL: {remote}")
    return m.group("owner"), m.group("repo")


def _check(resp: httpx.Response, what: str) -> dict:
    if resp.status_code == 401:
        raise AuthRequired(f"{what}: authentication required")
    if resp.status_code in (403, 429):
        retry = resp.headers.get("retry-after")
        remaining = resp.headers.get("x-ratelimit-remaining")
        if retry is not None or remaining == "0" or resp.status_code == 429:
            wait = None
            if retry is not None:
                wait = float(retry)
            elif resp.headers.get("x-ratelimit-reset"):
                wait = max(0.0, float(resp.headers["x-ratelimit-reset"]) - time.time())
            raise RateLimited(f"{what}: rate limited", wait)
        raise AuthRequired(f"{what}: access forbidden")
    if resp.status_code >= 400:
        raise ForgeNetworkError(f"{what}: HTTP {resp.status_code}")
    try:
        return resp.json()
    except ValueError as exc:
        raise ForgeNetworkError(f"{what}: malformed JSON") from exc


def fetch_forge_metrics(remote: str, token: str | None = None, *,
                        client: httpx.Client | None = None,
                        api_base: str = GITHUB_API,
                        now: Callable[[], dt.datetime] | None = None) -> ForgeMetrics:
    """Query the forge for the seven counts.

    GitHub reports pull requests inside ``open_issues_count``; the open PR
    count is subtracted so ``open_issues`` holds issues only.
    """
    owner, repo = parse_remote(remote)
    headers = {"Accept": "application/vnd.github+json",
               "X-GitHub-Api-Version": "2022-11-28"}
    if token:
        headers["Authorization"] = f"Bearer {token}"
    own_client = client is None
    client = client or httpx.Client(timeout=30.0)
    slug = f"{owner}/{repo}"

    def get(path: str, params=None) -> dict:
        try:
            resp = client.get(api_base + path, params=params, headers=headers)
        except httpx.HTTPError as exc:
            raise ForgeNetworkError(f"{slug}: {exc}") from exc
        return _check(resp, slug)

    def search_count(query: str) -> int:
        body = get("/search/issues", {"q": f"repo:{slug} {query}", "per_page": 1})
        return int(body["total_count"])

    try:
        info = get(f"/repos/{slug}")
        open_prs = search_count("type:pr state:open")
        closed_prs = search_count("type:pr state:closed")
        closed_issues = search_count("type:issue state:closed")
    finally:
        if own_client:
            client.close()

    stamp = (now or (lambda: dt.datetime.now(dt.timezone.utc)))()
    return ForgeMetrics(
        stars=int(info["stargazers_count"]),
        forks=int(info["forks_count"]),
        watchers=int(info["subscribers_count"]),
        open_prs=open_prs,
        closed_prs=closed_prs,
        open_issues=max(0, int(info["open_issues_count"]) - open_prs),
        closed_issues=closed_issues,
        fetched_at=stamp.replace(microsecond=0),
        remote=remote,
    )


def fetch_many(remotes: dict[str, str], token: str | None = None, *, parallelism: int = 4,
               max_wait: float = 120.0, sleep: Callable[[float], None] = time.sleep,
               **kwargs) -> dict[str, ForgeMetrics | Exception]:
    """Fetch several packages concurrently; failures are returned, not raised.

    A rate-limited request is retried once after the advertised wait when that
    wait is at most ``max_wait`` seconds.
    """
    def one(item):
        pid, remote = item
        try:
            return pid, fetch_forge_metrics(remote, token, **kwargs)
        except RateLimited as exc:
            if exc.retry_after is None or exc.retry_after > max_wait:
                return pid, exc
            log.info("rate limited on %s, waiting %.0fs", pid, exc.retry_after)
            sleep(exc.retry_after)
            try:
                return pid, fetch_forge_metrics(remote, token, **kwargs)
            except Exception as again:  # noqa: BLE001 - reported per package
                return pid, again
        except Exception as exc:  # noqa: BLE001
            return pid, exc

    with ThreadPoolExecutor(max(1, parallelism)) as pool:
        return dict(pool.map(one, sorted(remotes.items())))


# -- snapshots ---------------------------------------------------------------


def dump_forge_snapshot(m: ForgeMetrics) -> str:
    lines = [f"{name} = {getattr(m, name)}" for name in COUNT_FIELDS]
    lines.append(f"fetched_at = {m.fetched_at.isoformat()}")
    if m.remote:
        lines.append(f"remote = {m.remote}")
    lines.append(f"drafts_included = {'yes' if m.drafts_included else 'no'}")
    return "\n".join(lines) + "\n"


def load_forge_snapshot(text: str) -> ForgeMetrics:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        key, sep, value = s.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise SnapshotError(f"line {lineno}: expected 'key = value'")
        if key not in COUNT_FIELDS + OPTIONAL_FIELDS + ("fetched_at",):
            raise SnapshotError(f"line {lineno}: unknown field {key!r}")
        if key in values:
            raise SnapshotError(f"line {lineno}: duplicate field {key!r}")
        values[key] = value

    counts = {}
    for name in COUNT_FIELDS:
        if name not in values:
            raise MissingField(name)
        try:
            counts[name] = int(values[name])
        except ValueError:
            raise SnapshotError(f"{name}: not an integer: {values[name]!r}") from None
    if "fetched_at" not in values:
        raise MissingField("fetched_at")
    try:
        stamp = dt.datetime.fromisoformat(values["fetched_at"].replace("Z", "+00:00"))
    except ValueError:
        raise SnapshotError(f"fetched_at: bad timestamp {values['fetched_at']!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=dt.timezone.utc)
    drafts = values.get("drafts_included", "yes").lower()
    if drafts not in ("yes", "no"):
        raise SnapshotError(f"drafts_included: expected yes/no, got {drafts!r}")
    return ForgeMetrics(**counts, fetched_at=stamp, remote=values.get("remote"),
                        drafts_included=drafts == "yes")

