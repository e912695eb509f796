import datetime as dt

import httpx
import pytest

from sotpkit.errors import (
    AuthRequired,
    ForgeNetworkError,
    MissingField,
    RateLimited,
    SnapshotError,
    UnsupportedForge,
)
from sotpkit.forge import (
    ForgeMetrics,
    dump_forge_snapshot,
    fetch_forge_metrics,
    fetch_many,
    load_forge_snapshot,
    parse_remote,
    token_from_env,
)

NOW = dt.datetime(2025, 6, 1, 8, 30, 15, 999, tzinfo=dt.timezone.utc)

REPO = {"stargazers_count": 321, "forks_count": 45, "subscribers_count": 12,
        "open_issues_count": 17}
SEARCH = {"type:pr state:open": 5, "type:pr state:closed": 60, "type:issue state:closed": 88}


def canned(request: httpx.Request) -> httpx.Response:
    if request.url.path == "/repos/owner/proj":
        return httpx.Response(200, json=REPO)
    if request.url.path == "/search/issues":
        q = request.url.params["q"]
        assert q.startswith("repo:owner/proj ")
        return httpx.Response(200, json={"total_count": SEARCH[q.split(" ", 1)[1]]})
    return httpx.Response(404)


def client(handler=canned):
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_fetch_counts_from_canned_responses():
    m = fetch_forge_metrics("https://github.com/owner/proj", client=client(), now=lambda: NOW)
    assert (m.stars, m.forks, m.watchers) == (321, 45, 12)
    assert (m.open_prs, m.closed_prs) == (5, 60)
    # open_issues_count includes open pull requests
    assert (m.open_issues, m.closed_issues) == (12, 88)
    assert m.fetched_at == NOW.replace(microsecond=0)


def test_token_is_sent_as_bearer():
    seen = []

    def handler(request):
        seen.append(request.headers.get("authorization"))
        return canned(request)

    fetch_forge_metrics("git@github.com:owner/proj.git", "s3cret", client=client(handler),
                        now=lambda: NOW)
    assert seen and all(h == "Bearer s3cret" for h in seen)


@pytest.mark.parametrize("url,expected", [
    ("https://github.com/a/b", ("a", "b")),
    ("https://github.com/a/b.git", ("a", "b")),
    ("git@github.com:a/b.git", ("a", "b")),
    ("ssh://git@github.com/a/b", ("a", "b")),
])
def test_parse_remote(url, expected):
    assert parse_remote(url) == expected


@pytest.mark.parametrize("url", ["https://gitlab.com/a/b", "https://example.org/x",
                                 "svn://host/repo"])
def test_unsupported_forge(url):
    with pytest.raises(UnsupportedForge):
        parse_remote(url)


def _status(code, headers=None):
    return lambda request: httpx.Response(code, headers=headers or {}, json={})


@pytest.mark.parametrize("handler,error", [
    (_status(401), AuthRequired),
    (_status(403), AuthRequired),
    (_status(403, {"x-ratelimit-remaining": "0"}), RateLimited),
    (_status(429, {"retry-after": "7"}), RateLimited),
    (_status(500), ForgeNetworkError),
    (_status(404), ForgeNetworkError),
])
def test_http_errors(handler, error):
    with pytest.raises(error):
        fetch_forge_metrics("https://github.com/owner/proj", client=client(handler))


def test_transport_failure_is_network_error():
    def boom(request):
        raise httpx.ConnectError("unreachable", request=request)

    with pytest.raises(ForgeNetworkError):
        fetch_forge_metrics("https://github.com/owner/proj", client=client(boom))


def test_rate_limit_carries_retry_after():
    with pytest.raises(RateLimited) as err:
        fetch_forge_metrics("https://github.com/o/p", client=client(_status(429, {"retry-after": "7"})))
    assert err.value.retry_after == 7.0


def test_fetch_many_retries_once_after_rate_limit():
    calls = {"n": 0}
    waits = []

    def handler(request):
        calls["n"] += 1
        if calls["n"] == 1:
            return httpx.Response(429, headers={"retry-after": "3"})
        return canned(request)

    out = fetch_many({"p": "https://github.com/owner/proj", "q": "https://gitlab.com/x/y"},
                     parallelism=1, sleep=waits.append, client=client(handler), now=lambda: NOW)
    assert isinstance(out["p"], ForgeMetrics)
    assert isinstance(out["q"], UnsupportedForge)
    assert waits == [3.0]


def test_fetch_many_gives_up_on_long_waits():
    out = fetch_many({"p": "https://github.com/owner/proj"}, max_wait=5, sleep=lambda s: None,
                     client=client(_status(429, {"retry-after": "600"})))
    assert isinstance(out["p"], RateLimited)


def test_token_from_env_prefers_tool_variable():
    assert token_from_env({"GITHUB_TOKEN": "g", "SOTPKIT_FORGE_TOKEN": "s"}) == "s"
    assert token_from_env({"GITHUB_TOKEN": "g"}) == "g"
    assert token_from_env({}) is None


# -- snapshots ---------------------------------------------------------------

SNAP = ForgeMetrics(1, 2, 3, 4, 5, 6, 7, dt.datetime(2025, 1, 2, 3, 4, 5, tzinfo=dt.timezone.utc),
                    remote="https://github.com/a/b")


def test_snapshot_round_trip():
    assert load_forge_snapshot(dump_forge_snapshot(SNAP)) == SNAP


def test_naive_timestamp_is_utc():
    text = dump_forge_snapshot(SNAP).replace("+00:00", "")
    assert load_forge_snapshot(text).fetched_at.tzinfo == dt.timezone.utc


def test_snapshot_missing_field():
    text = "\n".join(l for l in dump_forge_snapshot(SNAP).splitlines() if not l.startswith("forks"))
    with pytest.raises(MissingField) as err:
        load_forge_snapshot(text)
    assert err.value.name == "forks"


@pytest.mark.parametrize("mutate", [
    lambda t: t.replace("stars = 1", "stars = -1"),
    lambda t: t.replace("stars = 1", "stars = many"),
    lambda t: t + "stars = 9\n",
    lambda t: t + "colour = red\n",
    lambda t: t.replace("drafts_included = yes", "drafts_included = perhaps"),
    lambda t: t.replace("fetched_at = ", "fetched_at = yesterday "),
])
def test_snapshot_rejects_bad_content(mutate):
    with pytest.raises(SnapshotError):
        load_forge_snapshot(mutate(dump_forge_snapshot(SNAP)))
