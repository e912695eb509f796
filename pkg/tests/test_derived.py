import datetime as dt

import pytest

from sotpkit.catalog import Answer, AnswerSet
from sotpkit.derived import (
    DerivedMetrics,
    RepoMetrics,
    compute_status,
    derive,
    measured_answers,
    months_before,
    pct_comments,
    pct_issues_closed,
    prefill,
)
from sotpkit.errors import FutureDate
from sotpkit.forge import ForgeMetrics
from sotpkit.repo_metrics import CodeMetrics, GitHistoryMetrics, LineCounts

D = dt.date


@pytest.mark.parametrize("day,months,expected", [
    (D(2025, 6, 30), 18, D(2023, 12, 30)),
    (D(2025, 8, 31), 18, D(2024, 2, 29)),   # clamped to a leap-year February
    (D(2025, 9, 30), 18, D(2024, 3, 30)),
    (D(2024, 1, 15), 1, D(2023, 12, 15)),
    (D(2025, 3, 31), 1, D(2025, 2, 28)),
])
def test_months_before(day, months, expected):
    assert months_before(day, months) == expected


def test_status_boundary_inclusive():
    as_of = D(2025, 6, 30)
    assert compute_status(D(2023, 12, 30), None, as_of) == "alive"
    assert compute_status(D(2023, 12, 29), None, as_of) == "dead"


def test_release_can_keep_a_package_alive():
    as_of = D(2025, 6, 30)
    assert compute_status(D(2020, 1, 1), D(2024, 1, 1), as_of) == "alive"
    assert compute_status(D(2020, 1, 1), D(2021, 1, 1), as_of) == "dead"


def test_commit_after_as_of_is_an_error():
    with pytest.raises(FutureDate):
        compute_status(D(2025, 7, 1), None, D(2025, 6, 30))


def test_percentages():
    assert pct_issues_closed(10, 30) == 75.0
    assert pct_issues_closed(0, 0) is None
    assert pct_comments(LineCounts(800, 200, 50)) == 20.0
    assert pct_comments(LineCounts(0, 0, 7)) is None
    with pytest.raises(ValueError):
        pct_issues_closed(-1, 3)


def _metrics(forge=True):
    h = GitHistoryMetrics(4, {2024: 1, 2025: 3}, {"2025-05": 2, "2025-06": 2}, 100, 20,
                          D(2024, 3, 1), D(2025, 6, 1), 2)
    c = CodeMetrics(3, 1, {"c": LineCounts(800, 200, 50)}, {"c": 3})
    f = ForgeMetrics(9, 2, 3, 1, 4, 10, 30,
                     dt.datetime(2025, 6, 1, tzinfo=dt.timezone.utc)) if forge else None
    return RepoMetrics(h, c, f)


def test_derive_and_round_trip():
    m = _metrics()
    d = derive(m, D(2025, 6, 30))
    assert d == DerivedMetrics("alive", 75.0, 20.0, D(2025, 6, 30))
    assert DerivedMetrics.from_dict(d.to_dict()) == d
    assert d.to_dict()["pct_comments_denominator"] == "code+comment"
    assert RepoMetrics.from_dict(m.to_dict()) == m


def test_derive_without_forge():
    d = derive(_metrics(forge=False), D(2025, 6, 30))
    assert d.pct_issues_closed is None


def test_prefill_keeps_assessor_answers():
    m = _metrics()
    d = derive(m, D(2025, 6, 30))
    own = AnswerSet("p", {"maintainability.pct_comments": Answer("maintainability.pct_comments", 5.0)})
    out = prefill(own, m, d)
    assert out.value("maintainability.pct_comments") == 5.0
    assert out.value("maintainability.pct_issues_closed") == 75.0
    assert out.value("github.stars") == 9
    assert out.value("scc.code_lines") == 800
    assert out.value("gitstats.commits_by_year") == "2024: 1, 2025: 3"


def test_measured_answers_mark_missing_as_na():
    m = _metrics(forge=False)
    d = derive(m, D(2025, 6, 30))
    got = {a.question_id: a.value for a in measured_answers(m, d)}
    assert got["maintainability.pct_issues_closed"] == "n/a"
    assert "github.stars" not in got
