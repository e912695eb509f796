import csv
import datetime as dt
import io

import pytest

from helpers import check_golden, edit_answers, fixture_text
from sotpkit.ahp import rank_packages, sensitivity
from sotpkit.catalog import QUALITIES, parse_answers
from sotpkit.derived import RepoMetrics, derive, prefill
from sotpkit.errors import IncompleteBundle, ValidationFailure
from sotpkit.forge import ForgeMetrics
from sotpkit.interview import emit_interview_guide, interview_questions
from sotpkit.reporting import (
    AssessmentBundle,
    PackageAssessment,
    aggregate_research_questions,
    compare_with_stars,
    render_report,
)
from sotpkit.repo_metrics import CodeMetrics, GitHistoryMetrics, LineCounts
from sotpkit.scoring import score_all
from sotpkit.workflow import PackageLedger, PackageRecord

AS_OF = dt.date(2025, 6, 30)
BEST = fixture_text("answers_best.txt")


def _metrics(commits, stars, open_, closed, code, comment):
    h = GitHistoryMetrics(commits, {2025: commits}, {"2025-06": commits}, 10 * commits, commits,
                          dt.date(2021, 1, 1), dt.date(2025, 5, 1), 3)
    c = CodeMetrics(4, 0, {"c": LineCounts(code, comment, 10)}, {"c": 4})
    f = ForgeMetrics(stars, 3, 2, 1, 5, open_, closed,
                     dt.datetime(2025, 6, 1, tzinfo=dt.timezone.utc))
    return RepoMetrics(h, c, f)


def make_bundle(spec, mode="ratio", extra_records=()):
    """``spec``: {id: (answer changes, metrics args)}."""
    records = [PackageRecord(pid, name=pid.title(), url=f"https://github.com/o/{pid}",
                             state="selected") for pid in spec]
    records += list(extra_records)
    ledger = PackageLedger(tuple(records), AS_OF)
    packages = {}
    for pid, (changes, margs) in spec.items():
        m = _metrics(*margs)
        d = derive(m, AS_OF)
        answers = prefill(parse_answers(edit_answers(BEST, pid, changes)), m, d)
        packages[pid] = PackageAssessment(answers, m, d, score_all(answers))
    scores = {pid: p.scores for pid, p in packages.items()}
    return AssessmentBundle(ledger, packages, rank_packages(scores, mode=mode),
                            sensitivity(scores, mode=mode))


TWO = {
    "orca": ({"usability.user_manual": "no", "maintainability.vcs": "svn"},
             (40, 120, 10, 30, 800, 200)),
    "pike": ({"correctness.ci": "no", "summary.dev_model": "freeware",
              "maintainability.artifacts": "yes | note: README",
              "maintainability.issue_tracker": "e-mail, jira"},
             (12, 900, 0, 0, 500, 20)),
}
FILTERED = PackageRecord("perch", name="Perch", in_scope=False, state="filtered",
                         filter_reason="scope", filter_note="out of scope")


@pytest.fixture(scope="module")
def two():
    return make_bundle(TWO, extra_records=[FILTERED])


def test_two_package_markdown_golden(two):
    docs = render_report(two, fmt="markdown")
    check_golden("two_package_report.md", docs["report.md"])


def test_two_package_csv_golden(two):
    check_golden("two_package.csv", render_report(two, fmt="csv")["packages.csv"])


def test_rendering_is_deterministic(two):
    assert render_report(two, fmt="markdown") == render_report(two, fmt="markdown")
    assert render_report(two, fmt="csv") == render_report(two, fmt="csv")


def test_csv_rows_and_quoting(two):
    text = render_report(two, fmt="csv")["packages.csv"]
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 1 + 2
    header = rows[0]
    assert header[:4] == ["package", "name", "url", "status"]
    assert header[4:13] == list(QUALITIES)
    assert text.splitlines()[1].startswith('"orca","Orca",')
    assert "perch" not in text


def test_filtered_package_never_reported(two):
    md = render_report(two)["report.md"]
    assert "perch" not in md.lower()


def test_rq_tables(two):
    agg = aggregate_research_questions(two)
    assert agg.vcs == {"git": 1, "svn": 1}
    assert agg.ci == {"no": 1, "yes": 1}
    assert agg.issue_trackers == {"e-mail": 1, "git": 1, "jira": 1}
    assert agg.artifacts == {"readme": 2, "changelog": 1, "design document": 1, "test plan": 1}
    assert agg.dev_model == {"freeware": 1, "open_source": 1}
    for name in agg.tables:
        assert all(v <= agg.package_count for v in getattr(agg, name).values())


def test_three_git_packages():
    spec = {p: ({}, (5, 10 * i + 1, 1, 1, 100, 20)) for i, p in enumerate(["a", "b", "c"])}
    agg = aggregate_research_questions(make_bundle(spec))
    assert agg.vcs == {"git": 3}


def test_kendall_tau_extremes():
    stars = {"a": 40, "b": 30, "c": 20, "d": 10}
    assert compare_with_stars(("a", "b", "c", "d"), stars).kendall_tau == 1.0
    rev = compare_with_stars(("d", "c", "b", "a"), stars)
    assert rev.kendall_tau == -1.0
    assert rev.top_k_overlap == ("c", "b")
    assert rev.stars_order == ("a", "b", "c", "d")


def test_single_package_has_no_tau():
    assert compare_with_stars(("a",), {"a": 3}).kendall_tau is None


def test_cr_warning_lines_in_markdown():
    spec = {
        "a": ({"usability.user_manual": "no", "usability.tutorial": "no",
               "usability.support_model": "none"}, (5, 1, 1, 1, 100, 20)),
        "b": ({}, (5, 2, 1, 1, 100, 20)),
        "c": ({"usability.user_manual": "no"}, (5, 3, 1, 1, 100, 20)),
    }
    bundle = make_bundle(spec, mode="saaty-diff")
    md = render_report(bundle)["report.md"]
    bad = [q for q in QUALITIES if bundle.ranking.per_quality[q].consistency_ratio > 0.1]
    assert bad
    for q in bad:
        assert f"WARNING: {q} comparison matrix is inconsistent" in md


def test_incomplete_bundle_lists_packages(two):
    broken = AssessmentBundle(two.ledger, {"orca": two.packages["orca"]}, two.ranking)
    with pytest.raises(IncompleteBundle) as err:
        aggregate_research_questions(broken)
    assert err.value.package_ids == ("pike",)
    partial = PackageAssessment(two.packages["pike"].answers)
    with pytest.raises(IncompleteBundle):
        render_report(AssessmentBundle(two.ledger, {**two.packages, "pike": partial},
                                       two.ranking))
    with pytest.raises(IncompleteBundle):
        render_report(AssessmentBundle(two.ledger, two.packages, None))


def test_unknown_format(two):
    with pytest.raises(ValidationFailure):
        render_report(two, fmt="html")


# -- interview packet ------------------------------------------------------------


def test_interview_has_twenty_numbered_questions():
    qs = interview_questions()
    assert len(qs) == 20
    assert [q.number for q in qs] == list(range(1, 21))
    assert sum(q.section == "background" for q in qs) == 8


def test_interview_contains_obstacles_question():
    assert "Currently, what are the most significant obstacles" in emit_interview_guide()


def test_interview_tags():
    tags = {q.number: q.tags for q in interview_questions() if q.tags}
    assert tags == {11: ("5b", "5i"), 15: ("5e",), 16: ("5d", "5c"), 17: ("5f",),
                    18: ("5a",), 19: ("5g",), 20: ("5h",)}


def test_interview_is_stable():
    assert emit_interview_guide() == emit_interview_guide()


def test_missing_tutorial_is_flagged():
    spec = {"a": ({"reliability.tutorial_break": "n/a"}, (5, 1, 1, 1, 100, 20)),
            "b": ({}, (5, 2, 1, 1, 100, 20))}
    bundle = make_bundle(spec)
    assert bundle.packages["a"].scores.scores["reliability"] == 5
    md = render_report(bundle)["report.md"]
    assert "No tutorial, so reliability is capped at 5: a\n" in md
