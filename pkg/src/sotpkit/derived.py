"""Processed measures computed from the raw repository data."""

from __future__ import annotations

import calendar
import datetime as dt
from dataclasses import dataclass
from typing import Mapping

from .catalog import Answer, AnswerSet
from .errors import FutureDate
from .forge import ForgeMetrics, dump_forge_snapshot, load_forge_snapshot
from .repo_metrics import CodeMetrics, GitHistoryMetrics, LineCounts

ALIVE_WINDOW_MONTHS = 18
COMMENT_DENOMINATOR = "code+comment"


def months_before(day: dt.date, months: int) -> dt.date:
    """Calendar-month subtraction, clamping the day to the target month's end."""
    index = day.year * 12 + (day.month - 1) - months
    year, month = divmod(index, 12)
    month += 1
    return dt.date(year, month, min(day.day, calendar.monthrange(year, month)[1]))


def compute_status(last_commit: dt.date, last_release: dt.date | None,
                   as_of: dt.date) -> str:
    """``alive`` when the newest commit or release is within 18 calendar months
    of ``as_of``, boundary included."""
    if last_commit > as_of:
        raise FutureDate(f"last commit {last_commit} is after as_of {as_of}")
    latest = max(last_commit, last_release) if last_release else last_commit
    return "alive" if latest >= months_before(as_of, ALIVE_WINDOW_MONTHS) else "dead"


def pct_issues_closed(open_: int, closed: int) -> float | None:
    if open_ < 0 or closed < 0:
        raise ValueError("issue counts must be non-negative")
    if open_ + closed == 0:
        return None
    return 100.0 * closed / (open_ + closed)


def pct_comments(counts: LineCounts) -> float | None:
    """Comment share of non-blank lines; ``None`` when there are none."""
    denom = counts.code + counts.comment
    if denom == 0:
        return None
    return 100.0 * counts.comment / denom


@dataclass(frozen=True)
class DerivedMetrics:
    status: str
    pct_issues_closed: float | None
    pct_comments: float | None
    as_of: dt.date

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "pct_issues_closed": self.pct_issues_closed,
            "pct_comments": self.pct_comments,
            "pct_comments_denominator": COMMENT_DENOMINATOR,
            "as_of": self.as_of.isoformat(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "DerivedMetrics":
        return cls(d["status"], d["pct_issues_closed"], d["pct_comments"],
                   dt.date.fromisoformat(d["as_of"]))


@dataclass(frozen=True)
class RepoMetrics:
    """Everything mined for one package: history, source tree, forge counts."""

    history: GitHistoryMetrics
    code: CodeMetrics
    forge: ForgeMetrics | None = None

    def to_dict(self) -> dict:
        return {
            "history": self.history.to_dict(),
            "code": self.code.to_dict(),
            "forge": dump_forge_snapshot(self.forge) if self.forge else None,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RepoMetrics":
        forge = load_forge_snapshot(d["forge"]) if d.get("forge") else None
        return cls(GitHistoryMetrics.from_dict(d["history"]), CodeMetrics.from_dict(d["code"]),
                   forge)


def derive(metrics: RepoMetrics, as_of: dt.date,
           last_release: dt.date | None = None) -> DerivedMetrics:
    forge = metrics.forge
    closed = pct_issues_closed(forge.open_issues, forge.closed_issues) if forge else None
    return DerivedMetrics(
        status=compute_status(metrics.history.last_commit_date, last_release, as_of),
        pct_issues_closed=closed,
        pct_comments=pct_comments(metrics.code.totals),
        as_of=as_of,
    )


def measured_answers(metrics: RepoMetrics, derived: DerivedMetrics) -> list[Answer]:
    """Template answers that follow directly from mined data."""
    h, c, f = metrics.history, metrics.code, metrics.forge
    totals = c.totals
    out = [
        ("summary.developers", h.developer_count),
        ("summary.last_commit", h.last_commit_date),
        ("summary.status", derived.status),
        ("maintainability.pct_issues_closed",
         "n/a" if derived.pct_issues_closed is None else derived.pct_issues_closed),
        ("maintainability.pct_comments",
         "n/a" if derived.pct_comments is None else derived.pct_comments),
        ("gitstats.text_files", c.text_files),
        ("gitstats.binary_files", c.binary_files),
        ("gitstats.total_lines", totals.total),
        ("gitstats.lines_added", h.lines_added),
        ("gitstats.lines_deleted", h.lines_deleted),
        ("gitstats.total_commits", h.total_commits),
        ("gitstats.commits_by_year",
         ", ".join(f"{y}: {n}" for y, n in sorted(h.commits_by_year.items()))),
        ("gitstats.commits_by_month",
         ", ".join(f"{m}: {n}" for m, n in sorted(h.commits_by_month.items()))),
        ("scc.text_files", c.text_files),
        ("scc.total_lines", totals.total),
        ("scc.code_lines", totals.code),
        ("scc.comment_lines", totals.comment),
        ("scc.blank_lines", totals.blank),
    ]
    if f is not None:
        out += [
            ("github.stars", f.stars),
            ("github.forks", f.forks),
            ("github.watchers", f.watchers),
            ("github.open_prs", f.open_prs),
            ("github.closed_prs", f.closed_prs),
        ]
    return [Answer(qid, value) for qid, value in out if value != ""]


def prefill(answers: AnswerSet, metrics: RepoMetrics, derived: DerivedMetrics) -> AnswerSet:
    """Fill unanswered measurable questions; assessor answers always win."""
    extra = [a for a in measured_answers(metrics, derived) if a.question_id not in answers]
    return answers.with_answers(extra)
