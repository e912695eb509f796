"""Assessment reports: markdown summary, CSV export, research-question tables."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from scipy.stats import kendalltau

from .ahp import CR_THRESHOLD, AhpRanking, SensitivityReport, rank_order
from .catalog import QUALITIES, AnswerSet
from .derived import DerivedMetrics, RepoMetrics
from .errors import IncompleteBundle, ValidationFailure
from .interview import emit_interview_guide  # noqa: F401 - part of the reporting surface
from .scoring import QualityScores, note_items
from .workflow import PackageLedger

FORMATS = ("markdown", "csv")
DEFAULT_TOP_K = 3


@dataclass(frozen=True)
class PackageAssessment:
    answers: AnswerSet
    metrics: RepoMetrics | None = None
    derived: DerivedMetrics | None = None
    scores: QualityScores | None = None

    @property
    def complete(self) -> bool:
        return None not in (self.metrics, self.derived, self.scores)


@dataclass(frozen=True)
class AssessmentBundle:
    ledger: PackageLedger
    packages: Mapping[str, PackageAssessment]
    ranking: AhpRanking | None = None
    sensitivity: SensitivityReport | None = None

    @property
    def selected(self) -> tuple[str, ...]:
        return tuple(sorted(self.ledger.selected_ids))

    def missing(self) -> tuple[str, ...]:
        return tuple(pid for pid in self.selected
                     if pid not in self.packages or not self.packages[pid].complete)

    def check(self, need_ranking: bool = True) -> None:
        missing = self.missing()
        if missing:
            raise IncompleteBundle(missing)
        if need_ranking:
            if self.ranking is None:
                raise IncompleteBundle(self.selected)
            if set(self.ranking.package_ids) != set(self.selected):
                extra = set(self.ranking.package_ids) ^ set(self.selected)
                raise IncompleteBundle(tuple(sorted(extra)))


@dataclass(frozen=True)
class RankComparison:
    methodology_order: tuple[str, ...]
    stars_order: tuple[str, ...]
    stars: Mapping[str, int]
    kendall_tau: float | None
    top_k: int
    top_k_overlap: tuple[str, ...]


@dataclass(frozen=True)
class ResearchQuestionAggregates:
    package_count: int
    artifacts: Mapping[str, int]
    issue_trackers: Mapping[str, int]
    vcs: Mapping[str, int]
    ci: Mapping[str, int]
    correctness_tools: Mapping[str, int]
    dev_model: Mapping[str, int]
    dev_process: Mapping[str, int]
    ranking_vs_stars: RankComparison | None = None
    tables: tuple[str, ...] = field(default=(
        "artifacts", "issue_trackers", "vcs", "ci", "correctness_tools",
        "dev_model", "dev_process"))


def _freq(counter: Counter) -> dict[str, int]:
    return dict(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


def _stars(pkg: PackageAssessment) -> int | None:
    v = pkg.answers.value("github.stars")
    if isinstance(v, int):
        return v
    if pkg.metrics is not None and pkg.metrics.forge is not None:
        return pkg.metrics.forge.stars
    return None


def compare_with_stars(order: tuple[str, ...], stars: Mapping[str, int],
                       top_k: int = DEFAULT_TOP_K) -> RankComparison:
    """Pair the methodology order with the descending-stars order."""
    ids = list(order)
    stars_order, _ = rank_order([float(stars[p]) for p in ids], ids)
    pos_a = {p: i for i, p in enumerate(order)}
    pos_b = {p: i for i, p in enumerate(stars_order)}
    tau = None
    if len(ids) >= 2:
        t = kendalltau([pos_a[p] for p in ids], [pos_b[p] for p in ids]).statistic
        tau = None if math.isnan(t) else float(t)
    k = min(top_k, len(ids))
    overlap = tuple(p for p in order[:k] if p in set(stars_order[:k]))
    return RankComparison(tuple(order), tuple(stars_order), dict(stars), tau, k, overlap)


def aggregate_research_questions(bundle: AssessmentBundle,
                                 top_k: int = DEFAULT_TOP_K) -> ResearchQuestionAggregates:
    bundle.check(need_ranking=False)
    counters = {name: Counter() for name in (
        "artifacts", "issue_trackers", "vcs", "ci", "correctness_tools",
        "dev_model", "dev_process")}
    sources = {
        "issue_trackers": "maintainability.issue_tracker",
        "vcs": "maintainability.vcs",
        "ci": "correctness.ci",
        "correctness_tools": "correctness.tools",
        "dev_model": "summary.dev_model",
        "dev_process": "visibility.dev_process",
    }
    for pid in bundle.selected:
        answers = bundle.packages[pid].answers
        art = answers.get("maintainability.artifacts")
        if art is not None and art.value == "yes":
            # each package counts once per artifact type
            counters["artifacts"].update({item.lower() for item in note_items(art.note)})
        for name, qid in sources.items():
            v = answers.value(qid)
            if v is None:
                continue
            counters[name].update(set(v) if isinstance(v, tuple) else {v})

    comparison = None
    if bundle.ranking is not None:
        bundle.check(need_ranking=True)
        stars = {pid: _stars(bundle.packages[pid]) for pid in bundle.selected}
        missing = tuple(p for p, s in stars.items() if s is None)
        if missing:
            raise IncompleteBundle(missing)
        comparison = compare_with_stars(bundle.ranking.order, stars, top_k)

    return ResearchQuestionAggregates(
        package_count=len(bundle.selected),
        **{name: _freq(c) for name, c in counters.items()},
        ranking_vs_stars=comparison,
    )


# -- rendering ---------------------------------------------------------------


def _fmt(v, digits=4) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, float):
        return f"{v:.{digits}f}"
    return str(v)


def _table(header, rows) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return out


def render_markdown(bundle: AssessmentBundle, agg: ResearchQuestionAggregates) -> str:
    bundle.check()
    ids = bundle.selected
    ranking = bundle.ranking
    ledger = bundle.ledger
    lines = ["# State of practice assessment", "",
             f"Assessment date: {ledger.as_of.isoformat()}", "",
             f"Candidates: {ledger.initial_count}, selected: {len(ids)}, "
             f"filtered: {len(ledger.by_state('filtered'))}.", ""]

    lines += ["## Packages", ""]
    rows = []
    for pid in ids:
        p = bundle.packages[pid]
        rec = ledger.record(pid)
        rows.append([pid, rec.name or pid, p.derived.status,
                     _fmt(p.metrics.history.total_commits),
                     _fmt(p.derived.pct_issues_closed, 1), _fmt(p.derived.pct_comments, 1),
                     _fmt(_stars(p))])
    lines += _table(["id", "name", "status", "commits", "% issues closed", "% comments",
                     "stars"], rows)

    lines += ["", "## Quality scores", ""]
    lines += _table(["id"] + list(QUALITIES),
                    [[pid] + [str(bundle.packages[pid].scores.scores[q]) for q in QUALITIES]
                     for pid in ids])
    # tutorial rows answered n/a award nothing, so reliability cannot exceed 5
    no_tutorial = [pid for pid in ids
                   if bundle.packages[pid].answers.value("reliability.tutorial_break") == "n/a"]
    if no_tutorial:
        lines += ["", "No tutorial, so reliability is capped at 5: " + ", ".join(no_tutorial)]

    lines += ["", "## AHP ranking", "", f"Comparison mode: {ranking.mode}", ""]
    agg_by_id = dict(zip(ranking.package_ids, ranking.aggregate))
    lines += _table(["rank", "id", "aggregate priority"],
                    [[i, pid, _fmt(float(agg_by_id[pid]), 6)]
                     for i, pid in enumerate(ranking.order, 1)])
    for group in ranking.ties:
        lines.append("")
        lines.append("Tied: " + ", ".join(group))
    lines += ["", "### Consistency", ""]
    lines += _table(["quality", "weight", "lambda max", "CR"],
                    [[q, _fmt(float(w), 4), _fmt(ranking.per_quality[q].lambda_max, 4),
                      _fmt(ranking.per_quality[q].consistency_ratio, 4)]
                     for q, w in zip(ranking.qualities, ranking.criteria_weights)])
    warnings = [q for q in ranking.qualities
                if ranking.per_quality[q].consistency_ratio > CR_THRESHOLD]
    if warnings:
        lines.append("")
    for q in warnings:
        cr = ranking.per_quality[q].consistency_ratio
        lines.append(f"WARNING: {q} comparison matrix is inconsistent "
                     f"(CR = {cr:.4f} > {CR_THRESHOLD}).")

    sens = bundle.sensitivity
    if sens is not None:
        lines += ["", "## Sensitivity", "",
                  f"Each score perturbed by +/-{_fmt(sens.delta, 2)} (clamped to 1..10), "
                  f"{len(sens.perturbations)} rankings recomputed.", "",
                  f"- order unchanged in {_fmt(100 * sens.stability, 1)}% of perturbations",
                  f"- smallest change that displaces the top package: {_fmt(sens.min_flip, 2)}"]
        changes = sens.changes()
        if changes:
            lines += ["", "Perturbations that change the order:", ""]
            lines += _table(["package", "quality", "score", "new order"],
                            [[p.package, p.quality,
                              f"{_fmt(p.original, 1)} -> {_fmt(p.perturbed, 1)}",
                              ", ".join(p.order)] for p in changes])

    lines += ["", "## Research questions", ""]
    titles = {
        "artifacts": "Artifacts present",
        "issue_trackers": "Issue trackers",
        "vcs": "Version control",
        "ci": "Continuous integration",
        "correctness_tools": "Correctness and documentation tools",
        "dev_model": "Development model",
        "dev_process": "Defined development process",
    }
    for name in agg.tables:
        table = getattr(agg, name)
        lines += [f"### {titles[name]}", ""]
        if table:
            lines += _table(["value", "packages"], list(table.items()))
        else:
            lines.append("No data.")
        lines.append("")
    cmp_ = agg.ranking_vs_stars
    if cmp_ is not None:
        lines += ["### Methodology ranking versus stars", ""]
        lines += _table(["rank", "methodology", "by stars", "stars"],
                        [[i, a, b, cmp_.stars[b]] for i, (a, b) in
                         enumerate(zip(cmp_.methodology_order, cmp_.stars_order), 1)])
        lines += ["", f"Kendall tau: {_fmt(cmp_.kendall_tau, 4)}",
                  f"Top-{cmp_.top_k} overlap: {len(cmp_.top_k_overlap)} "
                  f"({', '.join(cmp_.top_k_overlap) or 'none'})", ""]
    return "\n".join(lines).rstrip("\n") + "\n"


CSV_METRICS = (
    "total_commits", "developers", "lines_added", "lines_deleted", "text_files",
    "binary_files", "code_lines", "comment_lines", "blank_lines", "pct_issues_closed",
    "pct_comments", "stars", "forks", "watchers", "open_prs", "closed_prs", "open_issues",
    "closed_issues",
)


def render_csv(bundle: AssessmentBundle) -> str:
    bundle.check()
    ranking = bundle.ranking
    agg_by_id = dict(zip(ranking.package_ids, ranking.aggregate))
    rank_of = {pid: i for i, pid in enumerate(ranking.order, 1)}
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    w.writerow(["package", "name", "url", "status", *QUALITIES, "aggregate", "rank",
                *CSV_METRICS])
    for pid in bundle.selected:
        p = bundle.packages[pid]
        rec = bundle.ledger.record(pid)
        h, c, f = p.metrics.history, p.metrics.code, p.metrics.forge
        totals = c.totals
        metrics = [h.total_commits, h.developer_count, h.lines_added, h.lines_deleted,
                   c.text_files, c.binary_files, totals.code, totals.comment, totals.blank,
                   p.derived.pct_issues_closed, p.derived.pct_comments]
        metrics += ([f.stars, f.forks, f.watchers, f.open_prs, f.closed_prs, f.open_issues,
                     f.closed_issues] if f else [None] * 7)
        w.writerow([pid, rec.name or pid, rec.url or "", p.derived.status,
                    *[p.scores.scores[q] for q in QUALITIES],
                    round(float(agg_by_id[pid]), 12), rank_of[pid],
                    *["" if v is None else v for v in metrics]])
    return buf.getvalue()


def render_report(bundle: AssessmentBundle, aggregates: ResearchQuestionAggregates | None = None,
                  fmt: str = "markdown") -> dict[str, str]:
    """Render the document set for ``fmt``; keys are file names."""
    if fmt not in FORMATS:
        raise ValidationFailure(f"unknown report format {fmt!r}")
    if fmt == "csv":
        return {"packages.csv": render_csv(bundle)}
    aggregates = aggregates or aggregate_research_questions(bundle)
    return {"report.md": render_markdown(bundle, aggregates)}
