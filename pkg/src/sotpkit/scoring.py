"""Impression calculator: template answers to nine 1-10 quality scores.

The rubric is plain data (JSON compatible). Each quality holds a list of rules
``{"question": id, "kind": ..., ...}``; the awarded points are summed, then
capped at ``cap`` and floored at ``floor``.

Rule kinds:

``choice``      ``points`` maps every choice token to points (``null`` = does
                not count)
``ignore``      question never contributes
``below``       number strictly below ``threshold`` earns ``points``
``bands``       number falls in ``[lo, hi]`` (``hi`` null = open) band
``at_least``    percentage at or above ``threshold`` earns ``points``
``count``       size of a set answer (minus ``exclude`` tokens) looked up in bands
``note_count``  items listed in the note when the answer is in ``when``, in bands
``max_choice``  best-scoring member of a set answer
``any``         ``points`` if a set answer has a member outside ``exclude``
``provided``    ``points`` unless the answer is one of ``absent``
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

from .catalog import QUALITIES, AnswerSet, QuestionCatalog, builtin_catalog
from .errors import MissingAnswer, RubricError, UnknownQuality

SCORE_MIN, SCORE_MAX = 1, 10

_YES_NO = {"yes": 1, "no": 0}
_YES_NO_NA = {"yes": 1, "no": 0, "n/a": 0}

DEFAULT_RUBRIC: dict[str, Any] = {
    "cap": SCORE_MAX,
    "floor": SCORE_MIN,
    "qualities": {
        "installability": [
            {"question": "install.instructions", "kind": "choice", "points": {"yes": 1, "no": -1}},
            {"question": "install.one_place", "kind": "choice", "points": _YES_NO_NA},
            {"question": "install.linear", "kind": "choice", "points": _YES_NO_NA},
            {"question": "install.no_deps_assumed", "kind": "choice",
             "points": {"yes": 1, "no": 0, "unclear": 0}},
            {"question": "install.os_versions", "kind": "choice", "points": _YES_NO},
            {"question": "install.automation", "kind": "choice", "points": {"yes": 1, "no": -1}},
            {"question": "install.error_message", "kind": "choice",
             "points": {"yes": 0, "no": -2, "n/a": 1}},
            {"question": "install.validation", "kind": "choice", "points": _YES_NO},
            {"question": "install.steps", "kind": "below", "threshold": 10, "points": 1},
            {"question": "install.os", "kind": "ignore"},
            {"question": "install.extra_packages", "kind": "below", "threshold": 10, "points": 1},
            {"question": "install.package_versions", "kind": "choice",
             "points": {"yes": 1, "no": 0, "n/a": 1}},
            {"question": "install.dependency_instructions", "kind": "choice",
             "points": {"yes": 1, "no": 0, "n/a": 1}},
            {"question": "install.uninstall_problems", "kind": "choice",
             "points": {"yes": 0, "no": 1, "unavail": 1}},
        ],
        "correctness": [
            {"question": "correctness.requirements", "kind": "choice",
             "points": {"yes": 2, "no": 0, "unclear": 0}},
            {"question": "correctness.tools", "kind": "any", "exclude": ["unclear"], "points": 1},
            {"question": "correctness.tutorial", "kind": "choice", "points": {"yes": 2, "no": 0}},
            {"question": "correctness.tutorial_linear", "kind": "choice", "points": _YES_NO_NA},
            {"question": "correctness.expected_output", "kind": "choice", "points": _YES_NO_NA},
            {"question": "correctness.output_match", "kind": "choice", "points": _YES_NO_NA},
            {"question": "correctness.unit_tests", "kind": "choice",
             "points": {"yes": 1, "no": 0, "unclear": 0}},
            {"question": "correctness.ci", "kind": "choice",
             "points": {"yes": 1, "no": 0, "unclear": 0}},
        ],
        "reliability": [
            {"question": "reliability.install_break", "kind": "choice",
             "points": {"yes": 0, "no": 5}},
            {"question": "reliability.install_recoverable", "kind": "choice",
             "points": {"yes": 5, "no": 0, "n/a": 0}},
            {"question": "reliability.tutorial_break", "kind": "choice",
             "points": {"yes": 0, "no": 5, "n/a": 0}},
            {"question": "reliability.tutorial_error_message", "kind": "choice",
             "points": {"yes": 2, "no": 0, "n/a": 0}},
            {"question": "reliability.tutorial_recoverable", "kind": "choice",
             "points": {"yes": 3, "no": 0, "n/a": 0}},
        ],
        "robustness": [
            {"question": "robustness.unexpected_input", "kind": "choice",
             "points": {"yes": 5, "no": 0}},
            {"question": "robustness.newlines", "kind": "choice",
             "points": {"yes": 5, "no": 0, "n/a": 5}},
        ],
        "usability": [
            {"question": "usability.tutorial", "kind": "choice", "points": {"yes": 3, "no": 0}},
            {"question": "usability.user_manual", "kind": "choice", "points": {"yes": 4, "no": 0}},
            {"question": "usability.user_characteristics", "kind": "choice", "points": _YES_NO},
            {"question": "usability.support_model", "kind": "count", "exclude": ["none"],
             "bands": [[0, 0, 0], [1, 1, 1], [2, None, 2]]},
        ],
        "maintainability": [
            {"question": "maintainability.version", "kind": "provided", "points": 1,
             "absent": ["", "none", "nothing", "n/a", "unclear", "unknown"]},
            {"question": "maintainability.contributing", "kind": "choice", "points": _YES_NO},
            {"question": "maintainability.artifacts", "kind": "note_count", "when": ["yes"],
             "bands": [[0, 0, 0], [1, 2, 1], [3, None, 2]]},
            {"question": "maintainability.issue_tracker", "kind": "max_choice",
             "points": {"trac": 2, "jira": 2, "redmine": 2, "e-mail": 1,
                        "discussion_board": 2, "sourceforge": 2, "google_code": 2,
                        "git": 2, "bitbucket": 2, "none": 0, "unclear": 0, "other": 2}},
            {"question": "maintainability.pct_issues_closed", "kind": "at_least",
             "threshold": 50, "points": 1},
            {"question": "maintainability.pct_comments", "kind": "at_least",
             "threshold": 10, "points": 1},
            {"question": "maintainability.vcs", "kind": "choice",
             "points": {"svn": 2, "cvs": 2, "git": 2, "github": 2, "unclear": 0, "other": 2}},
        ],
        "reusability": [
            {"question": "reusability.code_files", "kind": "bands",
             "bands": [[0, 9, 0], [10, 49, 1], [50, 99, 3], [100, 299, 4], [300, 599, 5],
                       [600, 999, 6], [1000, None, 8]]},
            {"question": "reusability.api_documented", "kind": "choice",
             "points": {"yes": 2, "no": 0, "n/a": 0}},
        ],
        "understandability": [
            {"question": "understandability.indentation", "kind": "choice", "points": _YES_NO_NA},
            {"question": "understandability.coding_standard", "kind": "choice",
             "points": _YES_NO_NA},
            {"question": "understandability.identifiers", "kind": "choice",
             "points": {"yes": 2, "no": 0, "n/a": 0}},
            {"question": "understandability.constants", "kind": "choice", "points": _YES_NO_NA},
            {"question": "understandability.comment_quality", "kind": "choice",
             "points": {"yes": 2, "no": 0, "n/a": 0}},
            {"question": "understandability.algorithms_named", "kind": "choice",
             "points": _YES_NO_NA},
            {"question": "understandability.parameter_order", "kind": "choice",
             "points": _YES_NO_NA},
            {"question": "understandability.modularized", "kind": "choice", "points": _YES_NO_NA},
        ],
        "visibility": [
            {"question": "visibility.dev_process", "kind": "choice",
             "points": {"yes": 3, "no": 0, "n/a": 0}},
            {"question": "visibility.process_docs", "kind": "choice", "points": {"yes": 3, "no": 0}},
            {"question": "visibility.dev_environment", "kind": "choice",
             "points": {"yes": 2, "no": 0}},
            {"question": "visibility.release_notes", "kind": "choice", "points": {"yes": 2, "no": 0}},
        ],
    },
}

_KIND_FOR = {
    "choice": ("enum",),
    "ignore": None,
    "below": ("number",),
    "bands": ("number",),
    "at_least": ("percentage",),
    "count": ("set",),
    "note_count": ("enum",),
    "max_choice": ("set",),
    "any": ("set", "enum"),
    "provided": ("string",),
}


@dataclass(frozen=True)
class Rubric:
    qualities: Mapping[str, tuple[Mapping[str, Any], ...]]
    cap: int = SCORE_MAX
    floor: int = SCORE_MIN

    def rules(self, quality: str) -> tuple[Mapping[str, Any], ...]:
        if quality not in self.qualities:
            raise UnknownQuality(f"unknown quality {quality!r}")
        return self.qualities[quality]


@dataclass(frozen=True)
class QualityScores:
    package_id: str
    scores: Mapping[str, int]
    breakdown: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def raw(self, quality: str) -> int:
        return sum(self.breakdown[quality].values())

    def to_dict(self) -> dict:
        return {
            "package": self.package_id,
            "scores": {q: self.scores[q] for q in self.scores},
            "raw": {q: self.raw(q) for q in self.breakdown},
            "breakdown": {q: dict(b) for q, b in self.breakdown.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "QualityScores":
        return cls(d["package"], dict(d["scores"]),
                   {q: dict(b) for q, b in d.get("breakdown", {}).items()})


def _check_bands(rule, qid):
    bands = rule.get("bands")
    if not bands:
        raise RubricError(f"{qid}: 'bands' required")
    prev_hi = None
    for lo, hi, _pts in bands:
        if prev_hi is not None and lo != prev_hi + 1:
            raise RubricError(f"{qid}: bands must be contiguous")
        prev_hi = hi if hi is not None else float("inf")


def validate_rubric(data: Mapping[str, Any], catalog: QuestionCatalog | None = None) -> Rubric:
    catalog = catalog or builtin_catalog()
    quals = data.get("qualities")
    if not isinstance(quals, Mapping):
        raise RubricError("rubric needs a 'qualities' mapping")
    unknown = set(quals) - set(QUALITIES)
    if unknown:
        raise RubricError(f"unknown qualities: {sorted(unknown)}")
    absent = [q for q in QUALITIES if q not in quals]
    if absent:
        raise RubricError(f"rubric lacks qualities: {absent}")
    for quality, rules in quals.items():
        for rule in rules:
            qid, kind = rule.get("question"), rule.get("kind")
            if qid not in catalog:
                raise RubricError(f"{quality}: rubric question {qid!r} not in catalog")
            if kind not in _KIND_FOR:
                raise RubricError(f"{qid}: unknown rule kind {kind!r}")
            q = catalog.question(qid)
            allowed = _KIND_FOR[kind]
            if allowed is not None and q.kind not in allowed:
                raise RubricError(f"{qid}: rule {kind!r} does not fit a {q.kind} question")
            if kind in ("choice", "max_choice"):
                missing = set(q.tokens) - set(rule.get("points", {}))
                if missing:
                    raise RubricError(f"{qid}: no points for choices {sorted(missing)}")
            if kind in ("bands", "count", "note_count"):
                _check_bands(rule, qid)
    frozen = {q: tuple(copy.deepcopy(list(rules))) for q, rules in quals.items()}
    return Rubric(frozen, int(data.get("cap", SCORE_MAX)), int(data.get("floor", SCORE_MIN)))


def load_rubric(text: str, catalog: QuestionCatalog | None = None) -> Rubric:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RubricError(f"rubric is not valid JSON: {exc}") from exc
    return validate_rubric(data, catalog)


_DEFAULT: Rubric | None = None


def default_rubric() -> Rubric:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = validate_rubric(DEFAULT_RUBRIC)
    return _DEFAULT


def _band(bands, n):
    for lo, hi, pts in bands:
        if n >= lo and (hi is None or n <= hi):
            return pts
    return 0


def note_items(note: str | None) -> list[str]:
    if not note:
        return []
    return [p for p in (s.strip() for s in re.split(r"[,;]", note)) if p]


def _points(rule: Mapping[str, Any], answer) -> int | None:
    kind = rule["kind"]
    value = answer.value
    if kind == "choice":
        return rule["points"][value]
    if kind == "below":
        return rule["points"] if isinstance(value, int) and value < rule["threshold"] \
            else rule.get("else", 0)
    if kind == "bands":
        return _band(rule["bands"], value) if isinstance(value, int) else 0
    if kind == "at_least":
        ok = isinstance(value, float) and value >= rule["threshold"]
        return rule["points"] if ok else rule.get("else", 0)
    if kind == "count":
        members = [v for v in value if v not in rule.get("exclude", ())]
        return _band(rule["bands"], len(members))
    if kind == "note_count":
        n = len(note_items(answer.note)) if value in rule.get("when", ("yes",)) else 0
        return _band(rule["bands"], n)
    if kind == "max_choice":
        return max(rule["points"][v] for v in value)
    if kind == "any":
        members = value if isinstance(value, tuple) else (value,)
        hit = any(v not in rule.get("exclude", ()) for v in members)
        return rule["points"] if hit else 0
    if kind == "provided":
        absent = {a.lower() for a in rule.get("absent", ())}
        return 0 if str(value).strip().lower() in absent else rule["points"]
    raise RubricError(f"unknown rule kind {kind!r}")


def clamp_score(raw: int, rubric: Rubric | None = None) -> int:
    rubric = rubric or default_rubric()
    return max(rubric.floor, min(rubric.cap, raw))


def score_quality(quality_id: str, answers: AnswerSet,
                  rubric: Rubric | None = None) -> tuple[int, dict[str, int]]:
    """Score one quality; returns the clamped score and per-question points."""
    rubric = rubric or default_rubric()
    breakdown: dict[str, int] = {}
    for rule in rubric.rules(quality_id):
        if rule["kind"] == "ignore":
            continue
        qid = rule["question"]
        answer = answers.get(qid)
        if answer is None:
            raise MissingAnswer(qid, quality_id)
        pts = _points(rule, answer)
        if pts is not None:
            breakdown[qid] = pts
    return clamp_score(sum(breakdown.values()), rubric), breakdown


def score_all(answers: AnswerSet, rubric: Rubric | None = None) -> QualityScores:
    rubric = rubric or default_rubric()
    scores, breakdown = {}, {}
    for quality in QUALITIES:
        scores[quality], breakdown[quality] = score_quality(quality, answers, rubric)
    return QualityScores(answers.package_id, scores, breakdown)


def rubric_questions(rubric: Rubric | None = None) -> tuple[str, ...]:
    """Question ids the rubric needs answered, in quality order."""
    rubric = rubric or default_rubric()
    return tuple(r["question"] for q in QUALITIES for r in rubric.qualities.get(q, ())
                 if r["kind"] != "ignore")
