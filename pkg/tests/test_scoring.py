import copy
import json

import pytest

from helpers import edit_answers, fixture_text
from sotpkit.catalog import QUALITIES, parse_answers
from sotpkit.errors import MissingAnswer, RubricError, UnknownQuality
from sotpkit.scoring import (
    DEFAULT_RUBRIC,
    QualityScores,
    clamp_score,
    load_rubric,
    rubric_questions,
    score_all,
    score_quality,
    validate_rubric,
)

BEST = fixture_text("answers_best.txt")
WORST = fixture_text("answers_worst.txt")

# best-value points per row, read off the rubric tables
BEST_ROWS = {
    "installability": [1] * 13,
    "correctness": [2, 1, 2, 1, 1, 1, 1, 1],
    "reliability": [5, 0, 5, 0, 0],     # no breakage, so the follow-up rows are n/a
    "robustness": [5, 5],
    "usability": [3, 4, 1, 2],
    "maintainability": [1, 1, 2, 2, 1, 1, 2],
    "reusability": [8, 2],
    "understandability": [1, 1, 2, 1, 2, 1, 1, 1],
    "visibility": [3, 3, 2, 2],
}


def answers(text=BEST, **changes):
    return parse_answers(edit_answers(text, "p", {k.replace("__", "."): v
                                                  for k, v in changes.items()}))


@pytest.mark.parametrize("quality", QUALITIES)
def test_best_answers_hand_sums(quality):
    score, breakdown = score_quality(quality, answers())
    assert list(breakdown.values()) == BEST_ROWS[quality]
    assert score == 10


def test_installability_caps_at_ten():
    s = score_all(answers())
    assert s.raw("installability") == 13
    assert s.scores["installability"] == 10


def test_worst_answers_floor_at_one():
    s = score_all(parse_answers(WORST))
    assert s.raw("installability") == -4
    assert all(v == 1 for v in s.scores.values())
    assert all(s.raw(q) == 0 for q in QUALITIES if q != "installability")


def test_install_os_never_counts():
    _, b = score_quality("installability", answers())
    assert "install.os" not in b


@pytest.mark.parametrize("steps,points", [(9, 1), (10, 0), (0, 1)])
def test_steps_strictly_below_ten(steps, points):
    _, b = score_quality("installability", answers(install__steps=str(steps)))
    assert b["install.steps"] == points


@pytest.mark.parametrize("channels,points", [
    ("none", 0), ("faq", 1), ("faq, chat", 2), ("faq, chat, e-mail, other | note: irc", 2)])
def test_support_model_bands(channels, points):
    _, b = score_quality("usability", answers(usability__support_model=channels))
    assert b["usability.support_model"] == points


@pytest.mark.parametrize("value,points", [
    ("no", 0), ("unclear", 0), ("yes | note: README", 1), ("yes | note: README; changelog", 1),
    ("yes | note: README, changelog, design", 2)])
def test_artifact_note_bands(value, points):
    _, b = score_quality("maintainability", answers(maintainability__artifacts=value))
    assert b["maintainability.artifacts"] == points


@pytest.mark.parametrize("value,points", [
    ("e-mail", 1), ("none", 0), ("e-mail, jira", 2), ("other | note: custom", 2)])
def test_issue_tracker_best_choice(value, points):
    _, b = score_quality("maintainability", answers(maintainability__issue_tracker=value))
    assert b["maintainability.issue_tracker"] == points


@pytest.mark.parametrize("qid,value,points", [
    ("maintainability.pct_issues_closed", "50", 1),
    ("maintainability.pct_issues_closed", "49.99", 0),
    ("maintainability.pct_issues_closed", "n/a", 0),
    ("maintainability.pct_comments", "10", 1),
    ("maintainability.pct_comments", "9.9", 0),
])
def test_percentage_thresholds_inclusive(qid, value, points):
    _, b = score_quality("maintainability", parse_answers(edit_answers(BEST, "p", {qid: value})))
    assert b[qid] == points


@pytest.mark.parametrize("files,points", [
    (0, 0), (9, 0), (10, 1), (49, 1), (50, 3), (99, 3), (100, 4), (299, 4), (300, 5),
    (599, 5), (600, 6), (999, 6), (1000, 8), (50000, 8)])
def test_reusability_bands(files, points):
    _, b = score_quality("reusability", answers(reusability__code_files=str(files)))
    assert b["reusability.code_files"] == points


@pytest.mark.parametrize("version,points", [("2.0", 1), ("unclear", 0), ("N/A", 0)])
def test_version_provided(version, points):
    _, b = score_quality("maintainability", answers(maintainability__version=version))
    assert b["maintainability.version"] == points


def test_correctness_tools_unclear_scores_zero():
    _, b = score_quality("correctness", answers(correctness__tools="unclear"))
    assert b["correctness.tools"] == 0


def test_missing_answer_names_question():
    a = answers(install__steps=None)
    with pytest.raises(MissingAnswer) as err:
        score_quality("installability", a)
    assert err.value.question_id == "install.steps"


def test_unknown_quality():
    with pytest.raises(UnknownQuality):
        score_quality("elegance", answers())


def test_clamp():
    assert clamp_score(14) == 10
    assert clamp_score(-4) == 1
    assert clamp_score(7) == 7


def test_scores_round_trip():
    s = score_all(answers())
    assert QualityScores.from_dict(json.loads(json.dumps(s.to_dict()))) == s


def test_scoring_is_deterministic():
    assert score_all(answers()).to_dict() == score_all(answers()).to_dict()


def test_rubric_questions_exist_in_catalog():
    qs = rubric_questions()
    assert "install.os" not in qs
    assert len(qs) == len(set(qs))


def test_load_custom_rubric():
    data = copy.deepcopy(DEFAULT_RUBRIC)
    data["qualities"]["visibility"][0]["points"] = {"yes": 5, "no": 0, "n/a": 0}
    r = load_rubric(json.dumps(data))
    assert score_all(answers(), r).raw("visibility") == 12


@pytest.mark.parametrize("mutate", [
    lambda d: d["qualities"].pop("visibility"),
    lambda d: d["qualities"].update(elegance=[]),
    lambda d: d["qualities"]["visibility"].append({"question": "visibility.bogus",
                                                   "kind": "choice", "points": {}}),
    lambda d: d["qualities"]["visibility"][0].update(kind="teleport"),
    lambda d: d["qualities"]["visibility"][0]["points"].pop("n/a"),
    lambda d: d["qualities"]["reusability"][0].update(kind="at_least"),
    lambda d: d["qualities"]["reusability"][0]["bands"].pop(1),
])
def test_invalid_rubrics(mutate):
    data = copy.deepcopy(DEFAULT_RUBRIC)
    mutate(data)
    with pytest.raises(RubricError):
        validate_rubric(data)


def test_bad_json_rubric():
    with pytest.raises(RubricError):
        load_rubric("{nope")
