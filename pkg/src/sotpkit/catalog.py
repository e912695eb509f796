"""Measurement-template schema and assessor answer files.

Answer files are line oriented::

    # comments start with a hash
    package = fooflow
    vm_environment = VirtualBox 7.0, Ubuntu 22.04
    install.instructions = yes
    install.automation = yes | note: Makefile with an install target
    summary.platforms = linux, os_x

Choice values are matched case-insensitively against either the token or the
printed label ("OS X" and "os_x" are the same choice).
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping
from urllib.parse import urlparse

from . import _template
from .errors import (
    AnswerSyntaxError,
    DuplicateKey,
    MissingStarNote,
    TypeMismatch,
    UnknownQuestion,
)

KINDS = ("enum", "set", "number", "percentage", "date", "url", "string")
QUALITIES = _template.QUALITY_SECTIONS
META_KEYS = ("package", "vm_environment")


def normalize_token(text: str) -> str:
    return re.sub(r"\s+", "_", text.strip().lower())


@dataclass(frozen=True)
class Choice:
    token: str
    label: str


@dataclass(frozen=True)
class Question:
    id: str
    prompt: str
    kind: str
    choices: tuple[Choice, ...] = ()
    star_choices: frozenset[str] = frozenset()
    specials: tuple[str, ...] = ()
    multiple: bool = False
    minimum: float | None = None
    maximum: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"{self.id}: unknown answer kind {self.kind!r}")
        tokens = self.tokens
        if self.kind in ("enum", "set"):
            if not tokens or len(set(tokens)) != len(tokens):
                raise ValueError(f"{self.id}: choices must be nonempty and unique")
            if not self.star_choices <= set(tokens):
                raise ValueError(f"{self.id}: starred choices must be among the choices")
        elif self.choices or self.star_choices:
            raise ValueError(f"{self.id}: only enum/set questions take choices")

    @property
    def section_prefix(self) -> str:
        return self.id.split(".", 1)[0]

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(c.token for c in self.choices)

    def describe_type(self) -> str:
        if self.kind in ("enum", "set"):
            body = ", ".join(c.token + ("*" if c.token in self.star_choices else "")
                             for c in self.choices)
            return f"{'set-of' if self.kind == 'set' else 'enum'}{{{body}}}"
        text = "urls" if self.kind == "url" and self.multiple else self.kind
        if self.minimum is not None or self.maximum is not None:
            text += f" {self.minimum:g}..{self.maximum:g}"
        if self.specials:
            text += " or {" + ", ".join(self.specials) + "}"
        return text


@dataclass(frozen=True)
class Section:
    id: str
    title: str
    questions: tuple[Question, ...]


@dataclass(frozen=True)
class QuestionCatalog:
    sections: tuple[Section, ...]
    version: str
    declared_count: int | None = None

    def __post_init__(self):
        ids = [s.id for s in self.sections]
        if len(set(ids)) != len(ids):
            raise ValueError("section identifiers must be unique")
        qids = [q.id for q in self.questions]
        if len(set(qids)) != len(qids):
            raise ValueError("question identifiers must be unique")
        if self.declared_count is not None and len(qids) != self.declared_count:
            raise ValueError(f"catalog declares {self.declared_count} questions, has {len(qids)}")

    @property
    def questions(self) -> tuple[Question, ...]:
        return tuple(q for s in self.sections for q in s.questions)

    def section(self, section_id: str) -> Section:
        for s in self.sections:
            if s.id == section_id:
                return s
        raise KeyError(section_id)

    def question(self, question_id: str) -> Question:
        return self._index()[question_id]

    def __contains__(self, question_id: str) -> bool:
        return question_id in self._index()

    def _index(self) -> dict[str, Question]:
        # frozen dataclass: cache on the instance dict directly
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {q.id: q for q in self.questions}
            object.__setattr__(self, "_idx", idx)
        return idx

    def export_rows(self) -> list[dict[str, Any]]:
        """Flat listing for assessor reference (id, prompt, type, choices)."""
        return [
            {
                "section": s.id,
                "id": q.id,
                "prompt": q.prompt,
                "type": q.describe_type(),
                "choices": [c.token for c in q.choices],
                "starred": [c.token for c in q.choices if c.token in q.star_choices],
            }
            for s in self.sections
            for q in s.questions
        ]


@dataclass(frozen=True)
class Answer:
    question_id: str
    value: Any
    note: str | None = None
    low_precision: bool = False


@dataclass(frozen=True)
class AnswerSet:
    package_id: str
    answers: Mapping[str, Answer] = field(default_factory=dict)
    vm_environment: str | None = None

    def __contains__(self, question_id: str) -> bool:
        return question_id in self.answers

    def get(self, question_id: str) -> Answer | None:
        return self.answers.get(question_id)

    def value(self, question_id: str, default=None):
        a = self.answers.get(question_id)
        return default if a is None else a.value

    def with_answers(self, extra: Iterable[Answer]) -> "AnswerSet":
        merged = dict(self.answers)
        for a in extra:
            merged[a.question_id] = a
        return AnswerSet(self.package_id, merged, self.vm_environment)


@dataclass(frozen=True)
class CompletenessReport:
    answered: int
    total: int
    missing: dict[str, tuple[str, ...]]

    @property
    def missing_ids(self) -> tuple[str, ...]:
        return tuple(q for ids in self.missing.values() for q in ids)

    @property
    def complete(self) -> bool:
        return not self.missing_ids


# -- catalog construction ----------------------------------------------------

_RANGE = re.compile(r"^(-?\d+(?:\.\d+)?)\.\.(-?\d+(?:\.\d+)?)$")


def parse_answer_spec(qid: str, prompt: str, spec: str) -> Question:
    head, _, rest = spec.partition(":")
    head = head.strip()
    if head in ("enum", "set") and rest:
        choices, star = [], set()
        for raw in rest.split("|"):
            label = raw.strip()
            starred = label.endswith("*")
            label = label.rstrip("*").strip()
            tok = normalize_token(label)
            choices.append(Choice(tok, label))
            if starred:
                star.add(tok)
        return Question(qid, prompt, head, tuple(choices), frozenset(star))

    parts = [p.strip() for p in spec.split("|")]
    words = parts[0].split()
    kind, specials = words[0], tuple(parts[1:])
    lo = hi = None
    if len(words) > 1:
        m = _RANGE.match(words[1])
        if not m:
            raise ValueError(f"{qid}: bad range {words[1]!r}")
        lo, hi = float(m.group(1)), float(m.group(2))
    multiple = kind == "urls"
    if multiple:
        kind = "url"
    return Question(qid, prompt, kind, specials=specials, multiple=multiple,
                    minimum=lo, maximum=hi)


@lru_cache(maxsize=None)
def builtin_catalog() -> QuestionCatalog:
    sections = tuple(
        Section(sid, title, tuple(parse_answer_spec(*row) for row in rows))
        for sid, title, rows in _template.SECTIONS
    )
    return QuestionCatalog(sections, _template.CATALOG_VERSION, _template.DECLARED_QUESTION_COUNT)


# -- value parsing -----------------------------------------------------------

_LINE = re.compile(r"^([A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)?)\s*=\s*(.*)$")
_NOTE = re.compile(r"\s*\|\s*note:\s*(.*)$")
_YEAR = re.compile(r"^\d{4}$")
_NUMBER = re.compile(r"^\d+$")
_PERCENT = re.compile(r"^(\d+(?:\.\d*)?|\.\d+)\s*%?$")


def _match_choice(q: Question, raw: str) -> str | None:
    norm = normalize_token(raw)
    for c in q.choices:
        if norm == c.token or norm == normalize_token(c.label):
            return c.token
    return None


def _special(q: Question, raw: str) -> str | None:
    norm = raw.strip().lower()
    for s in q.specials:
        if norm == s.lower():
            return s
    return None


def parse_value(q: Question, raw: str, line: int = 0) -> tuple[Any, bool]:
    """Convert raw text into a typed value for ``q``; returns (value, low_precision)."""
    raw = raw.strip()
    if q.kind == "string":
        return raw, False

    special = _special(q, raw)
    if special is not None:
        return special, False

    def bad():
        return TypeMismatch(q.id, q.describe_type(), raw, line)

    if q.kind == "enum":
        tok = _match_choice(q, raw)
        if tok is None:
            raise bad()
        return tok, False

    if q.kind == "set":
        picked = []
        for part in raw.split(","):
            tok = _match_choice(q, part) if part.strip() else None
            if tok is None or tok in picked:
                raise bad()
            picked.append(tok)
        if "none" in picked and len(picked) > 1:
            raise bad()
        order = q.tokens
        return tuple(sorted(picked, key=order.index)), False

    if q.kind == "number":
        if not _NUMBER.match(raw):
            raise bad()
        value = int(raw)
        if (q.minimum is not None and value < q.minimum) or (
            q.maximum is not None and value > q.maximum
        ):
            raise bad()
        return value, False

    if q.kind == "percentage":
        m = _PERCENT.match(raw)
        if not m or float(m.group(1)) > 100:
            raise bad()
        return float(m.group(1)), False

    if q.kind == "date":
        if _YEAR.match(raw):
            return dt.date(int(raw), 7, 1), True
        try:
            return dt.date.fromisoformat(raw), False
        except ValueError:
            raise bad() from None

    if q.kind == "url":
        urls = [u.strip() for u in raw.split(",")] if q.multiple else [raw]
        for u in urls:
            parsed = urlparse(u)
            if parsed.scheme not in ("http", "https", "ftp", "git", "ssh") or not parsed.netloc:
                raise bad()
        return (tuple(urls) if q.multiple else urls[0]), False

    raise AssertionError(q.kind)


def _needs_note(q: Question, value: Any) -> str | None:
    if q.kind == "enum" and value in q.star_choices:
        return value
    if q.kind == "set":
        for tok in value:
            if tok in q.star_choices:
                return tok
    return None


def parse_answers(text: str, catalog: QuestionCatalog | None = None,
                  package_id: str | None = None) -> AnswerSet:
    """Parse an answer file into a validated :class:`AnswerSet`.

    ``package_id`` is used when the file has no ``package = ...`` line; a
    mismatch between the two is reported as a syntax error.
    """
    catalog = catalog or builtin_catalog()
    answers: dict[str, Answer] = {}
    meta: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(stripped)
        if not m:
            raise AnswerSyntaxError(f"expected 'section.key = value', got {stripped!r}", lineno)
        key, rest = m.group(1), m.group(2)

        if "." not in key:
            if key not in META_KEYS:
                raise UnknownQuestion(key, lineno)
            if key in meta:
                raise DuplicateKey(key, lineno)
            if not rest.strip():
                raise AnswerSyntaxError(f"empty value for {key}", lineno)
            meta[key] = rest.strip()
            continue

        if key not in catalog:
            raise UnknownQuestion(key, lineno)
        if key in answers:
            raise DuplicateKey(key, lineno)
        q = catalog.question(key)

        note = None
        nm = _NOTE.search(rest)
        if nm:
            note = nm.group(1).strip() or None
            rest = rest[: nm.start()]
        if not rest.strip():
            raise AnswerSyntaxError(f"empty value for {key}", lineno)

        value, low = parse_value(q, rest, lineno)
        starred = _needs_note(q, value)
        if starred is not None and not note:
            raise MissingStarNote(key, starred, lineno)
        answers[key] = Answer(key, value, note, low)

    pid = meta.get("package")
    if pid and package_id and pid != package_id:
        raise AnswerSyntaxError(f"package {pid!r} does not match expected {package_id!r}")
    return AnswerSet(pid or package_id or "", answers, meta.get("vm_environment"))


def format_value(q: Question, answer: Answer) -> str:
    v = answer.value
    if isinstance(v, str):
        return v
    if q.kind == "set" or (q.kind == "url" and q.multiple):
        return ", ".join(v)
    if q.kind == "date":
        return str(v.year) if answer.low_precision else v.isoformat()
    if q.kind == "percentage":
        return repr(float(v))
    return str(v)


def serialize_answers(answers: AnswerSet, catalog: QuestionCatalog | None = None) -> str:
    """Inverse of :func:`parse_answers`; questions appear in catalog order."""
    catalog = catalog or builtin_catalog()
    out = []
    if answers.package_id:
        out.append(f"package = {answers.package_id}")
    if answers.vm_environment:
        out.append(f"vm_environment = {answers.vm_environment}")
    for q in catalog.questions:
        a = answers.get(q.id)
        if a is None:
            continue
        line = f"{q.id} = {format_value(q, a)}"
        if a.note:
            line += f" | note: {a.note}"
        out.append(line)
    return "\n".join(out) + "\n"


def completeness(answers: AnswerSet, catalog: QuestionCatalog | None = None) -> CompletenessReport:
    catalog = catalog or builtin_catalog()
    missing = {}
    answered = 0
    for s in catalog.sections:
        holes = tuple(q.id for q in s.questions if q.id not in answers)
        answered += len(s.questions) - len(holes)
        if holes:
            missing[s.id] = holes
    return CompletenessReport(answered, len(catalog.questions), missing)
