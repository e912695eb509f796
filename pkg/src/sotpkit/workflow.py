"""Candidate-package ledger and the scope / usage / age filters.

Scope and usage are human judgments recorded on each record; this module only
enforces the filter order and keeps every decision traceable. Filtered records
are never deleted.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .errors import InsufficientData, ValidationFailure

DEFAULT_TARGET_SIZE = 30
STATES = ("candidate", "filtered", "selected")
REASONS = ("scope", "usage", "age")
ELIGIBILITY_FLAGS = ("in_scope", "source_viewable", "metrics_available", "not_incomplete")


@dataclass(frozen=True)
class PackageRecord:
    id: str
    name: str = ""
    url: str | None = None
    in_scope: bool = True
    source_viewable: bool = True
    metrics_available: bool = True
    not_incomplete: bool = True
    usage_ok: bool | None = None
    last_change: dt.date | None = None
    recommended_override: bool = False
    state: str = "candidate"
    filter_reason: str | None = None
    filter_note: str | None = None

    def __post_init__(self):
        if self.state not in STATES:
            raise ValidationFailure(f"{self.id}: unknown state {self.state!r}")
        if (self.state == "filtered") != (self.filter_reason is not None):
            raise ValidationFailure(f"{self.id}: filter reason must be set exactly when filtered")
        if self.filter_reason is not None and self.filter_reason not in REASONS:
            raise ValidationFailure(f"{self.id}: unknown filter reason {self.filter_reason!r}")
        if self.state == "selected" and not self.eligible:
            raise ValidationFailure(f"{self.id}: selected records must pass every eligibility flag")

    @property
    def eligible(self) -> bool:
        return all(getattr(self, f) for f in ELIGIBILITY_FLAGS)

    @property
    def active(self) -> bool:
        return self.state != "filtered"


@dataclass(frozen=True)
class LedgerEvent:
    timestamp: dt.datetime
    package_id: str
    from_state: str
    to_state: str
    reason: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class PackageLedger:
    records: tuple[PackageRecord, ...]
    as_of: dt.date
    initial_count: int | None = None
    events: tuple[LedgerEvent, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.initial_count is None:
            object.__setattr__(self, "initial_count", len(self.records))
        if self.initial_count != len(self.records):
            raise ValidationFailure("initial_count must equal the number of records")
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValidationFailure("package ids must be unique")

    def by_state(self, state: str) -> tuple[PackageRecord, ...]:
        return tuple(r for r in self.records if r.state == state)

    @property
    def selected_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.records if r.state == "selected")

    def record(self, package_id: str) -> PackageRecord:
        for r in self.records:
            if r.id == package_id:
                return r
        raise KeyError(package_id)


def _utcnow() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc).replace(microsecond=0)


def apply_filters(ledger: PackageLedger, target_size: int = DEFAULT_TARGET_SIZE,
                  age_threshold: dt.date | None = None,
                  now: Callable[[], dt.datetime] = _utcnow) -> PackageLedger:
    """Shrink the candidate list toward ``target_size``.

    The scope pass always runs, because a record failing any eligibility flag
    can never be selected. Usage and age passes run only while the list is
    still above target. Usage removes every record judged unusable; age then
    removes records one at a time, oldest last change first, among those older
    than ``age_threshold`` (all, when no threshold is given), sparing records
    flagged ``recommended_override``. Survivors become ``selected``.
    """
    records = {r.id: r for r in ledger.records}
    order = [r.id for r in ledger.records]
    events = list(ledger.events)
    stamp = now()

    def transition(pid, state, reason=None, note=None):
        old = records[pid]
        if old.state == state and old.filter_reason == reason:
            return
        records[pid] = replace(old, state=state, filter_reason=reason, filter_note=note)
        events.append(LedgerEvent(stamp, pid, old.state, state, reason, note))

    def active():
        return [pid for pid in order if records[pid].active]

    for pid in active():
        r = records[pid]
        failed = [f for f in ELIGIBILITY_FLAGS if not getattr(r, f)]
        if failed:
            note = "out of scope" if failed == ["in_scope"] else "fails " + ", ".join(failed)
            transition(pid, "filtered", "scope", note)

    if len(active()) > target_size:
        survivors = active()
        unjudged = [pid for pid in survivors if records[pid].usage_ok is None]
        if unjudged:
            raise InsufficientData("usage judgment missing for: " + ", ".join(unjudged))
        for pid in survivors:
            if records[pid].usage_ok is False:
                transition(pid, "filtered", "usage", "installation procedure unclear")

    if len(active()) > target_size:
        pool = [pid for pid in active() if not records[pid].recommended_override]
        undated = [pid for pid in pool if records[pid].last_change is None]
        if undated:
            raise InsufficientData("last change date missing for: " + ", ".join(undated))
        if age_threshold is not None:
            pool = [pid for pid in pool if records[pid].last_change < age_threshold]
        pool.sort(key=lambda pid: (records[pid].last_change, pid))
        for pid in pool:
            if len(active()) <= target_size:
                break
            transition(pid, "filtered", "age", f"last change {records[pid].last_change}")

    for pid in active():
        transition(pid, "selected")

    return PackageLedger(tuple(records[pid] for pid in order), ledger.as_of,
                         ledger.initial_count, tuple(events))


# -- persistence -------------------------------------------------------------


def _date(s):
    return dt.date.fromisoformat(s) if s else None


def dump_ledger(ledger: PackageLedger) -> str:
    def rec(r: PackageRecord):
        return {
            "id": r.id, "name": r.name, "url": r.url,
            "eligibility": {f: getattr(r, f) for f in ELIGIBILITY_FLAGS},
            "usage_ok": r.usage_ok,
            "last_change": r.last_change.isoformat() if r.last_change else None,
            "recommended_override": r.recommended_override,
            "state": r.state, "filter_reason": r.filter_reason, "filter_note": r.filter_note,
        }

    doc = {
        "as_of": ledger.as_of.isoformat(),
        "initial_count": ledger.initial_count,
        "records": [rec(r) for r in ledger.records],
        "events": [
            {"timestamp": e.timestamp.isoformat(), "package": e.package_id,
             "from": e.from_state, "to": e.to_state, "reason": e.reason, "note": e.note}
            for e in ledger.events
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_ledger(text: str) -> PackageLedger:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"ledger is not valid JSON: {exc}") from exc
    records = []
    for d in doc["records"]:
        flags = d.get("eligibility", {})
        records.append(PackageRecord(
            id=d["id"], name=d.get("name", ""), url=d.get("url"),
            **{f: bool(flags.get(f, True)) for f in ELIGIBILITY_FLAGS},
            usage_ok=d.get("usage_ok"), last_change=_date(d.get("last_change")),
            recommended_override=bool(d.get("recommended_override", False)),
            state=d.get("state", "candidate"), filter_reason=d.get("filter_reason"),
            filter_note=d.get("filter_note"),
        ))
    events = tuple(
        LedgerEvent(dt.datetime.fromisoformat(e["timestamp"]), e["package"], e["from"], e["to"],
                    e.get("reason"), e.get("note"))
        for e in doc.get("events", ())
    )
    return PackageLedger(tuple(records), dt.date.fromisoformat(doc["as_of"]),
                         doc.get("initial_count"), events)


def side_by_side(ledger: PackageLedger) -> str:
    """Initial list next to the filtered outcome, one package per line."""
    width = max([len("initial list")] + [len(r.id) for r in ledger.records])
    lines = [f"{'initial list':<{width}}  filtered list", f"{'-' * width}  {'-' * 13}"]
    for r in ledger.records:
        if r.state == "filtered":
            right = f"(filtered: {r.filter_reason}; {r.filter_note})"
        elif r.state == "selected":
            right = r.id
        else:
            right = "(pending)"
        lines.append(f"{r.id:<{width}}  {right}")
    sel = len(ledger.by_state("selected"))
    lines.append(f"{ledger.initial_count} initial, {sel} selected, "
                 f"{len(ledger.by_state('filtered'))} filtered")
    return "\n".join(lines) + "\n"


def ledger_from_records(records: Iterable[PackageRecord], as_of: dt.date) -> PackageLedger:
    return PackageLedger(tuple(records), as_of)
