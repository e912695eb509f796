"""Command line entry point: one subcommand per pipeline stage.

A workspace directory looks like::

    assessment.json          configuration
    ledger.json              candidate packages and filter decisions
    packages/<id>/answers.txt
    packages/<id>/clone/     local clone mined by ``mine``
    packages/<id>/forge.snapshot
    packages/<id>/metrics.json
    packages/<id>/scores.json
    ranking.json
    report/
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import ahp
from .catalog import QUALITIES, builtin_catalog, completeness, parse_answers
from .derived import DerivedMetrics, RepoMetrics, derive, prefill
from .errors import IoFailure, SotpError, ValidationFailure
from .forge import fetch_many, load_forge_snapshot, dump_forge_snapshot, token_from_env
from .interview import emit_interview_guide
from .reporting import AssessmentBundle, PackageAssessment, render_report
from .repo_metrics import aggregate_tree, analyze_history
from .scoring import QualityScores, score_all
from .workflow import DEFAULT_TARGET_SIZE, apply_filters, dump_ledger, load_ledger, side_by_side

log = logging.getLogger("sotpkit")

EXIT_OK = 0
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_COMPUTATION = 5
EXIT_CODES = {"validation": EXIT_VALIDATION, "io": EXIT_IO, "computation": EXIT_COMPUTATION}

CONFIG_NAME = "assessment.json"
CONFIG_KEYS = {"as_of", "target_size", "age_threshold", "ahp_mode", "sensitivity_delta",
               "criteria_weights", "workers"}


@dataclass
class Config:
    as_of: dt.date
    target_size: int = DEFAULT_TARGET_SIZE
    age_threshold: dt.date | None = None
    ahp_mode: str = "ratio"
    sensitivity_delta: float = 1.0
    criteria_weights: dict | None = None
    workers: int = 4


def load_config(root: Path, as_of_override: dt.date | None = None) -> Config:
    path = root / CONFIG_NAME
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise IoFailure(f"{path}: configuration file not found") from None
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"{path}: {exc}") from None
    unknown = set(doc) - CONFIG_KEYS
    if unknown:
        raise ValidationFailure(f"{path}: unknown keys {sorted(unknown)}")
    try:
        as_of = as_of_override or dt.date.fromisoformat(doc["as_of"])
        age = doc.get("age_threshold")
        cfg = Config(
            as_of=as_of,
            target_size=int(doc.get("target_size", DEFAULT_TARGET_SIZE)),
            age_threshold=dt.date.fromisoformat(age) if age else None,
            ahp_mode=doc.get("ahp_mode", "ratio"),
            sensitivity_delta=float(doc.get("sensitivity_delta", 1.0)),
            criteria_weights=doc.get("criteria_weights"),
            workers=int(doc.get("workers", 4)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationFailure(f"{path}: bad configuration ({exc})") from None
    if cfg.ahp_mode not in ahp.MODES:
        raise ValidationFailure(f"{path}: ahp_mode must be one of {ahp.MODES}")
    if cfg.sensitivity_delta <= 0 or cfg.target_size < 1 or cfg.workers < 1:
        raise ValidationFailure(f"{path}: sensitivity_delta, target_size and workers "
                                "must be positive")
    if cfg.criteria_weights is not None:
        w = cfg.criteria_weights
        if not isinstance(w, dict) or set(w) != set(QUALITIES):
            raise ValidationFailure(f"{path}: criteria_weights must map every quality")
    return cfg


@dataclass
class Workspace:
    root: Path
    config: Config
    only: str | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ledger_path(self) -> Path:
        return self.root / "ledger.json"

    def ledger(self):
        try:
            text = self.ledger_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise IoFailure(f"{self.ledger_path}: ledger not found") from None
        return load_ledger(text)

    def package_dir(self, pid: str) -> Path:
        return self.root / "packages" / pid

    def packages(self) -> list[str]:
        selected = sorted(self.ledger().selected_ids)
        if not selected:
            raise ValidationFailure("no selected packages in the ledger; run 'filter' first")
        if self.only is not None:
            if self.only not in selected:
                raise ValidationFailure(f"package {self.only!r} is not selected")
            return [self.only]
        return selected

    def answers(self, pid: str):
        path = self.package_dir(pid) / "answers.txt"
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise IoFailure(f"{path}: answer file not found") from None
        return parse_answers(text, package_id=pid)

    def metrics(self, pid: str) -> tuple[RepoMetrics, DerivedMetrics] | None:
        path = self.package_dir(pid) / "metrics.json"
        if not path.exists():
            return None
        doc = json.loads(path.read_text(encoding="utf-8"))
        return RepoMetrics.from_dict(doc["metrics"]), DerivedMetrics.from_dict(doc["derived"])

    def scores(self, pid: str) -> QualityScores | None:
        path = self.package_dir(pid) / "scores.json"
        if not path.exists():
            return None
        return QualityScores.from_dict(json.loads(path.read_text(encoding="utf-8")))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fail(ws: Workspace, pid: str, exc: Exception) -> None:
    msg = f"{pid}: {exc}"
    ws.failures.append(msg)
    print(f"error: {msg}", file=sys.stderr)


# -- subcommands -------------------------------------------------------------


def cmd_catalog(args, out) -> int:
    cat = builtin_catalog()
    for row in cat.export_rows():
        out.write(f"{row['id']}\t{row['type']}\t{row['prompt']}\n")
    out.write(f"# {len(cat.questions)} questions, catalog version {cat.version}\n")
    return EXIT_OK


def cmd_validate(ws: Workspace, args, out) -> int:
    bad = 0
    for pid in ws.packages():
        try:
            answers = ws.answers(pid)
        except ValidationFailure as exc:
            bad += 1
            print(f"{ws.package_dir(pid) / 'answers.txt'}: {exc}", file=sys.stderr)
            continue
        report = completeness(answers)
        out.write(f"{pid}: ok, {report.answered}/{report.total} answered\n")
    return EXIT_VALIDATION if bad else EXIT_OK


def cmd_filter(ws: Workspace, args, out) -> int:
    ledger = apply_filters(ws.ledger(), ws.config.target_size, ws.config.age_threshold)
    _write(ws.ledger_path, dump_ledger(ledger))
    out.write(side_by_side(ledger))
    return EXIT_OK


def _mine_one(ws: Workspace, pid: str):
    d = ws.package_dir(pid)
    history = analyze_history(d / "clone", ws.config.as_of)
    code = aggregate_tree(d / "clone")
    snap = d / "forge.snapshot"
    forge = load_forge_snapshot(snap.read_text(encoding="utf-8")) if snap.exists() else None
    metrics = RepoMetrics(history, code, forge)
    return metrics, derive(metrics, ws.config.as_of)


def cmd_mine(ws: Workspace, args, out) -> int:
    pids = ws.packages()

    def one(pid):
        try:
            return pid, _mine_one(ws, pid)
        except SotpError as exc:
            return pid, exc

    with ThreadPoolExecutor(min(ws.config.workers, len(pids))) as pool:
        results = list(pool.map(one, pids))
    for pid, res in results:
        if isinstance(res, Exception):
            _fail(ws, pid, res)
            continue
        metrics, derived = res
        _write(ws.package_dir(pid) / "metrics.json",
               _dump_json({"metrics": metrics.to_dict(), "derived": derived.to_dict()}))
        out.write(f"{pid}: {metrics.history.total_commits} commits, "
                  f"{metrics.code.totals.total} lines, {derived.status}\n")
    return _summary(ws, len(pids), out)


def cmd_forge(ws: Workspace, args, out) -> int:
    ledger = ws.ledger()
    pids = ws.packages()
    remotes = {pid: ledger.record(pid).url for pid in pids if ledger.record(pid).url}
    for pid in pids:
        if pid not in remotes:
            _fail(ws, pid, IoFailure("no repository URL in the ledger"))
    results = fetch_many(remotes, token_from_env(), parallelism=ws.config.workers)
    for pid, res in sorted(results.items()):
        if isinstance(res, Exception):
            _fail(ws, pid, res)
            continue
        _write(ws.package_dir(pid) / "forge.snapshot", dump_forge_snapshot(res))
        out.write(f"{pid}: {res.stars} stars\n")
    return _summary(ws, len(pids), out)


def _summary(ws: Workspace, total: int, out) -> int:
    if not ws.failures:
        return EXIT_OK
    out.write(f"{len(ws.failures)} of {total} packages failed\n")
    return EXIT_IO


def _prefilled(ws: Workspace, pid: str):
    answers = ws.answers(pid)
    mined = ws.metrics(pid)
    if mined is not None:
        answers = prefill(answers, *mined)
    return answers, mined


def cmd_score(ws: Workspace, args, out) -> int:
    for pid in ws.packages():
        answers, _ = _prefilled(ws, pid)
        scores = score_all(answers)
        _write(ws.package_dir(pid) / "scores.json", _dump_json(scores.to_dict()))
        out.write(f"{pid}: " + " ".join(f"{q}={scores.scores[q]}" for q in QUALITIES) + "\n")
    return EXIT_OK


def _rank(ws: Workspace, pids):
    scores = {pid: ws.scores(pid) for pid in pids}
    missing = [pid for pid, s in scores.items() if s is None]
    if missing:
        raise ValidationFailure("missing scores for: " + ", ".join(missing))
    cfg = ws.config
    ranking = ahp.rank_packages(scores, cfg.criteria_weights, cfg.ahp_mode)
    sens = ahp.sensitivity(scores, cfg.criteria_weights, cfg.sensitivity_delta, cfg.ahp_mode)
    return ranking, sens


def cmd_rank(ws: Workspace, args, out) -> int:
    if ws.only is not None:
        raise ValidationFailure("rank covers every selected package; drop --package")
    ranking, sens = _rank(ws, ws.packages())
    _write(ws.root / "ranking.json",
           _dump_json({"ranking": ranking.to_dict(), "sensitivity": sens.to_dict()}))
    for i, pid in enumerate(ranking.order, 1):
        out.write(f"{i}. {pid}\n")
    for q in ranking.inconsistent:
        out.write(f"warning: {q} comparison matrix CR above {ahp.CR_THRESHOLD}\n")
    return EXIT_OK


def cmd_report(ws: Workspace, args, out) -> int:
    if ws.only is not None:
        raise ValidationFailure("report covers every selected package; drop --package")
    path = ws.root / "ranking.json"
    if not path.exists():
        raise ValidationFailure("ranking.json not found; run 'rank' first")
    pids = ws.packages()
    # the ranking is recomputed from the score files; a stale ranking.json is refused
    ranking, sens = _rank(ws, pids)
    stored = json.loads(path.read_text(encoding="utf-8"))["ranking"]["order"]
    if list(ranking.order) != stored:
        raise ValidationFailure("ranking.json is out of date; run 'rank' again")
    packages = {}
    for pid in pids:
        answers, mined = _prefilled(ws, pid)
        metrics, derived = mined if mined else (None, None)
        packages[pid] = PackageAssessment(answers, metrics, derived, ws.scores(pid))
    bundle = AssessmentBundle(ws.ledger(), packages, ranking, sens)
    formats = [args.format] if args.format else ["markdown", "csv"]
    for fmt in formats:
        for name, text in render_report(bundle, fmt=fmt).items():
            _write(ws.root / "report" / name, text)
            out.write(f"wrote report/{name}\n")
    return EXIT_OK


def cmd_interview_guide(args, out) -> int:
    out.write(emit_interview_guide())
    return EXIT_OK


WORKSPACE_COMMANDS = {
    "validate": cmd_validate,
    "filter": cmd_filter,
    "mine": cmd_mine,
    "forge": cmd_forge,
    "score": cmd_score,
    "rank": cmd_rank,
    "report": cmd_report,
}


def _date_arg(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", type=Path, default=Path("."),
                        help="assessment workspace directory (default: current directory)")
    common.add_argument("--as-of", type=_date_arg, help="override the assessment date")
    common.add_argument("--package", help="restrict the stage to one package id")
    common.add_argument("--format", choices=("markdown", "csv"),
                        help="report format (default: both)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="sotpkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list the measurement template")
    sub.add_parser("validate", parents=[common], help="check answer files")
    sub.add_parser("filter", parents=[common], help="apply scope/usage/age filters")
    sub.add_parser("mine", parents=[common], help="mine clones for history and line counts")
    sub.add_parser("forge", parents=[common], help="fetch forge counts into snapshots")
    sub.add_parser("score", parents=[common], help="score the nine qualities")
    sub.add_parser("rank", parents=[common], help="AHP ranking and sensitivity")
    sub.add_parser("report", parents=[common], help="write markdown and CSV reports")
    sub.add_parser("interview-guide", parents=[common], help="print the interview packet")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "catalog":
            return cmd_catalog(args, out)
        if args.command == "interview-guide":
            return cmd_interview_guide(args, out)
        root = args.workspace
        ws = Workspace(root, load_config(root, args.as_of), args.package)
        return WORKSPACE_COMMANDS[args.command](ws, args, out)
    except SotpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.kind, EXIT_COMPUTATION)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
