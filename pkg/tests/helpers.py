"""Fixture builders shared by the test modules."""

from __future__ import annotations

import json
import os
import re
import subprocess
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def check_golden(name: str, text: str) -> None:
    """Compare against a pinned golden file; UPDATE_GOLDEN=1 rewrites it."""
    path = GOLDEN / name
    if os.environ.get("UPDATE_GOLDEN") == "1":
        path.parent.mkdir(exist_ok=True)
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8"), f"output differs from golden/{name}"


def git(repo: Path, *args: str, env: dict | None = None) -> str:
    full = {**os.environ, "GIT_CONFIG_NOSYSTEM": "1", "HOME": str(repo),
            **(env or {})}
    res = subprocess.run(["git", *args], cwd=repo, env=full, capture_output=True,
                         text=True, check=True)
    return res.stdout


def make_repo(path: Path, commits) -> Path:
    """Create a repository from ``(iso_date, email, {file: text or None})`` tuples.

    ``None`` deletes the file. Author and committer dates are both pinned.
    """
    path.mkdir(parents=True, exist_ok=True)
    git(path, "init", "-q", "-b", "main")
    for date, email, files in commits:
        for name, text in files.items():
            f = path / name
            if text is None:
                f.unlink()
                continue
            f.parent.mkdir(parents=True, exist_ok=True)
            f.write_bytes(text if isinstance(text, bytes) else text.encode())
        git(path, "add", "-A")
        env = {"GIT_AUTHOR_DATE": date, "GIT_COMMITTER_DATE": date,
               "GIT_AUTHOR_NAME": email.split("@")[0], "GIT_AUTHOR_EMAIL": email,
               "GIT_COMMITTER_NAME": "fixture", "GIT_COMMITTER_EMAIL": "fixture@example.org"}
        git(path, "-c", "commit.gpgsign=false", "commit", "-q", "--allow-empty",
            "-m", f"commit {date}", env=env)
    return path


def edit_answers(text: str, package: str, changes: dict[str, str]) -> str:
    """Replace ``key = ...`` lines of an answer file; value None drops the line."""
    text = re.sub(r"(?m)^package = .*$", f"package = {package}", text)
    for key, value in changes.items():
        pattern = re.compile(rf"(?m)^{re.escape(key)} = .*\n")
        if value is None:
            text = pattern.sub("", text)
        elif pattern.search(text):
            text = pattern.sub(f"{key} = {value}\n", text)
        else:
            text += f"{key} = {value}\n"
    return text


# -- the 5-package desk workspace -----------------------------------------------

# measured answers are dropped so that ``score`` prefills them from the mined data
MEASURED = {"maintainability.pct_issues_closed": None, "maintainability.pct_comments": None}

DESK = {
    "alpha": {
        "stars": 950, "open": 10, "closed": 90,
        "answers": {},
        "files": {"src/solver.cpp": "// solver\nint solve() {\n  return 0;\n}\n",
                  "README.md": "# alpha\n\nA solver.\n"},
    },
    "beta": {
        "stars": 1200, "open": 40, "closed": 20,
        "answers": {"install.automation": "no", "install.steps": "12",
                    "usability.user_manual": "no", "correctness.ci": "no",
                    "visibility.process_docs": "no", "maintainability.vcs": "svn"},
        "files": {"lib/core.py": "def f():\n    return 1\n", "setup.py": "# setup\n"},
    },
    "gamma": {
        "stars": 40, "open": 0, "closed": 0,
        "answers": {"reliability.install_break": "yes | note: missing header",
                    "reliability.install_recoverable": "yes",
                    "robustness.newlines": "no | note: CRLF rejected",
                    "reusability.code_files": "60",
                    "summary.dev_model": "freeware",
                    "visibility.dev_process": "no"},
        "files": {"src/main.f90": "! entry\nprogram main\n  print *, 1\nend program\n"},
    },
    "delta": {
        "stars": 300, "open": 5, "closed": 45,
        "answers": {"understandability.comment_quality": "no | note: sparse",
                    "usability.support_model": "e-mail",
                    "maintainability.artifacts": "yes | note: README, changelog",
                    "maintainability.issue_tracker": "e-mail, jira"},
        "files": {"src/a.c": "/* a */\nint a;\n\nint b;\n",
                  "data.bin": b"\x00\x01\x02binary"},
    },
    "epsilon": {
        "stars": 75, "open": 3, "closed": 1,
        "answers": {"install.instructions": "no", "correctness.requirements": "no",
                    "usability.tutorial": "no", "reusability.api_documented": "no",
                    "maintainability.version": "unclear"},
        "files": {"model.R": "# model\nx <- 1\n# end\n"},
    },
}

DESK_AS_OF = "2025-06-30"


def build_desk_workspace(root: Path, as_of: str = DESK_AS_OF, select: bool = True) -> Path:
    """Five synthetic packages with answers, clones and forge snapshots."""
    best = fixture_text("answers_best.txt")
    records = []
    for i, (pid, spec) in enumerate(DESK.items()):
        d = root / "packages" / pid
        d.mkdir(parents=True)
        (d / "answers.txt").write_text(
            edit_answers(best, pid, {**MEASURED, **spec["answers"]}), encoding="utf-8")
        make_repo(d / "clone", [
            (f"2023-0{i + 1}-10T12:00:00+00:00", f"dev{i}@example.org", spec["files"]),
            (f"2025-0{i + 1}-05T09:30:00+00:00", "Maintainer@Example.org",
             {"CHANGELOG": f"{pid} 1.0\n"}),
        ])
        (d / "forge.snapshot").write_text(
            f"stars = {spec['stars']}\nforks = {spec['stars'] // 10}\nwatchers = 7\n"
            f"open_prs = 1\nclosed_prs = 4\nopen_issues = {spec['open']}\n"
            f"closed_issues = {spec['closed']}\nfetched_at = 2025-06-01T00:00:00+00:00\n"
            f"remote = https://github.com/example/{pid}\n", encoding="utf-8")
        records.append({"id": pid, "name": pid.capitalize(),
                        "url": f"https://github.com/example/{pid}",
                        "usage_ok": True, "last_change": f"2025-0{i + 1}-05",
                        "state": "selected" if select else "candidate"})
    # one candidate that never made the cut
    records.append({"id": "zeta", "name": "Zeta", "url": None,
                    "eligibility": {"in_scope": False}, "usage_ok": True,
                    "last_change": "2019-01-01",
                    "state": "filtered" if select else "candidate",
                    "filter_reason": "scope" if select else None,
                    "filter_note": "out of scope" if select else None})
    (root / "ledger.json").write_text(json.dumps({
        "as_of": as_of, "initial_count": len(records), "records": records, "events": []},
        indent=2) + "\n", encoding="utf-8")
    (root / "assessment.json").write_text(json.dumps({
        "as_of": as_of, "target_size": 30, "ahp_mode": "ratio", "sensitivity_delta": 1.0,
        "criteria_weights": None, "workers": 2}, indent=2) + "\n", encoding="utf-8")
    return root


# -- acceptance bookkeeping -----------------------------------------------------

# criterion number -> "PASS/FAIL ..." line, printed by the conftest summary hook
ACCEPTANCE: dict[int, str] = {}
