"""Raw repository measures: commit history and source line classification.

Line classification is a small two-state machine (inside / outside a block
comment) driven by a per-language syntax table. There is no lexer, so comment
markers inside string literals are taken at face value.
"""

from __future__ import annotations

import datetime as dt
import fnmatch
import os
import shutil
import subprocess
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import NoHistory, NotARepository, ToolFailure, ToolUnavailable, TreeReadError

BINARY_SNIFF_BYTES = 8000


@dataclass(frozen=True)
class LineCounts:
    code: int = 0
    comment: int = 0
    blank: int = 0

    @property
    def total(self) -> int:
        return self.code + self.comment + self.blank

    def __add__(self, other: "LineCounts") -> "LineCounts":
        return LineCounts(self.code + other.code, self.comment + other.comment,
                          self.blank + other.blank)

    def as_dict(self) -> dict[str, int]:
        return {"total": self.total, "code": self.code, "comment": self.comment,
                "blank": self.blank}


@dataclass(frozen=True)
class Syntax:
    line: tuple[str, ...] = ()
    block: tuple[tuple[str, str], ...] = ()
    # characters that mark a comment when found in column 1 (fixed-form FORTRAN)
    column_one: str = ""


_C_LIKE = Syntax(line=("//",), block=(("/*", "*/"),))
_HASH = Syntax(line=("#",))

SYNTAX: dict[str, Syntax] = {
    "c": _C_LIKE,
    "cpp": _C_LIKE,
    "java": _C_LIKE,
    "javascript": _C_LIKE,
    "python": _HASH,
    "cython": _HASH,
    "r": _HASH,
    "shell": _HASH,
    "ruby": Syntax(line=("#",), block=(("=begin", "=end"),)),
    "matlab": Syntax(line=("%",), block=(("%{", "%}"),)),
    "fortran": Syntax(line=("!",)),
    "fortran_legacy": Syntax(line=("!",), column_one="cC*!"),
    "plain": Syntax(),
}

EXTENSIONS: dict[str, str] = {
    ".c": "c", ".h": "c",
    ".cc": "cpp", ".cpp": "cpp", ".cxx": "cpp", ".c++": "cpp",
    ".hh": "cpp", ".hpp": "cpp", ".hxx": "cpp",
    ".java": "java",
    ".js": "javascript", ".mjs": "javascript", ".ts": "javascript",
    ".py": "python", ".pyw": "python",
    ".pyx": "cython", ".pxd": "cython",
    ".r": "r",
    ".rb": "ruby",
    ".sh": "shell", ".bash": "shell", ".zsh": "shell", ".ksh": "shell",
    ".m": "matlab",
    ".f90": "fortran", ".f95": "fortran", ".f03": "fortran", ".f08": "fortran",
    ".f": "fortran_legacy", ".for": "fortran_legacy", ".f77": "fortran_legacy",
}


def language_for(path: str | os.PathLike) -> str:
    return EXTENSIONS.get(os.path.splitext(str(path))[1].lower(), "plain")


def detect_binary(content: bytes) -> bool:
    return b"\x00" in content[:BINARY_SNIFF_BYTES]


def _classify(line: str, syntax: Syntax, in_block: str | None) -> tuple[str, str | None]:
    """Classify one line; ``in_block`` is the pending block-close token or None."""
    s = line.strip()
    if not s:
        return "blank", in_block
    if in_block is None and syntax.column_one and line[0] in syntax.column_one:
        return "comment", None

    openers = [(o, c) for o, c in syntax.block]
    has_code = False
    pos = 0
    n = len(s)
    while pos < n:
        if in_block is not None:
            idx = s.find(in_block, pos)
            if idx < 0:
                break
            pos = idx + len(in_block)
            in_block = None
            continue
        while pos < n and s[pos].isspace():
            pos += 1
        if pos >= n:
            break
        # block openers first: matlab's "%{" also starts with its line marker
        opened = next(((o, c) for o, c in openers if s.startswith(o, pos)), None)
        if opened:
            in_block = opened[1]
            pos += len(opened[0])
            continue
        if any(s.startswith(lc, pos) for lc in syntax.line):
            break
        has_code = True
        hits = [i for i in (s.find(t, pos) for t in syntax.line + tuple(o for o, _ in openers))
                if i >= 0]
        if not hits:
            break
        pos = min(hits)
    return ("code" if has_code else "comment"), in_block


def count_lines(content: bytes, language: str = "plain") -> LineCounts:
    syntax = SYNTAX.get(language, SYNTAX["plain"])
    text = content.decode("utf-8", errors="replace")
    tally = Counter()
    state = None
    for line in text.splitlines():
        kind, state = _classify(line, syntax, state)
        tally[kind] += 1
    return LineCounts(tally["code"], tally["comment"], tally["blank"])


@dataclass(frozen=True)
class CodeMetrics:
    text_files: int = 0
    binary_files: int = 0
    per_language: Mapping[str, LineCounts] = field(default_factory=dict)
    files_per_language: Mapping[str, int] = field(default_factory=dict)

    @property
    def totals(self) -> LineCounts:
        return sum(self.per_language.values(), LineCounts())

    @property
    def code_files(self) -> int:
        """Text files in a recognised programming language."""
        return sum(n for lang, n in self.files_per_language.items() if lang != "plain")

    def to_dict(self) -> dict:
        return {
            "text_files": self.text_files,
            "binary_files": self.binary_files,
            "code_files": self.code_files,
            "totals": self.totals.as_dict(),
            "per_language": {k: self.per_language[k].as_dict() for k in sorted(self.per_language)},
            "files_per_language": dict(sorted(self.files_per_language.items())),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CodeMetrics":
        per = {k: LineCounts(v["code"], v["comment"], v["blank"])
               for k, v in d["per_language"].items()}
        return cls(d["text_files"], d["binary_files"], per, dict(d["files_per_language"]))


def _walk(root: Path, ignore: Iterable[str]) -> list[Path]:
    patterns = tuple(ignore)
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d != ".git")
        for name in sorted(filenames):
            p = Path(dirpath, name)
            rel = p.relative_to(root).as_posix()
            if p.is_symlink() or any(fnmatch.fnmatch(rel, pat) for pat in patterns):
                continue
            found.append(p)
    return found


def _measure_file(path: Path) -> tuple[str, LineCounts] | None:
    try:
        content = path.read_bytes()
    except OSError as exc:
        raise TreeReadError(path, exc) from exc
    if detect_binary(content):
        return None
    lang = language_for(path)
    return lang, count_lines(content, lang)


def aggregate_tree(repo_path, ignore: Iterable[str] = (), workers: int = 1) -> CodeMetrics:
    """Classify and count every file in the working tree, skipping ``.git``.

    ``ignore`` holds glob patterns matched against paths relative to the root.
    """
    root = Path(repo_path)
    if not root.is_dir():
        raise TreeReadError(root)
    files = _walk(root, ignore)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(_measure_file, files))
    else:
        results = [_measure_file(f) for f in files]

    per: dict[str, LineCounts] = {}
    nfiles: Counter = Counter()
    binary = 0
    for r in results:
        if r is None:
            binary += 1
            continue
        lang, counts = r
        per[lang] = per.get(lang, LineCounts()) + counts
        nfiles[lang] += 1
    return CodeMetrics(sum(nfiles.values()), binary, per, dict(nfiles))


# -- git history -------------------------------------------------------------

_RS, _US = "\x1e", "\x1f"
LOG_FORMAT = f"{_RS}%cI{_US}%ae"


@dataclass(frozen=True)
class GitHistoryMetrics:
    total_commits: int
    commits_by_year: Mapping[int, int]
    commits_by_month: Mapping[str, int]
    lines_added: int
    lines_deleted: int
    first_commit_date: dt.date
    last_commit_date: dt.date
    developer_count: int

    def to_dict(self) -> dict:
        return {
            "total_commits": self.total_commits,
            "commits_by_year": {str(k): v for k, v in sorted(self.commits_by_year.items())},
            "commits_by_month": dict(sorted(self.commits_by_month.items())),
            "lines_added": self.lines_added,
            "lines_deleted": self.lines_deleted,
            "first_commit_date": self.first_commit_date.isoformat(),
            "last_commit_date": self.last_commit_date.isoformat(),
            "developer_count": self.developer_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "GitHistoryMetrics":
        return cls(
            d["total_commits"],
            {int(k): v for k, v in d["commits_by_year"].items()},
            dict(d["commits_by_month"]),
            d["lines_added"],
            d["lines_deleted"],
            dt.date.fromisoformat(d["first_commit_date"]),
            dt.date.fromisoformat(d["last_commit_date"]),
            d["developer_count"],
        )


def _git(repo: Path, *args: str) -> subprocess.CompletedProcess:
    exe = shutil.which("git")
    if exe is None:
        raise ToolUnavailable("git executable not found on PATH")
    env = dict(os.environ, LC_ALL="C", GIT_TERMINAL_PROMPT="0")
    try:
        return subprocess.run([exe, "-C", str(repo), *args], capture_output=True,
                              env=env, check=False)
    except OSError as exc:
        raise ToolUnavailable(str(exc)) from exc


def _month_key(year: int, month: int) -> str:
    return f"{year:04d}-{month:02d}"


def _month_range(start: tuple[int, int], end: tuple[int, int]) -> list[str]:
    y, m = start
    keys = []
    while (y, m) <= end:
        keys.append(_month_key(y, m))
        y, m = (y + 1, 1) if m == 12 else (y, m + 1)
    return keys


def _parse_log(raw: str) -> tuple[list[tuple[dt.datetime, str]], int, int]:
    commits = []
    added = deleted = 0
    for record in raw.split(_RS)[1:]:
        header, _, body = record.partition("\n")
        date_s, _, email = header.partition(_US)
        when = dt.datetime.fromisoformat(date_s.strip()).astimezone(dt.timezone.utc)
        commits.append((when, email.strip().lower()))
        for line in body.splitlines():
            parts = line.split("\t", 2)
            if len(parts) != 3:
                continue
            a, d, _path = parts
            if a == "-" or d == "-":
                continue  # binary delta
            added += int(a)
            deleted += int(d)
    return commits, added, deleted


def analyze_history(repo_path, as_of: dt.date) -> GitHistoryMetrics:
    """Mine commit counts and line deltas from the current branch.

    Buckets use committer dates in UTC. The year window is the five calendar
    years ending at ``as_of.year`` and the month window the twelve months ending
    at ``as_of``'s month; both start no earlier than the first commit and are
    zero-filled in between. Commits after ``as_of`` count toward the totals but
    not the buckets.
    """
    repo = Path(repo_path)
    if not repo.is_dir():
        raise NotARepository(f"{repo} is not a directory")
    probe = _git(repo, "rev-parse", "--git-dir")
    if probe.returncode != 0:
        raise NotARepository(f"{repo} is not a git repository")
    head = _git(repo, "rev-parse", "--verify", "-q", "HEAD")
    if head.returncode != 0:
        raise NoHistory(f"{repo} has no commits")

    log = _git(repo, "-c", "core.quotepath=off", "log", "--no-renames", "--numstat",
               f"--format={LOG_FORMAT}")
    if log.returncode != 0:
        raise ToolFailure("git log failed", log.stderr.decode("utf-8", "replace"))
    commits, added, deleted = _parse_log(log.stdout.decode("utf-8", "replace"))
    if not commits:
        raise NoHistory(f"{repo} has no commits")

    dates = [when.date() for when, _ in commits]
    first, last = min(dates), max(dates)

    year_lo = max(as_of.year - 4, first.year)
    years = {y: 0 for y in range(year_lo, as_of.year + 1)}
    window_start = (as_of.year - 1, as_of.month + 1) if as_of.month < 12 else (as_of.year, 1)
    months = {k: 0 for k in _month_range(max(window_start, (first.year, first.month)),
                                         (as_of.year, as_of.month))}
    for d in dates:
        if d > as_of:
            continue
        if d.year in years:
            years[d.year] += 1
        key = _month_key(d.year, d.month)
        if key in months:
            months[key] += 1

    return GitHistoryMetrics(
        total_commits=len(commits),
        commits_by_year=years,
        commits_by_month=months,
        lines_added=added,
        lines_deleted=deleted,
        first_commit_date=first,
        last_commit_date=last,
        developer_count=len({email for _, email in commits}),
    )
