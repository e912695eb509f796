"""Exception hierarchy.

Every error carries a ``kind`` used by the command line to pick an exit code:
``validation`` for bad assessor input, ``io`` for filesystem/network/tool
problems and ``computation`` for numerical failures.
"""

from __future__ import annotations


class SotpError(Exception):
    kind = "computation"


class ValidationFailure(SotpError):
    kind = "validation"


class IoFailure(SotpError):
    kind = "io"


# -- answer files ------------------------------------------------------------


class AnswerFileError(ValidationFailure):
    """Base for answer-file errors; ``line`` is 1-based, 0 when not located."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(prefix + message)


class AnswerSyntaxError(AnswerFileError):
    pass


class UnknownQuestion(AnswerFileError):
    def __init__(self, question_id: str, line: int = 0):
        self.question_id = question_id
        super().__init__(f"unknown question {question_id!r}", line)


class TypeMismatch(AnswerFileError):
    def __init__(self, question_id: str, expected: str, got: str, line: int = 0):
        self.question_id = question_id
        self.expected = expected
        self.got = got
        super().__init__(f"{question_id}: expected {expected}, got {got!r}", line)


class MissingStarNote(AnswerFileError):
    def __init__(self, question_id: str, value: str, line: int = 0):
        self.question_id = question_id
        self.value = value
        super().__init__(f"{question_id}: answer {value!r} requires an explanatory note", line)


class DuplicateKey(AnswerFileError):
    def __init__(self, question_id: str, line: int = 0):
        self.question_id = question_id
        super().__init__(f"duplicate key {question_id!r}", line)


# -- repository mining -------------------------------------------------------


class NotARepository(IoFailure):
    pass


class NoHistory(ValidationFailure):
    pass


class ToolUnavailable(IoFailure):
    pass


class ToolFailure(IoFailure):
    def __init__(self, message: str, stderr: str = ""):
        self.stderr = stderr[:500]
        super().__init__(f"{message}: {self.stderr}" if self.stderr else message)


class TreeReadError(IoFailure):
    def __init__(self, path, cause: Exception | None = None):
        self.path = path
        super().__init__(f"cannot read {path}: {cause}" if cause else f"cannot read {path}")


# -- forge -------------------------------------------------------------------


class UnsupportedForge(ValidationFailure):
    pass


class AuthRequired(IoFailure):
    pass


class RateLimited(IoFailure):
    def __init__(self, message: str, retry_after: float | None = None):
        self.retry_after = retry_after
        super().__init__(message)


class ForgeNetworkError(IoFailure):
    pass


class SnapshotError(ValidationFailure):
    pass


class MissingField(SnapshotError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing field {name!r}")


# -- derived / scoring -------------------------------------------------------


class FutureDate(ValidationFailure):
    pass


class UnknownQuality(ValidationFailure):
    pass


class MissingAnswer(ValidationFailure):
    def __init__(self, question_id: str, quality: str | None = None):
        self.question_id = question_id
        self.quality = quality
        where = f" (scoring {quality})" if quality else ""
        super().__init__(f"missing answer for {question_id}{where}")


class RubricError(ValidationFailure):
    pass


# -- ahp ---------------------------------------------------------------------


class InvalidMatrix(SotpError):
    pass


class DegenerateInput(SotpError):
    pass


class OutOfRangeScore(ValidationFailure):
    pass


class DimensionMismatch(SotpError):
    pass


class NonConvergence(SotpError):
    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)


# -- workflow / reporting ----------------------------------------------------


class InsufficientData(ValidationFailure):
    pass


class IncompleteBundle(ValidationFailure):
    def __init__(self, package_ids):
        self.package_ids = tuple(package_ids)
        super().__init__("incomplete data for packages: " + ", ".join(self.package_ids))
