"""Exception types shared across the package."""
from __future__ import annotations


class InputError(ValueError):
    """An argument violates an operation's precondition."""


class ParseError(InputError):
    """Malformed edge-list, DIMACS, profile or certificate text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PipelineFailure(Exception):
    """A construction stage could not complete.

    Failures nest: ``causes`` holds the failures of sub-stages, so a
    top-level failure renders as a deterministic stage -> cause tree.
    """

    def __init__(self, stage: str, reason: str, causes=(), **details):
        self.stage = stage
        self.reason = reason
        self.causes = list(causes)
        self.details = details
        super().__init__(f"{stage}: {reason}")

    def tree(self, indent: int = 0) -> str:
        pad = "  " * indent
        line = f"{pad}{self.stage}: {self.reason}"
        if self.details:
            extras = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.details.items()))
            line += f" [{extras}]"
        lines = [line]
        for cause in self.causes:
            lines.append(cause.tree(indent + 1))
        return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, (set, frozenset)):
        return "{" + ",".join(str(v) for v in sorted(value)) + "}"
    return str(value)
