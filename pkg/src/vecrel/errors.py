"""Structured error types shared by every module.

Each error carries a short machine-readable ``code`` (for example
``"relation-not-satisfied"``), a human message and a JSON-friendly context
dictionary.  The ``kind`` decides the CLI exit status.
"""

from __future__ import annotations

from typing import Any


class VecrelError(Exception):
    """Base class; ``kind`` is one of ``validation``, ``degenerate``, ``internal``."""

    kind = "internal"

    def __init__(self, code: str, message: str = "", **context: Any):
        super().__init__(message or code)
        self.code = code
        self.message = message or code
        self.context = context

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "context": _jsonable(self.context)}


class ValidationError(VecrelError):
    """Input violates a stated invariant (bad shapes, unsatisfied relations, ...)."""

    kind = "validation"


class DegenerateError(VecrelError):
    """Input is well formed but sits on a degeneracy locus (vanishing denominators, ...)."""

    kind = "degenerate"


class InternalError(VecrelError):
    """An assertion that should be unreachable was violated."""

    kind = "internal"


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)
