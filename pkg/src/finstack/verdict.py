"""Verdicts, violation records and the exceptions shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class StructuralError(ValueError):
    """Malformed input data: dangling identifiers, ill-typed tables."""


class InstanceTooLarge(RuntimeError):
    """An exhaustive enumeration would exceed its configured bound."""


class GenerationExhausted(RuntimeError):
    pass


class HypothesisFailure(RuntimeError):
    """A construction needed a colimit or adjoint that does not exist."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class InternalConsistencyError(AssertionError):
    """Two independent decision routes disagreed on the same instance."""


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> Verdict:
        return cls(True, None)

    @classmethod
    def failed(cls, **witness: Any) -> Verdict:
        return cls(False, witness)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={v!r}" for k, v in self.detail.items())
        return f"{self.kind}({parts})"
