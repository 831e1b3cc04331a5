"""Exception hierarchy for edpn."""

from __future__ import annotations

from typing import Any, Optional, Sequence


class EdpnError(Exception):
    """Base exception for all edpn errors."""


class ConfigError(EdpnError):
    """Configuration loading or validation error."""


class ModelParseError(EdpnError):
    """Model, relational or test-suite text could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class UnknownElementError(EdpnError):
    """An element id does not resolve in the net."""

    def __init__(self, element_id: str, expected: str = "element"):
        self.element_id = element_id
        super().__init__(f"Unknown {expected}: {element_id}")


class NetValidationError(EdpnError):
    """The net violates structural invariants required by an operation."""

    def __init__(self, violations: Sequence[Any]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"Net is not valid ({len(self.violations)} violation(s)): {lines}")


class NotEnabledError(EdpnError):
    """Attempt to fire a transition that is not enabled."""

    def __init__(self, transition: str):
        self.transition = transition
        super().__init__(f"Transition {transition} is not enabled")


class CapacityViolation(EdpnError):
    """A safe-mode marking would hold more than one token in a place."""

    def __init__(self, place: str, count: int):
        self.place = place
        self.count = count
        super().__init__(f"Place {place} would hold {count} tokens (safe mode allows 1)")


class ConflictPolicyError(EdpnError):
    """The error-on-conflict policy met two conflicting enabled transitions."""

    def __init__(self, pair: tuple[str, str]):
        self.pair = pair
        super().__init__(f"Conflict between {pair[0]} and {pair[1]}")


class BudgetExceeded(EdpnError):
    """A step or state budget ran out; `partial` holds what was computed so far."""

    def __init__(self, message: str, partial: Any = None):
        self.partial = partial
        super().__init__(message)


class ScheduleError(EdpnError):
    """An input-event schedule is malformed."""


class PatternError(EdpnError):
    """A communication-pattern builder could not be applied."""


class StoreError(EdpnError):
    """Relational store rows are dangling or mistyped."""


class CompositionConflict(EdpnError):
    """Two stores disagree on the metadata of a shared id."""

    def __init__(self, element_id: str, fields: Sequence[str]):
        self.element_id = element_id
        self.fields = tuple(fields)
        super().__init__(
            f"Composition conflict on {element_id}: {', '.join(self.fields)} differ"
        )


class ReplayError(EdpnError):
    """A path or test case does not replay as recorded."""

    def __init__(self, name: str, reason: str):
        self.name = name
        super().__init__(f"{name}: {reason}")


class FixtureNotFoundError(EdpnError):
    """Requested fixture is not in the embedded catalog."""

    def __init__(self, name: str, available: Sequence[str]):
        self.name = name
        self.available = tuple(available)
        super().__init__(
            f"Unknown fixture '{name}'. Available: {', '.join(self.available)}"
        )
