"""Communication-pattern vocabulary shared by the net model and the pattern engine."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional


class PatternKind(str, Enum):
    """Communication primitives between constituents."""
    CONFLICT = "conflict"
    INTERLOCK = "interlock"
    ENABLE_DISABLE = "enableDisable"
    ACTIVATE = "activate"
    TRIGGER = "trigger"
    SUSPEND_RESUME = "suspendResume"
    PAUSE = "pause"
    REQUEST = "request"
    ACCEPT_REJECT = "acceptReject"
    POSTPONE = "postpone"


class PlaceRole(str, Enum):
    """Role tag carried by a place (or port event) in a pattern."""
    PLAIN = "plain"
    ENABLE_DISABLE = "enableDisable"
    TRIGGER = "trigger"
    INTERLOCK = "interlock"
    REQUEST = "request"
    DONE_RESPONSE = "doneResponse"
    NOT_DONE_RESPONSE = "notDoneResponse"


# Macro kinds are stored as primitive wiring plus an annotation
MACRO_KINDS = (PatternKind.ACTIVATE, PatternKind.PAUSE)


@dataclass(frozen=True)
class PatternInstance:
    """A communication primitive binding net elements to roles."""
    kind: PatternKind
    bindings: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, kind: PatternKind, bindings: Mapping[str, Optional[str]]) -> "PatternInstance":
        """Build an instance, dropping unbound optional roles."""
        pairs = tuple(sorted((role, eid) for role, eid in bindings.items() if eid is not None))
        return cls(kind=PatternKind(kind), bindings=pairs)

    @property
    def roles(self) -> dict[str, str]:
        return dict(self.bindings)

    def get(self, role: str) -> Optional[str]:
        return self.roles.get(role)

    def __getitem__(self, role: str) -> str:
        return self.roles[role]

    @property
    def elements(self) -> frozenset[str]:
        return frozenset(eid for _, eid in self.bindings)

    def describe(self) -> str:
        roles = " ".join(f"{role}={eid}" for role, eid in self.bindings)
        return f"{self.kind.value} {roles}"
