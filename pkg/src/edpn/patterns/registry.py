"""Decorator-based registry of communication-pattern recognizers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from edpn.patterns.base import PatternInstance, PatternKind

logger = logging.getLogger(__name__)


@dataclass
class PatternMeta:
    """Metadata for a registered pattern kind."""
    kind: PatternKind
    roles: tuple[str, ...]
    description: str
    optional_roles: tuple[str, ...] = ()
    recognizer: Callable = field(default=None)

    @property
    def required_roles(self) -> tuple[str, ...]:
        return tuple(r for r in self.roles if r not in self.optional_roles)


class PatternRegistry:
    """Singleton registry of all pattern kinds and their recognizers."""

    _instance: Optional[PatternRegistry] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._patterns = {}
        return cls._instance

    def register(
        self,
        kind: PatternKind,
        roles: tuple[str, ...],
        description: str,
        optional_roles: tuple[str, ...] = (),
    ):
        """Decorator to register the recognizer of a pattern kind."""
        def decorator(func: Callable) -> Callable:
            self._patterns[PatternKind(kind)] = PatternMeta(
                kind=PatternKind(kind),
                roles=tuple(roles),
                description=description,
                optional_roles=tuple(optional_roles),
                recognizer=func,
            )
            return func
        return decorator

    def get(self, kind: PatternKind) -> Optional[PatternMeta]:
        return self._patterns.get(PatternKind(kind))

    def roles_of(self, kind: PatternKind) -> tuple[str, ...]:
        meta = self.get(kind)
        return meta.roles if meta else ()

    def recognize(self, net, kind: PatternKind) -> list[PatternInstance]:
        """Run one kind's recognizer over the net."""
        meta = self.get(kind)
        if meta is None:
            logger.warning(f"No recognizer registered for {kind}")
            return []
        return list(meta.recognizer(net))

    def list_patterns(self) -> list[PatternMeta]:
        """Registered kinds in enumeration order."""
        return [self._patterns[k] for k in PatternKind if k in self._patterns]

    def describe(self) -> str:
        """One line per kind with its role names, for CLI help output."""
        lines = []
        for meta in self.list_patterns():
            roles = ", ".join(
                f"{r}?" if r in meta.optional_roles else r for r in meta.roles
            )
            lines.append(f"- {meta.kind.value}({roles}): {meta.description}")
        return "\n".join(lines)


# Module-level singleton
registry = PatternRegistry()
