"""Conflict policies choosing which enabled transition fires in a step."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from itertools import combinations
from typing import Sequence

from edpn.core.exceptions import ConflictPolicyError, ReplayError
from edpn.net.firing import shared_inputs
from edpn.net.model import Marking, Net

logger = logging.getLogger(__name__)


class ConflictPolicy(ABC):
    """Selects one transition among the candidates of the highest priority class."""

    name: str = ""

    @abstractmethod
    def select(self, net: Net, marking: Marking, candidates: Sequence[str]) -> str:
        """Return the transition to fire; candidates are sorted and non-empty."""
        ...


class LexicographicPolicy(ConflictPolicy):
    """Lowest transition id wins."""

    name = "lexicographic"

    def select(self, net: Net, marking: Marking, candidates: Sequence[str]) -> str:
        return candidates[0]


class ErrorOnConflictPolicy(ConflictPolicy):
    """Refuse to resolve conflicts; concurrent candidates fire lexicographically."""

    name = "error-on-conflict"

    def select(self, net: Net, marking: Marking, candidates: Sequence[str]) -> str:
        for a, b in combinations(candidates, 2):
            if shared_inputs(net, marking, a, b):
                raise ConflictPolicyError((a, b))
        return candidates[0]


class ScriptedPolicy(ConflictPolicy):
    """Replay a recorded sequence of choices."""

    name = "scripted"

    def __init__(self, script: Sequence[str], name: str = "script"):
        self._script = list(script)
        self._position = 0
        self._label = name

    def select(self, net: Net, marking: Marking, candidates: Sequence[str]) -> str:
        if self._position >= len(self._script):
            raise ReplayError(self._label, f"net keeps firing after {len(self._script)} recorded firings")
        chosen = self._script[self._position]
        if chosen not in candidates:
            raise ReplayError(
                self._label,
                f"firing {self._position + 1} expected {chosen}, enabled were {', '.join(candidates)}",
            )
        self._position += 1
        return chosen


def create_policy(name: str) -> ConflictPolicy:
    """Create the conflict policy named in config or on the command line."""
    if name == LexicographicPolicy.name:
        return LexicographicPolicy()
    if name == ErrorOnConflictPolicy.name:
        return ErrorOnConflictPolicy()
    raise ValueError(f"Unknown conflict policy: {name}")
