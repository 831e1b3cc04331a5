"""Structural validation of nets. Violations are reported as data."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from edpn.core.exceptions import NetValidationError
from edpn.net.model import ArcKind, Direction, ElementKind, Net, PriorityClass
from edpn.patterns.base import PlaceRole

logger = logging.getLogger(__name__)


class ViolationKind(str, Enum):
    DUPLICATE_ID = "DuplicateId"
    DANGLING_REFERENCE = "DanglingReference"
    TRIPARTITE = "TripartiteViolation"
    DUPLICATE_ARC = "DuplicateArc"
    OUTPUT_EVENT_CONSUMED = "OutputEventConsumed"
    INPUT_EVENT_PRODUCED = "InputEventProduced"
    TRIGGER_CLASS_MISMATCH = "TriggerClassMismatch"
    UNKNOWN_ROLE = "UnknownRole"
    MARKING_REFERENCE = "MarkingReference"
    CAPACITY = "CapacityViolation"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Violation:
    element: str
    kind: ViolationKind
    message: str
    severity: Severity = Severity.ERROR
    line: Optional[int] = None

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.kind.value} [{self.element}] {self.message}"


def validate(net: Net, safe: bool = True) -> list[Violation]:
    """Check every structural invariant; an empty list means the net is well-formed."""
    violations: list[Violation] = []
    violations += _check_ids(net)
    violations += _check_lanes(net)
    violations += _check_arcs(net)
    violations += _check_roles(net)
    violations += _check_priority(net)
    violations += _check_marking(net, safe)
    if violations:
        logger.debug(f"Validation found {len(violations)} violation(s) in {net.name or 'net'}")
    return violations


def errors(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity is Severity.ERROR]


def ensure_valid(net: Net, safe: bool = True) -> Net:
    """Raise NetValidationError unless the net has no error-severity violations."""
    found = errors(validate(net, safe=safe))
    if found:
        raise NetValidationError(found)
    return net


def _check_ids(net: Net) -> list[Violation]:
    ids = [lane.id for lane in net.lanes]
    ids += [e.id for e in net.events] + [p.id for p in net.places] + [t.id for t in net.transitions]
    return [
        Violation(eid, ViolationKind.DUPLICATE_ID, f"id declared {n} times")
        for eid, n in sorted(Counter(ids).items())
        if n > 1
    ]


def _check_lanes(net: Net) -> list[Violation]:
    found = []
    for element in (*net.events, *net.places, *net.transitions):
        if element.lane not in net.lane_map:
            found.append(Violation(
                element.id, ViolationKind.DANGLING_REFERENCE, f"unknown lane {element.lane}",
            ))
    return found


def _check_arcs(net: Net) -> list[Violation]:
    found = []
    for (source, target, kind), n in Counter((a.source, a.target, a.kind) for a in net.arcs).items():
        if n > 1:
            found.append(Violation(
                source, ViolationKind.DUPLICATE_ARC, f"arc {source} -> {target} declared {n} times",
            ))

    for arc in net.arcs:
        src_kind = net.kind_of(arc.source)
        dst_kind = net.kind_of(arc.target)
        missing = [eid for eid, k in ((arc.source, src_kind), (arc.target, dst_kind))
                   if k is None or k is ElementKind.LANE]
        if missing:
            for eid in missing:
                found.append(Violation(
                    eid, ViolationKind.DANGLING_REFERENCE,
                    f"arc {arc} references undeclared element {eid}", line=arc.line,
                ))
            continue

        src_is_t = src_kind is ElementKind.TRANSITION
        dst_is_t = dst_kind is ElementKind.TRANSITION
        problem = None
        if src_is_t and dst_is_t:
            problem = "connects two transitions"
        elif not src_is_t and not dst_is_t:
            problem = "connects two non-transition elements"
        elif arc.kind is not (ArcKind.OUT if src_is_t else ArcKind.IN):
            problem = f"has kind {arc.kind.value} against its direction"
        if problem:
            found.append(Violation(
                arc.source, ViolationKind.TRIPARTITE, f"arc {arc} {problem}", line=arc.line,
            ))
            continue

        if not src_is_t:
            event = net.event_map.get(arc.source)
            if event is not None and event.direction is Direction.OUTPUT:
                found.append(Violation(
                    event.id, ViolationKind.OUTPUT_EVENT_CONSUMED,
                    f"output event consumed by {arc.target}", line=arc.line,
                ))
        else:
            event = net.event_map.get(arc.target)
            if event is not None and event.direction is Direction.INPUT and not net.is_cross_lane(arc):
                found.append(Violation(
                    event.id, ViolationKind.INPUT_EVENT_PRODUCED,
                    f"input event produced by {arc.source} in its own lane",
                    severity=Severity.WARNING, line=arc.line,
                ))
    return found


def _check_roles(net: Net) -> list[Violation]:
    found = []
    for eid, role in net.roles:
        if net.kind_of(eid) not in (ElementKind.PLACE, ElementKind.EVENT):
            found.append(Violation(eid, ViolationKind.DANGLING_REFERENCE, "role on an unknown place or event"))
        if not isinstance(role, PlaceRole):
            found.append(Violation(eid, ViolationKind.UNKNOWN_ROLE, f"unknown role {role}"))
    return found


def triggers_of(net: Net, transition_id: str) -> tuple[str, ...]:
    """Trigger-role places the transition reads through a self-loop."""
    return tuple(
        place for place in net.data_inputs(transition_id)
        if net.role_of(place) is PlaceRole.TRIGGER and transition_id in net.self_loops(place)
    )


def _check_priority(net: Net) -> list[Violation]:
    found = []
    for t in net.transitions:
        should_trigger = bool(triggers_of(net, t.id))
        if should_trigger != (t.priority is PriorityClass.TRIGGERED):
            expected = "triggered" if should_trigger else "normal"
            found.append(Violation(
                t.id, ViolationKind.TRIGGER_CLASS_MISMATCH,
                f"priority class is {t.priority.value}, expected {expected}",
            ))
    return found


def _check_marking(net: Net, safe: bool) -> list[Violation]:
    found = []
    for place, count in net.initial_marking.tokens:
        if place not in net.place_map:
            found.append(Violation(place, ViolationKind.MARKING_REFERENCE, "marking of an undeclared place"))
        elif safe and count > 1:
            found.append(Violation(place, ViolationKind.CAPACITY, f"{count} tokens in safe mode"))
    for event, _ in net.initial_marking.pending:
        if event not in net.input_events:
            found.append(Violation(event, ViolationKind.MARKING_REFERENCE, "pending entry is not an input event"))
    return found
