"""Line-oriented model file format.

Records::

    lane <id> <name...>
    event <id> in|out <lane> <label...>
    place <id> <lane> <label...>
    trans <id> <lane> [triggered] <label...>
    arc <source> -> <target>
    mark <place-id> [count]
    role <id> <roleName>
    pattern <kind> <role>=<id> ...

Records may appear in any order, except that an element must be declared
before an arc references it. '#' starts a comment.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Union

from edpn.core.exceptions import ModelParseError
from edpn.net.model import (
    Arc, ArcKind, DataPlace, Direction, Lane, Marking, Net, PortEvent,
    PriorityClass, Transition,
)
from edpn.patterns.base import PatternInstance, PatternKind, PlaceRole

logger = logging.getLogger(__name__)

ID_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_COMMENT = re.compile(r"(^|\s)#.*$")

DECLARATIONS = ("lane", "event", "place", "trans")


def _check_id(value: str, line: int, source: str) -> str:
    if not ID_PATTERN.fullmatch(value):
        raise ModelParseError(f"invalid element id '{value}'", line, source)
    return value


def _label(rest: list[str], default: str) -> str:
    return " ".join(rest) if rest else default


def _role(name: str) -> Union[PlaceRole, str]:
    # Unknown names are kept verbatim and reported by validate()
    try:
        return PlaceRole(name)
    except ValueError:
        return name


def _declared_lines(lines: list[str]) -> dict[str, int]:
    """First declaration line of every element id."""
    declared: dict[str, int] = {}
    for lineno, text in enumerate(lines, start=1):
        tokens = _COMMENT.sub("", text).split()
        if len(tokens) >= 2 and tokens[0] in DECLARATIONS:
            declared.setdefault(tokens[1], lineno)
    return declared


class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = text.splitlines()
        self.declared = _declared_lines(self.lines)
        self.lanes: list[Lane] = []
        self.events: list[PortEvent] = []
        self.places: list[DataPlace] = []
        self.transitions: list[Transition] = []
        self.arcs: list[Arc] = []
        self.tokens: dict[str, int] = {}
        self.roles: dict[str, Union[PlaceRole, str]] = {}
        self.annotations: list[PatternInstance] = []

    def error(self, message: str, line: int) -> ModelParseError:
        return ModelParseError(message, line, self.source)

    def parse(self) -> Net:
        for lineno, text in enumerate(self.lines, start=1):
            tokens = _COMMENT.sub("", text).split()
            if not tokens:
                continue
            handler = getattr(self, f"_record_{tokens[0]}", None)
            if handler is None:
                raise self.error(f"unknown record type '{tokens[0]}'", lineno)
            handler(tokens[1:], lineno)

        trans_ids = {t.id for t in self.transitions}
        arcs = tuple(
            Arc(a.source, a.target, ArcKind.OUT if a.source in trans_ids else ArcKind.IN, line=a.line)
            for a in self.arcs
        )
        return Net(
            lanes=tuple(self.lanes),
            events=tuple(self.events),
            places=tuple(self.places),
            transitions=tuple(self.transitions),
            arcs=arcs,
            initial_marking=Marking.of(self.tokens),
            roles=tuple(sorted(self.roles.items())),
            annotations=tuple(self.annotations),
            name=self.source,
        )

    def _record_lane(self, args: list[str], line: int) -> None:
        if not args:
            raise self.error("lane record needs an id", line)
        lane_id = _check_id(args[0], line, self.source)
        self.lanes.append(Lane(lane_id, _label(args[1:], lane_id)))

    def _record_event(self, args: list[str], line: int) -> None:
        if len(args) < 3:
            raise self.error("event record needs: <id> in|out <lane> [label]", line)
        event_id = _check_id(args[0], line, self.source)
        if args[1] not in ("in", "out"):
            raise self.error(f"event direction must be 'in' or 'out', got '{args[1]}'", line)
        lane = _check_id(args[2], line, self.source)
        self.events.append(PortEvent(event_id, _label(args[3:], event_id), Direction(args[1]), lane))

    def _record_place(self, args: list[str], line: int) -> None:
        if len(args) < 2:
            raise self.error("place record needs: <id> <lane> [label]", line)
        place_id = _check_id(args[0], line, self.source)
        lane = _check_id(args[1], line, self.source)
        self.places.append(DataPlace(place_id, _label(args[2:], place_id), lane))

    def _record_trans(self, args: list[str], line: int) -> None:
        if len(args) < 2:
            raise self.error("trans record needs: <id> <lane> [triggered] [label]", line)
        trans_id = _check_id(args[0], line, self.source)
        lane = _check_id(args[1], line, self.source)
        rest = args[2:]
        priority = PriorityClass.NORMAL
        if rest and rest[0] == "triggered":
            priority = PriorityClass.TRIGGERED
            rest = rest[1:]
        self.transitions.append(Transition(trans_id, _label(rest, trans_id), lane, priority))

    def _record_arc(self, args: list[str], line: int) -> None:
        if len(args) != 3 or args[1] != "->":
            raise self.error("arc record must read: arc <source> -> <target>", line)
        source = _check_id(args[0], line, self.source)
        target = _check_id(args[2], line, self.source)
        for eid in (source, target):
            declared_at = self.declared.get(eid)
            if declared_at is not None and declared_at > line:
                raise self.error(f"arc references {eid} before its declaration on line {declared_at}", line)
        # Kind is settled once every transition is known
        self.arcs.append(Arc(source, target, ArcKind.IN, line=line))

    def _record_mark(self, args: list[str], line: int) -> None:
        if len(args) not in (1, 2):
            raise self.error("mark record must read: mark <place> [count]", line)
        place = _check_id(args[0], line, self.source)
        try:
            count = int(args[1]) if len(args) == 2 else 1
        except ValueError:
            raise self.error(f"token count must be an integer, got '{args[1]}'", line)
        if count < 1:
            raise self.error("token count must be at least 1", line)
        if place in self.tokens:
            raise self.error(f"place {place} marked twice", line)
        self.tokens[place] = count

    def _record_role(self, args: list[str], line: int) -> None:
        if len(args) != 2:
            raise self.error("role record must read: role <id> <roleName>", line)
        element = _check_id(args[0], line, self.source)
        if element in self.roles:
            raise self.error(f"{element} already carries role {self.roles[element]}", line)
        self.roles[element] = _role(args[1])

    def _record_pattern(self, args: list[str], line: int) -> None:
        from edpn.patterns.recognizers import registry

        if not args:
            raise self.error("pattern record needs a kind", line)
        try:
            kind = PatternKind(args[0])
        except ValueError:
            raise self.error(f"unknown pattern kind '{args[0]}'", line)
        allowed = registry.roles_of(kind)
        bindings = {}
        for pair in args[1:]:
            role, sep, element = pair.partition("=")
            if not sep:
                raise self.error(f"pattern binding must read role=id, got '{pair}'", line)
            if role not in allowed:
                raise self.error(f"{kind.value} has no role '{role}'", line)
            bindings[role] = _check_id(element, line, self.source)
        self.annotations.append(PatternInstance.of(kind, bindings))


def parse_model(text: str, source: str = "<string>") -> Net:
    """Parse model text into a net. Structural problems are left to validate()."""
    net = _Parser(text, source).parse()
    logger.debug(
        f"Parsed {source}: {len(net.transitions)} transitions, "
        f"{len(net.places)} places, {len(net.events)} events"
    )
    return net


def load_model_file(path: Union[str, Path]) -> Net:
    path = Path(path)
    return parse_model(path.read_text(encoding="utf-8"), source=str(path))


def _role_name(role) -> str:
    return role.value if isinstance(role, PlaceRole) else str(role)


def model_records(net: Net) -> list[str]:
    """Declaration, role and mark records in canonical order (no arcs)."""
    lines = [f"lane {lane.id} {lane.name}" for lane in sorted(net.lanes, key=lambda x: x.id)]
    lines += [
        f"event {e.id} {e.direction.value} {e.lane} {e.label}"
        for e in sorted(net.events, key=lambda x: x.id)
    ]
    lines += [f"place {p.id} {p.lane} {p.label}" for p in sorted(net.places, key=lambda x: x.id)]
    for t in sorted(net.transitions, key=lambda x: x.id):
        flag = " triggered" if t.triggered else ""
        lines.append(f"trans {t.id} {t.lane}{flag} {t.label}")
    lines += [f"role {eid} {_role_name(role)}" for eid, role in sorted(net.roles)]
    lines += [
        f"mark {place}" if count == 1 else f"mark {place} {count}"
        for place, count in net.initial_marking.tokens
    ]
    return lines


def pattern_records(net: Net) -> list[str]:
    return [f"pattern {a.describe()}" for a in sorted(net.annotations, key=lambda a: a.describe())]


def dump_model(net: Net) -> str:
    """Canonical model text: equal nets always dump to identical text."""
    lines = model_records(net)
    lines += [f"arc {a.source} -> {a.target}" for a in sorted(net.arcs, key=lambda a: (a.source, a.target))]
    lines += pattern_records(net)
    return "\n".join(lines) + "\n"
