"""Event-Driven Petri Net data model.

A net is a tripartite directed graph of port events, data places and
transitions, partitioned into swim lanes. Nets and markings are immutable
values; every operation that "changes" one returns a new instance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union

from edpn.patterns.base import PatternInstance, PlaceRole


class Direction(str, Enum):
    INPUT = "in"
    OUTPUT = "out"


class PriorityClass(str, Enum):
    NORMAL = "normal"
    TRIGGERED = "triggered"


class ArcKind(str, Enum):
    IN = "in"    # (event or place) -> transition
    OUT = "out"  # transition -> (event or place)


class ElementKind(str, Enum):
    LANE = "lane"
    EVENT = "event"
    PLACE = "place"
    TRANSITION = "transition"


@dataclass(frozen=True)
class Lane:
    id: str
    name: str


@dataclass(frozen=True)
class PortEvent:
    id: str
    label: str
    direction: Direction
    lane: str


@dataclass(frozen=True)
class DataPlace:
    id: str
    label: str
    lane: str


@dataclass(frozen=True)
class Transition:
    id: str
    label: str
    lane: str
    priority: PriorityClass = PriorityClass.NORMAL

    @property
    def triggered(self) -> bool:
        return self.priority is PriorityClass.TRIGGERED


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    kind: ArcKind
    line: Optional[int] = field(default=None, compare=False, hash=False)

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


Counts = Union[Mapping[str, int], Iterable[str], None]


def _normalize(counts: Counts) -> tuple[tuple[str, int], ...]:
    if counts is None:
        return ()
    if isinstance(counts, Mapping):
        items = counts.items()
    else:
        items = Counter(counts).items()
    return tuple(sorted((k, int(v)) for k, v in items if v))


@dataclass(frozen=True)
class Marking:
    """Tokens over data places plus the multiset of pending input events."""
    tokens: tuple[tuple[str, int], ...] = ()
    pending: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, tokens: Counts = None, pending: Counts = None) -> "Marking":
        return cls(tokens=_normalize(tokens), pending=_normalize(pending))

    @property
    def token_map(self) -> dict[str, int]:
        return dict(self.tokens)

    @property
    def pending_map(self) -> dict[str, int]:
        return dict(self.pending)

    @property
    def pending_events(self) -> tuple[str, ...]:
        return tuple(sorted(Counter(self.pending_map).elements()))

    @property
    def marked_places(self) -> tuple[str, ...]:
        return tuple(place for place, _ in self.tokens)

    def count(self, place: str) -> int:
        return self.token_map.get(place, 0)

    def pending_count(self, event: str) -> int:
        return self.pending_map.get(event, 0)

    def with_tokens(self, tokens: Counts) -> "Marking":
        return replace(self, tokens=_normalize(tokens))

    def with_pending(self, pending: Counts) -> "Marking":
        return replace(self, pending=_normalize(pending))

    def data_only(self) -> "Marking":
        return replace(self, pending=())

    def is_safe(self) -> bool:
        return all(count <= 1 for _, count in self.tokens)

    def __str__(self) -> str:
        tokens = ", ".join(p if n == 1 else f"{p}:{n}" for p, n in self.tokens)
        text = "{" + tokens + "}"
        if self.pending:
            text += " pending[" + ", ".join(self.pending_events) + "]"
        return text


@dataclass(frozen=True)
class Net:
    """Swim lane EDPN: (P, D, S, In, Out) plus lanes, roles and an initial marking."""
    lanes: tuple[Lane, ...] = ()
    events: tuple[PortEvent, ...] = ()
    places: tuple[DataPlace, ...] = ()
    transitions: tuple[Transition, ...] = ()
    arcs: tuple[Arc, ...] = ()
    initial_marking: Marking = Marking()
    roles: tuple[tuple[str, PlaceRole], ...] = ()
    annotations: tuple[PatternInstance, ...] = ()
    name: str = field(default="", compare=False)

    # ---- Lookup ----

    @cached_property
    def lane_map(self) -> dict[str, Lane]:
        return {lane.id: lane for lane in self.lanes}

    @cached_property
    def event_map(self) -> dict[str, PortEvent]:
        return {event.id: event for event in self.events}

    @cached_property
    def place_map(self) -> dict[str, DataPlace]:
        return {place.id: place for place in self.places}

    @cached_property
    def transition_map(self) -> dict[str, Transition]:
        return {t.id: t for t in self.transitions}

    @cached_property
    def role_map(self) -> dict[str, PlaceRole]:
        return dict(self.roles)

    def kind_of(self, element_id: str) -> Optional[ElementKind]:
        if element_id in self.transition_map:
            return ElementKind.TRANSITION
        if element_id in self.place_map:
            return ElementKind.PLACE
        if element_id in self.event_map:
            return ElementKind.EVENT
        if element_id in self.lane_map:
            return ElementKind.LANE
        return None

    def element(self, element_id: str):
        for table in (self.transition_map, self.place_map, self.event_map, self.lane_map):
            if element_id in table:
                return table[element_id]
        return None

    def label_of(self, element_id: str) -> str:
        element = self.element(element_id)
        if element is None:
            return element_id
        return element.name if isinstance(element, Lane) else element.label

    def lane_of(self, element_id: str) -> Optional[str]:
        element = self.element(element_id)
        return getattr(element, "lane", None)

    def role_of(self, element_id: str) -> Optional[PlaceRole]:
        return self.role_map.get(element_id)

    def transition(self, transition_id: str) -> Transition:
        return self.transition_map[transition_id]

    @property
    def input_events(self) -> tuple[str, ...]:
        return tuple(sorted(e.id for e in self.events if e.direction is Direction.INPUT))

    @property
    def output_events(self) -> tuple[str, ...]:
        return tuple(sorted(e.id for e in self.events if e.direction is Direction.OUTPUT))

    @property
    def transition_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.transition_map))

    @property
    def place_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.place_map))

    # ---- Adjacency ----

    @cached_property
    def _adjacency(self) -> tuple[dict, dict, dict, dict]:
        inputs: dict[str, set[str]] = {t: set() for t in self.transition_map}
        outputs: dict[str, set[str]] = {t: set() for t in self.transition_map}
        consumers: dict[str, set[str]] = {}
        producers: dict[str, set[str]] = {}
        for arc in self.arcs:
            if arc.kind is ArcKind.IN and arc.target in inputs:
                inputs[arc.target].add(arc.source)
                consumers.setdefault(arc.source, set()).add(arc.target)
            elif arc.kind is ArcKind.OUT and arc.source in outputs:
                outputs[arc.source].add(arc.target)
                producers.setdefault(arc.target, set()).add(arc.source)
        freeze = lambda table: {k: tuple(sorted(v)) for k, v in table.items()}
        return freeze(inputs), freeze(outputs), freeze(consumers), freeze(producers)

    def inputs_of(self, transition_id: str) -> tuple[str, ...]:
        return self._adjacency[0].get(transition_id, ())

    def outputs_of(self, transition_id: str) -> tuple[str, ...]:
        return self._adjacency[1].get(transition_id, ())

    def consumers_of(self, element_id: str) -> tuple[str, ...]:
        return self._adjacency[2].get(element_id, ())

    def producers_of(self, element_id: str) -> tuple[str, ...]:
        return self._adjacency[3].get(element_id, ())

    def self_loops(self, element_id: str) -> tuple[str, ...]:
        """Transitions that both consume and produce the element."""
        produced = set(self.producers_of(element_id))
        return tuple(t for t in self.consumers_of(element_id) if t in produced)

    def data_inputs(self, transition_id: str) -> tuple[str, ...]:
        return tuple(x for x in self.inputs_of(transition_id) if x in self.place_map)

    def event_inputs(self, transition_id: str) -> tuple[str, ...]:
        return tuple(x for x in self.inputs_of(transition_id) if x in self.event_map)

    def data_outputs(self, transition_id: str) -> tuple[str, ...]:
        return tuple(x for x in self.outputs_of(transition_id) if x in self.place_map)

    def event_outputs(self, transition_id: str) -> tuple[str, ...]:
        return tuple(x for x in self.outputs_of(transition_id) if x in self.event_map)

    def is_cross_lane(self, arc: Arc) -> bool:
        """Out-arc into an input event owned by another lane (inter-constituent signal)."""
        if arc.kind is not ArcKind.OUT:
            return False
        event = self.event_map.get(arc.target)
        producer = self.transition_map.get(arc.source)
        if event is None or producer is None:
            return False
        return event.direction is Direction.INPUT and event.lane != producer.lane

    @property
    def cross_lane_arcs(self) -> tuple[Arc, ...]:
        return tuple(arc for arc in self.arcs if self.is_cross_lane(arc))

    def has_arc(self, source: str, target: str) -> bool:
        return any(arc.source == source and arc.target == target for arc in self.arcs)

    # ---- Derivation ----

    def arc(self, source: str, target: str) -> Arc:
        """Build an arc between declared elements, inferring its kind."""
        kind = ArcKind.OUT if source in self.transition_map else ArcKind.IN
        return Arc(source, target, kind)

    def extended(
        self,
        lanes: Iterable[Lane] = (),
        events: Iterable[PortEvent] = (),
        places: Iterable[DataPlace] = (),
        transitions: Iterable[Transition] = (),
        arcs: Iterable[Arc] = (),
        roles: Optional[Mapping[str, PlaceRole]] = None,
        tokens: Optional[Mapping[str, int]] = None,
        annotations: Iterable[PatternInstance] = (),
    ) -> "Net":
        """Return a copy with the given elements added."""
        role_map = dict(self.roles)
        role_map.update(roles or {})
        marking = self.initial_marking
        if tokens:
            merged = marking.token_map
            merged.update(tokens)
            marking = marking.with_tokens(merged)
        return replace(
            self,
            lanes=self.lanes + tuple(lanes),
            events=self.events + tuple(events),
            places=self.places + tuple(places),
            transitions=self.transitions + tuple(transitions),
            arcs=self.arcs + tuple(arcs),
            roles=tuple(sorted(role_map.items())),
            initial_marking=marking,
            annotations=self.annotations + tuple(annotations),
        )

    def with_priority(self, transition_id: str, priority: PriorityClass) -> "Net":
        transitions = tuple(
            replace(t, priority=priority) if t.id == transition_id else t
            for t in self.transitions
        )
        return replace(self, transitions=transitions)

    def with_initial_marking(self, marking: Marking) -> "Net":
        return replace(self, initial_marking=marking)

    def canonical(self) -> tuple:
        """Order-free structural form; equal canonical forms mean isomorphic nets."""
        return (
            frozenset(self.lanes),
            frozenset(self.events),
            frozenset(self.places),
            frozenset(self.transitions),
            frozenset((a.source, a.target, a.kind) for a in self.arcs),
            self.initial_marking.data_only(),
            frozenset(self.roles),
        )

    def same_structure(self, other: "Net") -> bool:
        return self.canonical() == other.canonical()
