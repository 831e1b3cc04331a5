"""Relational (database) form of a net: four arc relations plus an entity table."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import networkx as nx

from edpn.core.exceptions import StoreError, UnknownElementError
from edpn.net.model import (
    Arc, ArcKind, DataPlace, Direction, ElementKind, Lane, Marking, Net, PortEvent,
    PriorityClass, Transition,
)
from edpn.net.validation import ensure_valid
from edpn.patterns.base import PatternInstance, PlaceRole

logger = logging.getLogger(__name__)

Row = tuple[str, str]


@dataclass(frozen=True)
class Entity:
    """Metadata of one element, enough to rebuild it losslessly."""
    kind: ElementKind
    label: str
    lane: Optional[str] = None
    direction: Optional[Direction] = None
    role: Optional[Union[PlaceRole, str]] = None
    initial_tokens: Optional[int] = None
    priority: Optional[PriorityClass] = None


@dataclass(frozen=True)
class RelationalStore:
    """eventInput/eventOutput/dataInput/dataOutput rows are (event or place id, transition id)."""
    event_input: frozenset[Row] = frozenset()
    event_output: frozenset[Row] = frozenset()
    data_input: frozenset[Row] = frozenset()
    data_output: frozenset[Row] = frozenset()
    entities: dict[str, Entity] = field(default_factory=dict)
    annotations: frozenset[PatternInstance] = frozenset()

    RELATIONS = ("event_input", "event_output", "data_input", "data_output")

    def relation(self, name: str) -> frozenset[Row]:
        return getattr(self, name)

    @property
    def row_count(self) -> int:
        return sum(len(self.relation(name)) for name in self.RELATIONS)

    def is_empty(self) -> bool:
        return not self.entities and self.row_count == 0

    def graph(self) -> nx.DiGraph:
        """Directed graph over element ids following the arc direction of every row."""
        g = nx.DiGraph()
        g.add_nodes_from(eid for eid, e in self.entities.items() if e.kind is not ElementKind.LANE)
        g.add_edges_from((x, t) for x, t in self.event_input | self.data_input)
        g.add_edges_from((t, x) for x, t in self.event_output | self.data_output)
        return g


def entities_of(net: Net) -> dict[str, Entity]:
    """Entity table of a net, sorted by id."""
    roles = net.role_map
    tokens = net.initial_marking.token_map
    entities: dict[str, Entity] = {}
    for lane in net.lanes:
        entities[lane.id] = Entity(ElementKind.LANE, lane.name)
    for e in net.events:
        entities[e.id] = Entity(ElementKind.EVENT, e.label, e.lane, direction=e.direction, role=roles.get(e.id))
    for p in net.places:
        entities[p.id] = Entity(
            ElementKind.PLACE, p.label, p.lane, role=roles.get(p.id), initial_tokens=tokens.get(p.id),
        )
    for t in net.transitions:
        entities[t.id] = Entity(ElementKind.TRANSITION, t.label, t.lane, priority=t.priority)
    return dict(sorted(entities.items()))


def to_relations(net: Net) -> RelationalStore:
    """Export a valid net into its relational form."""
    ensure_valid(net)
    event_input, event_output, data_input, data_output = set(), set(), set(), set()
    for arc in net.arcs:
        if arc.kind is ArcKind.IN:
            (event_input if arc.source in net.event_map else data_input).add((arc.source, arc.target))
        else:
            (event_output if arc.target in net.event_map else data_output).add((arc.target, arc.source))

    store = RelationalStore(
        event_input=frozenset(event_input),
        event_output=frozenset(event_output),
        data_input=frozenset(data_input),
        data_output=frozenset(data_output),
        entities=entities_of(net),
        annotations=frozenset(net.annotations),
    )
    logger.debug(f"Exported {net.name or 'net'}: {store.row_count} rows, {len(store.entities)} entities")
    return store


_ROW_KINDS = {
    "event_input": ElementKind.EVENT,
    "event_output": ElementKind.EVENT,
    "data_input": ElementKind.PLACE,
    "data_output": ElementKind.PLACE,
}


def check_store(store: RelationalStore) -> None:
    """Raise StoreError for dangling or mistyped rows and incomplete entities."""
    for name, expected in _ROW_KINDS.items():
        for element, transition in sorted(store.relation(name)):
            for eid, kind in ((element, expected), (transition, ElementKind.TRANSITION)):
                entity = store.entities.get(eid)
                if entity is None:
                    raise StoreError(f"{name} row ({element}, {transition}) references unknown id {eid}")
                if entity.kind is not kind:
                    raise StoreError(
                        f"{name} row ({element}, {transition}): {eid} is a {entity.kind.value}, "
                        f"expected a {kind.value}"
                    )
    for eid, entity in store.entities.items():
        if entity.kind is ElementKind.EVENT and entity.direction is None:
            raise StoreError(f"Event {eid} has no direction")
        if entity.kind is not ElementKind.LANE and entity.lane is None:
            raise StoreError(f"{entity.kind.value.capitalize()} {eid} has no lane")


def from_relations(store: RelationalStore) -> Net:
    """Rebuild a net from its relational form."""
    check_store(store)
    lanes, events, places, transitions = [], [], [], []
    roles, tokens = {}, {}
    for eid, e in sorted(store.entities.items()):
        if e.kind is ElementKind.LANE:
            lanes.append(Lane(eid, e.label))
        elif e.kind is ElementKind.EVENT:
            events.append(PortEvent(eid, e.label, e.direction, e.lane))
        elif e.kind is ElementKind.PLACE:
            places.append(DataPlace(eid, e.label, e.lane))
            if e.initial_tokens:
                tokens[eid] = e.initial_tokens
        else:
            transitions.append(Transition(eid, e.label, e.lane, e.priority or PriorityClass.NORMAL))
        if e.role is not None:
            roles[eid] = e.role

    arcs = [Arc(x, t, ArcKind.IN) for x, t in sorted(store.event_input | store.data_input)]
    arcs += [Arc(t, x, ArcKind.OUT) for x, t in sorted(store.event_output | store.data_output)]
    return Net(
        lanes=tuple(lanes),
        events=tuple(events),
        places=tuple(places),
        transitions=tuple(transitions),
        arcs=tuple(arcs),
        initial_marking=Marking.of(tokens),
        roles=tuple(sorted(roles.items())),
        annotations=tuple(sorted(store.annotations, key=lambda a: a.describe())),
    )


def connectivity_query(store: RelationalStore, from_id: str, to_id: str) -> bool:
    """True iff a directed path of relation rows leads from one element to the other."""
    g = store.graph()
    for eid in (from_id, to_id):
        if eid not in g:
            raise UnknownElementError(eid)
    if from_id == to_id:
        return True
    return nx.has_path(g, from_id, to_id)
