"""Composition of constituent models.

Shared ids denote the same element. Kind, label, lane, direction and
priority class must agree; role and initial tokens merge when only one side
sets them.
"""

from __future__ import annotations

import logging
from dataclasses import fields, replace
from functools import reduce
from typing import Iterable, Optional

from edpn.core.exceptions import CompositionConflict
from edpn.net.model import Net
from edpn.store.relations import Entity, RelationalStore, from_relations, to_relations

logger = logging.getLogger(__name__)

STRICT_FIELDS = ("kind", "label", "lane", "direction", "priority")
OPTIONAL_FIELDS = ("role", "initial_tokens")


def merge_entities(element_id: str, a: Entity, b: Entity) -> Entity:
    """Merge two descriptions of one element or raise CompositionConflict."""
    differing = [name for name in STRICT_FIELDS if getattr(a, name) != getattr(b, name)]
    merged = {}
    for name in OPTIONAL_FIELDS:
        left, right = getattr(a, name), getattr(b, name)
        if left is not None and right is not None and left != right:
            differing.append(name)
        merged[name] = left if left is not None else right
    if differing:
        raise CompositionConflict(element_id, differing)
    return replace(a, **merged)


def compose(a: RelationalStore, b: RelationalStore) -> RelationalStore:
    """Union of two stores; the empty store is the identity."""
    entities = dict(a.entities)
    for eid, entity in b.entities.items():
        entities[eid] = merge_entities(eid, entities[eid], entity) if eid in entities else entity
    shared = sorted(set(a.entities) & set(b.entities))
    if shared:
        logger.debug(f"Composition joins on {len(shared)} shared id(s): {', '.join(shared)}")
    return RelationalStore(
        event_input=a.event_input | b.event_input,
        event_output=a.event_output | b.event_output,
        data_input=a.data_input | b.data_input,
        data_output=a.data_output | b.data_output,
        entities=dict(sorted(entities.items())),
        annotations=a.annotations | b.annotations,
    )


def compose_all(stores: Iterable[RelationalStore]) -> RelationalStore:
    return reduce(compose, stores, RelationalStore())


def _element_fields(x, y) -> list[str]:
    return [f.name for f in fields(x) if getattr(x, f.name) != getattr(y, f.name)]


def _union_by_id(element_lists: tuple[tuple, tuple]) -> tuple:
    by_id: dict = {}
    for element in (*element_lists[0], *element_lists[1]):
        known = by_id.get(element.id)
        if known is None:
            by_id[element.id] = element
        elif known != element:
            raise CompositionConflict(element.id, _element_fields(known, element))
    return tuple(by_id[k] for k in sorted(by_id))


def _merge_optional(element_id: str, field_name: str, left: Optional[object], right: Optional[object]):
    if left is not None and right is not None and left != right:
        raise CompositionConflict(element_id, [field_name])
    return left if left is not None else right


def compose_nets(a: Net, b: Net) -> Net:
    """Graphical composition: glue two nets on their shared ids without a database detour."""
    arcs = {(arc.source, arc.target, arc.kind): arc for arc in (*a.arcs, *b.arcs)}
    roles = dict(a.roles)
    for eid, role in b.roles:
        roles[eid] = _merge_optional(eid, "role", roles.get(eid), role)
    tokens = a.initial_marking.token_map
    for place, count in b.initial_marking.tokens:
        tokens[place] = _merge_optional(place, "initial_tokens", tokens.get(place), count)
    return Net(
        lanes=_union_by_id((a.lanes, b.lanes)),
        events=_union_by_id((a.events, b.events)),
        places=_union_by_id((a.places, b.places)),
        transitions=_union_by_id((a.transitions, b.transitions)),
        arcs=tuple(arcs[k] for k in sorted(arcs)),
        initial_marking=a.initial_marking.with_tokens(tokens).data_only(),
        roles=tuple(sorted(roles.items())),
        annotations=tuple(sorted(set(a.annotations) | set(b.annotations), key=lambda x: x.describe())),
        name=" + ".join(n for n in (a.name, b.name) if n),
    )


def compose_models(a: Net, b: Net) -> Net:
    """Export both nets, compose relationally and rebuild the combined net."""
    return from_relations(compose(to_relations(a), to_relations(b)))
