"""Enabledness, the firing rule, event quiescence and conflict detection."""

from __future__ import annotations

import logging
from collections import Counter
from itertools import combinations
from typing import NamedTuple

from edpn.core.exceptions import CapacityViolation, NotEnabledError, UnknownElementError
from edpn.net.model import Direction, Marking, Net

logger = logging.getLogger(__name__)


class FireResult(NamedTuple):
    marking: Marking
    emitted: tuple[str, ...]


def check_marking(net: Net, marking: Marking) -> None:
    """Raise UnknownElementError for tokens or pending entries the net does not declare."""
    for place, _ in marking.tokens:
        if place not in net.place_map:
            raise UnknownElementError(place, "data place")
    for event, _ in marking.pending:
        if event not in net.event_map:
            raise UnknownElementError(event, "input event")


def is_enabled(net: Net, marking: Marking, transition_id: str) -> bool:
    return (
        all(marking.count(p) >= 1 for p in net.data_inputs(transition_id))
        and all(marking.pending_count(e) >= 1 for e in net.event_inputs(transition_id))
    )


def enabled_transitions(net: Net, marking: Marking) -> frozenset[str]:
    """Transitions whose input places are marked and whose input events are pending."""
    check_marking(net, marking)
    return frozenset(t for t in net.transition_ids if is_enabled(net, marking, t))


def is_quiescent(net: Net, marking: Marking) -> bool:
    """No transition can fire without new input events."""
    return not enabled_transitions(net, marking)


def fire(net: Net, marking: Marking, transition_id: str, safe: bool = True) -> FireResult:
    """Fire one transition and return the new marking and the emitted events.

    Emitted events are sorted by id. Events emitted into another lane's input
    events become pending inputs of the receiving constituent.
    """
    if transition_id not in net.transition_map:
        raise UnknownElementError(transition_id, "transition")
    check_marking(net, marking)
    if not is_enabled(net, marking, transition_id):
        raise NotEnabledError(transition_id)

    tokens = Counter(marking.token_map)
    pending = Counter(marking.pending_map)
    for place in net.data_inputs(transition_id):
        tokens[place] -= 1
    for event in net.event_inputs(transition_id):
        pending[event] -= 1
    for place in net.data_outputs(transition_id):
        tokens[place] += 1
        if safe and tokens[place] > 1:
            raise CapacityViolation(place, tokens[place])

    emitted = net.event_outputs(transition_id)
    for event in emitted:
        if net.event_map[event].direction is Direction.INPUT:
            pending[event] += 1

    logger.debug(f"Fired {transition_id}: emitted {list(emitted)}")
    return FireResult(Marking.of(tokens, pending), emitted)


def shared_inputs(net: Net, marking: Marking, a: str, b: str) -> tuple[str, ...]:
    """Inputs of both transitions whose current supply cannot serve both.

    An input either transition puts back when it fires is not contested.
    """
    common = set(net.inputs_of(a)) & set(net.inputs_of(b))
    common -= set(net.outputs_of(a)) | set(net.outputs_of(b))
    short = []
    for x in sorted(common):
        supply = marking.count(x) if x in net.place_map else marking.pending_count(x)
        if supply < 2:
            short.append(x)
    return tuple(short)


def conflicts_at(net: Net, marking: Marking) -> frozenset[tuple[str, str]]:
    """Pairs of enabled transitions competing for an input with insufficient supply."""
    enabled = sorted(enabled_transitions(net, marking))
    return frozenset(
        (a, b) for a, b in combinations(enabled, 2)
        if shared_inputs(net, marking, a, b)
    )
