"""Structural recognition of communication primitives.

Recognizers match the wiring first and read role tags as confirmation. A
place tagged with the role of another pattern kind is never matched. The
heuristics for untagged places:

- interlock: one producer, one consumer, no self-loop, initially empty, and
  the consumer has another untagged data input it is waiting on.
- enableDisable: a self-looped (normal class) controlled transition, with at
  least one other producer (enabler) and one other consumer (disabler).
- activate: only via an ``enableDisable`` tag without self-loops, or via a
  stored annotation; untagged it is indistinguishable from an interlock.
- trigger: a self-loop on a triggered-class transition.
- request: a place produced in one lane and consumed in another, owned by
  the consumer's lane, with a wait place in the requester's lane whose
  consumers (if any) also consume a response place.
- acceptReject: two consumers of a request place each producing a response
  place in the requester's lane, consumed with the wait place by a
  continuation. Untagged responses are oriented by transition id.
"""

from __future__ import annotations

import logging
from itertools import combinations, product
from typing import Iterator, Optional

from edpn.net.model import Net
from edpn.patterns.base import PatternInstance, PatternKind, PlaceRole
from edpn.patterns.registry import registry

logger = logging.getLogger(__name__)

_RESPONSE_ROLES = (PlaceRole.DONE_RESPONSE, PlaceRole.NOT_DONE_RESPONSE)


def _untagged(net: Net, element: str) -> bool:
    return net.role_of(element) in (None, PlaceRole.PLAIN)


def _role_allows(net: Net, element: str, role: PlaceRole) -> bool:
    return _untagged(net, element) or net.role_of(element) is role


def _only_producers(net: Net, place: str) -> tuple[str, ...]:
    loops = set(net.self_loops(place))
    return tuple(t for t in net.producers_of(place) if t not in loops)


def _only_consumers(net: Net, place: str) -> tuple[str, ...]:
    loops = set(net.self_loops(place))
    return tuple(t for t in net.consumers_of(place) if t not in loops)


def _annotations(net: Net, kind: PatternKind) -> Iterator[PatternInstance]:
    for annotation in net.annotations:
        if annotation.kind is kind and all(net.kind_of(e) is not None for e in annotation.elements):
            yield annotation


@registry.register(
    PatternKind.CONFLICT, roles=("place", "first", "second"),
    description="two transitions compete for one place or input event",
)
def recognize_conflict(net: Net) -> Iterator[PatternInstance]:
    for element in sorted({a.source for a in net.arcs}):
        for first, second in combinations(net.consumers_of(element), 2):
            yield PatternInstance.of(PatternKind.CONFLICT, {"place": element, "first": first, "second": second})


@registry.register(
    PatternKind.INTERLOCK, roles=("lockPlace", "preferred", "secondary"),
    description="the secondary transition waits for the preferred one",
)
def recognize_interlock(net: Net) -> Iterator[PatternInstance]:
    for place in net.place_ids:
        if not _role_allows(net, place, PlaceRole.INTERLOCK) or net.self_loops(place):
            continue
        producers, consumers = net.producers_of(place), net.consumers_of(place)
        if len(producers) != 1 or len(consumers) != 1 or producers == consumers:
            continue
        secondary = consumers[0]
        if _untagged(net, place):
            others = [p for p in net.data_inputs(secondary) if p != place and _untagged(net, p)]
            if net.initial_marking.count(place) or not others:
                continue
        yield PatternInstance.of(PatternKind.INTERLOCK, {
            "lockPlace": place, "preferred": producers[0], "secondary": secondary,
        })


@registry.register(
    PatternKind.ENABLE_DISABLE, roles=("edPlace", "enabler", "disabler", "controlled"),
    description="lasting permission granted by the enabler and revoked by the disabler",
)
def recognize_enable_disable(net: Net) -> Iterator[PatternInstance]:
    for place in net.place_ids:
        if not _role_allows(net, place, PlaceRole.ENABLE_DISABLE):
            continue
        controlled = [t for t in net.self_loops(place) if not net.transition(t).triggered]
        enablers, disablers = _only_producers(net, place), _only_consumers(net, place)
        for c, e, d in product(controlled, enablers, disablers):
            yield PatternInstance.of(PatternKind.ENABLE_DISABLE, {
                "edPlace": place, "enabler": e, "disabler": d, "controlled": c,
            })


@registry.register(
    PatternKind.ACTIVATE, roles=("edPlace", "activator", "controlled"),
    description="permission for exactly one firing of the controlled transition",
)
def recognize_activate(net: Net) -> Iterator[PatternInstance]:
    yield from _annotations(net, PatternKind.ACTIVATE)
    for place in net.place_ids:
        if net.role_of(place) is not PlaceRole.ENABLE_DISABLE or net.self_loops(place):
            continue
        for a, c in product(net.producers_of(place), net.consumers_of(place)):
            yield PatternInstance.of(PatternKind.ACTIVATE, {"edPlace": place, "activator": a, "controlled": c})


@registry.register(
    PatternKind.TRIGGER, roles=("triggerPlace", "triggerer", "controlled", "disabler"),
    optional_roles=("disabler",),
    description="the controlled transition must fire as soon as it is fully enabled",
)
def recognize_trigger(net: Net) -> Iterator[PatternInstance]:
    for place in net.place_ids:
        if not _role_allows(net, place, PlaceRole.TRIGGER):
            continue
        controlled = [t for t in net.self_loops(place) if net.transition(t).triggered]
        triggerers = _only_producers(net, place)
        disablers: tuple[Optional[str], ...] = _only_consumers(net, place) or (None,)
        for c, t, d in product(controlled, triggerers, disablers):
            yield PatternInstance.of(PatternKind.TRIGGER, {
                "triggerPlace": place, "triggerer": t, "controlled": c, "disabler": d,
            })


def _suspend_resume_shapes(net: Net) -> Iterator[dict[str, str]]:
    for run in net.place_ids:
        if not _role_allows(net, run, PlaceRole.ENABLE_DISABLE):
            continue
        for controlled in net.self_loops(run):
            for suspender in _only_consumers(net, run):
                for s in net.data_outputs(suspender):
                    if s == run or not _role_allows(net, s, PlaceRole.INTERLOCK) or net.self_loops(s):
                        continue
                    for resumer in net.consumers_of(s):
                        if resumer in (suspender, controlled) or run not in net.data_outputs(resumer):
                            continue
                        yield {
                            "suspendPlace": s, "runPlace": run, "controlled": controlled,
                            "suspender": suspender, "resumer": resumer,
                        }


@registry.register(
    PatternKind.SUSPEND_RESUME,
    roles=("suspendPlace", "runPlace", "controlled", "suspender", "resumer"),
    description="the resumer must follow the suspender; controlled work is preserved",
)
def recognize_suspend_resume(net: Net) -> Iterator[PatternInstance]:
    for shape in _suspend_resume_shapes(net):
        yield PatternInstance.of(PatternKind.SUSPEND_RESUME, shape)


@registry.register(
    PatternKind.PAUSE, roles=("suspendPlace", "runPlace", "controlled", "pauser", "resumer"),
    description="suspend immediately followed by an event-free resume",
)
def recognize_pause(net: Net) -> Iterator[PatternInstance]:
    yield from _annotations(net, PatternKind.PAUSE)
    for shape in _suspend_resume_shapes(net):
        if net.inputs_of(shape["resumer"]) == (shape["suspendPlace"],):
            shape["pauser"] = shape.pop("suspender")
            yield PatternInstance.of(PatternKind.PAUSE, shape)


@registry.register(
    PatternKind.REQUEST, roles=("requestPlace", "waitPlace", "requester", "provider"),
    description="one lane asks another for a service and waits",
)
def recognize_request(net: Net) -> Iterator[PatternInstance]:
    for place in net.place_ids:
        if not _role_allows(net, place, PlaceRole.REQUEST) or net.self_loops(place):
            continue
        owner = net.place_map[place].lane
        for requester, provider in product(net.producers_of(place), net.consumers_of(place)):
            lane = net.transition(requester).lane
            if lane == owner or net.transition(provider).lane != owner:
                continue
            for wait in _wait_places(net, requester, exclude=place):
                yield PatternInstance.of(PatternKind.REQUEST, {
                    "requestPlace": place, "waitPlace": wait, "requester": requester, "provider": provider,
                })


def _wait_places(net: Net, requester: str, exclude: str) -> Iterator[str]:
    lane = net.transition(requester).lane
    for wait in net.data_outputs(requester):
        if wait == exclude or net.place_map[wait].lane != lane or not _untagged(net, wait):
            continue
        if all(
            any(net.role_of(p) in _RESPONSE_ROLES for p in net.data_inputs(c))
            for c in net.consumers_of(wait)
        ):
            yield wait


def _continuation(net: Net, wait: str, response: str) -> Optional[str]:
    for t in net.consumers_of(response):
        if wait in net.data_inputs(t):
            return t
    return None


@registry.register(
    PatternKind.ACCEPT_REJECT,
    roles=("requestPlace", "waitPlace", "accept", "reject", "donePlace", "notDonePlace", "onDone", "onNotDone"),
    description="the provider answers a request with done or not-done",
)
def recognize_accept_reject(net: Net) -> Iterator[PatternInstance]:
    for request in recognize_request(net):
        req, wait = request["requestPlace"], request["waitPlace"]
        lane = net.place_map[wait].lane
        for accept, reject in combinations(net.consumers_of(req), 2):
            for a, r in ((accept, reject), (reject, accept)):
                for done, not_done in product(net.data_outputs(a), net.data_outputs(r)):
                    if done == not_done or {done, not_done} & {req, wait}:
                        continue
                    if net.place_map[done].lane != lane or net.place_map[not_done].lane != lane:
                        continue
                    if not (_role_allows(net, done, PlaceRole.DONE_RESPONSE)
                            and _role_allows(net, not_done, PlaceRole.NOT_DONE_RESPONSE)):
                        continue
                    if _untagged(net, done) and _untagged(net, not_done) and a > r:
                        continue
                    on_done, on_not_done = _continuation(net, wait, done), _continuation(net, wait, not_done)
                    if on_done is None or on_not_done is None:
                        continue
                    yield PatternInstance.of(PatternKind.ACCEPT_REJECT, {
                        "requestPlace": req, "waitPlace": wait, "accept": a, "reject": r,
                        "donePlace": done, "notDonePlace": not_done,
                        "onDone": on_done, "onNotDone": on_not_done,
                    })


@registry.register(
    PatternKind.POSTPONE, roles=("interlockPlace", "requestPlace", "urgentTask", "postponedResponse"),
    description="a request is served only after an urgent task",
)
def recognize_postpone(net: Net) -> Iterator[PatternInstance]:
    requests = {r["requestPlace"] for r in recognize_request(net)}
    for lock in recognize_interlock(net):
        postponed = lock["secondary"]
        for req in sorted(requests & set(net.data_inputs(postponed))):
            yield PatternInstance.of(PatternKind.POSTPONE, {
                "interlockPlace": lock["lockPlace"], "requestPlace": req,
                "urgentTask": lock["preferred"], "postponedResponse": postponed,
            })


def _order(instance: PatternInstance) -> tuple:
    return (list(PatternKind).index(instance.kind), instance.bindings)


def recognize(net: Net, kinds: Optional[tuple[PatternKind, ...]] = None) -> list[PatternInstance]:
    """Every pattern instance found in the net, deduplicated and sorted by kind."""
    found: set[PatternInstance] = set()
    for meta in registry.list_patterns():
        if kinds is None or meta.kind in kinds:
            found.update(registry.recognize(net, meta.kind))
    result = sorted(found, key=_order)
    logger.debug(f"Recognized {len(result)} pattern instance(s) in {net.name or 'net'}")
    return result


def find_instances(net: Net, kind: PatternKind, **bindings: str) -> list[PatternInstance]:
    """Instances of one kind whose roles include the given bindings."""
    return [
        instance for instance in recognize(net, kinds=(PatternKind(kind),))
        if all(instance.get(role) == eid for role, eid in bindings.items())
    ]
