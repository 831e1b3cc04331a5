"""Builders weaving communication primitives between transitions.

Every builder is a pure function ``net -> net`` that only adds elements and
arcs (plus the triggered priority class for a trigger's controlled
transition). New places get a readable id derived from the transitions
they connect unless an explicit id is passed.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional

from edpn.core.exceptions import PatternError
from edpn.net.model import (
    Arc, ArcKind, DataPlace, Direction, ElementKind, Net, PriorityClass, Transition,
)
from edpn.patterns.base import PatternInstance, PatternKind, PlaceRole

logger = logging.getLogger(__name__)


def _fresh_id(net: Net, stem: str) -> str:
    if net.kind_of(stem) is None:
        return stem
    n = 2
    while net.kind_of(f"{stem}_{n}") is not None:
        n += 1
    return f"{stem}_{n}"


def _new_id(net: Net, requested: Optional[str], stem: str) -> str:
    if requested is None:
        return _fresh_id(net, stem)
    if net.kind_of(requested) is not None:
        raise PatternError(f"Id {requested} is already used in the net")
    return requested


def _require_transitions(net: Net, *ids: str) -> None:
    for tid in ids:
        if tid not in net.transition_map:
            raise PatternError(f"Transition {tid} does not exist")


def _require_distinct(**named: str) -> None:
    seen: dict[str, str] = {}
    for role, tid in named.items():
        if tid in seen:
            raise PatternError(f"{seen[tid]} and {role} must be different transitions (both {tid})")
        seen[tid] = role


def _arcs(net: Net, pairs: Iterable[tuple[str, str]], transitions: Iterable[str] = ()) -> tuple[Arc, ...]:
    """Arcs for the given pairs, skipping those already present."""
    trans = set(net.transition_map) | set(transitions)
    result = []
    for source, target in pairs:
        if net.has_arc(source, target):
            continue
        result.append(Arc(source, target, ArcKind.OUT if source in trans else ArcKind.IN))
    return tuple(result)


def build_conflict(net: Net, place_id: str, first: str, second: str) -> Net:
    """Make two transitions compete for one place or input event."""
    kind = net.kind_of(place_id)
    if kind not in (ElementKind.PLACE, ElementKind.EVENT):
        raise PatternError(f"{place_id} is not a data place or port event")
    if kind is ElementKind.EVENT and net.event_map[place_id].direction is Direction.OUTPUT:
        raise PatternError(f"Output event {place_id} cannot be consumed")
    _require_transitions(net, first, second)
    if first == second:
        raise PatternError("A conflict needs two distinct transitions")
    if net.has_arc(place_id, first) and net.has_arc(place_id, second):
        raise PatternError(f"Duplicate arc: {place_id} already feeds {first} and {second}")
    return net.extended(arcs=_arcs(net, [(place_id, first), (place_id, second)]))


def build_interlock(
    net: Net,
    preferred: str,
    secondary: str,
    initially_marked: bool = False,
    place_id: Optional[str] = None,
) -> Net:
    """The secondary transition cannot fire until the preferred one has fired."""
    _require_transitions(net, preferred, secondary)
    _require_distinct(preferred=preferred, secondary=secondary)
    lock = _new_id(net, place_id, f"lock_{preferred}_{secondary}")
    place = DataPlace(lock, f"{preferred} before {secondary}", net.transition(secondary).lane)
    return net.extended(
        places=[place],
        arcs=[Arc(preferred, lock, ArcKind.OUT), Arc(lock, secondary, ArcKind.IN)],
        roles={lock: PlaceRole.INTERLOCK},
        tokens={lock: 1} if initially_marked else None,
    )


def build_enable_disable(
    net: Net,
    controlled: str,
    enabler: str,
    disabler: str,
    place_id: Optional[str] = None,
) -> Net:
    """Enabler grants lasting permission to the controlled transition; disabler revokes it."""
    _require_transitions(net, controlled, enabler, disabler)
    _require_distinct(controlled=controlled, enabler=enabler, disabler=disabler)
    ed = _new_id(net, place_id, f"ed_{controlled}")
    place = DataPlace(ed, f"{controlled} enabled", net.transition(controlled).lane)
    return net.extended(
        places=[place],
        arcs=[
            Arc(enabler, ed, ArcKind.OUT),
            Arc(ed, controlled, ArcKind.IN),
            Arc(controlled, ed, ArcKind.OUT),
            Arc(ed, disabler, ArcKind.IN),
        ],
        roles={ed: PlaceRole.ENABLE_DISABLE},
    )


def build_activate(
    net: Net,
    controlled: str,
    activator: str,
    place_id: Optional[str] = None,
) -> Net:
    """Enable for exactly one firing: the controlled transition consumes its permission."""
    _require_transitions(net, controlled, activator)
    _require_distinct(controlled=controlled, activator=activator)
    ed = _new_id(net, place_id, f"act_{controlled}")
    place = DataPlace(ed, f"{controlled} activated", net.transition(controlled).lane)
    annotation = PatternInstance.of(
        PatternKind.ACTIVATE, {"edPlace": ed, "activator": activator, "controlled": controlled},
    )
    return net.extended(
        places=[place],
        arcs=[Arc(activator, ed, ArcKind.OUT), Arc(ed, controlled, ArcKind.IN)],
        roles={ed: PlaceRole.ENABLE_DISABLE},
        annotations=[annotation],
    )


def build_trigger(
    net: Net,
    controlled: str,
    triggerer: str,
    disabler: Optional[str] = None,
    place_id: Optional[str] = None,
) -> Net:
    """Oblige the controlled transition to fire as soon as it is fully enabled."""
    _require_transitions(net, controlled, triggerer, *([disabler] if disabler else []))
    _require_distinct(controlled=controlled, triggerer=triggerer)
    if disabler is not None:
        _require_distinct(controlled=controlled, disabler=disabler)
    tp = _new_id(net, place_id, f"trig_{controlled}")
    place = DataPlace(tp, f"{controlled} triggered", net.transition(controlled).lane)
    arcs = [
        Arc(triggerer, tp, ArcKind.OUT),
        Arc(tp, controlled, ArcKind.IN),
        Arc(controlled, tp, ArcKind.OUT),
    ]
    if disabler is not None:
        arcs.append(Arc(tp, disabler, ArcKind.IN))
    extended = net.extended(places=[place], arcs=arcs, roles={tp: PlaceRole.TRIGGER})
    return extended.with_priority(controlled, PriorityClass.TRIGGERED)


def build_suspend_resume(
    net: Net,
    controlled: str,
    suspender: str,
    resumer: str,
    suspend_place: Optional[str] = None,
    run_place: Optional[str] = None,
) -> Net:
    """Suspend the controlled transition until the resumer fires.

    A marked run place self-loops on the controlled transition. The suspender
    moves its token into the suspend place and the resumer moves it back.
    None of the controlled transition's own input places is touched.
    """
    _require_transitions(net, controlled, suspender, resumer)
    _require_distinct(controlled=controlled, suspender=suspender, resumer=resumer)
    s = _new_id(net, suspend_place, f"susp_{controlled}")
    r = _new_id(net, run_place, f"run_{controlled}")
    if s == r:
        raise PatternError("Suspend and run places must differ")
    lane = net.transition(controlled).lane
    return net.extended(
        places=[DataPlace(s, f"{controlled} suspended", lane), DataPlace(r, f"{controlled} running", lane)],
        arcs=[
            Arc(r, controlled, ArcKind.IN),
            Arc(controlled, r, ArcKind.OUT),
            Arc(r, suspender, ArcKind.IN),
            Arc(suspender, s, ArcKind.OUT),
            Arc(s, resumer, ArcKind.IN),
            Arc(resumer, r, ArcKind.OUT),
        ],
        roles={s: PlaceRole.INTERLOCK, r: PlaceRole.ENABLE_DISABLE},
        tokens={r: 1},
    )


def build_pause(
    net: Net,
    controlled: str,
    pauser: str,
    resumer: Optional[str] = None,
    suspend_place: Optional[str] = None,
    run_place: Optional[str] = None,
) -> Net:
    """Suspend followed by resume. Without a resumer an event-free one is generated."""
    _require_transitions(net, controlled, pauser)
    if resumer is None:
        resumer = _fresh_id(net, f"resume_{controlled}")
        net = net.extended(transitions=[
            Transition(resumer, f"resume {controlled}", net.transition(controlled).lane),
        ])
    s = _new_id(net, suspend_place, f"susp_{controlled}")
    r = _new_id(net, run_place, f"run_{controlled}")
    wired = build_suspend_resume(net, controlled, pauser, resumer, suspend_place=s, run_place=r)
    annotation = PatternInstance.of(PatternKind.PAUSE, {
        "suspendPlace": s, "runPlace": r, "controlled": controlled, "pauser": pauser, "resumer": resumer,
    })
    return wired.extended(annotations=[annotation])


def build_request(
    net: Net,
    requester_lane: str,
    provider_lane: str,
    request_transition: str,
    service_transition: str,
    request_place: Optional[str] = None,
    wait_place: Optional[str] = None,
) -> Net:
    """One constituent asks another for a service and waits for the response."""
    for lane in (requester_lane, provider_lane):
        if lane not in net.lane_map:
            raise PatternError(f"Lane {lane} does not exist")
    if requester_lane == provider_lane:
        raise PatternError("A request connects two different lanes")
    _require_transitions(net, request_transition, service_transition)
    if net.transition(request_transition).lane != requester_lane:
        raise PatternError(f"{request_transition} is not in lane {requester_lane}")
    if net.transition(service_transition).lane != provider_lane:
        raise PatternError(f"{service_transition} is not in lane {provider_lane}")

    req = _new_id(net, request_place, f"req_{request_transition}")
    wait = _new_id(net, wait_place, f"wait_{request_transition}")
    if req == wait:
        raise PatternError("Request and wait places must differ")
    return net.extended(
        places=[
            DataPlace(req, f"{request_transition} requested", provider_lane),
            DataPlace(wait, f"awaiting {service_transition}", requester_lane),
        ],
        arcs=[
            Arc(request_transition, req, ArcKind.OUT),
            Arc(req, service_transition, ArcKind.IN),
            Arc(request_transition, wait, ArcKind.OUT),
        ],
        roles={req: PlaceRole.REQUEST},
    )


def _request_parts(net: Net, request: PatternInstance) -> tuple[str, str]:
    if not isinstance(request, PatternInstance) or request.kind is not PatternKind.REQUEST:
        raise PatternError("A request pattern instance is required")
    req, wait = request.get("requestPlace"), request.get("waitPlace")
    if req not in net.place_map or wait not in net.place_map:
        raise PatternError(f"Request pattern {request.describe()} is not part of this net")
    return req, wait


def build_accept_reject(
    net: Net,
    request: PatternInstance,
    accept: str,
    reject: str,
    on_done: Optional[str] = None,
    on_not_done: Optional[str] = None,
) -> Net:
    """The provider answers a request with done or not-done; the requester continues on either."""
    req, wait = _request_parts(net, request)
    _require_transitions(net, accept, reject, *[t for t in (on_done, on_not_done) if t])
    _require_distinct(accept=accept, reject=reject)
    lane = net.place_map[wait].lane

    done = _fresh_id(net, f"done_{req}")
    not_done = _fresh_id(net, f"notdone_{req}")
    new_transitions = []
    if on_done is None:
        on_done = _fresh_id(net, f"{wait}_done")
        new_transitions.append(Transition(on_done, f"continue after {accept}", lane))
    if on_not_done is None:
        on_not_done = _fresh_id(net, f"{wait}_rejected")
        new_transitions.append(Transition(on_not_done, f"continue after {reject}", lane))
    _require_distinct(on_done=on_done, on_not_done=on_not_done)

    pairs = [
        (req, accept), (req, reject),
        (accept, done), (reject, not_done),
        (wait, on_done), (done, on_done),
        (wait, on_not_done), (not_done, on_not_done),
    ]
    return net.extended(
        places=[DataPlace(done, f"{accept} done", lane), DataPlace(not_done, f"{reject} not done", lane)],
        transitions=new_transitions,
        arcs=_arcs(net, pairs, transitions=[t.id for t in new_transitions]),
        roles={done: PlaceRole.DONE_RESPONSE, not_done: PlaceRole.NOT_DONE_RESPONSE},
    )


def build_postpone(
    net: Net,
    request: PatternInstance,
    urgent: str,
    postponed: str,
    place_id: Optional[str] = None,
) -> Net:
    """The provider serves the request only after its urgent task has fired."""
    req, _ = _request_parts(net, request)
    _require_transitions(net, urgent, postponed)
    _require_distinct(urgent=urgent, postponed=postponed)
    net = net.extended(arcs=_arcs(net, [(req, postponed)]))
    return build_interlock(net, urgent, postponed, place_id=place_id)
