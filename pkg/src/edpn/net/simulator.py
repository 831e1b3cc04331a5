"""Step-wise simulation with event-quiescence semantics.

One transition fires per step (interleaving semantics). Offered input events
are merged into the pending multiset; triggered-class transitions outrank
normal ones, and the conflict policy breaks the remaining ties.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from edpn.core.constants import DEFAULT_STEP_BUDGET
from edpn.core.exceptions import BudgetExceeded, ScheduleError, UnknownElementError
from edpn.net.firing import enabled_transitions, fire, is_quiescent
from edpn.net.model import Direction, Marking, Net, PriorityClass
from edpn.net.policies import ConflictPolicy, LexicographicPolicy

logger = logging.getLogger(__name__)


class EventLifetime(str, Enum):
    STEP = "step"              # unconsumed offered events are discarded after their step
    PERSISTENT = "persistent"  # offered events stay pending until consumed


@dataclass(frozen=True)
class LostEvent:
    step_index: int
    event: str
    tick: int = 0


@dataclass(frozen=True)
class TraceStep:
    step_index: int
    offered: tuple[str, ...]
    consumed_events: tuple[str, ...]
    fired: str
    priority: PriorityClass
    emitted: tuple[str, ...]
    marking_after: Marking
    lost: tuple[LostEvent, ...] = ()


@dataclass(frozen=True)
class Quiescent:
    """Outcome of a step in which nothing could fire."""
    marking: Marking
    lost: tuple[LostEvent, ...] = ()


@dataclass(frozen=True)
class ScheduledEvent:
    tick: int
    event: str


@dataclass(frozen=True)
class ExecutionTrace:
    initial: Marking
    steps: tuple[TraceStep, ...]
    final_quiescent: bool
    final_marking: Marking
    lost: tuple[LostEvent, ...] = ()

    @property
    def fired(self) -> tuple[str, ...]:
        return tuple(s.fired for s in self.steps)

    @property
    def outputs(self) -> tuple[str, ...]:
        return tuple(e for s in self.steps for e in s.emitted)

    @property
    def markings(self) -> tuple[Marking, ...]:
        return (self.initial,) + tuple(s.marking_after for s in self.steps)


ScheduleItem = Union[str, tuple[int, str], ScheduledEvent]


def _check_offered(net: Net, offered: Iterable[str]) -> tuple[str, ...]:
    events = tuple(offered)
    for event in events:
        declared = net.event_map.get(event)
        if declared is None or declared.direction is not Direction.INPUT:
            raise UnknownElementError(event, "input event")
    return events


def step(
    net: Net,
    marking: Marking,
    offered: Iterable[str] = (),
    policy: Optional[ConflictPolicy] = None,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
    step_index: int = 0,
    tick: Optional[int] = None,
) -> Union[TraceStep, Quiescent]:
    """Offer events, then fire at most one enabled transition.

    `tick` stamps lost events with the schedule tick they were offered at;
    it defaults to `step_index`.
    """
    policy = policy or LexicographicPolicy()
    tick = step_index if tick is None else tick
    offered = _check_offered(net, offered)
    pending = Counter(marking.pending_map)
    pending.update(offered)
    current = marking.with_pending(pending)

    enabled = enabled_transitions(net, current)
    if not enabled:
        if lifetime is EventLifetime.STEP and current.pending:
            lost = tuple(LostEvent(step_index, e, tick) for e in current.pending_events)
            logger.info(f"Step {step_index}: quiescent, lost {[l.event for l in lost]}")
            return Quiescent(current.data_only(), lost)
        return Quiescent(current)

    triggered = sorted(t for t in enabled if net.transition(t).triggered)
    candidates = triggered or sorted(enabled)
    chosen = policy.select(net, current, candidates)
    after, emitted = fire(net, current, chosen, safe=safe)

    lost: tuple[LostEvent, ...] = ()
    if lifetime is EventLifetime.STEP:
        handoffs = Counter(e for e in emitted if net.event_map[e].direction is Direction.INPUT)
        leftover = Counter(after.pending_map) - handoffs
        lost = tuple(LostEvent(step_index, e, tick) for e in sorted(leftover.elements()))
        after = after.with_pending(handoffs)
        if lost:
            logger.info(f"Step {step_index}: lost {[l.event for l in lost]}")

    return TraceStep(
        step_index=step_index,
        offered=tuple(sorted(offered)),
        consumed_events=net.event_inputs(chosen),
        fired=chosen,
        priority=net.transition(chosen).priority,
        emitted=emitted,
        marking_after=after,
        lost=lost,
    )


def _split_schedule(schedule: Sequence[ScheduleItem]) -> tuple[deque, deque]:
    timed: deque = deque()
    bare: deque = deque()
    for item in schedule:
        if isinstance(item, str):
            bare.append(item)
        elif isinstance(item, ScheduledEvent):
            timed.append(item)
        else:
            tick, event = item
            timed.append(ScheduledEvent(int(tick), event))
    if timed and bare:
        raise ScheduleError("Schedule mixes bare events with (tick, event) pairs")
    ticks = [s.tick for s in timed]
    if ticks != sorted(ticks) or any(t < 0 for t in ticks):
        raise ScheduleError("Schedule ticks must be non-negative and nondecreasing")
    return timed, bare


def run(
    net: Net,
    schedule: Sequence[ScheduleItem] = (),
    initial: Optional[Marking] = None,
    policy: Optional[ConflictPolicy] = None,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> ExecutionTrace:
    """Execute a schedule until it is exhausted and the net is quiescent.

    Bare event ids are offered one at a time, each at the next point of event
    quiescence. ``(tick, event)`` pairs are offered at that tick; every call
    to `step` is one tick.
    """
    policy = policy or LexicographicPolicy()
    timed, bare = _split_schedule(schedule)
    for item in (*timed, *bare):
        _check_offered(net, [item.event if isinstance(item, ScheduledEvent) else item])

    start = initial if initial is not None else net.initial_marking
    marking = start
    steps: list[TraceStep] = []
    lost: list[LostEvent] = []
    tick = 0

    def partial(quiescent: bool) -> ExecutionTrace:
        return ExecutionTrace(start, tuple(steps), quiescent, marking, tuple(lost))

    while True:
        offered = []
        while timed and timed[0].tick <= tick:
            offered.append(timed.popleft().event)
        if not offered and bare and is_quiescent(net, marking):
            offered.append(bare.popleft())

        outcome = step(net, marking, offered, policy, lifetime, safe, step_index=len(steps), tick=tick)
        tick += 1
        lost.extend(outcome.lost)

        if isinstance(outcome, Quiescent):
            marking = outcome.marking
            if not timed and not bare:
                return partial(True)
            if timed and not bare:
                # idle ticks change nothing, skip to the next scheduled event
                tick = max(tick, timed[0].tick)
            continue

        if len(steps) >= step_budget:
            logger.warning(f"Step budget of {step_budget} exhausted")
            raise BudgetExceeded(f"Step budget of {step_budget} exceeded", partial=partial(False))
        steps.append(outcome)
        marking = outcome.marking_after
        logger.debug(f"Step {outcome.step_index}: {outcome.fired} -> {marking}")
