"""Depth-bounded enumeration of firing paths.

The generator plays the environment: before every firing it may offer
nothing, or, for any transition whose data inputs are marked, the input
events that transition still lacks. Offers are made at every marking, not
only quiescent ones, so an event can preempt an event-free transition.
Every choice among enabled transitions of the top priority class is
explored. A path ends at a quiescent marking, so replaying its timed
schedule with `run` fires exactly its transitions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from edpn.core.constants import DEFAULT_MAX_FIRINGS, DEFAULT_STATE_BUDGET
from edpn.core.exceptions import BudgetExceeded, CapacityViolation, ReplayError
from edpn.net.firing import enabled_transitions
from edpn.net.model import Marking, Net
from edpn.net.policies import ScriptedPolicy
from edpn.net.simulator import (
    EventLifetime, ExecutionTrace, Quiescent, ScheduledEvent, TraceStep, run, step,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Path:
    transitions: tuple[str, ...]
    schedule: tuple[ScheduledEvent, ...]
    start: Marking
    end: Marking

    @property
    def required_schedule(self) -> tuple[str, ...]:
        return tuple(s.event for s in self.schedule)

    def __len__(self) -> int:
        return len(self.transitions)

    def __str__(self) -> str:
        return ", ".join(self.transitions)


def offers_at(net: Net, marking: Marking) -> list[tuple[str, ...]]:
    """Event sets that complete some data-enabled transition at a marking, sorted."""
    offers = set()
    for t in net.transition_ids:
        if all(marking.count(p) >= 1 for p in net.data_inputs(t)):
            missing = tuple(sorted(e for e in net.event_inputs(t) if marking.pending_count(e) < 1))
            if missing:
                offers.add(missing)
    return sorted(offers)


def _candidates(net: Net, marking: Marking) -> list[str]:
    enabled = enabled_transitions(net, marking)
    triggered = sorted(t for t in enabled if net.transition(t).triggered)
    return triggered or sorted(enabled)


def _successors(net, marking, fired_count, lifetime, safe) -> list[tuple[tuple[str, ...], TraceStep]]:
    """(offer, step) pairs leaving a marking, one per distinct (fired, marking) outcome."""
    offers = [(), *offers_at(net, marking)]
    outcomes: dict = {}
    for offer in offers:
        merged = marking.with_pending({**marking.pending_map, **{e: marking.pending_count(e) + 1 for e in offer}})
        for t in _candidates(net, merged):
            try:
                outcome = step(net, marking, offer, ScriptedPolicy([t]), lifetime, safe, step_index=fired_count)
            except CapacityViolation as e:
                logger.debug(f"Pruned {t}: {e}")
                continue
            if isinstance(outcome, Quiescent):
                continue
            outcomes.setdefault((outcome.fired, outcome.marking_after), (offer, outcome))
    return [outcomes[k] for k in sorted(outcomes, key=lambda k: (k[0], str(k[1])))]


def enumerate_paths(
    net: Net,
    start: Optional[Marking] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    target: Optional[Marking] = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> list[Path]:
    """Every path of 1..max_firings firings ending at a quiescent marking.

    Paths are sorted by their transition sequence. With a target, only paths
    whose final data marking equals the target's are returned.
    """
    if max_firings < 1:
        raise ValueError("max_firings must be at least 1")
    start = start if start is not None else net.initial_marking
    wanted = target.data_only() if target is not None else None
    found: set[Path] = set()
    visited = 0

    def collect() -> list[Path]:
        return sorted(found, key=lambda p: (p.transitions, p.required_schedule))

    stack = [(start, (), ())]
    while stack:
        marking, fired, schedule = stack.pop()
        visited += 1
        if visited > state_budget:
            logger.warning(f"State budget of {state_budget} exhausted after {len(found)} path(s)")
            raise BudgetExceeded(f"State budget of {state_budget} exceeded", partial=collect())

        if fired and not enabled_transitions(net, marking):
            if wanted is None or marking.data_only() == wanted:
                found.add(Path(fired, schedule, start, marking))
        if len(fired) >= max_firings:
            continue

        tick = len(fired)
        for offer, outcome in reversed(_successors(net, marking, tick, lifetime, safe)):
            offered = tuple(ScheduledEvent(tick, e) for e in offer)
            stack.append((outcome.marking_after, fired + (outcome.fired,), schedule + offered))

    paths = collect()
    logger.debug(f"Enumerated {len(paths)} path(s) over {visited} state(s)")
    return paths


def replay_path(
    net: Net,
    path: Path,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
    name: str = "path",
) -> ExecutionTrace:
    """Run the path's schedule, resolving conflicts as recorded."""
    trace = run(
        net,
        schedule=path.schedule,
        initial=path.start,
        policy=ScriptedPolicy(path.transitions, name=name),
        lifetime=lifetime,
        safe=safe,
        step_budget=max(len(path.transitions), 1),
    )
    if trace.fired != path.transitions:
        raise ReplayError(name, f"fired {', '.join(trace.fired) or 'nothing'}, expected {path}")
    return trace


def is_stable(net: Net, marking: Marking) -> bool:
    """Quiescent with nothing pending."""
    return not marking.pending and not enabled_transitions(net, marking)


def reachability_graph(
    net: Net,
    start: Optional[Marking] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    state_budget: int = DEFAULT_STATE_BUDGET,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> nx.DiGraph:
    """Graph over stable data markings; an edge carries a path leading between them."""
    start = (start if start is not None else net.initial_marking).data_only()
    g = nx.DiGraph()
    g.add_node(start)
    frontier = [start]
    while frontier:
        node = frontier.pop()
        try:
            paths = enumerate_paths(
                net, node, max_firings, state_budget=state_budget, lifetime=lifetime, safe=safe,
            )
        except BudgetExceeded as e:
            raise BudgetExceeded(str(e), partial=g) from e
        for path in paths:
            end = path.end.data_only()
            if end not in g:
                if g.number_of_nodes() >= state_budget:
                    raise BudgetExceeded(f"State budget of {state_budget} exceeded", partial=g)
                g.add_node(end)
                frontier.append(end)
            if not g.has_edge(node, end):
                g.add_edge(node, end, path=path)
    return g


def stable_markings(net: Net, start: Optional[Marking] = None, **kwargs) -> list[Marking]:
    """The start marking followed by every other stable marking reachable from it."""
    start = (start if start is not None else net.initial_marking).data_only()
    g = reachability_graph(net, start, **kwargs)
    others = sorted(nx.descendants(g, start) - {start}, key=str)
    return [start] + others
