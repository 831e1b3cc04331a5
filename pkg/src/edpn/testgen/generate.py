"""Greedy generation of a test suite for one coverage metric."""

import logging
from typing import List, Optional

from pydantic import BaseModel, Field

from edpn.core.constants import DEFAULT_MAX_FIRINGS, DEFAULT_STATE_BUDGET
from edpn.core.exceptions import BudgetExceeded
from edpn.coverage.metrics import CoverageReport, Metric, build_report, trace_items
from edpn.net.model import Marking, Net
from edpn.net.simulator import EventLifetime
from edpn.testgen.cases import TestCase, default_name, derive_test_case
from edpn.testgen.paths import Path, enumerate_paths, is_stable, offers_at, replay_path, stable_markings

logger = logging.getLogger(__name__)


class GenerationResult(BaseModel):
    metric: Metric
    test_cases: List[TestCase] = Field(default_factory=list)
    coverage: CoverageReport
    budget_exhausted: bool = False

    @property
    def complete(self) -> bool:
        return self.coverage[self.metric].complete


def _candidate_paths(net, start, max_firings, restart_from_stable, state_budget, lifetime, safe):
    starts = [start]
    exhausted = False
    if restart_from_stable:
        try:
            starts = stable_markings(
                net, start, max_firings=max_firings, state_budget=state_budget, lifetime=lifetime, safe=safe,
            )
        except BudgetExceeded as e:
            logger.warning(f"Stable markings not fully explored: {e}")
            exhausted = True
            starts = [start] + sorted((n for n in e.partial.nodes if n != start), key=str)

    paths: list[Path] = []
    for s in starts:
        try:
            paths += enumerate_paths(
                net, s, max_firings, state_budget=state_budget, lifetime=lifetime, safe=safe,
            )
        except BudgetExceeded as e:
            exhausted = True
            paths += e.partial
    return paths, exhausted


def _rest_test(net: Net, start: Marking):
    """Predicate for markings where a use case may begin or end.

    Besides the start itself these are stable markings that wait for one of
    the stimuli the start waits for, and dead markings that wait for nothing.
    """
    awaited = set(offers_at(net, start))

    def is_rest(marking: Marking) -> bool:
        if marking == start:
            return True
        if not is_stable(net, marking):
            return False
        offers = offers_at(net, marking)
        return not offers or bool(awaited & set(offers))
    return is_rest


def _greedy(ranked: list[Path], items: dict, covered: set, metric: Metric) -> list[Path]:
    chosen: list[Path] = []
    while True:
        best, gain = None, 0
        for path in ranked:
            added = len(items[path] - covered)
            if added > gain:
                best, gain = path, added
        if best is None:
            return chosen
        chosen.append(best)
        covered |= items[best]
        logger.debug(f"Selected {best} (+{gain} {metric.value})")


def _unique_name(name: str, taken: set) -> str:
    candidate, n = name, 2
    while candidate in taken:
        candidate = f"{name} ({n})"
        n += 1
    taken.add(candidate)
    return candidate


def generate_for_coverage(
    net: Net,
    metric: Metric,
    start: Optional[Marking] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    restart_from_stable: bool = True,
    state_budget: int = DEFAULT_STATE_BUDGET,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> GenerationResult:
    """Pick paths greedily until the metric is covered or no path adds anything.

    The path with the largest marginal coverage wins; ties go to the shorter
    path, then to the lexicographically smaller transition sequence. Use
    cases are picked first: paths leading from one rest marking to the next
    without passing through another. Any path may then cover what is left.
    """
    metric = Metric(metric)
    start = (start if start is not None else net.initial_marking).data_only()
    paths, exhausted = _candidate_paths(net, start, max_firings, restart_from_stable, state_budget, lifetime, safe)

    is_rest = _rest_test(net, start)
    items = {}
    use_cases = []
    for path in paths:
        trace = replay_path(net, path, lifetime=lifetime, safe=safe)
        items[path] = trace_items(net, trace, metric)
        inner = trace.markings[1:-1]
        if is_rest(path.start) and is_rest(path.end) and not any(is_rest(m) for m in inner):
            use_cases.append(path)

    def rank(candidates: list[Path]) -> list[Path]:
        return sorted(candidates, key=lambda p: (len(p), p.transitions, str(p.start)))

    covered: set = set()
    chosen = _greedy(rank(use_cases), items, covered, metric)
    chosen += _greedy(rank(paths), items, covered, metric)

    taken: set = set()
    test_cases = [
        derive_test_case(net, p, name=_unique_name(default_name(net, p), taken), lifetime=lifetime, safe=safe)
        for p in chosen
    ]
    report = build_report(net, {metric: covered}, len(test_cases))
    result = GenerationResult(metric=metric, test_cases=test_cases, coverage=report, budget_exhausted=exhausted)
    if not result.complete:
        logger.warning(
            f"{metric.value} coverage incomplete at {report[metric].percentage:.1f}%: "
            f"{', '.join(report[metric].uncovered)}"
        )
    return result
