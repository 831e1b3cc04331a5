"""Test coverage metrics over a net: transitions, places, input events,
output events and input events in every context."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence

from pydantic import BaseModel, Field, computed_field, model_validator

from edpn.core.exceptions import UnknownElementError
from edpn.net.model import Direction, Net
from edpn.net.simulator import EventLifetime, ExecutionTrace
from edpn.testgen.cases import TestCase, replay_test_case

logger = logging.getLogger(__name__)


class Metric(str, Enum):
    CT = "Ct"
    CP = "Cp"
    CIE = "Cie"
    COE = "Coe"
    CCONTEXT = "Ccontext"

    @classmethod
    def parse(cls, name: str) -> "Metric":
        for metric in cls:
            if metric.value.lower() == name.lower():
                return metric
        raise ValueError(f"Unknown coverage metric: {name}")


@dataclass(frozen=True)
class Context:
    """An input event as consumed by one transition; the places are descriptive."""
    input_event: str
    transition: str
    context_places: tuple[str, ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return f"{self.input_event}@{self.transition}"


def contexts_of(net: Net, event_id: str) -> frozenset:
    """One context per transition consuming the input event."""
    event = net.event_map.get(event_id)
    if event is None or event.direction is not Direction.INPUT:
        raise UnknownElementError(event_id, "input event")
    return frozenset(
        Context(event_id, t, net.data_inputs(t)) for t in net.consumers_of(event_id)
    )


def all_contexts(net: Net) -> list[Context]:
    return sorted(
        (c for e in net.input_events for c in contexts_of(net, e)),
        key=lambda c: (c.input_event, c.transition),
    )


def total_items(net: Net, metric: Metric) -> set[str]:
    if metric is Metric.CT:
        return set(net.transition_ids)
    if metric is Metric.CP:
        return set(net.place_ids)
    if metric is Metric.CIE:
        return set(net.input_events)
    if metric is Metric.COE:
        return set(net.output_events)
    return {str(c) for c in all_contexts(net)}


def trace_items(net: Net, trace: ExecutionTrace, metric: Metric) -> set[str]:
    """Items of one metric exercised by an execution trace."""
    if metric is Metric.CT:
        return set(trace.fired)
    if metric is Metric.CP:
        return {p for m in trace.markings for p in m.marked_places}
    if metric is Metric.CIE:
        return {e for s in trace.steps for e in s.consumed_events}
    if metric is Metric.COE:
        outputs = set(net.output_events)
        return {e for s in trace.steps for e in s.emitted if e in outputs}
    return {f"{e}@{s.fired}" for s in trace.steps for e in s.consumed_events}


class MetricCoverage(BaseModel):
    metric: Metric
    covered: List[str] = Field(default_factory=list)
    total: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _covered_within_total(self) -> "MetricCoverage":
        extra = set(self.covered) - set(self.total)
        if extra:
            raise ValueError(f"{self.metric.value} covers unknown items: {', '.join(sorted(extra))}")
        self.covered = sorted(set(self.covered))
        self.total = sorted(set(self.total))
        return self

    @computed_field
    @property
    def percentage(self) -> float:
        if not self.total:
            return 100.0
        return 100.0 * len(self.covered) / len(self.total)

    @computed_field
    @property
    def uncovered(self) -> List[str]:
        covered = set(self.covered)
        return [item for item in self.total if item not in covered]

    @property
    def complete(self) -> bool:
        return not self.uncovered


class CoverageReport(BaseModel):
    test_count: int = 0
    metrics: List[MetricCoverage] = Field(default_factory=list)

    def get(self, metric: Metric) -> Optional[MetricCoverage]:
        for m in self.metrics:
            if m.metric is Metric(metric):
                return m
        return None

    def __getitem__(self, metric: Metric) -> MetricCoverage:
        found = self.get(metric)
        if found is None:
            raise KeyError(metric)
        return found


def build_report(
    net: Net,
    covered: Dict[Metric, Iterable[str]],
    test_count: int,
) -> CoverageReport:
    return CoverageReport(
        test_count=test_count,
        metrics=[
            MetricCoverage(metric=m, covered=list(items), total=list(total_items(net, m)))
            for m, items in covered.items()
        ],
    )


def measure(
    net: Net,
    test_cases: Sequence[TestCase],
    metrics: Sequence[Metric] = tuple(Metric),
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> CoverageReport:
    """Replay every test case and report what the suite covers."""
    covered: Dict[Metric, set] = {Metric(m): set() for m in metrics}
    for tc in test_cases:
        trace = replay_test_case(net, tc, lifetime=lifetime, safe=safe)
        for metric, items in covered.items():
            items |= trace_items(net, trace, metric)
    report = build_report(net, covered, len(test_cases))
    logger.debug(
        "Coverage: " + ", ".join(f"{m.metric.value} {len(m.covered)}/{len(m.total)}" for m in report.metrics)
    )
    return report


# ---- Output formats ----

def render_report(report: CoverageReport) -> str:
    header = ("Metric", "Covered", "Total", "Percent", "Uncovered")
    rows = [
        (m.metric.value, str(len(m.covered)), str(len(m.total)), f"{m.percentage:.1f}%",
         " ".join(m.uncovered) or "-")
        for m in report.metrics
    ]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(4)]
    lines = [f"Test cases: {report.test_count}"]
    for row in [header, *rows]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)) + "  " + row[4])
    return "\n".join(lines) + "\n"


def report_rows(report: CoverageReport) -> str:
    lines = ["metric,covered,total,uncovered"]
    lines += [
        f"{m.metric.value},{len(m.covered)},{len(m.total)},{' '.join(m.uncovered)}"
        for m in report.metrics
    ]
    return "\n".join(lines) + "\n"


def report_json(report: CoverageReport) -> str:
    return report.model_dump_json(indent=2) + "\n"
