"""Execution tables: one row per step with every lane's marked places."""

from __future__ import annotations

from dataclasses import dataclass

from edpn.net.model import Marking, Net
from edpn.net.simulator import ExecutionTrace


@dataclass(frozen=True)
class ExecutionRow:
    step: int
    states: tuple[tuple[str, ...], ...]  # marked places per lane, in lane order
    inputs: tuple[str, ...]
    fired: str
    outputs: tuple[str, ...]


@dataclass(frozen=True)
class ExecutionTable:
    lanes: tuple[str, ...]
    lane_names: tuple[str, ...]
    rows: tuple[ExecutionRow, ...]

    def state_of(self, row: ExecutionRow, lane: str) -> tuple[str, ...]:
        return row.states[self.lanes.index(lane)]

    def render(self) -> str:
        header = ("Step", *self.lane_names, "Input", "Fired", "Outputs")
        body = [
            (
                str(r.step),
                *(", ".join(places) or "-" for places in r.states),
                ", ".join(r.inputs) or "-",
                r.fired,
                ", ".join(r.outputs) or "-",
            )
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
        return "\n".join(lines) + "\n"


def _lane_state(net: Net, marking: Marking, lane: str) -> tuple[str, ...]:
    return tuple(p for p in marking.marked_places if net.lane_of(p) == lane)


def render_execution_table(net: Net, trace: ExecutionTrace) -> ExecutionTable:
    """Tabulate a trace; the state columns show the marking after each step."""
    lanes = tuple(lane.id for lane in net.lanes)
    rows = tuple(
        ExecutionRow(
            step=s.step_index + 1,
            states=tuple(_lane_state(net, s.marking_after, lane) for lane in lanes),
            inputs=tuple(sorted(s.consumed_events)),
            fired=s.fired,
            outputs=s.emitted,
        )
        for s in trace.steps
    )
    return ExecutionTable(lanes=lanes, lane_names=tuple(lane.name for lane in net.lanes), rows=rows)
