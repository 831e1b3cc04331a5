"""System test cases derived from firing paths, and their file formats."""

import json
import logging
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, computed_field, model_validator

from edpn.core.exceptions import ModelParseError, ReplayError
from edpn.net.model import Marking, Net
from edpn.net.policies import ScriptedPolicy
from edpn.net.simulator import EventLifetime, ExecutionTrace, run
from edpn.testgen.paths import Path, replay_path

logger = logging.getLogger(__name__)


class TestEvent(BaseModel):
    """One numbered entry of a test case's event sequence."""
    __test__ = False

    index: int = Field(ge=1, description="Position in the interleaved sequence")
    firing: int = Field(ge=1, description="Firing that consumed or emitted the event")
    direction: Literal["in", "out"]
    event: str
    label: str = ""


class TestCase(BaseModel):
    """Name, pre-conditions, interleaved event sequence and post-conditions."""
    __test__ = False

    name: str
    preconditions: Dict[str, int] = Field(default_factory=dict)
    event_sequence: List[TestEvent] = Field(default_factory=list)
    postconditions: Dict[str, int] = Field(default_factory=dict)
    transitions: List[str] = Field(default_factory=list)
    schedule: List[Tuple[int, str]] = Field(
        default_factory=list,
        description="Input events offered by the environment, with the step they are offered at",
    )

    @model_validator(mode="after")
    def _causal_order(self) -> "TestCase":
        last = (0, "in")
        for position, item in enumerate(self.event_sequence, start=1):
            if item.index != position:
                raise ValueError(f"event {item.event} is numbered {item.index}, expected {position}")
            if item.firing > len(self.transitions):
                raise ValueError(f"event {item.event} refers to firing {item.firing} of {len(self.transitions)}")
            if (item.firing, item.direction) < last:
                raise ValueError(f"event {item.event} breaks the causal order of the sequence")
            last = (item.firing, item.direction)
        return self

    @computed_field
    @property
    def inputs(self) -> List[str]:
        return [e.event for e in self.event_sequence if e.direction == "in"]

    @computed_field
    @property
    def outputs(self) -> List[str]:
        return [e.event for e in self.event_sequence if e.direction == "out"]

    @property
    def start(self) -> Marking:
        return Marking.of(self.preconditions)


def _place_labels(net: Net, marking: Marking) -> str:
    return ", ".join(net.label_of(p) for p in marking.marked_places) or "nothing marked"


def default_name(net: Net, path: Path) -> str:
    pre, post = path.start.data_only(), path.end.data_only()
    name = f"From {_place_labels(net, pre)} to {_place_labels(net, post)}"
    return f"{name} via {path}" if path.transitions else name


def derive_test_case(
    net: Net,
    path: Path,
    name: Optional[str] = None,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> TestCase:
    """Replay a path and record it in test-case form."""
    name = name or default_name(net, path)
    trace = replay_path(net, path, lifetime=lifetime, safe=safe, name=name)
    sequence: list[TestEvent] = []
    for firing, s in enumerate(trace.steps, start=1):
        for direction, events in (("in", sorted(s.consumed_events)), ("out", s.emitted)):
            for event in events:
                sequence.append(TestEvent(
                    index=len(sequence) + 1, firing=firing, direction=direction,
                    event=event, label=net.label_of(event),
                ))
    return TestCase(
        name=name,
        preconditions=path.start.data_only().token_map,
        event_sequence=sequence,
        postconditions=trace.final_marking.token_map,
        transitions=list(path.transitions),
        schedule=[(s.tick, s.event) for s in path.schedule],
    )


def replay_test_case(
    net: Net,
    test_case: TestCase,
    lifetime: EventLifetime = EventLifetime.STEP,
    safe: bool = True,
) -> ExecutionTrace:
    """Run a test case against the net; ReplayError unless outputs and post-conditions match."""
    for eid in (*test_case.preconditions, *test_case.postconditions):
        if eid not in net.place_map:
            raise ReplayError(test_case.name, f"unknown place {eid}")
    try:
        trace = run(
            net,
            schedule=test_case.schedule,
            initial=test_case.start,
            policy=ScriptedPolicy(test_case.transitions, name=test_case.name),
            lifetime=lifetime,
            safe=safe,
            step_budget=max(len(test_case.transitions), 1),
        )
    except ReplayError:
        raise
    except Exception as e:
        raise ReplayError(test_case.name, str(e)) from e

    if list(trace.fired) != test_case.transitions:
        raise ReplayError(test_case.name, f"fired {', '.join(trace.fired) or 'nothing'}")
    if list(trace.outputs) != test_case.outputs:
        raise ReplayError(test_case.name, f"emitted {', '.join(trace.outputs) or 'nothing'}")
    if trace.final_marking.token_map != test_case.postconditions:
        raise ReplayError(test_case.name, f"ended in {trace.final_marking}")
    return trace


# ---- Text layout ----

def _conditions(net: Optional[Net], counts: Dict[str, int]) -> str:
    if not counts:
        return "none"
    parts = []
    for place, n in sorted(counts.items()):
        text = f"{place} marked" if n == 1 else f"{place} marked x{n}"
        if net is not None and net.label_of(place) != place:
            text += f" ({net.label_of(place)})"
        parts.append(text)
    return "; ".join(parts)


def render_test_case(test_case: TestCase, net: Optional[Net] = None, column: int = 40) -> str:
    """Name / Pre-conditions / numbered Event Sequence / Post-conditions."""
    lines = [
        f"Name: {test_case.name}",
        f"Pre-conditions: {_conditions(net, test_case.preconditions)}",
        "Event Sequence:",
        f"  {'Input events':<{column}}Output events",
    ]
    for e in test_case.event_sequence:
        entry = f"{e.index}. {e.event}" + (f": {e.label}" if e.label else "")
        lines.append(f"  {entry}" if e.direction == "in" else f"  {'':<{column}}{entry}")
    lines.append(f"Post-conditions: {_conditions(net, test_case.postconditions)}")
    return "\n".join(lines)


def render_test_cases(test_cases: Sequence[TestCase], net: Optional[Net] = None) -> str:
    return "\n\n".join(render_test_case(tc, net) for tc in test_cases) + "\n"


# ---- Rows and JSON ----

def dump_rows(test_cases: Sequence[TestCase]) -> str:
    lines = []
    for tc in test_cases:
        lines += ["[testCase]", f"name,{tc.name}"]
        lines += [f"pre,{p},{n}" for p, n in sorted(tc.preconditions.items())]
        lines += [f"offer,{tick},{event}" for tick, event in tc.schedule]
        lines += [f"fire,{t}" for t in tc.transitions]
        lines += [f"event,{e.firing},{e.direction},{e.event}" for e in tc.event_sequence]
        lines += [f"post,{p},{n}" for p, n in sorted(tc.postconditions.items())]
    return "\n".join(lines) + "\n"


def _int(value: str, lineno: int, source: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ModelParseError(f"expected an integer, got '{value}'", lineno, source)


def parse_rows(text: str, source: str = "<string>") -> List[TestCase]:
    cases: List[dict] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[testCase]":
            cases.append({"name": "", "pre": {}, "offer": [], "fire": [], "event": [], "post": {}, "line": lineno})
            continue
        if not cases:
            raise ModelParseError("row before the first [testCase] header", lineno, source)
        current = cases[-1]
        tag, _, rest = line.partition(",")
        fields = rest.split(",")
        if tag == "name":
            current["name"] = rest
        elif tag in ("pre", "post") and len(fields) == 2:
            current[tag][fields[0]] = _int(fields[1], lineno, source)
        elif tag == "offer" and len(fields) == 2:
            current["offer"].append((_int(fields[0], lineno, source), fields[1]))
        elif tag == "fire" and len(fields) == 1:
            current["fire"].append(fields[0])
        elif tag == "event" and len(fields) == 3 and fields[1] in ("in", "out"):
            current["event"].append((_int(fields[0], lineno, source), fields[1], fields[2]))
        else:
            raise ModelParseError(f"malformed test case row '{line}'", lineno, source)

    result = []
    for c in cases:
        try:
            result.append(TestCase(
                name=c["name"],
                preconditions=c["pre"],
                event_sequence=[
                    TestEvent(index=i, firing=f, direction=d, event=e)
                    for i, (f, d, e) in enumerate(c["event"], start=1)
                ],
                postconditions=c["post"],
                transitions=c["fire"],
                schedule=c["offer"],
            ))
        except ValidationError as e:
            raise ModelParseError(f"invalid test case '{c['name']}': {e}", c["line"], source)
    return result


_SUITE = TypeAdapter(List[TestCase])


def dump_json(test_cases: Sequence[TestCase]) -> str:
    return json.dumps([tc.model_dump(mode="json") for tc in test_cases], indent=2) + "\n"


def load_test_cases(text: str, source: str = "<string>") -> List[TestCase]:
    """Read a suite written as rows or JSON."""
    if text.lstrip().startswith("[testCase]") or not text.strip():
        return parse_rows(text, source)
    try:
        payload = json.loads(text)
        for item in payload:
            for key in ("inputs", "outputs"):
                item.pop(key, None)
        return _SUITE.validate_python(payload)
    except (json.JSONDecodeError, TypeError, AttributeError) as e:
        raise ModelParseError(f"not a test case file: {e}", None, source)
    except ValidationError as e:
        raise ModelParseError(f"invalid test case: {e}", None, source)
