"""Tests for path enumeration, replay and the stable-marking graph."""

from collections import Counter
from itertools import combinations

import pytest

from edpn.core.exceptions import BudgetExceeded, CapacityViolation, ReplayError
from edpn.coverage.metrics import Metric
from edpn.fixtures import catalog
from edpn.net.firing import enabled_transitions
from edpn.net.model import Marking
from edpn.net.modelfile import parse_model
from edpn.net.policies import ScriptedPolicy
from edpn.net.simulator import Quiescent, ScheduledEvent, step
from edpn.patterns.builders import build_interlock
from edpn.testgen.generate import generate_for_coverage
from edpn.testgen.paths import (
    Path, enumerate_paths, is_stable, offers_at, reachability_graph, replay_path, stable_markings,
)

# e arrives while the event-free tint is already enabled
PREEMPT_MODEL = """
lane a A
event e in a go
event out out a done
place da a ready
place dc a armed
place dz a finished
trans te a on event
trans tint a internal
arc e -> te
arc dc -> te
arc te -> dz
arc te -> out
arc da -> tint
arc dc -> tint
arc tint -> dz
mark da
mark dc
"""


def all_firing_sequences(net, max_firings):
    """Every firing sequence ending quiescent, offering any subset of input events before each firing."""
    offers = [c for r in range(len(net.input_events) + 1) for c in combinations(net.input_events, r)]
    found = set()

    def walk(marking, fired):
        if fired and not enabled_transitions(net, marking):
            found.add(fired)
        if len(fired) == max_firings:
            return
        successors = set()
        for offer in offers:
            for t in net.transition_ids:
                try:
                    outcome = step(net, marking, offer, ScriptedPolicy([t]), step_index=len(fired))
                except (ReplayError, CapacityViolation):
                    continue
                if not isinstance(outcome, Quiescent):
                    successors.add((t, outcome.marking_after))
        for t, after in successors:
            walk(after, fired + (t,))

    walk(net.initial_marking, ())
    return found


class TestOffers:
    def test_initial_offer(self, gdc_basic):
        assert offers_at(gdc_basic, gdc_basic.initial_marking) == [("p1",)]

    def test_sensor_offers(self, gdc_safety_full):
        marking = Marking.of(["d2", "lb_ed", "os_ed"])
        assert offers_at(gdc_safety_full, marking) == [("p2",), ("p5",), ("p6",)]


class TestEnumeratePaths:
    def test_two_firings(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, max_firings=2)
        assert [p.transitions for p in paths] == [("t1",), ("t1", "t2")]
        assert paths[1].schedule == (ScheduledEvent(0, "p1"), ScheduledEvent(1, "p2"))
        assert paths[1].required_schedule == ("p1", "p2")
        assert paths[1].end == Marking.of(["d4"])
        assert str(paths[1]) == "t1, t2"

    def test_full_cycle(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, max_firings=4)
        assert len(paths) == 4
        assert paths[-1].transitions == ("t1", "t2", "t3", "t4")
        assert paths[-1].end == gdc_basic.initial_marking

    def test_target(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, max_firings=4, target=Marking.of(["d4"]))
        assert [p.transitions for p in paths] == [("t1", "t2")]

    def test_start_marking(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, start=Marking.of(["d4"]), max_firings=1)
        assert [p.transitions for p in paths] == [("t3",)]

    def test_conflicting_choices_are_explored(self, conflict_net):
        paths = enumerate_paths(conflict_net, max_firings=2)
        assert [p.transitions for p in paths] == [("action1",), ("action2",)]

    def test_safety_reversal_paths(self, gdc_safety_full):
        paths = enumerate_paths(gdc_safety_full, max_firings=4)
        assert len(paths) == 8
        assert ("t1", "t3", "t4", "t5") in [p.transitions for p in paths]
        assert ("t1", "t6", "t4", "t5") in [p.transitions for p in paths]

    def test_max_firings_must_be_positive(self, gdc_basic):
        with pytest.raises(ValueError):
            enumerate_paths(gdc_basic, max_firings=0)

    def test_state_budget(self, gdc_basic):
        with pytest.raises(BudgetExceeded) as excinfo:
            enumerate_paths(gdc_basic, max_firings=4, state_budget=1)
        assert excinfo.value.partial == []

    def test_paths_replay(self, gdc_safety_full):
        for path in enumerate_paths(gdc_safety_full, max_firings=4):
            trace = replay_path(gdc_safety_full, path)
            assert trace.fired == path.transitions
            assert trace.final_marking == path.end

    def test_tampered_path_does_not_replay(self, gdc_basic):
        path = enumerate_paths(gdc_basic, max_firings=2)[1]
        tampered = Path(("t1", "t3"), path.schedule, path.start, path.end)
        with pytest.raises(ReplayError):
            replay_path(gdc_basic, tampered)


class TestStableMarkings:
    def test_is_stable(self, gdc_basic):
        assert is_stable(gdc_basic, Marking.of(["d1"]))
        assert not is_stable(gdc_basic, Marking.of(["d1"], ["p1"]))

    def test_stable_markings(self, gdc_basic):
        found = stable_markings(gdc_basic, max_firings=2)
        assert found == [Marking.of([p]) for p in ("d1", "d2", "d4", "d5")]

    def test_graph_edges_carry_paths(self, gdc_basic):
        g = reachability_graph(gdc_basic, max_firings=1)
        assert g.number_of_nodes() == 4
        path = g.edges[Marking.of(["d1"]), Marking.of(["d2"])]["path"]
        assert path.transitions == ("t1",)

    def test_graph_budget_keeps_partial_graph(self, gdc_basic):
        with pytest.raises(BudgetExceeded) as excinfo:
            reachability_graph(gdc_basic, max_firings=1, state_budget=2)
        assert Marking.of(["d1"]) in excinfo.value.partial.nodes


class TestTargetsFromDoorDown:
    def test_open_door(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, start=Marking.of(["d4"]), max_firings=2, target=Marking.of(["d1"]))
        assert [p.transitions for p in paths] == [("t3", "t4")]

    def test_full_cycle_back_to_door_down(self, gdc_basic):
        paths = enumerate_paths(gdc_basic, start=Marking.of(["d4"]), max_firings=4, target=Marking.of(["d4"]))
        assert [p.transitions for p in paths] == [("t3", "t4", "t1", "t2")]
        assert paths[0].required_schedule == ("p1", "p3", "p1", "p2")


class TestEventPreemptsInternalTransition:
    @pytest.fixture
    def net(self):
        return parse_model(PREEMPT_MODEL, source="preempt")

    def test_both_branches_are_enumerated(self, net):
        paths = enumerate_paths(net, max_firings=2)
        assert [p.transitions for p in paths] == [("te",), ("tint",)]
        assert paths[0].schedule == (ScheduledEvent(0, "e"),)
        assert paths[1].schedule == ()

    def test_event_path_replays(self, net):
        path = enumerate_paths(net, max_firings=1)[0]
        trace = replay_path(net, path)
        assert trace.outputs == ("out",)
        assert trace.final_marking == Marking.of(["da", "dz"])

    def test_transition_coverage_is_complete(self, net):
        result = generate_for_coverage(net, Metric.CT, max_firings=2)
        assert result.complete
        assert sorted(tc.transitions for tc in result.test_cases) == [["te"], ["tint"]]


class TestExhaustiveness:
    @pytest.mark.parametrize("name, max_firings", [
        ("gdc-basic", 1), ("gdc-basic", 2), ("gdc-basic", 3), ("gdc-basic", 4),
        ("gdc-safety-full", 4), ("conflict-pair", 2),
    ])
    def test_fixture_matches_all_sequences(self, name, max_firings):
        net = catalog.load(name)
        found = {p.transitions for p in enumerate_paths(net, max_firings=max_firings)}
        assert found == all_firing_sequences(net, max_firings)

    def test_relay_handoff_matches_all_sequences(self, relay_net):
        found = {p.transitions for p in enumerate_paths(relay_net, max_firings=3)}
        assert found == all_firing_sequences(relay_net, 3)

    def test_preemption_matches_all_sequences(self):
        net = parse_model(PREEMPT_MODEL)
        found = {p.transitions for p in enumerate_paths(net, max_firings=2)}
        assert found == all_firing_sequences(net, 2) == {("te",), ("tint",)}

    @pytest.mark.parametrize("seed", range(200))
    def test_random_net_matches_all_sequences(self, random_net, seed):
        net = random_net(seed)
        found = {p.transitions for p in enumerate_paths(net, max_firings=3)}
        assert found == all_firing_sequences(net, 3)


class TestRandomPathProperties:
    @pytest.mark.parametrize("seed", range(100))
    def test_paths_replay(self, random_net, seed):
        net = random_net(seed)
        for path in enumerate_paths(net, max_firings=3):
            trace = replay_path(net, path)
            assert trace.fired == path.transitions
            assert trace.final_marking == path.end

    @pytest.mark.parametrize("seed", range(100))
    def test_triggered_transition_takes_priority(self, random_triggered_net, seed):
        net = random_triggered_net(seed)
        for path in enumerate_paths(net, max_firings=3):
            trace = replay_path(net, path)
            for before, s in zip(trace.markings, trace.steps):
                offered = before.with_pending(Counter(before.pending_map) + Counter(s.offered))
                enabled = enabled_transitions(net, offered)
                if any(net.transition(t).triggered for t in enabled):
                    assert net.transition(s.fired).triggered

    @pytest.mark.parametrize("seed", range(100))
    def test_interlock_orders_firings(self, random_net, seed):
        net = build_interlock(random_net(seed), "t0", "t1")
        for path in enumerate_paths(net, max_firings=4):
            fired = list(path.transitions)
            for i in range(len(fired) + 1):
                assert fired[:i].count("t1") <= fired[:i].count("t0")

    @pytest.mark.parametrize("seed", range(100))
    def test_interlock_pair_alternates(self, random_net, seed):
        net = build_interlock(random_net(seed), "t0", "t1")
        net = build_interlock(net, "t1", "t0", initially_marked=True)
        for path in enumerate_paths(net, max_firings=4):
            locked = [t for t in path.transitions if t in ("t0", "t1")]
            assert locked == ["t0", "t1"] * (len(locked) // 2) + ["t0"] * (len(locked) % 2)
