"""Tests for enabledness, firing and conflict detection."""

import pytest

from edpn.core.exceptions import CapacityViolation, NotEnabledError, UnknownElementError
from edpn.net.firing import (
    check_marking, conflicts_at, enabled_transitions, fire, is_enabled, is_quiescent, shared_inputs,
)
from edpn.net.model import Marking


class TestEnabled:
    def test_nothing_enabled_without_events(self, gdc_basic):
        assert enabled_transitions(gdc_basic, gdc_basic.initial_marking) == frozenset()
        assert is_quiescent(gdc_basic, gdc_basic.initial_marking)

    def test_event_enables_matching_transition_only(self, gdc_basic):
        marking = Marking.of(["d1"], ["p1"])
        assert enabled_transitions(gdc_basic, marking) == frozenset({"t1"})
        assert not is_enabled(gdc_basic, marking, "t3")

    def test_unknown_place_in_marking(self, gdc_basic):
        with pytest.raises(UnknownElementError, match="ghost"):
            enabled_transitions(gdc_basic, Marking.of(["ghost"]))

    def test_unknown_pending_event(self, gdc_basic):
        with pytest.raises(UnknownElementError):
            check_marking(gdc_basic, Marking.of(["d1"], ["zz"]))


class TestFire:
    def test_fire_moves_token_and_emits(self, gdc_basic):
        after, emitted = fire(gdc_basic, Marking.of(["d1"], ["p1"]), "t1")
        assert after == Marking.of(["d2"])
        assert emitted == ("p7",)

    def test_fire_not_enabled(self, gdc_basic):
        with pytest.raises(NotEnabledError):
            fire(gdc_basic, gdc_basic.initial_marking, "t1")

    def test_fire_unknown_transition(self, gdc_basic):
        with pytest.raises(UnknownElementError):
            fire(gdc_basic, gdc_basic.initial_marking, "t99")

    def test_safe_mode_capacity(self, gdc_basic):
        marking = Marking.of(["d1", "d2"], ["p1"])
        with pytest.raises(CapacityViolation) as excinfo:
            fire(gdc_basic, marking, "t1")
        assert excinfo.value.place == "d2"
        after, _ = fire(gdc_basic, marking, "t1", safe=False)
        assert after.count("d2") == 2

    def test_self_loop_keeps_token(self, gdc_safety_full):
        marking = Marking.of(["d2", "lb_ed", "os_ed"], ["p5"])
        after, emitted = fire(gdc_safety_full, marking, "t3")
        assert after == Marking.of(["d3", "lb_ed", "os_ed", "trig"])
        assert emitted == ("p9",)

    def test_cross_lane_event_becomes_pending(self, relay_net):
        after, emitted = fire(relay_net, Marking.of(["idle", "dark"], ["press"]), "send")
        assert emitted == ("signal",)
        assert after.pending_map == {"signal": 1}
        assert enabled_transitions(relay_net, after) == frozenset({"light"})


class TestConflicts:
    def test_shared_place_conflict(self, conflict_net):
        marking = Marking.of(["shared"], ["e1", "e2"])
        assert conflicts_at(conflict_net, marking) == frozenset({("action1", "action2")})
        assert shared_inputs(conflict_net, marking, "action1", "action2") == ("shared",)

    def test_enough_tokens_is_no_conflict(self, conflict_net):
        marking = Marking.of({"shared": 2}, ["e1", "e2"])
        assert conflicts_at(conflict_net, marking) == frozenset()

    def test_one_side_disabled_is_no_conflict(self, conflict_net):
        assert conflicts_at(conflict_net, Marking.of(["shared"], ["e1"])) == frozenset()

    def test_sensor_conflict(self, gdc_safety_full):
        marking = Marking.of(["d2", "lb_ed", "os_ed"], ["p5", "p6"])
        assert ("t3", "t6") in conflicts_at(gdc_safety_full, marking)

    def test_restored_input_is_not_contested(self, gdc_safety_full):
        marking = Marking.of(["d3", "d5", "trig", "lb_ed", "os_ed"], ["p3", "p4"])
        assert {"t4", "t5"} <= enabled_transitions(gdc_safety_full, marking)
        assert shared_inputs(gdc_safety_full, marking, "t4", "t5") == ()
        assert ("t4", "t5") not in conflicts_at(gdc_safety_full, marking)


class TestRandomFiring:
    @pytest.mark.parametrize("seed", range(200))
    def test_firing_rule(self, random_net, seed):
        net = random_net(seed)
        marking = net.initial_marking.with_pending(net.input_events)
        for t in sorted(enabled_transitions(net, marking)):
            after, emitted = fire(net, marking, t, safe=False)
            assert list(emitted) == sorted(emitted)
            assert all(count > 0 for _, count in after.tokens)
            for place in net.place_ids:
                delta = (place in net.data_outputs(t)) - (place in net.data_inputs(t))
                assert after.count(place) == marking.count(place) + delta
            for event in net.event_inputs(t):
                assert after.pending_count(event) == marking.pending_count(event) - 1

    @pytest.mark.parametrize("seed", range(200))
    def test_conflicting_transitions_disable_each_other(self, random_net, seed):
        net = random_net(seed)
        marking = net.initial_marking.with_pending(net.input_events)
        for a, b in conflicts_at(net, marking):
            after_a, _ = fire(net, marking, a, safe=False)
            after_b, _ = fire(net, marking, b, safe=False)
            assert not is_enabled(net, after_a, b)
            assert not is_enabled(net, after_b, a)
