"""Tests for structural validation."""

import pytest

from edpn.core.exceptions import NetValidationError
from edpn.fixtures import catalog
from edpn.net.modelfile import parse_model
from edpn.net.validation import Severity, ViolationKind, ensure_valid, errors, triggers_of, validate


def kinds(net, safe=True):
    return [v.kind for v in validate(net, safe=safe)]


class TestFixtures:
    @pytest.mark.parametrize("name", catalog.available())
    def test_fixture_has_no_violations(self, name):
        assert validate(catalog.load(name)) == []

    def test_triggers_of(self, gdc_safety_full):
        assert triggers_of(gdc_safety_full, "t4") == ("trig",)
        assert triggers_of(gdc_safety_full, "t5") == ()


class TestTripartite:
    def test_place_to_place(self):
        net = parse_model("lane a A\nplace d1 a one\nplace d2 a two\narc d1 -> d2\n")
        (violation,) = validate(net)
        assert violation.kind is ViolationKind.TRIPARTITE
        assert violation.element == "d1"
        assert violation.line == 4
        assert "line 4" in str(violation)

    def test_transition_to_transition(self):
        net = parse_model("lane a A\ntrans t1 a one\ntrans t2 a two\narc t1 -> t2\n")
        assert kinds(net) == [ViolationKind.TRIPARTITE]

    def test_event_to_place(self):
        net = parse_model("lane a A\nevent e in a go\nplace d1 a one\narc e -> d1\n")
        assert kinds(net) == [ViolationKind.TRIPARTITE]


class TestEvents:
    def test_output_event_consumed(self):
        net = parse_model("lane a A\nevent o out a done\ntrans t a use\narc o -> t\n")
        assert kinds(net) == [ViolationKind.OUTPUT_EVENT_CONSUMED]

    def test_input_event_produced_in_own_lane_is_a_warning(self):
        net = parse_model("lane a A\nevent e in a go\ntrans t a echo\narc t -> e\n")
        (violation,) = validate(net)
        assert violation.kind is ViolationKind.INPUT_EVENT_PRODUCED
        assert violation.severity is Severity.WARNING
        assert errors([violation]) == []
        assert ensure_valid(net) is net

    def test_cross_lane_handoff_is_fine(self, relay_net):
        assert validate(relay_net) == []
        (arc,) = relay_net.cross_lane_arcs
        assert (arc.source, arc.target) == ("send", "signal")


class TestReferences:
    def test_dangling_arc_target(self):
        net = parse_model("lane a A\ntrans t a one\narc t -> ghost\n")
        (violation,) = validate(net)
        assert violation.kind is ViolationKind.DANGLING_REFERENCE
        assert violation.element == "ghost"

    def test_unknown_lane(self):
        net = parse_model("lane a A\nplace d1 nowhere one\n")
        assert kinds(net) == [ViolationKind.DANGLING_REFERENCE]

    def test_duplicate_id(self):
        net = parse_model("lane a A\nplace d1 a one\ntrans d1 a clash\n")
        assert ViolationKind.DUPLICATE_ID in kinds(net)

    def test_duplicate_arc(self):
        net = parse_model("lane a A\nplace d1 a one\ntrans t a use\narc d1 -> t\narc d1 -> t\n")
        assert kinds(net) == [ViolationKind.DUPLICATE_ARC]

    def test_marking_of_undeclared_place(self):
        net = parse_model("lane a A\nmark ghost\n")
        assert kinds(net) == [ViolationKind.MARKING_REFERENCE]


class TestRolesAndPriority:
    def test_unknown_role(self):
        net = parse_model("lane a A\nplace d1 a one\nrole d1 mystery\n")
        assert kinds(net) == [ViolationKind.UNKNOWN_ROLE]

    def test_triggered_without_trigger_place(self):
        net = parse_model("lane a A\nplace d1 a one\ntrans t a triggered go\narc d1 -> t\n")
        assert kinds(net) == [ViolationKind.TRIGGER_CLASS_MISMATCH]

    def test_trigger_self_loop_requires_triggered_class(self):
        net = parse_model(
            "lane a A\nplace trig a trig\ntrans t a go\nrole trig trigger\narc trig -> t\narc t -> trig\n"
        )
        (violation,) = validate(net)
        assert violation.kind is ViolationKind.TRIGGER_CLASS_MISMATCH
        assert "expected triggered" in violation.message

    def test_trigger_disabler_stays_normal(self):
        net = parse_model(
            "lane a A\nplace trig a trig\ntrans t a triggered go\ntrans off a stop\nrole trig trigger\n"
            "arc trig -> t\narc t -> trig\narc trig -> off\n"
        )
        assert validate(net) == []


class TestCapacity:
    def test_safe_mode_rejects_two_tokens(self):
        net = parse_model("lane a A\nplace d1 a one\nmark d1 2\n")
        assert kinds(net) == [ViolationKind.CAPACITY]
        assert kinds(net, safe=False) == []

    def test_ensure_valid_raises_with_violations(self):
        net = parse_model("lane a A\nplace d1 a one\nplace d2 a two\narc d1 -> d2\n")
        with pytest.raises(NetValidationError) as excinfo:
            ensure_valid(net)
        assert excinfo.value.violations[0].kind is ViolationKind.TRIPARTITE


class TestRandomNets:
    @pytest.mark.parametrize("seed", range(200))
    def test_generated_nets_are_valid(self, random_net, seed):
        assert errors(validate(random_net(seed))) == []
