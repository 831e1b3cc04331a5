"""Tests for pattern registry."""

import pytest

from edpn.patterns.base import PatternKind
from edpn.patterns.recognizers import registry
from edpn.patterns.registry import PatternRegistry


@pytest.fixture
def scratch_registry(monkeypatch):
    """The singleton with a private copy of its table."""
    monkeypatch.setattr(registry, "_patterns", dict(registry._patterns))
    return registry


class TestPatternRegistry:
    def test_singleton(self):
        assert PatternRegistry() is registry

    def test_every_kind_registered(self):
        assert [meta.kind for meta in registry.list_patterns()] == list(PatternKind)

    def test_register_decorator(self, scratch_registry):
        @scratch_registry.register(
            PatternKind.CONFLICT, roles=("place", "first", "second"), description="test conflict",
        )
        def recognize_nothing(net):
            return iter(())

        meta = scratch_registry.get(PatternKind.CONFLICT)
        assert meta.description == "test conflict"
        assert meta.recognizer is recognize_nothing

    def test_registration_is_restored(self):
        assert registry.get(PatternKind.CONFLICT).description != "test conflict"

    def test_roles_of(self):
        assert registry.roles_of(PatternKind.INTERLOCK) == ("lockPlace", "preferred", "secondary")
        assert registry.roles_of("acceptReject")[:2] == ("requestPlace", "waitPlace")

    def test_optional_roles(self):
        meta = registry.get(PatternKind.TRIGGER)
        assert meta.optional_roles == ("disabler",)
        assert "disabler" not in meta.required_roles

    def test_recognize_unregistered_kind(self, scratch_registry, gdc_basic):
        del scratch_registry._patterns[PatternKind.POSTPONE]
        assert scratch_registry.get(PatternKind.POSTPONE) is None
        assert scratch_registry.roles_of(PatternKind.POSTPONE) == ()
        assert scratch_registry.recognize(gdc_basic, PatternKind.POSTPONE) == []

    def test_describe(self):
        text = registry.describe()
        assert "- trigger(triggerPlace, triggerer, controlled, disabler?)" in text
        assert len(text.splitlines()) == len(PatternKind)
