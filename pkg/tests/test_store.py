"""Tests for the relational store, composition and the relational file format."""

import random
from dataclasses import replace

import pytest

from edpn.core.exceptions import CompositionConflict, ModelParseError, StoreError, UnknownElementError
from edpn.fixtures import catalog
from edpn.net.model import ElementKind
from edpn.net.modelfile import dump_model
from edpn.store.compose import compose, compose_all, compose_models, compose_nets
from edpn.store.relations import (
    Entity, RelationalStore, check_store, connectivity_query, from_relations, to_relations,
)
from edpn.store.relfile import dump_relations, looks_relational, parse_relations


@pytest.fixture
def closing():
    return to_relations(catalog.load("gdc-closing"))


@pytest.fixture
def opening():
    return to_relations(catalog.load("gdc-opening"))


def with_entity(store, element_id, **changes):
    entities = dict(store.entities)
    entities[element_id] = replace(entities[element_id], **changes)
    return replace(store, entities=entities)


class TestToRelations:
    def test_gdc_basic_rows(self, gdc_basic):
        store = to_relations(gdc_basic)
        assert store.event_input == {("p1", "t1"), ("p1", "t3"), ("p2", "t2"), ("p3", "t4")}
        assert store.event_output == {("p7", "t1"), ("p9", "t2"), ("p8", "t3"), ("p9", "t4")}
        assert store.data_input == {("d1", "t1"), ("d2", "t2"), ("d4", "t3"), ("d5", "t4")}
        assert store.data_output == {("d2", "t1"), ("d4", "t2"), ("d5", "t3"), ("d1", "t4")}
        assert store.row_count == 16

    def test_entities(self, gdc_basic):
        store = to_relations(gdc_basic)
        assert store.entities["d1"] == Entity(ElementKind.PLACE, "Door Up", "door", initial_tokens=1)
        assert store.entities["d2"].initial_tokens is None
        assert store.entities["keypad"].kind is ElementKind.LANE

    def test_round_trip(self, gdc_safety_full):
        assert from_relations(to_relations(gdc_safety_full)).same_structure(gdc_safety_full)

    @pytest.mark.parametrize("seed", range(200))
    def test_random_round_trip(self, random_net, seed):
        net = random_net(seed)
        store = to_relations(net)
        assert from_relations(store).same_structure(net)
        assert parse_relations(dump_relations(store)) == store


class TestCheckStore:
    def test_dangling_row(self, closing):
        broken = replace(closing, data_input=closing.data_input | {("ghost", "t1")})
        with pytest.raises(StoreError, match="ghost"):
            check_store(broken)

    def test_mistyped_row(self, closing):
        broken = replace(closing, data_input=closing.data_input | {("p1", "t2")})
        with pytest.raises(StoreError, match="expected a place"):
            from_relations(broken)


class TestHalfRows:
    def test_closing_rows(self, closing):
        assert closing.event_input == {("p1", "t1"), ("p2", "t2")}
        assert closing.event_output == {("p7", "t1"), ("p9", "t2")}
        assert closing.data_input == {("d1", "t1"), ("d2", "t2")}
        assert closing.data_output == {("d2", "t1"), ("d4", "t2")}

    def test_opening_rows(self, opening):
        assert opening.event_input == {("p1", "t3"), ("p3", "t4")}
        assert opening.event_output == {("p8", "t3"), ("p9", "t4")}
        assert opening.data_input == {("d4", "t3"), ("d5", "t4")}
        assert opening.data_output == {("d5", "t3"), ("d1", "t4")}


class TestCompose:
    def test_halves_make_the_basic_controller(self, closing, opening, gdc_basic):
        assert from_relations(compose(closing, opening)).same_structure(gdc_basic)

    def test_empty_is_identity(self, closing):
        assert compose(closing, RelationalStore()) == closing
        assert compose(RelationalStore(), closing) == closing

    def test_commutative_and_idempotent(self, closing, opening):
        assert compose(closing, opening) == compose(opening, closing)
        assert compose(closing, closing) == closing

    def test_compose_all(self, closing, opening):
        assert compose_all([closing, opening]) == compose(closing, opening)
        assert compose_all([]).is_empty()

    def test_label_clash(self, closing, opening):
        with pytest.raises(CompositionConflict) as excinfo:
            compose(closing, with_entity(opening, "d1", label="Door Open"))
        assert excinfo.value.element_id == "d1"
        assert excinfo.value.fields == ("label",)

    def test_token_clash(self, closing, opening):
        with pytest.raises(CompositionConflict) as excinfo:
            compose(closing, with_entity(opening, "d1", initial_tokens=2))
        assert excinfo.value.fields == ("initial_tokens",)

    def test_one_sided_tokens_merge(self, closing, opening):
        assert opening.entities["d1"].initial_tokens is None
        assert compose(closing, opening).entities["d1"].initial_tokens == 1

    def test_compose_nets(self, gdc_basic):
        net = compose_nets(catalog.load("gdc-closing"), catalog.load("gdc-opening"))
        assert net.same_structure(gdc_basic)

    def test_compose_nets_clash(self):
        opening = catalog.load("gdc-opening")
        clashing = replace(opening, places=tuple(
            replace(p, lane="motor") if p.id == "d4" else p for p in opening.places
        ))
        with pytest.raises(CompositionConflict, match="d4"):
            compose_nets(catalog.load("gdc-closing"), clashing)

    def test_compose_models(self, gdc_basic):
        net = compose_models(catalog.load("gdc-closing"), catalog.load("gdc-opening"))
        assert dump_model(net) == dump_model(gdc_basic)


class TestConnectivity:
    def test_reachable(self, gdc_basic):
        store = to_relations(gdc_basic)
        assert connectivity_query(store, "p1", "p9")
        assert connectivity_query(store, "d1", "d1")

    def test_unreachable(self, closing):
        assert not connectivity_query(closing, "p7", "p1")
        assert not connectivity_query(closing, "d4", "d1")

    def test_unknown_id(self, closing):
        with pytest.raises(UnknownElementError):
            connectivity_query(closing, "p1", "nowhere")


class TestRelationalFile:
    def test_dump_sections(self, closing):
        text = dump_relations(closing)
        lines = text.splitlines()
        assert lines[0] == "[entities]"
        assert "[eventInput]" in lines and "p1,t1" in lines
        assert "[dataOutput]" in lines and "d4,t2" in lines
        assert "[patterns]" not in lines
        assert looks_relational(text)
        assert not looks_relational(catalog.fixture_text("gdc-closing"))

    def test_round_trip(self, gdc_safety_full):
        store = to_relations(gdc_safety_full)
        assert parse_relations(dump_relations(store)) == store

    def test_dump_is_order_independent(self, closing, opening):
        assert dump_relations(compose(closing, opening)) == dump_relations(compose(opening, closing))

    def test_patterns_section(self):
        from edpn.net.modelfile import parse_model
        from edpn.patterns.builders import build_activate

        net = parse_model("lane a A\ntrans t1 a one\ntrans t2 a two\n")
        store = to_relations(build_activate(net, controlled="t2", activator="t1"))
        text = dump_relations(store)
        assert "[patterns]" in text.splitlines()
        assert parse_relations(text).annotations == store.annotations

    @pytest.mark.parametrize("text, fragment", [
        ("lane a A\n", "before the first section"),
        ("[tables]\n", "unknown section"),
        ("[dataInput]\nd1,t1,x\n", "id,id"),
        ("[entities]\narc d1 -> t1\n", "own sections"),
    ])
    def test_parse_errors(self, text, fragment):
        with pytest.raises(ModelParseError, match=fragment):
            parse_relations(text)

    def test_duplicate_entities(self):
        with pytest.raises(StoreError, match="more than once"):
            parse_relations("[entities]\nlane a A\nplace d1 a one\nplace d1 a again\n")


def split_store(store, seed, parts=3):
    """Scatter rows and entities over several stores that compose back into the original."""
    rng = random.Random(seed)
    rows = [{name: set() for name in RelationalStore.RELATIONS} for _ in range(parts)]
    entities = [{} for _ in range(parts)]
    for name in RelationalStore.RELATIONS:
        for row in store.relation(name):
            rows[rng.randrange(parts)][name].add(row)
    for element_id, entity in store.entities.items():
        for i in rng.sample(range(parts), rng.randint(1, parts)):
            entities[i][element_id] = entity
    return [
        RelationalStore(
            **{name: frozenset(r[name]) for name in RelationalStore.RELATIONS},
            entities=e,
            annotations=store.annotations if i == 0 else frozenset(),
        )
        for i, (r, e) in enumerate(zip(rows, entities))
    ]


class TestRandomComposition:
    @pytest.mark.parametrize("seed", range(200))
    def test_parts_compose_back(self, random_net, seed):
        store = to_relations(random_net(seed))
        a, b, c = split_store(store, seed)
        assert compose_all([a, b, c]) == store
        assert compose_all([c, a, b]) == store

    @pytest.mark.parametrize("seed", range(200))
    def test_commutative(self, random_net, seed):
        a, b, _ = split_store(to_relations(random_net(seed)), seed)
        assert compose(a, b) == compose(b, a)

    @pytest.mark.parametrize("seed", range(200))
    def test_associative(self, random_net, seed):
        a, b, c = split_store(to_relations(random_net(seed)), seed)
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @pytest.mark.parametrize("seed", range(50))
    def test_tokens_on_one_side_merge(self, random_net, seed):
        store = to_relations(random_net(seed))
        _, b, c = split_store(store, seed)
        untokened = [
            replace(part, entities={k: replace(e, initial_tokens=None) for k, e in part.entities.items()})
            for part in (b, c)
        ]
        full = replace(store, event_input=frozenset())
        assert compose_all([*untokened, full]) == compose_all([b, c, full])
        assert compose_all([full, *untokened]).entities == store.entities
