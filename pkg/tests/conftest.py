"""Shared test fixtures for edpn."""

import logging
import random

import pytest

from edpn.fixtures import catalog
from edpn.net.model import (
    Arc, ArcKind, DataPlace, Direction, Lane, Marking, Net, PortEvent, Transition,
)
from edpn.net.modelfile import parse_model
from edpn.patterns.builders import build_trigger


@pytest.fixture(autouse=True)
def reset_edpn_logger():
    """Drop handlers bound to streams that a test (or CliRunner) has closed."""
    yield
    logger = logging.getLogger("edpn")
    for handler in logger.handlers:
        handler.close()
    logger.handlers.clear()


@pytest.fixture
def gdc_basic():
    return catalog.load("gdc-basic")


@pytest.fixture
def gdc_safety_full():
    return catalog.load("gdc-safety-full")


@pytest.fixture
def conflict_net():
    return catalog.load("conflict-pair")


@pytest.fixture
def relay_net():
    """Two lanes: a button press in lane a signals lane b, which lights a lamp."""
    return parse_model(
        """
        lane a Panel
        lane b Lamp
        event press in a button pressed
        event signal in b relay signal
        event lit out b lamp lit
        place idle a idle
        place dark b dark
        place bright b bright
        trans send a send signal
        trans light b switch on
        arc press -> send
        arc idle -> send
        arc send -> idle
        arc send -> signal
        arc signal -> light
        arc dark -> light
        arc light -> bright
        arc light -> lit
        mark idle
        mark dark
        """,
        source="relay",
    )


def _random_net(seed: int) -> Net:
    rng = random.Random(seed)
    lanes = tuple(Lane(f"L{i}", f"lane {i}") for i in range(rng.randint(1, 3)))
    lane_ids = [lane.id for lane in lanes]
    places = tuple(DataPlace(f"d{i}", f"place {i}", rng.choice(lane_ids)) for i in range(rng.randint(2, 5)))
    inputs = tuple(
        PortEvent(f"p{i}", f"input {i}", Direction.INPUT, rng.choice(lane_ids)) for i in range(rng.randint(1, 3))
    )
    outputs = tuple(
        PortEvent(f"o{i}", f"output {i}", Direction.OUTPUT, rng.choice(lane_ids)) for i in range(rng.randint(1, 2))
    )
    place_ids = [p.id for p in places]
    transitions, arcs = [], []
    for i in range(rng.randint(2, 5)):
        tid = f"t{i}"
        transitions.append(Transition(tid, f"transition {i}", rng.choice(lane_ids)))
        for place in rng.sample(place_ids, rng.randint(1, min(2, len(place_ids)))):
            arcs.append(Arc(place, tid, ArcKind.IN))
        if rng.random() < 0.7:
            arcs.append(Arc(rng.choice(inputs).id, tid, ArcKind.IN))
        for place in rng.sample(place_ids, rng.randint(1, min(2, len(place_ids)))):
            arcs.append(Arc(tid, place, ArcKind.OUT))
        if rng.random() < 0.5:
            arcs.append(Arc(tid, rng.choice(outputs).id, ArcKind.OUT))
    marked = rng.sample(place_ids, rng.randint(1, len(place_ids)))
    return Net(
        lanes=lanes,
        events=inputs + outputs,
        places=places,
        transitions=tuple(transitions),
        arcs=tuple(arcs),
        initial_marking=Marking.of(marked),
        name=f"random-{seed}",
    )


@pytest.fixture
def random_net():
    """Factory for seeded, structurally valid nets without triggered transitions."""
    return _random_net


def _random_triggered_net(seed: int) -> Net:
    net = _random_net(seed)
    return build_trigger(net, controlled="t0", triggerer="t1")


@pytest.fixture
def random_triggered_net():
    """Factory for seeded nets in which t1 triggers t0."""
    return _random_triggered_net
