"""Embedded catalog of garage door controller models.

Models ship as package data and are read through importlib.resources, so
loading never depends on the working directory.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from importlib import resources

from edpn.core.exceptions import FixtureNotFoundError
from edpn.net.model import Net
from edpn.net.modelfile import parse_model
from edpn.net.validation import ensure_valid

logger = logging.getLogger(__name__)

CATALOG: dict[str, str] = {
    "gdc-basic": "Garage door open/close cycle without safety devices",
    "gdc-closing": "Door closing half of gdc-basic",
    "gdc-opening": "Door opening half of gdc-basic",
    "gdc-safety-enable": "Closing enables the light beam and obstacle sensors",
    "gdc-safety-full": "Sensor stop with triggered motor reversal",
    "conflict-pair": "Two lanes competing for one shared place",
}


def available() -> list[str]:
    return sorted(CATALOG)


def fixture_text(name: str) -> str:
    """Raw model text of a fixture."""
    if name not in CATALOG:
        raise FixtureNotFoundError(name, available())
    resource = resources.files("edpn.fixtures").joinpath("models").joinpath(f"{name}.edpn")
    return resource.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> Net:
    """Parse and validate a fixture."""
    net = parse_model(fixture_text(name), source=f"fixtures:{name}")
    ensure_valid(net)
    logger.debug(f"Loaded fixture {name}")
    return net
