"""Resolve command-line model arguments.

``fixtures:NAME`` selects an embedded fixture; anything else is a file path.
Files holding a relational store are recognized by content.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from edpn.core.constants import FIXTURE_SCHEME
from edpn.fixtures import catalog
from edpn.net.model import Net
from edpn.net.modelfile import parse_model
from edpn.store.relations import RelationalStore, from_relations, to_relations
from edpn.store.relfile import looks_relational, parse_relations

logger = logging.getLogger(__name__)


def fixture_name(source: str) -> Optional[str]:
    if source.startswith(FIXTURE_SCHEME):
        return source[len(FIXTURE_SCHEME):]
    return None


def read_source(source: str) -> str:
    """Text behind a source argument; OSError for unreadable files."""
    name = fixture_name(source)
    if name is not None:
        return catalog.fixture_text(name)
    return Path(source).read_text(encoding="utf-8")


def load_net(source: str) -> Net:
    """Parse a model or relational file (or fixture) into a net, unvalidated."""
    name = fixture_name(source)
    if name is not None:
        return catalog.load(name)
    text = read_source(source)
    if looks_relational(text):
        logger.debug(f"{source}: relational content")
        return from_relations(parse_relations(text, source=source))
    return parse_model(text, source=source)


def load_store(source: str) -> RelationalStore:
    """Relational store behind a source; model files are exported first."""
    name = fixture_name(source)
    text = catalog.fixture_text(name) if name is not None else read_source(source)
    if looks_relational(text):
        return parse_relations(text, source=source)
    return to_relations(parse_model(text, source=source))
