"""Relational text format.

Sections::

    [entities]      model-format declaration, role and mark records
    [eventInput]    event,transition
    [eventOutput]   event,transition
    [dataInput]     place,transition
    [dataOutput]    place,transition
    [patterns]      <kind> <role>=<id> ...

Rows are sorted on output so that equal stores dump to identical text.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from pathlib import Path
from typing import Union

from edpn.core.exceptions import ModelParseError, StoreError
from edpn.net.modelfile import ID_PATTERN, model_records, parse_model, pattern_records
from edpn.net.model import Net
from edpn.store.relations import RelationalStore, entities_of, from_relations

logger = logging.getLogger(__name__)

SECTIONS = {
    "eventInput": "event_input",
    "eventOutput": "event_output",
    "dataInput": "data_input",
    "dataOutput": "data_output",
}
_HEADER = re.compile(r"^\[([A-Za-z]+)\]$")
_COMMENT = re.compile(r"(^|\s)#.*$")


def looks_relational(text: str) -> bool:
    """True when the first meaningful line is a section header."""
    for line in text.splitlines():
        stripped = _COMMENT.sub("", line).strip()
        if stripped:
            return bool(_HEADER.match(stripped))
    return False


def parse_relations(text: str, source: str = "<string>") -> RelationalStore:
    lines = text.splitlines()
    model_lines = [""] * len(lines)
    rows: dict[str, set] = {attr: set() for attr in SECTIONS.values()}
    section = None

    for lineno, raw in enumerate(lines, start=1):
        stripped = _COMMENT.sub("", raw).strip()
        if not stripped:
            continue
        header = _HEADER.match(stripped)
        if header:
            section = header.group(1)
            if section not in SECTIONS and section not in ("entities", "patterns"):
                raise ModelParseError(f"unknown section [{section}]", lineno, source)
            continue
        if section is None:
            raise ModelParseError("content before the first section header", lineno, source)
        if section == "entities":
            if stripped.split()[0] in ("arc", "pattern"):
                raise ModelParseError("arcs and patterns belong to their own sections", lineno, source)
            model_lines[lineno - 1] = stripped
        elif section == "patterns":
            model_lines[lineno - 1] = f"pattern {stripped}"
        else:
            parts = [p.strip() for p in stripped.split(",")]
            if len(parts) != 2 or not all(ID_PATTERN.fullmatch(p) for p in parts):
                raise ModelParseError(f"expected an 'id,id' row, got '{stripped}'", lineno, source)
            rows[SECTIONS[section]].add(tuple(parts))

    declared = parse_model("\n".join(model_lines), source)
    ids = [x.id for x in (*declared.lanes, *declared.events, *declared.places, *declared.transitions)]
    duplicates = sorted(eid for eid, n in Counter(ids).items() if n > 1)
    if duplicates:
        raise StoreError(f"{source}: entities declared more than once: {', '.join(duplicates)}")

    store = RelationalStore(
        entities=entities_of(declared),
        annotations=frozenset(declared.annotations),
        **{attr: frozenset(found) for attr, found in rows.items()},
    )
    logger.debug(f"Parsed {source}: {store.row_count} rows")
    return store


def load_relations_file(path: Union[str, Path]) -> RelationalStore:
    path = Path(path)
    return parse_relations(path.read_text(encoding="utf-8"), source=str(path))


def dump_relations(store: RelationalStore) -> str:
    """Canonical relational text."""
    net: Net = from_relations(store)
    lines = ["[entities]", *model_records(net)]
    for title, attr in SECTIONS.items():
        lines.append(f"[{title}]")
        lines += [f"{x},{t}" for x, t in sorted(store.relation(attr))]
    patterns = [record[len("pattern "):] for record in pattern_records(net)]
    if patterns:
        lines += ["[patterns]", *patterns]
    return "\n".join(lines) + "\n"
