"""Graphviz DOT rendering with one cluster per swim lane.

Shape conventions: data places are circles (double circle when initially
marked), input events are ``house`` nodes, output events ``invhouse``
nodes, and transitions are filled bars (bold outline when triggered).
Cross-lane arcs are dashed.
"""

from __future__ import annotations

from edpn.net.model import Direction, Net
from edpn.net.validation import ensure_valid


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quote(text: str) -> str:
    return '"' + _escape(text) + '"'


def _node(net: Net, element_id: str) -> str:
    label = net.label_of(element_id)
    text = _escape(element_id) if label == element_id else f"{_escape(element_id)}\\n{_escape(label)}"
    attrs = [f'label="{text}"']
    if element_id in net.place_map:
        marked = net.initial_marking.count(element_id)
        attrs.append("shape=doublecircle" if marked else "shape=circle")
        role = net.role_of(element_id)
        if role is not None:
            attrs.append(f"xlabel={_quote(str(getattr(role, 'value', role)))}")
    elif element_id in net.event_map:
        attrs.append("shape=house" if net.event_map[element_id].direction is Direction.INPUT else "shape=invhouse")
    else:
        attrs += ["shape=box", "style=filled", "fillcolor=black", "fontcolor=white", "height=0.2"]
        if net.transition(element_id).triggered:
            attrs.append("penwidth=3")
    return f"{_quote(element_id)} [{', '.join(attrs)}];"


def to_dot(net: Net, name: str = "edpn") -> str:
    """Render a valid net as DOT text; identical nets render identically."""
    ensure_valid(net)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [fontsize=10];"]
    members: dict[str, list[str]] = {lane.id: [] for lane in net.lanes}
    for element in (*net.events, *net.places, *net.transitions):
        members[element.lane].append(element.id)

    for index, lane in enumerate(sorted(net.lanes, key=lambda x: x.id)):
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f"    label={_quote(lane.name)};")
        lines.append("    style=rounded;")
        for element_id in sorted(members[lane.id]):
            lines.append(f"    {_node(net, element_id)}")
        lines.append("  }")

    for arc in sorted(net.arcs, key=lambda a: (a.source, a.target)):
        style = " [style=dashed]" if net.is_cross_lane(arc) else ""
        lines.append(f"  {_quote(arc.source)} -> {_quote(arc.target)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
