"""Graphviz DOT export at node level.

Nodes are labelled by kind or variable, information links are solid,
control links dashed and process links dotted.  An open side ends at a
point-shaped phantom terminal.  Set-valued links draw one edge per
admissible attachment, so edge lines equal the number of alternatives.
"""
from __future__ import annotations

import json

from .grid_automaton import BasicGridAutomaton, GridAutomaton, LinkClass
from .multigraph import attachment_key, begin_of, end_of
from .schema import Constant, Schema, as_schema, element_variables, node_adjacency_sets

STYLE = {LinkClass.INFORMATION: "solid", LinkClass.CONTROL: "dashed", LinkClass.PROCESS: "dotted"}


def _q(s: str) -> str:
    return json.dumps(s)


def _label(e) -> str:
    if isinstance(e, Constant):
        return str(e.kind)
    if element_variables(e) and not hasattr(e, "path"):
        return f"{e.name} : {e.range}"
    return str(e)


def export_dot(value: Schema | GridAutomaton | BasicGridAutomaton, rankdir: str = "LR",
               show_links: bool = True) -> str:
    s = as_schema(value) if isinstance(value, (GridAutomaton, BasicGridAutomaton)) else value
    lines = [f"digraph {_q(s.name)} {{", f"  rankdir={rankdir};"]
    for n, e in s.nodes.items():
        lines.append(f"  {_q(n)} [label={_q(n + chr(10) + _label(e))}];")
    phantoms = []
    for l, alts in node_adjacency_sets(s).items():
        slot = s.links[l]
        for i, a in enumerate(sorted(alts, key=attachment_key)):
            b, e = begin_of(a), end_of(a)
            if b is None:
                b = f"_open_{l}_{i}_begin"
                phantoms.append(b)
            if e is None:
                e = f"_open_{l}_{i}_end"
                phantoms.append(e)
            label = f", label={_q(l)}" if show_links else ""
            lines.append(f"  {_q(b)} -> {_q(e)} [style={STYLE[slot.link_class]}{label}];")
    for p in phantoms:
        lines.append(f"  {_q(p)} [shape=point, label=\"\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_counts(text: str) -> tuple[int, int]:
    """(real node declarations, edge lines) in text produced by :func:`export_dot`."""
    nodes = sum(1 for ln in text.splitlines()
                if ln.strip().endswith("];") and "->" not in ln and "shape=point" not in ln)
    edges = sum(1 for ln in text.splitlines() if " -> " in ln)
    return nodes, edges
