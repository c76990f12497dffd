"""Generalized oriented multigraphs.

An edge is attached either to an ordered pair of vertices (``Closed``) or to a
single vertex by its beginning (``BeginOnly``) or by its end (``EndOnly``).
Edges of the last two shapes are *open*.  Graphs are immutable values.
"""
from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

from .errors import MalformedGraph, PartialMap, SearchSpaceTooLarge, UnknownVertex

SEARCH_LIMIT = 10**7


@dataclass(frozen=True, order=True)
class Closed:
    begin: str
    end: str

    def __str__(self) -> str:
        return f"{self.begin}->{self.end}"


@dataclass(frozen=True, order=True)
class BeginOnly:
    begin: str

    def __str__(self) -> str:
        return f"{self.begin}->"


@dataclass(frozen=True, order=True)
class EndOnly:
    end: str

    def __str__(self) -> str:
        return f"->{self.end}"


Attachment = Union[Closed, BeginOnly, EndOnly]


def attachment_key(a: Attachment) -> tuple[int, str, str]:
    if isinstance(a, Closed):
        return (0, a.begin, a.end)
    if isinstance(a, BeginOnly):
        return (1, a.begin, "")
    return (2, "", a.end)


def begin_of(a: Attachment) -> str | None:
    return a.begin if isinstance(a, (Closed, BeginOnly)) else None


def end_of(a: Attachment) -> str | None:
    return a.end if isinstance(a, (Closed, EndOnly)) else None


def endpoints(a: Attachment) -> tuple[str, ...]:
    return tuple(x for x in (begin_of(a), end_of(a)) if x is not None)


def make_attachment(begin: str | None, end: str | None) -> Attachment:
    if begin is not None and end is not None:
        return Closed(begin, end)
    if begin is not None:
        return BeginOnly(begin)
    if end is not None:
        return EndOnly(end)
    raise ValueError("an attachment needs at least one side")


def map_attachment(a: Attachment, f: Callable[[str], str]) -> Attachment:
    """Apply ``f`` to every attached side, keeping the attachment shape."""
    b, e = begin_of(a), end_of(a)
    return make_attachment(None if b is None else f(b), None if e is None else f(e))


def restrict_attachment(a: Attachment, keep: Iterable[str] | frozenset[str]) -> Attachment | None:
    """Drop the sides attached outside ``keep``; ``None`` if nothing is left."""
    keep = keep if isinstance(keep, (set, frozenset)) else set(keep)
    b, e = begin_of(a), end_of(a)
    b = b if b in keep else None
    e = e if e in keep else None
    if b is None and e is None:
        return None
    return make_attachment(b, e)


def extends(big: Attachment, small: Attachment) -> bool:
    """True if every side attached in ``small`` is attached identically in ``big``."""
    sb, se = begin_of(small), end_of(small)
    if sb is not None and begin_of(big) != sb:
        return False
    if se is not None and end_of(big) != se:
        return False
    return True


@dataclass(frozen=True)
class GeneralizedMultigraph:
    vertices: frozenset[str] = frozenset()
    edges: Mapping[str, Attachment] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", dict(sorted(self.edges.items())))
        for e, a in self.edges.items():
            for v in endpoints(a):
                if v not in self.vertices:
                    raise MalformedGraph(f"edge {e} references unknown vertex {v}")

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)


@dataclass(frozen=True)
class VariableMultigraph:
    """Multigraph whose incidence is set-valued: each edge has admissible attachments."""

    vertices: frozenset[str] = frozenset()
    edges: Mapping[str, frozenset[Attachment]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(
            self, "edges", {e: frozenset(s) for e, s in sorted(self.edges.items())}
        )
        for e, alts in self.edges.items():
            if not alts:
                raise MalformedGraph(f"edge {e} has no admissible attachment")
            for a in alts:
                for v in endpoints(a):
                    if v not in self.vertices:
                        raise MalformedGraph(f"edge {e} references unknown vertex {v}")

    @property
    def is_deterministic(self) -> bool:
        return all(len(s) == 1 for s in self.edges.values())

    def resolution_count(self) -> int:
        return math.prod(len(s) for s in self.edges.values())

    def resolutions(self) -> Iterator[GeneralizedMultigraph]:
        names = list(self.edges)
        choices = [sorted(self.edges[e], key=attachment_key) for e in names]
        for combo in itertools.product(*choices):
            yield GeneralizedMultigraph(self.vertices, dict(zip(names, combo)))

    def fixed(self) -> GeneralizedMultigraph:
        if not self.is_deterministic:
            raise MalformedGraph("multigraph has set-valued incidence")
        return GeneralizedMultigraph(
            self.vertices, {e: next(iter(s)) for e, s in self.edges.items()}
        )


@dataclass(frozen=True)
class GraphMorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]


def is_conventional(g: GeneralizedMultigraph) -> bool:
    return all(isinstance(a, Closed) for a in g.edges.values())


def is_simple(g: GeneralizedMultigraph) -> bool:
    """True when the incidence function is injective (no parallel edges)."""
    attachments = list(g.edges.values())
    return len(set(attachments)) == len(attachments)


def open_edges(g: GeneralizedMultigraph) -> tuple[frozenset[str], frozenset[str]]:
    begin_open = frozenset(e for e, a in g.edges.items() if isinstance(a, BeginOnly))
    end_open = frozenset(e for e, a in g.edges.items() if isinstance(a, EndOnly))
    return begin_open, end_open


def components(g: GeneralizedMultigraph) -> list[frozenset[str]]:
    """Weakly connected components, ordered by their least vertex."""
    neighbours: dict[str, set[str]] = {v: set() for v in g.vertices}
    for a in g.edges.values():
        if isinstance(a, Closed):
            neighbours[a.begin].add(a.end)
            neighbours[a.end].add(a.begin)
    seen: set[str] = set()
    result = []
    for start in sorted(g.vertices):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in neighbours[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        result.append(frozenset(comp))
    return result


def fan_degrees(g: GeneralizedMultigraph, v: str) -> tuple[int, int]:
    if v not in g.vertices:
        raise UnknownVertex(v)
    fan_in = sum(1 for a in g.edges.values() if end_of(a) == v)
    fan_out = sum(1 for a in g.edges.values() if begin_of(a) == v)
    return fan_in, fan_out


def check_graph_morphism(
    g: GeneralizedMultigraph, h: GeneralizedMultigraph, m: GraphMorphism
) -> bool:
    missing_v = g.vertices - set(m.vertex_map)
    missing_e = set(g.edges) - set(m.edge_map)
    if missing_v or missing_e:
        raise PartialMap(f"unmapped: {sorted(missing_v | missing_e)}")
    for v in g.vertices:
        if m.vertex_map[v] not in h.vertices:
            return False
    for e, a in g.edges.items():
        target = m.edge_map[e]
        if target not in h.edges:
            return False
        if map_attachment(a, m.vertex_map.__getitem__) != h.edges[target]:
            return False
    return True


def identity_morphism(g: GeneralizedMultigraph) -> GraphMorphism:
    return GraphMorphism({v: v for v in g.vertices}, {e: e for e in g.edges})


def compose_graph_morphisms(first: GraphMorphism, second: GraphMorphism) -> GraphMorphism:
    """``second`` after ``first``."""
    return GraphMorphism(
        {v: second.vertex_map[w] for v, w in first.vertex_map.items()},
        {e: second.edge_map[f] for e, f in first.edge_map.items()},
    )


def enumerate_graph_morphisms(
    g: GeneralizedMultigraph, h: GeneralizedMultigraph
) -> list[GraphMorphism]:
    gv = g.sorted_vertices()
    hv = h.sorted_vertices()
    space = len(hv) ** len(gv) * max(1, len(h.edges)) ** len(g.edges)
    if space > SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"{space} candidate maps")
    result = []
    for images in itertools.product(hv, repeat=len(gv)):
        vmap = dict(zip(gv, images))
        per_edge = []
        for a in g.edges.values():
            want = map_attachment(a, vmap.__getitem__)
            per_edge.append([f for f, b in h.edges.items() if b == want])
        for combo in itertools.product(*per_edge):
            result.append(GraphMorphism(dict(vmap), dict(zip(g.edges, combo))))
    return result
