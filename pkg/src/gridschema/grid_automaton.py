"""Constant grid automata with ports, their grids and open/closed classification."""
from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import InvalidAutomaton
from .kinds import Kind
from .multigraph import (
    Attachment,
    BeginOnly,
    Closed,
    EndOnly,
    GeneralizedMultigraph,
    GraphMorphism,
    begin_of,
    end_of,
    endpoints,
    is_conventional,
    map_attachment,
    open_edges,
)


class Direction(str, enum.Enum):
    INLET = "in"
    OUTLET = "out"


class Locus(str, enum.Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"


class LinkClass(str, enum.Enum):
    INFORMATION = "info"
    CONTROL = "control"
    PROCESS = "process"


class Channel(str, enum.Enum):
    SIMPLE = "simple"
    FILTERING = "filtering"
    CORRECTING = "correcting"


class Role(str, enum.Enum):
    CLOSED = "closed"
    ACCEPTOR = "acceptor"
    TRANSMITTER = "transmitter"
    TRANSDUCER = "transducer"


PORT_KIND = Kind(("port",))
SIMPLE_CHANNEL = Kind(("simple",))


@dataclass(frozen=True)
class Port:
    direction: Direction
    locus: Locus = Locus.INTERNAL
    kind: Kind = PORT_KIND


@dataclass(frozen=True)
class Link:
    link_class: LinkClass
    kind: Kind = SIMPLE_CHANNEL

    @property
    def channel(self) -> Channel | None:
        try:
            return Channel(self.kind.path[0])
        except ValueError:
            return None


@dataclass(frozen=True, order=True)
class Target:
    """Element an external port is assigned to."""

    sort: str  # "node" | "port" | "link"
    id: str

    def __str__(self) -> str:
        return f"{self.sort} {self.id}"


@dataclass(frozen=True)
class Violation:
    code: str
    element: str
    message: str = ""

    def __str__(self) -> str:
        return f"{self.code}({self.element})" + (f": {self.message}" if self.message else "")


@dataclass(frozen=True)
class Classification:
    role: Role
    potentially_open: bool


def role_from(accepts: bool, transmits: bool) -> Role:
    if accepts and transmits:
        return Role.TRANSDUCER
    if accepts:
        return Role.ACCEPTOR
    if transmits:
        return Role.TRANSMITTER
    return Role.CLOSED


@dataclass(frozen=True)
class GridAutomaton:
    name: str = "A"
    nodes: Mapping[str, Kind] = field(default_factory=dict)
    ports: Mapping[str, Port] = field(default_factory=dict)
    links: Mapping[str, Link] = field(default_factory=dict)
    internal_assignment: Mapping[str, str] = field(default_factory=dict)
    adjacency: Mapping[str, Attachment] = field(default_factory=dict)
    external_assignment: Mapping[str, Target] = field(default_factory=dict)
    annotations: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("nodes", "ports", "links", "internal_assignment", "adjacency",
                     "external_assignment"):
            object.__setattr__(self, name, dict(sorted(getattr(self, name).items())))

    def internal_ports(self) -> list[str]:
        return [p for p, port in self.ports.items() if port.locus is Locus.INTERNAL]

    def external_ports(self) -> list[str]:
        return [p for p, port in self.ports.items() if port.locus is Locus.EXTERNAL]


@dataclass(frozen=True)
class BasicGridAutomaton:
    name: str = "A"
    nodes: Mapping[str, Kind] = field(default_factory=dict)
    links: Mapping[str, Link] = field(default_factory=dict)
    node_adjacency: Mapping[str, Attachment] = field(default_factory=dict)
    annotations: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("nodes", "links", "node_adjacency"):
            object.__setattr__(self, name, dict(sorted(getattr(self, name).items())))


def validate_grid_automaton(ga: GridAutomaton) -> list[Violation]:
    out: list[Violation] = []
    ids: dict[str, str] = {}
    for sort, table in (("node", ga.nodes), ("port", ga.ports), ("link", ga.links)):
        for i in table:
            if i in ids:
                out.append(Violation("DuplicateId", i, f"used as {ids[i]} and {sort}"))
            ids[i] = sort
    for p, port in ga.ports.items():
        if port.locus is Locus.INTERNAL:
            owner = ga.internal_assignment.get(p)
            if owner is None or owner not in ga.nodes:
                out.append(Violation("DanglingPort", p, "internal port without owning node"))
            if p in ga.external_assignment:
                out.append(Violation("LocusConflict", p, "internal port has external assignment"))
        elif p in ga.internal_assignment:
            out.append(Violation("LocusConflict", p, "external port assigned to a node"))
    for p in ga.internal_assignment:
        if p not in ga.ports:
            out.append(Violation("UnknownPort", p))
    for p, t in ga.external_assignment.items():
        if p not in ga.ports:
            out.append(Violation("UnknownPort", p))
        table = {"node": ga.nodes, "port": ga.ports, "link": ga.links}.get(t.sort)
        if table is None or t.id not in table:
            out.append(Violation("UnknownTarget", p, str(t)))
        elif t.sort == "port" and ga.ports[t.id].locus is not Locus.INTERNAL:
            out.append(Violation("UnknownTarget", p, "external ports attach to internal ports"))
    for l in ga.links:
        if l not in ga.adjacency:
            out.append(Violation("UnattachedLink", l))
    for l, a in ga.adjacency.items():
        if l not in ga.links:
            out.append(Violation("UnknownLink", l))
            continue
        out.extend(_attachment_violations(l, a, ga.ports))
    return out


def _attachment_violations(link: str, a: Attachment, ports: Mapping[str, Port]) -> list[Violation]:
    out = []
    b, e = begin_of(a), end_of(a)
    for side, p, want in (("begin", b, Direction.OUTLET), ("end", e, Direction.INLET)):
        if p is None:
            continue
        port = ports.get(p)
        if port is None:
            out.append(Violation("UnknownPort", link, f"{side} at {p}"))
        elif port.locus is not Locus.INTERNAL:
            out.append(Violation("ExternalAttachment", link, f"{side} at external port {p}"))
        elif port.direction is not want:
            out.append(Violation("DirectionViolation", link, f"{side} at {port.direction.value}let {p}"))
    return out


def _require_valid(ga: GridAutomaton) -> None:
    violations = validate_grid_automaton(ga)
    if violations:
        raise InvalidAutomaton(violations)


def derive_grid(ga: GridAutomaton) -> GeneralizedMultigraph:
    _require_valid(ga)
    owner = ga.internal_assignment.__getitem__
    return GeneralizedMultigraph(
        frozenset(ga.nodes), {l: map_attachment(a, owner) for l, a in ga.adjacency.items()}
    )


def derive_connection_grid(ga: GridAutomaton) -> GeneralizedMultigraph:
    _require_valid(ga)
    return GeneralizedMultigraph(frozenset(ga.internal_ports()), dict(ga.adjacency))


def owner_morphism(ga: GridAutomaton) -> GraphMorphism:
    """Connection grid to grid: every port goes to its node, links to themselves."""
    return GraphMorphism(
        {p: ga.internal_assignment[p] for p in ga.internal_ports()},
        {l: l for l in ga.links},
    )


def free_ports(ga: GridAutomaton) -> list[str]:
    attached = {p for a in ga.adjacency.values() for p in endpoints(a)}
    out = []
    for p, port in ga.ports.items():
        if port.locus is Locus.INTERNAL and p not in attached:
            out.append(p)
        elif port.locus is Locus.EXTERNAL and p not in ga.external_assignment:
            out.append(p)
    return out


def classify_automaton(ga: GridAutomaton) -> Classification:
    grid = derive_grid(ga)
    begin_open, end_open = open_edges(grid)
    ext = [ga.ports[p].direction for p in ga.external_ports()]
    accepts = Direction.INLET in ext or bool(end_open)
    transmits = Direction.OUTLET in ext or bool(begin_open)
    role = role_from(accepts, transmits)
    assert (role is Role.CLOSED) == (is_conventional(grid) and not ext)
    return Classification(role, bool(free_ports(ga)))


def to_basic(ga: GridAutomaton) -> BasicGridAutomaton:
    grid = derive_grid(ga)
    return BasicGridAutomaton(ga.name, dict(ga.nodes), dict(ga.links), dict(grid.edges))


def basic_grid(ba: BasicGridAutomaton) -> GeneralizedMultigraph:
    return GeneralizedMultigraph(frozenset(ba.nodes), dict(ba.node_adjacency))


def validate_basic_automaton(ba: BasicGridAutomaton) -> list[Violation]:
    out = []
    for l in ba.links:
        if l not in ba.node_adjacency:
            out.append(Violation("UnattachedLink", l))
    for l, a in ba.node_adjacency.items():
        if l not in ba.links:
            out.append(Violation("UnknownLink", l))
        for v in endpoints(a):
            if v not in ba.nodes:
                out.append(Violation("UnknownNode", l, v))
    return out


__all__ = [
    "BeginOnly", "Closed", "EndOnly", "Direction", "Locus", "LinkClass", "Channel", "Role",
    "Port", "Link", "Target", "Violation", "Classification", "GridAutomaton",
    "BasicGridAutomaton", "validate_grid_automaton", "derive_grid", "derive_connection_grid",
    "owner_morphism", "free_ports", "classify_automaton", "to_basic", "basic_grid",
    "validate_basic_automaton", "role_from", "PORT_KIND", "SIMPLE_CHANNEL",
]
