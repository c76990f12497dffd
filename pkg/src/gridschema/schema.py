"""Basic and port schemas.

A schema has the shape of a grid automaton, but every node, port and link slot
holds a :class:`Constant`, a :class:`Variable` with a range, or a
:class:`Parameterized` kind whose parameters may be variables.  Assignment and
adjacency entries are nonempty sets of admissible targets; a singleton set is
an ordinary (deterministic) entry.
"""
from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Union

from .errors import InvalidSchema
from .grid_automaton import (
    PORT_KIND,
    SIMPLE_CHANNEL,
    BasicGridAutomaton,
    Classification,
    Direction,
    GridAutomaton,
    Link,
    LinkClass,
    Locus,
    Port,
    Role,
    Target,
    Violation,
    role_from,
)
from .kinds import (
    Kind,
    KindSet,
    ParamRange,
    ParamValue,
    RangeDescriptor,
    Universal,
    range_contains,
    range_is_empty,
    range_subset,
)
from .multigraph import (
    Attachment,
    BeginOnly,
    EndOnly,
    GeneralizedMultigraph,
    GraphMorphism,
    VariableMultigraph,
    attachment_key,
    begin_of,
    end_of,
    endpoints,
    make_attachment,
)


@dataclass(frozen=True)
class Constant:
    kind: Kind

    def __str__(self) -> str:
        return str(self.kind)


@dataclass(frozen=True)
class Variable:
    name: str
    range: RangeDescriptor

    def __str__(self) -> str:
        return f"{self.name}:{self.range}"


ParamSlot = Union[ParamValue, Variable]


@dataclass(frozen=True)
class Parameterized:
    """A constant kind some of whose parameters are variables (``T with tapes=x``)."""

    path: tuple[str, ...]
    params: tuple[tuple[str, ParamSlot], ...]

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "params", tuple(sorted(self.params, key=lambda kv: kv[0])))

    def __str__(self) -> str:
        return "/".join(self.path) + " with " + ", ".join(f"{k}={v}" for k, v in self.params)


SchemaElement = Union[Constant, Variable, Parameterized]


def parameterized(path: tuple[str, ...], params: Mapping[str, ParamSlot]) -> SchemaElement:
    """Build a parameterized element, collapsing to a constant when nothing is variable."""
    items = tuple(params.items())
    if any(isinstance(v, Variable) for _, v in items):
        return Parameterized(tuple(path), items)
    return Constant(Kind(tuple(path), items))


def const(path: str, **params: ParamValue) -> Constant:
    return Constant(Kind(tuple(path.split("/")), tuple(params.items())))


@dataclass(frozen=True)
class PortSlot:
    direction: Direction
    locus: Locus = Locus.INTERNAL
    element: SchemaElement = Constant(PORT_KIND)


@dataclass(frozen=True)
class LinkSlot:
    link_class: LinkClass
    element: SchemaElement = Constant(SIMPLE_CHANNEL)


def _sorted_dict(d: Mapping) -> dict:
    return dict(sorted(d.items()))


def _frozen_sets(d: Mapping) -> dict:
    return {k: frozenset(v) for k, v in sorted(d.items())}


@dataclass(frozen=True)
class PortSchema:
    name: str = "S"
    nodes: Mapping[str, SchemaElement] = field(default_factory=dict)
    ports: Mapping[str, PortSlot] = field(default_factory=dict)
    links: Mapping[str, LinkSlot] = field(default_factory=dict)
    internal_assignment: Mapping[str, frozenset[str]] = field(default_factory=dict)
    adjacency: Mapping[str, frozenset[Attachment]] = field(default_factory=dict)
    external_assignment: Mapping[str, frozenset[Target]] = field(default_factory=dict)
    annotations: tuple[str, ...] = field(default=(), compare=False)
    provenance: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("nodes", "ports", "links"):
            object.__setattr__(self, name, _sorted_dict(getattr(self, name)))
        for name in ("internal_assignment", "adjacency", "external_assignment"):
            object.__setattr__(self, name, _frozen_sets(getattr(self, name)))

    def internal_ports(self) -> list[str]:
        return [p for p, s in self.ports.items() if s.locus is Locus.INTERNAL]

    def external_ports(self) -> list[str]:
        return [p for p, s in self.ports.items() if s.locus is Locus.EXTERNAL]


@dataclass(frozen=True)
class BasicSchema:
    name: str = "S"
    nodes: Mapping[str, SchemaElement] = field(default_factory=dict)
    links: Mapping[str, LinkSlot] = field(default_factory=dict)
    node_adjacency: Mapping[str, frozenset[Attachment]] = field(default_factory=dict)
    annotations: tuple[str, ...] = field(default=(), compare=False)
    provenance: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("nodes", "links"):
            object.__setattr__(self, name, _sorted_dict(getattr(self, name)))
        object.__setattr__(self, "node_adjacency", _frozen_sets(self.node_adjacency))

    @property
    def ports(self) -> Mapping[str, PortSlot]:
        return {}


Schema = Union[PortSchema, BasicSchema]


class Occurrence(NamedTuple):
    sort: str  # "node" | "port" | "link"
    slot: str
    param: str | None = None

    def __str__(self) -> str:
        return f"{self.sort} {self.slot}" + (f".{self.param}" if self.param else "")


@dataclass(frozen=True)
class VariableInfo:
    range: RangeDescriptor
    occurrences: tuple[Occurrence, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.occurrences)


class VariableMultiset(dict):
    """Mapping variable name -> :class:`VariableInfo`; the multiset of Remark-style accounting."""

    def counts(self) -> dict[str, int]:
        return {k: v.multiplicity for k, v in self.items()}

    def total(self) -> int:
        return sum(v.multiplicity for v in self.values())

    def scaling(self, schema: Schema) -> dict[str, str]:
        """Classify each variable as ``individual``, ``local`` or ``global``."""
        sizes = {"node": len(schema.nodes), "port": len(schema.ports), "link": len(schema.links)}
        out = {}
        for name, info in self.items():
            slots = {(o.sort, o.slot) for o in info.occurrences}
            sorts = {o.sort for o in info.occurrences}
            if len(slots) == 1:
                out[name] = "individual"
            elif all(sum(1 for s in slots if s[0] == srt) == sizes[srt] for srt in sorts):
                out[name] = "global"
            else:
                out[name] = "local"
        return out


# ---------------------------------------------------------------- slot access


def element_variables(e: SchemaElement) -> list[tuple[str | None, Variable]]:
    if isinstance(e, Variable):
        return [(None, e)]
    if isinstance(e, Parameterized):
        return [(k, v) for k, v in e.params if isinstance(v, Variable)]
    return []


def slot_elements(s: Schema) -> dict[tuple[str, str], SchemaElement]:
    out: dict[tuple[str, str], SchemaElement] = {}
    for n, e in s.nodes.items():
        out[("node", n)] = e
    for p, slot in s.ports.items():
        out[("port", p)] = slot.element
    for l, slot in s.links.items():
        out[("link", l)] = slot.element
    return out


def with_elements(s: Schema, elements: Mapping[tuple[str, str], SchemaElement]) -> Schema:
    """Copy of ``s`` with the given slot elements replaced."""
    nodes = dict(s.nodes)
    links = dict(s.links)
    ports = dict(s.ports)
    for (sort, i), e in elements.items():
        if sort == "node":
            nodes[i] = e
        elif sort == "link":
            links[i] = replace(links[i], element=e)
        else:
            ports[i] = replace(ports[i], element=e)
    if isinstance(s, PortSchema):
        return replace(s, nodes=nodes, links=links, ports=ports)
    return replace(s, nodes=nodes, links=links)


def occurrences(s: Schema) -> Iterator[tuple[Occurrence, Variable]]:
    for (sort, slot), e in slot_elements(s).items():
        for param, v in element_variables(e):
            yield Occurrence(sort, slot, param), v


def is_constant(s: Schema) -> bool:
    return next(occurrences(s), None) is None


def is_deterministic(s: Schema) -> bool:
    tables = [s.node_adjacency] if isinstance(s, BasicSchema) else [
        s.internal_assignment, s.adjacency, s.external_assignment]
    return all(len(v) == 1 for t in tables for v in t.values())


# ---------------------------------------------------------------- validation


def _slot_sort_ok(sort: str, param: str | None, r: RangeDescriptor) -> bool:
    if param is not None:
        return isinstance(r, ParamRange)
    if isinstance(r, Universal):
        return r.sort == sort
    return isinstance(r, KindSet)


def _variable_violations(s: Schema) -> list[Violation]:
    out = []
    seen: dict[str, tuple[RangeDescriptor, str]] = {}
    for occ, v in occurrences(s):
        kind = "param" if occ.param else occ.sort
        if range_is_empty(v.range):
            out.append(Violation("EmptyRange", v.name, str(occ)))
        if not _slot_sort_ok(occ.sort, occ.param, v.range):
            out.append(Violation("SortMismatch", v.name, f"range {v.range} at {occ}"))
        if v.name in seen:
            r0, k0 = seen[v.name]
            if r0 != v.range or k0 != kind:
                out.append(Violation("RangeConflict", v.name, f"{r0} vs {v.range}"))
        else:
            seen[v.name] = (v.range, kind)
    for (_, slot), e in slot_elements(s).items():
        if isinstance(e, Parameterized) and not element_variables(e):
            out.append(Violation("UnnormalizedElement", slot, "parameterized without variables"))
    return out


def _ids_violations(tables) -> list[Violation]:
    out = []
    ids: dict[str, str] = {}
    for sort, table in tables:
        for i in table:
            if i in ids:
                out.append(Violation("DuplicateId", i, f"used as {ids[i]} and {sort}"))
            ids[i] = sort
    return out


def validate_schema(s: Schema) -> list[Violation]:
    if isinstance(s, BasicSchema):
        out = _ids_violations((("node", s.nodes), ("link", s.links)))
        for l in s.links:
            if l not in s.node_adjacency:
                out.append(Violation("UnattachedLink", l))
        for l, alts in s.node_adjacency.items():
            if l not in s.links:
                out.append(Violation("UnknownLink", l))
            if not alts:
                out.append(Violation("EmptyTargetSet", l))
            for a in alts:
                for v in endpoints(a):
                    if v not in s.nodes:
                        out.append(Violation("UnknownNode", l, v))
        return out + _variable_violations(s)

    out = _ids_violations((("node", s.nodes), ("port", s.ports), ("link", s.links)))
    for p, slot in s.ports.items():
        owners = s.internal_assignment.get(p)
        if slot.locus is Locus.INTERNAL:
            if not owners:
                out.append(Violation("DanglingPort", p, "internal port without owning node"))
            else:
                for n in owners:
                    if n not in s.nodes:
                        out.append(Violation("DanglingPort", p, f"unknown owner {n}"))
            if p in s.external_assignment:
                out.append(Violation("LocusConflict", p, "internal port has external assignment"))
        elif owners is not None:
            out.append(Violation("LocusConflict", p, "external port assigned to a node"))
    for p in set(s.internal_assignment) | set(s.external_assignment):
        if p not in s.ports:
            out.append(Violation("UnknownPort", p))
    tables = {"node": s.nodes, "port": s.ports, "link": s.links}
    for p, targets in s.external_assignment.items():
        if not targets:
            out.append(Violation("EmptyTargetSet", p))
        for t in targets:
            table = tables.get(t.sort)
            if table is None or t.id not in table:
                out.append(Violation("UnknownTarget", p, str(t)))
            elif t.sort == "port" and s.ports[t.id].locus is not Locus.INTERNAL:
                out.append(Violation("UnknownTarget", p, "external ports attach to internal ports"))
    for l in s.links:
        if l not in s.adjacency:
            out.append(Violation("UnattachedLink", l))
    for l, alts in s.adjacency.items():
        if l not in s.links:
            out.append(Violation("UnknownLink", l))
        if not alts:
            out.append(Violation("EmptyTargetSet", l))
        for a in sorted(alts, key=attachment_key):
            for side, p, want in (("begin", begin_of(a), Direction.OUTLET),
                                  ("end", end_of(a), Direction.INLET)):
                if p is None:
                    continue
                slot = s.ports.get(p)
                if slot is None:
                    out.append(Violation("UnknownPort", l, f"{side} at {p}"))
                elif slot.locus is not Locus.INTERNAL:
                    out.append(Violation("ExternalAttachment", l, f"{side} at external port {p}"))
                elif slot.direction is not want:
                    out.append(Violation("DirectionViolation", l,
                                         f"{side} at {slot.direction.value}let {p}"))
    return out + _variable_violations(s)


def require_valid(s: Schema) -> None:
    violations = validate_schema(s)
    if violations:
        raise InvalidSchema(violations)


def variable_multiset(s: Schema) -> VariableMultiset:
    require_valid(s)
    ranges: dict[str, RangeDescriptor] = {}
    occ: dict[str, list[Occurrence]] = {}
    for o, v in occurrences(s):
        ranges[v.name] = v.range
        occ.setdefault(v.name, []).append(o)
    return VariableMultiset(
        (name, VariableInfo(ranges[name], tuple(occ[name]))) for name in sorted(occ)
    )


# ---------------------------------------------------------------- grids


def lift_attachments(alts, owners: Mapping[str, frozenset[str]]) -> frozenset[Attachment]:
    """Lift port-level attachments through a set-valued port assignment."""
    out = set()
    for a in alts:
        b, e = begin_of(a), end_of(a)
        bs = sorted(owners[b]) if b is not None else [None]
        es = sorted(owners[e]) if e is not None else [None]
        for u, v in itertools.product(bs, es):
            out.add(make_attachment(u, v))
    return frozenset(out)


def derive_basic_schema(s: PortSchema) -> BasicSchema:
    require_valid(s)
    return BasicSchema(
        s.name,
        dict(s.nodes),
        dict(s.links),
        {l: lift_attachments(alts, s.internal_assignment) for l, alts in s.adjacency.items()},
        annotations=s.annotations,
    )


def basic_as_port_schema(b: BasicSchema) -> PortSchema:
    """Embed a basic schema with one inlet/outlet couple per node."""
    require_valid(b)
    ports: dict[str, PortSlot] = {}
    assignment: dict[str, frozenset[str]] = {}
    for n in b.nodes:
        for d in (Direction.INLET, Direction.OUTLET):
            pid = f"{n}__{d.value}"
            ports[pid] = PortSlot(d)
            assignment[pid] = frozenset({n})

    def to_ports(a: Attachment) -> Attachment:
        bb, ee = begin_of(a), end_of(a)
        return make_attachment(None if bb is None else f"{bb}__out",
                               None if ee is None else f"{ee}__in")

    adjacency = {l: frozenset(to_ports(a) for a in alts) for l, alts in b.node_adjacency.items()}
    return PortSchema(b.name, dict(b.nodes), ports, dict(b.links), assignment, adjacency, {},
                      annotations=b.annotations)


def node_adjacency_sets(s: Schema) -> dict[str, frozenset[Attachment]]:
    """Node-level admissible attachments of every link."""
    if isinstance(s, BasicSchema):
        return dict(s.node_adjacency)
    return {l: lift_attachments(alts, s.internal_assignment) for l, alts in s.adjacency.items()}


def schema_grid(s: Schema) -> GeneralizedMultigraph | VariableMultigraph:
    require_valid(s)
    g = VariableMultigraph(frozenset(s.nodes), node_adjacency_sets(s))
    return g.fixed() if g.is_deterministic else g


def schema_variable_grid(s: Schema) -> VariableMultigraph:
    """The grid in set-valued form regardless of determinism."""
    require_valid(s)
    return VariableMultigraph(frozenset(s.nodes), node_adjacency_sets(s))


def schema_connection_grid(s: Schema) -> GeneralizedMultigraph | VariableMultigraph:
    if not isinstance(s, PortSchema):
        raise InvalidSchema([Violation("NotAPortSchema", s.name, "connection grids need ports")])
    require_valid(s)
    g = VariableMultigraph(frozenset(s.internal_ports()), dict(s.adjacency))
    return g.fixed() if g.is_deterministic else g


def schema_owner_morphism(s: PortSchema) -> GraphMorphism:
    if any(len(v) != 1 for v in s.internal_assignment.values()):
        raise InvalidSchema([Violation("VariableAssignment", s.name,
                                       "owner map needs constant port assignment")])
    return GraphMorphism(
        {p: next(iter(s.internal_assignment[p])) for p in s.internal_ports()},
        {l: l for l in s.links},
    )


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class SchemaClassification:
    roles: frozenset[Role]
    potentially_open: bool

    @property
    def role(self) -> Role | None:
        """The role when it is the same for every resolution."""
        return next(iter(self.roles)) if len(self.roles) == 1 else None

    def as_automaton_classification(self) -> Classification:
        if self.role is None:
            raise ValueError("role depends on the resolution")
        return Classification(self.role, self.potentially_open)


def free_schema_ports(s: Schema) -> list[str]:
    if isinstance(s, BasicSchema):
        return []
    attached = {p for alts in s.adjacency.values() for a in alts for p in endpoints(a)}
    out = []
    for p, slot in s.ports.items():
        if slot.locus is Locus.INTERNAL and p not in attached:
            out.append(p)
        elif slot.locus is Locus.EXTERNAL and p not in s.external_assignment:
            out.append(p)
    return out


def classify_schema(s: Schema) -> SchemaClassification:
    grid = schema_variable_grid(s)
    ext = {slot.direction for slot in s.ports.values() if slot.locus is Locus.EXTERNAL}
    # (begin-open seen, end-open seen) pairs reachable over all resolutions
    reachable = {(False, False)}
    for alts in grid.edges.values():
        shapes = {(isinstance(a, BeginOnly), isinstance(a, EndOnly)) for a in alts}
        reachable = {(b or sb, e or se) for b, e in reachable for sb, se in shapes}
    roles = frozenset(
        role_from(Direction.INLET in ext or eo, Direction.OUTLET in ext or bo)
        for bo, eo in reachable
    )
    return SchemaClassification(roles, bool(free_schema_ports(s)))


# ---------------------------------------------------------------- automata as schemas


def as_schema(ga: GridAutomaton | BasicGridAutomaton) -> Schema:
    """A grid automaton viewed as a schema without variables."""
    if isinstance(ga, BasicGridAutomaton):
        return BasicSchema(
            ga.name,
            {n: Constant(k) for n, k in ga.nodes.items()},
            {l: LinkSlot(k.link_class, Constant(k.kind)) for l, k in ga.links.items()},
            {l: frozenset({a}) for l, a in ga.node_adjacency.items()},
            annotations=ga.annotations,
        )
    return PortSchema(
        ga.name,
        {n: Constant(k) for n, k in ga.nodes.items()},
        {p: PortSlot(port.direction, port.locus, Constant(port.kind)) for p, port in ga.ports.items()},
        {l: LinkSlot(k.link_class, Constant(k.kind)) for l, k in ga.links.items()},
        {p: frozenset({n}) for p, n in ga.internal_assignment.items()},
        {l: frozenset({a}) for l, a in ga.adjacency.items()},
        {p: frozenset({t}) for p, t in ga.external_assignment.items()},
        annotations=ga.annotations,
    )


def to_automaton(s: Schema) -> GridAutomaton | BasicGridAutomaton:
    """Inverse of :func:`as_schema`; callers check constancy and determinism first."""
    def only(xs):
        (x,) = xs
        return x

    nodes = {n: e.kind for n, e in s.nodes.items()}
    links = {l: Link(slot.link_class, slot.element.kind) for l, slot in s.links.items()}
    if isinstance(s, BasicSchema):
        return BasicGridAutomaton(s.name, nodes, links,
                                  {l: only(a) for l, a in s.node_adjacency.items()},
                                  annotations=s.annotations)
    return GridAutomaton(
        s.name,
        nodes,
        {p: Port(slot.direction, slot.locus, slot.element.kind) for p, slot in s.ports.items()},
        links,
        {p: only(n) for p, n in s.internal_assignment.items()},
        {l: only(a) for l, a in s.adjacency.items()},
        {p: only(t) for p, t in s.external_assignment.items()},
        annotations=s.annotations,
    )


def kind_census(s: Schema | GridAutomaton | BasicGridAutomaton) -> Counter:
    """Count node kinds by their most specific registered class (last path tag)."""
    c: Counter = Counter()
    for e in s.nodes.values():
        if isinstance(e, Kind):
            c[e.path[-1]] += 1
        elif isinstance(e, Constant):
            c[e.kind.path[-1]] += 1
        elif isinstance(e, Variable):
            c[e.name] += 1
        else:
            c[e.path[-1]] += 1
    return c


# ---------------------------------------------------------------- element order


def _param_covers(src: ParamSlot, img: ParamSlot) -> bool:
    if isinstance(src, Variable):
        if isinstance(img, Variable):
            return range_subset(img.range, src.range)
        return range_contains(src.range, img)
    return not isinstance(img, Variable) and src == img


def element_covers(src: SchemaElement, img: SchemaElement) -> bool:
    """True when every value ``img`` can take is also admitted by ``src``."""
    if isinstance(src, Constant):
        return img == src
    if isinstance(src, Variable):
        if isinstance(img, Variable):
            return range_subset(img.range, src.range)
        if isinstance(img, Constant):
            return range_contains(src.range, img.kind)
        return range_contains(src.range, Kind(img.path))
    # parameterized source
    if isinstance(img, Variable):
        return False
    ipath = img.kind.path if isinstance(img, Constant) else img.path
    iparams = dict(img.kind.params if isinstance(img, Constant) else img.params)
    sparams = dict(src.params)
    if ipath != src.path or set(iparams) != set(sparams):
        return False
    return all(_param_covers(sparams[k], iparams[k]) for k in sparams)


def same_shape(a: Schema, b: Schema) -> bool:
    """Same slot ids, port directions/loci and link classes (elements and sets ignored)."""
    if type(a) is not type(b):
        return False
    if set(a.nodes) != set(b.nodes) or set(a.links) != set(b.links):
        return False
    if any(a.links[l].link_class != b.links[l].link_class for l in a.links):
        return False
    if isinstance(a, PortSchema):
        if set(a.ports) != set(b.ports):
            return False
        for p, slot in a.ports.items():
            other = b.ports[p]
            if (slot.direction, slot.locus) != (other.direction, other.locus):
                return False
    return True


def set_tables(s: Schema) -> dict[str, Mapping]:
    if isinstance(s, BasicSchema):
        return {"adjacency": s.node_adjacency}
    return {"assignment": s.internal_assignment, "adjacency": s.adjacency,
            "external": s.external_assignment}


def refines(general: Schema, specific: Schema) -> bool:
    """Slotwise: every element of ``specific`` is covered and every target set is a subset."""
    if not same_shape(general, specific):
        return False
    ge, se = slot_elements(general), slot_elements(specific)
    if not all(element_covers(ge[k], se[k]) for k in ge):
        return False
    gt, st = set_tables(general), set_tables(specific)
    for name, table in gt.items():
        other = st[name]
        if set(table) != set(other):
            return False
        if any(not other[k] <= table[k] for k in table):
            return False
    return True


__all__ = [name for name in dir() if not name.startswith("_")]
