"""Vertical operations on schemas and the orders they induce.

Interpretation and concretization replace variables by constants, realization
goes all the way down to a grid automaton, abstraction goes back up, and
determination shrinks ranges and target sets.  Bindings are per variable name
with optional per-occurrence overrides.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace

from .errors import (
    EmptyRestriction,
    InvalidSchema,
    NotASubset,
    OccurrenceNotConstant,
    RangeExcludesOriginal,
    RangeViolation,
    ResidualNondeterminism,
    ResidualVariables,
    SchemaError,
    SearchSpaceTooLarge,
    UnknownVariable,
)
from .grid_automaton import (
    BasicGridAutomaton,
    Direction,
    GridAutomaton,
    LinkClass,
    Locus,
    Target,
)
from .kinds import (
    Kind,
    KindUniverse,
    ParamValue,
    RangeDescriptor,
    Universal,
    range_contains,
    range_is_empty,
    range_subset,
)
from .morphism import SchemaMorphism, identity, target_nodes
from .multigraph import SEARCH_LIMIT, BeginOnly, Closed, EndOnly, make_attachment
from .schema import (
    BasicSchema,
    Constant,
    LinkSlot,
    Occurrence,
    Parameterized,
    PortSchema,
    PortSlot,
    Schema,
    SchemaElement,
    Variable,
    is_deterministic,
    occurrences,
    parameterized,
    require_valid,
    same_shape,
    set_tables,
    slot_elements,
    to_automaton,
    with_elements,
)

ENVIRONMENT_STUB = Kind(("environment_stub",))


@dataclass(frozen=True)
class Binding:
    """Variable name -> constant, plus per-occurrence overrides."""

    values: Mapping[str, Kind | ParamValue] = field(default_factory=dict)
    overrides: Mapping[Occurrence, Kind | ParamValue] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", dict(sorted(self.values.items())))
        object.__setattr__(self, "overrides", dict(sorted(self.overrides.items())))

    def union(self, other: "Binding") -> "Binding":
        clash = [k for k in set(self.values) & set(other.values)
                 if self.values[k] != other.values[k]]
        clash += [str(k) for k in set(self.overrides) & set(other.overrides)
                  if self.overrides[k] != other.overrides[k]]
        if clash:
            raise SchemaError(f"bindings disagree on {sorted(clash)}")
        return Binding({**self.values, **other.values}, {**self.overrides, **other.overrides})

    def __bool__(self) -> bool:
        return bool(self.values or self.overrides)


# ---------------------------------------------------------------- interpretation


def _bound_value(b: Binding, occ: Occurrence, v: Variable, selected) -> object:
    if selected is not None and occ not in selected:
        return None
    if occ in b.overrides:
        return b.overrides[occ]
    return b.values.get(v.name)


def _check_in_range(v: Variable, value, occ: Occurrence) -> None:
    want_kind = occ.param is None
    if want_kind != isinstance(value, Kind) or not range_contains(v.range, value):
        raise RangeViolation(f"{value} is outside the range {v.range} of {v.name} at {occ}")


def _apply(s: Schema, b: Binding, selected: frozenset[Occurrence] | None) -> Schema:
    names = {v.name for _, v in occurrences(s)}
    occs = {o for o, _ in occurrences(s)}
    unknown = sorted(set(b.values) - names) + sorted(str(o) for o in set(b.overrides) - occs)
    if unknown:
        raise UnknownVariable(", ".join(unknown))
    changed: dict[tuple[str, str], SchemaElement] = {}
    for (sort, slot), e in slot_elements(s).items():
        if isinstance(e, Variable):
            occ = Occurrence(sort, slot)
            value = _bound_value(b, occ, e, selected)
            if value is not None:
                _check_in_range(e, value, occ)
                changed[(sort, slot)] = Constant(value)
        elif isinstance(e, Parameterized):
            params = dict(e.params)
            touched = False
            for k, v in e.params:
                if isinstance(v, Variable):
                    occ = Occurrence(sort, slot, k)
                    value = _bound_value(b, occ, v, selected)
                    if value is not None:
                        _check_in_range(v, value, occ)
                        params[k] = value
                        touched = True
            if touched:
                changed[(sort, slot)] = parameterized(e.path, params)
    return with_elements(s, changed) if changed else s


def interpret(s: Schema, b: Binding, selected: Iterable[Occurrence] | None = None) -> Schema:
    """Replace the bound variables (optionally only at ``selected`` occurrences)."""
    require_valid(s)
    return _apply(s, b, None if selected is None else frozenset(selected))


def concretize(s: Schema, b: Binding) -> Schema:
    out = interpret(s, b)
    return replace(out, provenance=s.provenance + (("concretize", s.name, b),))


def realize(s: Schema, b: Binding = Binding()) -> GridAutomaton | BasicGridAutomaton:
    out = interpret(s, b)
    left = sorted({str(o) for o, _ in occurrences(out)})
    if left:
        raise ResidualVariables(", ".join(left))
    if not is_deterministic(out):
        raise ResidualNondeterminism(f"{out.name} has set-valued assignments")
    return to_automaton(out)


# ---------------------------------------------------------------- abstraction


@dataclass(frozen=True)
class AbstractEntry:
    occurrence: Occurrence
    name: str
    range: RangeDescriptor


@dataclass(frozen=True)
class AbstractionSpec:
    entries: tuple[AbstractEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.occurrence)))


def _constant_value(e: SchemaElement, occ: Occurrence):
    if occ.param is None:
        if not isinstance(e, Constant):
            raise OccurrenceNotConstant(str(occ))
        return e.kind
    params = dict(e.kind.params) if isinstance(e, Constant) else dict(getattr(e, "params", ()))
    if occ.param not in params or isinstance(params[occ.param], Variable):
        raise OccurrenceNotConstant(str(occ))
    return params[occ.param]


def abstract_elements(s: Schema, spec: AbstractionSpec) -> Schema:
    require_valid(s)
    elements = slot_elements(s)
    changed = dict(elements)
    for entry in spec.entries:
        occ = entry.occurrence
        key = (occ.sort, occ.slot)
        if key not in elements:
            raise UnknownVariable(f"no slot {occ}")
        value = _constant_value(elements[key], occ)
        if not range_contains(entry.range, value):
            raise RangeExcludesOriginal(f"{value} is not in {entry.range} at {occ}")
        var = Variable(entry.name, entry.range)
        if occ.param is None:
            changed[key] = var
        else:
            current = changed[key]
            if isinstance(current, Constant):
                path, params = current.kind.path, dict(current.kind.params)
            else:
                path, params = current.path, dict(current.params)
            params[occ.param] = var
            changed[key] = parameterized(path, params)
    out = with_elements(s, {k: v for k, v in changed.items() if v != elements[k]})
    require_valid(out)
    return out


def restoring_binding(s: Schema, spec: AbstractionSpec) -> Binding:
    """The binding that undoes ``abstract_elements(s, spec)``."""
    elements = slot_elements(s)
    per_name: dict[str, set] = {}
    per_occ = {}
    for entry in spec.entries:
        value = _constant_value(elements[(entry.occurrence.sort, entry.occurrence.slot)],
                                entry.occurrence)
        per_name.setdefault(entry.name, set()).add(value)
        per_occ[entry.occurrence] = value
    values = {n: next(iter(vs)) for n, vs in per_name.items() if len(vs) == 1}
    overrides = {o: v for o, v in per_occ.items()
                 if len(per_name[next(e.name for e in spec.entries if e.occurrence == o)]) > 1}
    return Binding(values, overrides)


# ---------------------------------------------------------------- determination


@dataclass(frozen=True)
class DeterminationSpec:
    ranges: Mapping[str, RangeDescriptor] = field(default_factory=dict)
    assignment: Mapping[str, frozenset[str]] = field(default_factory=dict)
    adjacency: Mapping[str, frozenset] = field(default_factory=dict)
    external: Mapping[str, frozenset[Target]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ranges", dict(sorted(self.ranges.items())))
        for name in ("assignment", "adjacency", "external"):
            object.__setattr__(
                self, name, {k: frozenset(v) for k, v in sorted(getattr(self, name).items())})

    def __bool__(self) -> bool:
        return bool(self.ranges or self.assignment or self.adjacency or self.external)


def _rerange(e: SchemaElement, ranges: Mapping[str, RangeDescriptor]) -> SchemaElement:
    if isinstance(e, Variable) and e.name in ranges:
        return Variable(e.name, ranges[e.name])
    if isinstance(e, Parameterized):
        return Parameterized(e.path, tuple(
            (k, Variable(v.name, ranges[v.name]) if isinstance(v, Variable) and v.name in ranges
             else v) for k, v in e.params))
    return e


def determine(s: Schema, spec: DeterminationSpec) -> Schema:
    require_valid(s)
    current = {v.name: v.range for _, v in occurrences(s)}
    for name, r in spec.ranges.items():
        if name not in current:
            raise UnknownVariable(name)
        if range_is_empty(r):
            raise EmptyRestriction(f"range of {name}")
        if not range_subset(r, current[name]):
            raise NotASubset(f"{r} is not within {current[name]} for {name}")
    out = with_elements(s, {k: _rerange(e, spec.ranges) for k, e in slot_elements(s).items()})
    tables = set_tables(s)
    updates = {}
    for field_name, table_name in (("assignment", "internal_assignment"),
                                   ("adjacency", "adjacency"),
                                   ("external", "external_assignment")):
        restriction = getattr(spec, field_name)
        if not restriction:
            continue
        key = {"assignment": "assignment", "adjacency": "adjacency", "external": "external"}[field_name]
        if key not in tables:
            raise NotASubset(f"{s.name} has no {field_name} table")
        original = tables[key]
        new = dict(original)
        for k, subset in restriction.items():
            if k not in original:
                raise UnknownVariable(f"no {field_name} entry {k}")
            if not subset:
                raise EmptyRestriction(f"{field_name} entry {k}")
            if not subset <= original[k]:
                raise NotASubset(f"{field_name} entry {k}")
            new[k] = subset
        if isinstance(s, BasicSchema):
            table_name = "node_adjacency"
        updates[table_name] = new
    return replace(out, **updates) if updates else out


def more_determined(t: Schema, s: Schema) -> DeterminationSpec | None:
    """The spec turning ``s`` into ``t`` when ``t`` is a determination of ``s``."""
    if not same_shape(s, t):
        return None
    se, te = slot_elements(s), slot_elements(t)
    ranges: dict[str, RangeDescriptor] = {}
    for k, a in se.items():
        b = te[k]
        if type(a) is not type(b):
            return None
        if isinstance(a, Constant):
            if a != b:
                return None
            continue
        if isinstance(a, Parameterized):
            if a.path != b.path or [k2 for k2, _ in a.params] != [k2 for k2, _ in b.params]:
                return None
            pairs = list(zip((v for _, v in a.params), (v for _, v in b.params)))
        else:
            pairs = [(a, b)]
        for x, y in pairs:
            if isinstance(x, Variable) != isinstance(y, Variable):
                return None
            if not isinstance(x, Variable):
                if x != y:
                    return None
                continue
            if x.name != y.name or not range_subset(y.range, x.range):
                return None
            if y.range != x.range:
                ranges[x.name] = y.range
    sets: dict[str, dict] = {}
    st, tt = set_tables(s), set_tables(t)
    for name, table in st.items():
        other = tt[name]
        if set(table) != set(other):
            return None
        for k, v in table.items():
            if not other[k] <= v:
                return None
            if other[k] != v:
                sets.setdefault(name, {})[k] = other[k]
    return DeterminationSpec(ranges, sets.get("assignment", {}), sets.get("adjacency", {}),
                             sets.get("external", {}))


# ---------------------------------------------------------------- comparison


def concretization_witness(general: Schema, specific: Schema) -> Binding | None:
    """A binding ``b`` with ``concretize(general, b) == specific``, if one exists.

    The binding is read off slot by slot, so no enumeration is needed.  Names
    bound consistently everywhere go into ``values``; the rest become overrides.
    """
    if not same_shape(general, specific):
        return None
    if set_tables(general) != set_tables(specific):
        return None
    ge, se = slot_elements(general), slot_elements(specific)
    found: dict[Occurrence, tuple[str, object]] = {}
    unbound: dict[str, int] = {}
    for (sort, slot), a in ge.items():
        b = se[(sort, slot)]
        if isinstance(a, Constant):
            if a != b:
                return None
        elif isinstance(a, Variable):
            if b == a:
                unbound[a.name] = unbound.get(a.name, 0) + 1
            elif isinstance(b, Constant) and range_contains(a.range, b.kind):
                found[Occurrence(sort, slot)] = (a.name, b.kind)
            else:
                return None
        else:
            bpath = b.kind.path if isinstance(b, Constant) else getattr(b, "path", None)
            bparams = dict(b.kind.params) if isinstance(b, Constant) else dict(getattr(b, "params", ()))
            if bpath != a.path or set(bparams) != {k for k, _ in a.params}:
                return None
            for k, x in a.params:
                y = bparams[k]
                if not isinstance(x, Variable):
                    if x != y:
                        return None
                elif y == x:
                    unbound[x.name] = unbound.get(x.name, 0) + 1
                elif not isinstance(y, (Variable, Kind)) and range_contains(x.range, y):
                    found[Occurrence(sort, slot, k)] = (x.name, y)
                else:
                    return None
    by_name: dict[str, set] = {}
    for name, value in found.values():
        by_name.setdefault(name, set()).add(value)
    values = {n: next(iter(vs)) for n, vs in by_name.items()
              if len(vs) == 1 and n not in unbound}
    overrides = {o: v for o, (n, v) in found.items() if n not in values}
    b = Binding(values, overrides)
    assert replace(concretize(general, b), name=specific.name) == specific
    return b


def abstraction_witness(specific: Schema, general: Schema) -> AbstractionSpec | None:
    """A spec with ``abstract_elements(specific, spec) == general``, if one exists."""
    if concretization_witness(general, specific) is None:
        return None
    ge, se = slot_elements(general), slot_elements(specific)
    entries = []
    for (sort, slot), a in ge.items():
        b = se[(sort, slot)]
        if isinstance(a, Variable) and a != b:
            entries.append(AbstractEntry(Occurrence(sort, slot), a.name, a.range))
        elif isinstance(a, Parameterized):
            bparams = dict(b.kind.params) if isinstance(b, Constant) else dict(b.params)
            for k, x in a.params:
                if isinstance(x, Variable) and bparams[k] != x:
                    entries.append(AbstractEntry(Occurrence(sort, slot, k), x.name, x.range))
    spec = AbstractionSpec(tuple(entries))
    try:
        if replace(abstract_elements(specific, spec), name=general.name) != general:
            return None
    except (InvalidSchema, SchemaError):
        # e.g. a name bound in some occurrences only: the abstraction would
        # have to reuse a name whose other occurrences are already variables
        return None
    return spec


@dataclass(frozen=True)
class Comparison:
    more_concrete: bool  # t is a concretization of s
    more_general: bool  # t is an abstraction of s
    more_determined: bool  # t is a determination of s
    concretization: Binding | None = None
    abstraction: AbstractionSpec | None = None
    determination: DeterminationSpec | None = None


def compare(s: Schema, t: Schema) -> Comparison:
    require_valid(s)
    require_valid(t)
    con = concretization_witness(s, t)
    abs_ = abstraction_witness(s, t) if concretization_witness(t, s) is not None else None
    det = more_determined(t, s)
    return Comparison(con is not None, abs_ is not None, det is not None, con, abs_, det)


@dataclass(frozen=True)
class StrongEquivalence:
    equivalent: bool
    renaming: Mapping[str, str] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def strongly_equivalent(s: Schema, t: Schema) -> StrongEquivalence:
    """Same slots and sets; constants equal; variables equal up to a range-preserving renaming."""
    require_valid(s)
    require_valid(t)
    no = StrongEquivalence(False)
    if not same_shape(s, t) or set_tables(s) != set_tables(t):
        return no
    forward: dict[str, str] = {}
    backward: dict[str, str] = {}

    def match(x, y) -> bool:
        if isinstance(x, Variable) != isinstance(y, Variable):
            return False
        if not isinstance(x, Variable):
            return x == y
        if x.range != y.range:
            return False
        if forward.setdefault(x.name, y.name) != y.name:
            return False
        return backward.setdefault(y.name, x.name) == x.name

    te = slot_elements(t)
    for k, a in slot_elements(s).items():
        b = te[k]
        if isinstance(a, Parameterized) and isinstance(b, Parameterized):
            if a.path != b.path or [n for n, _ in a.params] != [n for n, _ in b.params]:
                return no
            if not all(match(x, y) for (_, x), (_, y) in zip(a.params, b.params)):
                return no
        elif isinstance(a, Parameterized) or isinstance(b, Parameterized):
            return no
        elif not match(a, b):
            return no
    return StrongEquivalence(True, dict(sorted(forward.items())))


# ---------------------------------------------------------------- enumeration oracles


def _bindings(s: Schema, universe: KindUniverse, partial: bool) -> Iterator[Binding]:
    info: dict[str, tuple[RangeDescriptor, str]] = {}
    for occ, v in occurrences(s):
        info.setdefault(v.name, (v.range, occ.sort))
    names = sorted(info)
    choices = []
    total = 1
    for n in names:
        r, sort = info[n]
        members = list(universe.members(r, sort))
        choices.append(([None] if partial else []) + members)
        total *= len(choices[-1])
    if total > SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"{total} bindings")
    for combo in itertools.product(*choices):
        yield Binding({n: v for n, v in zip(names, combo) if v is not None})


def resolutions(s: Schema) -> Iterator[Schema]:
    """Every single-valued determination of the set-valued tables."""
    tables = set_tables(s)
    keys = [(name, k) for name, table in tables.items() for k in table]
    choices = [sorted(tables[name][k], key=str) for name, k in keys]
    field_names = {"assignment": "internal_assignment", "adjacency": "adjacency",
                   "external": "external_assignment"}
    for combo in itertools.product(*choices):
        updates: dict[str, dict] = {}
        for (name, k), choice in zip(keys, combo):
            fname = "node_adjacency" if isinstance(s, BasicSchema) else field_names[name]
            updates.setdefault(fname, {})[k] = frozenset({choice})
        yield replace(s, **updates) if updates else s


def realizations(
    s: Schema,
    universe: KindUniverse,
    kind_filter: Callable[[GridAutomaton | BasicGridAutomaton], bool] | None = None,
) -> frozenset:
    """All realizations of ``s`` over a finite kind universe, names ignored."""
    require_valid(s)
    out = set()
    for b in _bindings(s, universe, partial=False):
        concrete = interpret(s, b)
        for r in resolutions(concrete):
            ga = replace(to_automaton(r), name="")
            if kind_filter is None or kind_filter(ga):
                out.add(_freeze(ga))
    return frozenset(out)


def _freeze(x) -> tuple:
    if isinstance(x, GridAutomaton):
        return ("port", tuple(x.nodes.items()), tuple(x.ports.items()), tuple(x.links.items()),
                tuple(x.internal_assignment.items()), tuple(x.adjacency.items()),
                tuple(x.external_assignment.items()))
    return ("basic", tuple(x.nodes.items()), tuple(x.links.items()),
            tuple(x.node_adjacency.items()))


def equivalent(s: Schema, t: Schema, universe: KindUniverse, kind_filter=None) -> bool:
    """Same set of realizations (optionally only those accepted by ``kind_filter``)."""
    return realizations(s, universe, kind_filter) == realizations(t, universe, kind_filter)


def canonical_renaming(s: Schema) -> Schema:
    """Rename variables to ``_v0, _v1, ...`` in order of first occurrence."""
    order: dict[str, str] = {}
    for _, v in occurrences(s):
        order.setdefault(v.name, f"_v{len(order)}")

    def rename(e):
        if isinstance(e, Variable):
            return Variable(order[e.name], e.range)
        if isinstance(e, Parameterized):
            return Parameterized(e.path, tuple((k, rename(v)) for k, v in e.params))
        return e

    return replace(with_elements(s, {k: rename(e) for k, e in slot_elements(s).items()}), name="")


def concretizations(s: Schema, universe: KindUniverse) -> frozenset:
    """Every partial concretization of ``s``, up to renaming of the remaining variables."""
    require_valid(s)
    return frozenset(
        _freeze_schema(canonical_renaming(interpret(s, b)))
        for b in _bindings(s, universe, partial=True)
    )


def _freeze_schema(s: Schema) -> tuple:
    parts = [type(s).__name__, tuple(s.nodes.items()), tuple(s.ports.items()),
             tuple(s.links.items())]
    for name, table in set_tables(s).items():
        parts.append((name, tuple((k, tuple(sorted(v, key=str))) for k, v in table.items())))
    return tuple(parts)


# ---------------------------------------------------------------- maximal abstraction, closure


def maximal_abstraction(s: Schema) -> Schema:
    """Every slot a universal variable, every set as permissive as directions allow."""
    require_valid(s)
    nodes = {n: Variable(f"_n_{n}", Universal("node")) for n in s.nodes}
    links = {l: replace(slot, element=Variable(f"_l_{l}", Universal("link")))
             for l, slot in s.links.items()}
    if isinstance(s, BasicSchema):
        every = _all_attachments(list(s.nodes), list(s.nodes))
        return BasicSchema(s.name, nodes, links, {l: every for l in s.links},
                           annotations=s.annotations)
    ports = {p: replace(slot, element=Variable(f"_p_{p}", Universal("port")))
             for p, slot in s.ports.items()}
    internal = s.internal_ports()
    outlets = [p for p in internal if s.ports[p].direction is Direction.OUTLET]
    inlets = [p for p in internal if s.ports[p].direction is Direction.INLET]
    every = _all_attachments(outlets, inlets)
    all_nodes = frozenset(s.nodes)
    targets = frozenset([Target("node", n) for n in s.nodes]
                        + [Target("port", p) for p in internal]
                        + [Target("link", l) for l in s.links])
    return PortSchema(
        s.name, nodes, ports, links,
        {p: all_nodes for p in internal},
        {l: every for l in s.links},
        {p: targets for p in s.external_assignment},
        annotations=s.annotations,
    )


def _all_attachments(begins: list[str], ends: list[str]) -> frozenset:
    out = {Closed(b, e) for b in begins for e in ends}
    out |= {BeginOnly(b) for b in begins}
    out |= {EndOnly(e) for e in ends}
    return frozenset(out)


def _fresh(base: str, taken: set[str]) -> str:
    name, i = base, 1
    while name in taken:
        name, i = f"{base}_{i}", i + 1
    taken.add(name)
    return name


def close_schema(s: Schema) -> tuple[Schema, SchemaMorphism]:
    """Attach an environment stub to every open side and re-home external ports.

    Returns the closed schema and the slot-identity embedding of ``s`` into it.
    """
    require_valid(s)
    stub = Constant(ENVIRONMENT_STUB)
    taken = set(s.nodes) | set(s.ports) | set(s.links)
    nodes = dict(s.nodes)
    if isinstance(s, BasicSchema):
        adjacency = {}
        for l, alts in s.node_adjacency.items():
            if all(isinstance(a, Closed) for a in alts):
                adjacency[l] = alts
                continue
            env = _fresh(f"_env_{l}", taken)
            nodes[env] = stub
            adjacency[l] = frozenset(
                a if isinstance(a, Closed) else
                Closed(a.begin, env) if isinstance(a, BeginOnly) else Closed(env, a.end)
                for a in alts)
        closed = replace(s, nodes=nodes, node_adjacency=adjacency)
    else:
        ports = dict(s.ports)
        assignment = dict(s.internal_assignment)
        adjacency = {}
        for l, alts in s.adjacency.items():
            if all(isinstance(a, Closed) for a in alts):
                adjacency[l] = alts
                continue
            env = _fresh(f"_env_{l}", taken)
            nodes[env] = stub
            env_in = env_out = None
            if any(isinstance(a, BeginOnly) for a in alts):
                env_in = _fresh(f"{env}_in", taken)
                ports[env_in] = PortSlot(Direction.INLET)
                assignment[env_in] = frozenset({env})
            if any(isinstance(a, EndOnly) for a in alts):
                env_out = _fresh(f"{env}_out", taken)
                ports[env_out] = PortSlot(Direction.OUTLET)
                assignment[env_out] = frozenset({env})
            adjacency[l] = frozenset(
                a if isinstance(a, Closed) else
                make_attachment(a.begin, env_in) if isinstance(a, BeginOnly) else
                make_attachment(env_out, a.end)
                for a in alts)
        links = dict(s.links)
        for p in s.external_ports():
            env = _fresh(f"_env_{p}", taken)
            nodes[env] = stub
            ports[p] = replace(s.ports[p], locus=Locus.INTERNAL)
            reach = target_nodes(s, s.external_assignment.get(p, frozenset()))
            if not reach:
                # nothing to hand the port to: the stub owns it and it stays free
                assignment[p] = frozenset({env})
                continue
            # the reached nodes own the port; the stub feeds it (or drains it)
            assignment[p] = reach
            inlet = s.ports[p].direction is Direction.INLET
            env_port = _fresh(f"{env}_{'out' if inlet else 'in'}", taken)
            ports[env_port] = PortSlot(Direction.OUTLET if inlet else Direction.INLET)
            assignment[env_port] = frozenset({env})
            link = _fresh(f"{env}_link", taken)
            links[link] = LinkSlot(LinkClass.INFORMATION)
            adjacency[link] = frozenset({Closed(env_port, p) if inlet else Closed(p, env_port)})
        closed = replace(s, nodes=nodes, ports=ports, links=links,
                         internal_assignment=assignment, adjacency=adjacency,
                         external_assignment={})
    if closed == s:
        return s, identity(s)
    m = identity(s)
    return closed, replace(m, codomain=closed.name)


__all__ = [name for name in dir() if not name.startswith("_")]
