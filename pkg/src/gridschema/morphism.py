"""Schema homomorphisms: checking, search, images, preimages and subschemas.

A morphism maps nodes, links and (for port schemas) ports.  Adjacency is
preserved side by side: every attached side of a source attachment must be
matched, at the image port or node, by some admissible target attachment.
Open sides are unconstrained, which is what lets a subschema whose links were
cut at its boundary embed into the schema it was cut from.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace

from .errors import (
    NotASubschema,
    NotComposable,
    NotStructural,
    PartialMap,
    SchemaMismatch,
    SearchSpaceTooLarge,
)
from .grid_automaton import Locus, Role, Target
from .multigraph import (
    SEARCH_LIMIT,
    Attachment,
    begin_of,
    components,
    end_of,
    extends,
    map_attachment,
    restrict_attachment,
)
from .schema import (
    BasicSchema,
    PortSchema,
    Schema,
    classify_schema,
    element_covers,
    node_adjacency_sets,
    schema_variable_grid,
)


@dataclass(frozen=True)
class SchemaMorphism:
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    port_map: Mapping[str, str] = field(default_factory=dict)
    domain: str = ""
    codomain: str = ""

    def __post_init__(self):
        for name in ("node_map", "edge_map", "port_map"):
            object.__setattr__(self, name, dict(sorted(getattr(self, name).items())))

    def key(self) -> tuple:
        return (tuple(self.node_map.items()), tuple(self.port_map.items()),
                tuple(self.edge_map.items()))

    def map_target(self, t: Target) -> Target:
        table = {"node": self.node_map, "port": self.port_map, "link": self.edge_map}[t.sort]
        return Target(t.sort, table[t.id])


@dataclass(frozen=True)
class MorphismFlags:
    structural: bool
    weak: bool
    typed: bool
    weak_typed: bool
    v_mono: bool
    e_mono: bool
    v_epi: bool
    e_epi: bool
    p_mono: bool = True
    p_epi: bool = True

    @property
    def ve_mono(self) -> bool:
        return self.v_mono and self.e_mono

    @property
    def ve_epi(self) -> bool:
        return self.v_epi and self.e_epi


def identity(s: Schema) -> SchemaMorphism:
    return SchemaMorphism({n: n for n in s.nodes}, {l: l for l in s.links},
                          {p: p for p in s.ports}, s.name, s.name)


# ---------------------------------------------------------------- checking


def _lax_preserved(src: frozenset[Attachment], dst: frozenset[Attachment], f) -> bool:
    return all(any(extends(b, map_attachment(a, f)) for b in dst) for a in src)


def _require_total(s: Schema, t: Schema, m: SchemaMorphism, with_ports: bool) -> None:
    if m.domain and m.codomain and (m.domain, m.codomain) != (s.name, t.name):
        raise SchemaMismatch(f"morphism {m.domain}->{m.codomain} applied to {s.name}->{t.name}")
    missing = [n for n in s.nodes if n not in m.node_map]
    missing += [l for l in s.links if l not in m.edge_map]
    if with_ports:
        missing += [p for p in s.ports if p not in m.port_map]
    if missing:
        raise PartialMap(f"unmapped: {sorted(missing)}")


def _weak_ok(s: Schema, t: Schema, m: SchemaMorphism) -> bool:
    if any(m.node_map[n] not in t.nodes for n in s.nodes):
        return False
    if any(m.edge_map[l] not in t.links for l in s.links):
        return False
    if any(s.links[l].link_class != t.links[m.edge_map[l]].link_class for l in s.links):
        return False
    sa, ta = node_adjacency_sets(s), node_adjacency_sets(t)
    f = m.node_map.__getitem__
    return all(_lax_preserved(sa[l], ta[m.edge_map[l]], f) for l in s.links)


def target_nodes(s: PortSchema, targets) -> frozenset[str] | None:
    """Nodes reached by external targets: a node itself, or every owner of a port.

    ``None`` when a target is a link, which reaches no node.
    """
    out: set[str] = set()
    for x in targets:
        if x.sort == "node":
            out.add(x.id)
        elif x.sort == "port" and x.id in s.internal_assignment:
            out |= s.internal_assignment[x.id]
        else:
            return None
    return frozenset(out)


def _port_ok(s: PortSchema, t: PortSchema, m: SchemaMorphism, p: str) -> bool:
    q = m.port_map[p]
    if q not in t.ports:
        return False
    sp, tp = s.ports[p], t.ports[q]
    if sp.direction is not tp.direction:
        return False
    if sp.locus is Locus.INTERNAL:
        if tp.locus is not Locus.INTERNAL:
            return False
        return all(m.node_map[n] in t.internal_assignment[q] for n in s.internal_assignment[p])
    if p not in s.external_assignment:
        return True
    if tp.locus is Locus.INTERNAL:
        # the owners of an internal image port play the part of its targets
        reach = target_nodes(s, s.external_assignment[p])
        return reach is not None and {m.node_map[n] for n in reach} <= t.internal_assignment[q]
    targets = t.external_assignment.get(q)
    if targets is None:
        return False
    return all(m.map_target(x) in targets for x in s.external_assignment[p])


def _port_link_ok(s: PortSchema, t: PortSchema, m: SchemaMorphism, l: str) -> bool:
    return _lax_preserved(s.adjacency[l], t.adjacency[m.edge_map[l]], m.port_map.__getitem__)


def _structural_ok(s: Schema, t: Schema, m: SchemaMorphism, weak: bool) -> bool:
    if isinstance(s, BasicSchema) and isinstance(t, BasicSchema):
        return weak
    if not (isinstance(s, PortSchema) and isinstance(t, PortSchema)) or not weak:
        return False
    if not all(_port_ok(s, t, m, p) for p in s.ports):
        return False
    return all(_port_link_ok(s, t, m, l) for l in s.links)


def check_structural(s: Schema, t: Schema, m: SchemaMorphism) -> MorphismFlags:
    both_ports = isinstance(s, PortSchema) and isinstance(t, PortSchema)
    # a morphism given without any port map is read as a weak (node-level) one
    with_ports = both_ports and bool(m.port_map or not s.ports)
    _require_total(s, t, m, with_ports)
    weak = _weak_ok(s, t, m)
    structural = (with_ports or not both_ports) and _structural_ok(s, t, m, weak)
    weak_typed = weak and all(
        element_covers(s.nodes[n], t.nodes[m.node_map[n]]) for n in s.nodes
    ) and all(
        element_covers(s.links[l].element, t.links[m.edge_map[l]].element) for l in s.links
    )
    typed = structural and weak_typed and all(
        element_covers(s.ports[p].element, t.ports[m.port_map[p]].element) for p in s.ports
    )
    nodes = [m.node_map[n] for n in s.nodes]
    links = [m.edge_map[l] for l in s.links]
    ports = [m.port_map[p] for p in s.ports] if with_ports else []
    return MorphismFlags(
        structural=structural,
        weak=weak,
        typed=typed,
        weak_typed=weak_typed,
        v_mono=len(set(nodes)) == len(nodes),
        e_mono=len(set(links)) == len(links),
        v_epi=set(nodes) == set(t.nodes),
        e_epi=set(links) == set(t.links),
        p_mono=len(set(ports)) == len(ports),
        p_epi=not with_ports or set(ports) == set(t.ports),
    )


def check_typed(s: Schema, t: Schema, m: SchemaMorphism) -> bool:
    flags = check_structural(s, t, m)
    if not flags.structural:
        raise NotStructural("typed check needs a structural homomorphism")
    return flags.typed


def compose(first: SchemaMorphism, second: SchemaMorphism) -> SchemaMorphism:
    """``second`` after ``first``.

    When either leg has no port map the composite is a weak morphism and has
    none either.
    """
    if first.codomain and second.domain and first.codomain != second.domain:
        raise NotComposable(f"{first.codomain} is not {second.domain}")
    try:
        return SchemaMorphism(
            {n: second.node_map[x] for n, x in first.node_map.items()},
            {l: second.edge_map[x] for l, x in first.edge_map.items()},
            {p: second.port_map[x] for p, x in first.port_map.items()}
            if second.port_map else {},
            first.domain,
            second.codomain,
        )
    except KeyError as exc:
        raise NotComposable(f"{exc.args[0]} is outside the second morphism's domain") from None


# ---------------------------------------------------------------- search


def _must_may(alts_by_link: Mapping[str, frozenset[Attachment]], side) -> tuple[dict, dict]:
    """Per vertex: links attached there in every alternative, and in some alternative."""
    must: dict[str, int] = {}
    may: dict[str, int] = {}
    for alts in alts_by_link.values():
        ends = [side(a) for a in alts]
        for v in set(ends) - {None}:
            may[v] = may.get(v, 0) + 1
        if len(set(ends)) == 1 and ends[0] is not None:
            must[ends[0]] = must.get(ends[0], 0) + 1
    return must, may


def find_homomorphisms(
    s: Schema,
    t: Schema,
    *,
    structural: bool = True,
    typed: bool = False,
    mono: bool = False,
    epi: bool = False,
    port_mono: bool = False,
    limit: int | None = None,
) -> list[SchemaMorphism]:
    """All homomorphisms ``s -> t`` in lexicographic order of their images.

    ``structural=False`` searches weak homomorphisms (ports ignored).  ``mono``
    and ``epi`` ask for VE-monomorphisms / VE-epimorphisms.
    """
    with_ports = structural and isinstance(s, PortSchema) and isinstance(t, PortSchema)
    if structural and type(s) is not type(t):
        return []
    snodes, tnodes = list(s.nodes), list(t.nodes)
    sports = list(s.ports) if with_ports else []
    slinks = list(s.links)
    sa, ta = node_adjacency_sets(s), node_adjacency_sets(t)
    fan_s = [_must_may(sa, end_of), _must_may(sa, begin_of)]
    fan_t = [_must_may(ta, end_of), _must_may(ta, begin_of)]

    def node_candidates(n: str) -> list[str]:
        out = []
        for c in tnodes:
            if typed and not element_covers(s.nodes[n], t.nodes[c]):
                continue
            ok = True
            for (must, _), (_, may) in zip(fan_s, fan_t):
                need, have = must.get(n, 0), may.get(c, 0)
                if (mono and need > have) or (need > 0 and have == 0):
                    ok = False
            if ok:
                out.append(c)
        return out

    node_cands = {n: node_candidates(n) for n in snodes}
    link_cands = {
        l: [c for c in t.links if t.links[c].link_class == s.links[l].link_class
            and (not typed or element_covers(s.links[l].element, t.links[c].element))]
        for l in slinks
    }
    results: list[SchemaMorphism] = []
    nmap: dict[str, str] = {}
    pmap: dict[str, str] = {}
    lmap: dict[str, str] = {}
    steps = [0]

    def morphism() -> SchemaMorphism:
        return SchemaMorphism(dict(nmap), dict(lmap), dict(pmap), s.name, t.name)

    def tick() -> None:
        steps[0] += 1
        if steps[0] > SEARCH_LIMIT:
            raise SearchSpaceTooLarge(f"more than {SEARCH_LIMIT} search steps")

    def full() -> bool:
        return limit is not None and len(results) >= limit

    def finish() -> None:
        m = morphism()
        flags = check_structural(s, t, m)
        if not (flags.structural if structural else flags.weak):
            return
        if typed and not (flags.typed if structural else flags.weak_typed):
            return
        if epi and not flags.ve_epi:
            return
        results.append(m)

    def place_links(i: int) -> None:
        if full():
            return
        if i == len(slinks):
            finish()
            return
        l = slinks[i]
        used = set(lmap.values())
        for c in link_cands[l]:
            tick()
            if mono and c in used:
                continue
            if epi and len(set(t.links) - used - {c}) > len(slinks) - i - 1:
                continue
            if not _lax_preserved(sa[l], ta[c], nmap.__getitem__):
                continue
            if with_ports and not _lax_preserved(s.adjacency[l], t.adjacency[c], pmap.__getitem__):
                continue
            lmap[l] = c
            place_links(i + 1)
            del lmap[l]

    def place_ports(i: int) -> None:
        if full():
            return
        if i == len(sports):
            place_links(0)
            return
        p = sports[i]
        used = set(pmap.values())
        for c in t.ports:
            tick()
            if port_mono and c in used:
                continue
            if typed and not element_covers(s.ports[p].element, t.ports[c].element):
                continue
            pmap[p] = c
            # external targets that are links are checked once links are placed
            if _port_ok_partial(s, t, pmap, nmap, p):
                place_ports(i + 1)
            del pmap[p]

    def place_nodes(i: int) -> None:
        if full():
            return
        if i == len(snodes):
            place_ports(0)
            return
        n = snodes[i]
        used = set(nmap.values())
        for c in node_cands[n]:
            tick()
            if mono and c in used:
                continue
            if epi and len(set(tnodes) - used - {c}) > len(snodes) - i - 1:
                continue
            nmap[n] = c
            place_nodes(i + 1)
            del nmap[n]

    place_nodes(0)
    return results


def _port_ok_partial(s: PortSchema, t: PortSchema, pmap, nmap, p: str) -> bool:
    q = pmap[p]
    sp, tp = s.ports[p], t.ports[q]
    if sp.direction is not tp.direction:
        return False
    if sp.locus is Locus.INTERNAL:
        return tp.locus is Locus.INTERNAL and all(
            nmap[n] in t.internal_assignment[q] for n in s.internal_assignment[p])
    if p not in s.external_assignment:
        return True
    if tp.locus is Locus.INTERNAL:
        reach = target_nodes(s, s.external_assignment[p])
        return reach is not None and all(
            nmap[n] in t.internal_assignment[q] for n in reach if n in nmap)
    if q not in t.external_assignment:
        return False
    tables = {"node": nmap, "port": pmap}
    for x in s.external_assignment[p]:
        table = tables.get(x.sort)
        if table is not None and x.id in table:
            if Target(x.sort, table[x.id]) not in t.external_assignment[q]:
                return False
    return True


def _strip_links(s: Schema) -> Schema:
    if isinstance(s, BasicSchema):
        return replace(s, links={}, node_adjacency={})
    ext = {p: frozenset(x for x in ts if x.sort == "node")
           for p, ts in s.external_assignment.items()}
    return replace(s, links={}, adjacency={}, external_assignment=ext)


def _single_port(s: PortSchema, p: str) -> PortSchema:
    base = _strip_links(s)
    ext = {p: base.external_assignment[p]} if p in base.external_assignment else {}
    owners = {p: s.internal_assignment[p]} if p in s.internal_assignment else {}
    return replace(base, ports={p: s.ports[p]}, internal_assignment=owners,
                   external_assignment=ext)


def _single_link(s: Schema, l: str) -> Schema:
    base = _strip_links(s)
    if isinstance(s, BasicSchema):
        return replace(base, links={l: s.links[l]}, node_adjacency={l: s.node_adjacency[l]})
    return replace(base, links={l: s.links[l]}, adjacency={l: s.adjacency[l]},
                   external_assignment={})


def brute_force_homomorphisms(
    s: Schema,
    t: Schema,
    *,
    structural: bool = True,
    typed: bool = False,
    mono: bool = False,
    epi: bool = False,
) -> list[SchemaMorphism]:
    """Reference enumeration of every total map, decided by :func:`check_structural` alone.

    Candidate images are filtered slot by slot (each port, then each link, is
    checked on a one-slot copy of the domain) before the full product is
    checked, which keeps the enumeration exhaustive without materializing the
    whole product.  It is an oracle for :func:`find_homomorphisms`, not a
    second search.
    """
    with_ports = structural and isinstance(s, PortSchema) and isinstance(t, PortSchema)
    if structural and type(s) is not type(t):
        return []
    snodes, sports, slinks = list(s.nodes), list(s.ports) if with_ports else [], list(s.links)
    if len(t.nodes) ** len(snodes) > SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"{len(t.nodes) ** len(snodes)} node maps")
    bare_t = _strip_links(t)
    port_views = {p: _single_port(s, p) for p in sports}
    link_views = {l: _single_link(s, l) for l in slinks}
    key = "structural" if structural else "weak"

    def passes(view, target, nmap, lmap, pmap) -> bool:
        return getattr(check_structural(view, target, SchemaMorphism(nmap, lmap, pmap)), key)

    out = []
    node_view = _strip_links(s)
    if isinstance(s, PortSchema):
        node_view = replace(node_view, ports={}, internal_assignment={}, external_assignment={})
    for nimg in itertools.product(list(t.nodes), repeat=len(snodes)):
        nmap = dict(zip(snodes, nimg))
        if not passes(node_view, bare_t, nmap, {}, {}):
            continue
        per_port = [[c for c in t.ports if passes(port_views[p], bare_t, nmap, {}, {p: c})]
                    for p in sports]
        for pimg in itertools.product(*per_port):
            pmap = dict(zip(sports, pimg))
            per_link = [[c for c in t.links if passes(link_views[l], t, nmap, {l: c}, pmap)]
                        for l in slinks]
            for limg in itertools.product(*per_link):
                m = SchemaMorphism(nmap, dict(zip(slinks, limg)), pmap, s.name, t.name)
                flags = check_structural(s, t, m)
                if not getattr(flags, key):
                    continue
                if typed and not (flags.typed if structural else flags.weak_typed):
                    continue
                if mono and not flags.ve_mono:
                    continue
                if epi and not flags.ve_epi:
                    continue
                out.append(m)
    return sorted(out, key=SchemaMorphism.key)


# ---------------------------------------------------------------- subschemas


def restrict_schema(
    r: Schema,
    nodes: frozenset[str] | set[str],
    links: frozenset[str] | set[str],
    ports: frozenset[str] | set[str] = frozenset(),
    name: str | None = None,
) -> Schema:
    """The subschema of ``r`` on the given slots, cut at its boundary.

    Attachment sides outside the kept ports (or nodes, for basic schemas) are
    dropped; a kept port whose owners are all dropped becomes a free external
    port.  Raises :class:`NotASubschema` when a kept link keeps no side.
    """
    nodes, links, ports = frozenset(nodes), frozenset(links), frozenset(ports)
    unknown = (nodes - set(r.nodes)) | (links - set(r.links)) | (ports - set(r.ports))
    if unknown:
        raise NotASubschema(f"unknown slots {sorted(unknown)}")
    name = r.name if name is None else name

    def cut(alts, keep):
        kept = frozenset(x for a in alts if (x := restrict_attachment(a, keep)) is not None)
        return kept

    if isinstance(r, BasicSchema):
        adj = {l: cut(r.node_adjacency[l], nodes) for l in links}
        empty = sorted(l for l, v in adj.items() if not v)
        if empty:
            raise NotASubschema(f"links {empty} keep no attached side")
        return BasicSchema(name, {n: r.nodes[n] for n in nodes},
                           {l: r.links[l] for l in links}, adj, annotations=r.annotations)

    slots = {}
    assignment = {}
    for p in ports:
        slot = r.ports[p]
        if slot.locus is Locus.INTERNAL:
            owners = r.internal_assignment[p] & nodes
            if owners:
                assignment[p] = owners
            else:
                slot = replace(slot, locus=Locus.EXTERNAL)
        slots[p] = slot
    internal = frozenset(assignment)
    kept_ids = {"node": nodes, "port": internal, "link": links}
    external = {}
    for p in ports:
        if r.ports[p].locus is Locus.EXTERNAL and p in r.external_assignment:
            targets = frozenset(x for x in r.external_assignment[p] if x.id in kept_ids[x.sort])
            if targets:
                external[p] = targets
    adj = {l: cut(r.adjacency[l], internal) for l in links}
    empty = sorted(l for l, v in adj.items() if not v)
    if empty:
        raise NotASubschema(f"links {empty} keep no attached side")
    return PortSchema(name, {n: r.nodes[n] for n in nodes}, slots,
                      {l: r.links[l] for l in links}, assignment, adj, external,
                      annotations=r.annotations)


def is_subschema(p: Schema, r: Schema) -> bool:
    if type(p) is not type(r):
        return False
    try:
        cut = restrict_schema(r, set(p.nodes), set(p.links), set(p.ports), name=p.name)
    except NotASubschema:
        return False
    return cut == p


def inclusion(p: Schema, r: Schema) -> SchemaMorphism:
    return SchemaMorphism({n: n for n in p.nodes}, {l: l for l in p.links},
                          {x: x for x in p.ports}, p.name, r.name)


@dataclass(frozen=True)
class SubschemaResult:
    subschema: bool
    structural: bool
    strong_structural: bool
    witness: SchemaMorphism | None = None


def subschema_check(p: Schema, r: Schema) -> SubschemaResult:
    if is_subschema(p, r):
        return SubschemaResult(True, True, True, inclusion(p, r))
    weak = find_homomorphisms(p, r, structural=False, mono=True, limit=1)
    if not weak:
        return SubschemaResult(False, False, False, None)
    if isinstance(p, BasicSchema) and isinstance(r, BasicSchema):
        return SubschemaResult(False, True, True, weak[0])
    strong = find_homomorphisms(p, r, structural=True, mono=True, port_mono=True, limit=1)
    return SubschemaResult(False, True, bool(strong), strong[0] if strong else weak[0])


@dataclass(frozen=True)
class Completeness:
    v_complete: bool
    e_complete: bool
    p_complete: bool


def completeness_flags(q: Schema, r: Schema) -> Completeness:
    if not is_subschema(q, r):
        raise NotASubschema(f"{q.name} is not a subschema of {r.name}")
    adj = node_adjacency_sets(r)
    touching = {l for l, alts in adj.items()
                if any(v in q.nodes for a in alts for v in (begin_of(a), end_of(a)))}
    return Completeness(
        v_complete=set(q.nodes) == set(r.nodes),
        e_complete=touching <= set(q.links),
        # a port counts only if it keeps its place in the system: same locus,
        # every possible owner, every external target
        p_complete=set(q.ports) == set(r.ports)
        and all(q.ports[x].locus is r.ports[x].locus for x in r.ports)
        and all(q.internal_assignment.get(x) == r.internal_assignment.get(x) for x in r.ports)
        and all(q.external_assignment.get(x) == r.external_assignment.get(x) for x in r.ports),
    )


# ---------------------------------------------------------------- image, preimage, restriction


@dataclass(frozen=True)
class ImageFactorization:
    image: Schema
    onto: SchemaMorphism  # domain ->> image
    into: SchemaMorphism  # image >-> codomain


def image(s: Schema, t: Schema, m: SchemaMorphism) -> ImageFactorization:
    flags = check_structural(s, t, m)
    if not (flags.structural or (flags.weak and isinstance(s, BasicSchema))):
        raise NotStructural("image needs a structural homomorphism")
    nodes = set(m.node_map.values())
    links = set(m.edge_map.values())
    ports = set(m.port_map.values()) if isinstance(t, PortSchema) else set()
    im = restrict_schema(t, nodes, links, ports, name=f"Im_{t.name}")
    onto = replace(m, codomain=im.name)
    return ImageFactorization(im, onto, replace(inclusion(im, t), domain=im.name))


def preimage(s: Schema, t: Schema, m: SchemaMorphism, q: Schema) -> Schema:
    """The largest subschema of ``s`` whose slots all map into ``q``."""
    if not is_subschema(q, t):
        raise NotASubschema(f"{q.name} is not a subschema of {t.name}")
    if not check_structural(s, t, m).structural:
        raise NotStructural("preimage needs a structural homomorphism")
    nodes = {n for n, x in m.node_map.items() if x in q.nodes}
    ports = {p for p, x in m.port_map.items() if x in q.ports}
    if isinstance(s, PortSchema):
        # links stay attached only at kept ports that keep an owner
        keep = set(restrict_schema(s, nodes, set(), ports).internal_ports())
        pairs = s.adjacency
    else:
        keep, pairs = nodes, s.node_adjacency
    links = {l for l, x in m.edge_map.items() if x in q.links
             and any(restrict_attachment(a, keep) is not None for a in pairs[l])}
    return restrict_schema(s, nodes, links, ports, name=f"Pre_{s.name}")


def restrict(m: SchemaMorphism, s: Schema, q: Schema) -> SchemaMorphism:
    if not is_subschema(q, s):
        raise NotASubschema(f"{q.name} is not a subschema of {s.name}")
    return SchemaMorphism(
        {n: m.node_map[n] for n in q.nodes},
        {l: m.edge_map[l] for l in q.links},
        {p: m.port_map[p] for p in q.ports if p in m.port_map},
        q.name,
        m.codomain,
    )


# ---------------------------------------------------------------- grid-side predicates


def is_closed_schema(s: Schema) -> bool:
    return classify_schema(s).roles == frozenset({Role.CLOSED})


def component_count(s: Schema) -> int:
    return len(components(schema_variable_grid(s).fixed()))


def is_connected(s: Schema) -> bool:
    return component_count(s) <= 1


def resolutions_components(s: Schema) -> Iterator[int]:
    for g in schema_variable_grid(s).resolutions():
        yield len(components(g))


__all__ = [name for name in dir() if not name.startswith("_")]
