from __future__ import annotations

import random

import pytest
from generators import (
    any_schema,
    port_schema,
    quotient,
    random_binding,
    random_subschema,
    with_name,
)

from gridschema.errors import NotASubschema, NotComposable, NotStructural, PartialMap, SchemaMismatch
from gridschema.fixtures import grasp_core, grasping_schema, mixed_fragment
from gridschema.grid_automaton import Direction, LinkClass, Locus, Target
from gridschema.kinds import Kind, kind_set
from gridschema.multigraph import Closed, fan_degrees
from gridschema.morphism import (
    SchemaMorphism,
    brute_force_homomorphisms,
    check_structural,
    check_typed,
    completeness_flags,
    component_count,
    compose,
    find_homomorphisms,
    identity,
    image,
    inclusion,
    is_closed_schema,
    is_connected,
    is_subschema,
    preimage,
    restrict,
    restrict_schema,
    subschema_check,
)
from gridschema.schema import (
    BasicSchema,
    Constant,
    LinkSlot,
    PortSchema,
    PortSlot,
    Variable,
    derive_basic_schema,
    schema_grid,
)
from gridschema.transform import abstract_elements, concretize, restoring_binding
from test_transform import _random_spec

TRIALS = 120
KA, KB = Constant(Kind(("k", "a"))), Constant(Kind(("k", "b")))
INFO = LinkClass.INFORMATION


def basic(name, nodes, links):
    """``links``: id -> (begin, end)."""
    return BasicSchema(name, {n: KA for n in nodes}, {l: LinkSlot(INFO) for l in links},
                       {l: {Closed(*ends)} for l, ends in links.items()})


def morphisms(seed, n=TRIALS, **kw):
    """``n`` structural morphisms: merges of random schemas and searched ones."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        s = with_name(any_schema(rng, **kw), "R")
        if rng.random() < 0.75:
            t, m = quotient(rng, s, name="P")
            out.append((s, t, m))
        else:
            t = with_name(any_schema(rng, **kw), "P")
            found = find_homomorphisms(s, t, limit=3)
            out.extend((s, t, m) for m in found)
    return out[:n]


# ---------------------------------------------------------------- checking


def test_identity_flags():
    for s in (grasping_schema(), mixed_fragment()):
        f = check_structural(s, s, identity(s))
        assert f.structural and f.typed and f.ve_mono and f.ve_epi


def test_collapse_of_parallel_nodes():
    s = basic("R", "abc", {"x": ("a", "c"), "y": ("b", "c")})
    t = basic("P", "uv", {"x": ("u", "v"), "y": ("u", "v")})
    m = SchemaMorphism({"a": "u", "b": "u", "c": "v"}, {"x": "x", "y": "y"}, {}, "R", "P")
    f = check_structural(s, t, m)
    assert f.structural and f.v_epi and not f.v_mono and f.e_mono


def test_broken_endpoint_is_not_structural():
    s = basic("R", "ab", {"x": ("a", "b")})
    m = SchemaMorphism({"a": "b", "b": "a"}, {"x": "x"}, {}, "R", "R")
    assert not check_structural(s, s, m).structural


def test_typed_conditions():
    fa = kind_set(("automaton", "finite_automaton"))
    var = BasicSchema("R", {"a": Variable("A", fa)})
    fa_const = BasicSchema("P", {"a": Constant(Kind(("automaton", "finite_automaton")))})
    tm_const = BasicSchema("R", {"a": Constant(Kind(("automaton", "turing_machine")))})
    m = SchemaMorphism({"a": "a"}, {}, {}, "R", "P")
    assert check_typed(var, fa_const, m)
    assert not check_typed(tm_const, fa_const, m)
    broken = basic("R", "ab", {"x": ("a", "b")})
    with pytest.raises(NotStructural):
        check_typed(broken, broken, SchemaMorphism({"a": "b", "b": "a"}, {"x": "x"}, {}, "R", "R"))


def test_partial_and_mismatched_maps():
    s = basic("R", "ab", {"x": ("a", "b")})
    with pytest.raises(PartialMap):
        check_structural(s, s, SchemaMorphism({"a": "a"}, {"x": "x"}))
    with pytest.raises(SchemaMismatch):
        check_structural(s, s, SchemaMorphism({"a": "a", "b": "b"}, {"x": "x"}, {}, "Z", "R"))
    with pytest.raises(NotComposable):
        compose(identity(s), identity(with_name(s, "Z")))


def test_port_preservation():
    for s, t, m in morphisms(3, 60, variables=False):
        if not isinstance(s, PortSchema):
            continue
        for p, q in m.port_map.items():
            assert s.ports[p].direction is t.ports[q].direction
            if s.ports[p].locus is Locus.INTERNAL:
                assert t.ports[q].locus is Locus.INTERNAL


# ---------------------------------------------------------------- search


def test_search_contains_identity():
    rng = random.Random(5)
    for _ in range(60):
        s = any_schema(rng)
        assert identity(s).key() in {m.key() for m in find_homomorphisms(s, s)}


def test_search_agrees_with_brute_force():
    rng = random.Random(7)
    for _ in range(50):
        s = with_name(any_schema(rng, max_nodes=3, max_links=3, max_ports=4), "R")
        t = with_name(any_schema(rng, max_nodes=3, max_links=3, max_ports=4), "P")
        if type(s) is not type(t):
            continue
        for kw in ({}, {"typed": True}, {"mono": True}, {"epi": True}, {"structural": False}):
            a = [m.key() for m in find_homomorphisms(s, t, **kw)]
            b = [m.key() for m in brute_force_homomorphisms(s, t, **kw)]
            assert a == b, kw


def test_grasp_core_embeds_by_inclusion():
    core, full = grasp_core(), grasping_schema()
    found = find_homomorphisms(core, full, mono=True)
    assert inclusion(core, full).key() in {m.key() for m in found}
    r = subschema_check(core, full)
    assert r.subschema and r.structural and r.strong_structural


def test_mixed_fragment_is_structural_only():
    r = subschema_check(mixed_fragment(), grasping_schema())
    assert r.structural and not r.subschema
    assert check_structural(mixed_fragment(), grasping_schema(), r.witness).ve_mono


def test_limit_and_typed_pruning():
    s = grasping_schema()
    assert len(find_homomorphisms(s, s, limit=1)) == 1
    assert [m.key() for m in find_homomorphisms(s, s, typed=True)] == [identity(s).key()]


# ---------------------------------------------------------------- category laws


def _same(a, b):
    return (a.node_map, a.edge_map, a.port_map) == (b.node_map, b.edge_map, b.port_map)


@pytest.mark.parametrize("mode", ["structural", "typed", "weak"])
def test_category_laws(mode):
    rng = random.Random({"structural": 11, "typed": 13, "weak": 17}[mode])
    checked = 0
    while checked < TRIALS:
        s = with_name(any_schema(rng), "R")
        t, f = quotient(rng, s, name="P")
        u, g = quotient(rng, t, name="U")
        v, h = quotient(rng, u, name="V")
        if mode == "weak":
            f, g, h = (SchemaMorphism(x.node_map, x.edge_map, {}, x.domain, x.codomain)
                       for x in (f, g, h))
        flag = {"structural": "structural", "typed": "typed", "weak": "weak"}[mode]
        if not all(getattr(check_structural(a, b, x), flag)
                   for a, b, x in ((s, t, f), (t, u, g), (u, v, h))):
            continue
        gf = compose(f, g)
        assert getattr(check_structural(s, u, gf), flag)
        assert _same(compose(identity(s), f), f) and _same(compose(f, identity(t)), f)
        assert _same(compose(compose(f, g), h), compose(f, compose(g, h)))
        checked += 1


def test_typed_morphisms_compose_to_typed():
    checked = 0
    for s, t, f in morphisms(19, 400):
        if not check_structural(s, t, f).typed:
            continue
        rng = random.Random(checked)
        u, g = quotient(rng, t, name="U")
        if check_structural(t, u, g).typed:
            assert check_structural(s, u, compose(f, g)).typed
            checked += 1
    assert checked >= 100


def _forget_ports(m):
    return SchemaMorphism(m.node_map, m.edge_map, {}, m.domain, m.codomain)


def test_typed_morphisms_sit_inside_structural_ones():
    checked = 0
    for s, t, f in morphisms(20, 300):
        flags = check_structural(s, t, f)
        assert flags.structural or not flags.typed
        assert flags.weak or not flags.weak_typed
        assert flags.weak_typed or not flags.typed
        checked += flags.typed
        ident = check_structural(s, s, identity(s))
        assert ident.typed and ident.weak_typed
    assert checked >= 100


def test_forgetting_port_maps_respects_composition():
    checked = 0
    for s, t, f in morphisms(21, 200):
        rng = random.Random(checked)
        u, g = quotient(rng, t, name="U")
        weak_f = check_structural(s, t, _forget_ports(f))
        assert weak_f.weak and (weak_f.weak_typed or not check_structural(s, t, f).typed)
        assert _same(_forget_ports(compose(f, g)), compose(_forget_ports(f), _forget_ports(g)))
        assert _same(_forget_ports(identity(s)), compose(_forget_ports(identity(s)), _forget_ports(identity(s))))
        checked += 1
    assert checked >= 100


def test_weak_morphism_need_not_lift_to_a_structural_one():
    # a free port on the domain node has nowhere to go: the target node has no ports
    r = PortSchema("R", {"a": KA}, {"p": PortSlot(Direction.INLET, Locus.INTERNAL)}, {}, {"p": {"a"}})
    p = PortSchema("P", {"x": KA})
    assert check_structural(r, p, SchemaMorphism({"a": "x"}, {}, {}, "R", "P")).weak
    assert find_homomorphisms(r, p) == []


# ---------------------------------------------------------------- connectivity and fan bounds


def test_connectivity_counterexample_with_edge_epi_only():
    # no edges, so any map is edge-surjective; an isolated extra node splits the target
    r = BasicSchema("R", {"a": KA})
    p = BasicSchema("P", {"x": KA, "y": KA})
    f = check_structural(r, p, SchemaMorphism({"a": "x"}, {}, {}, "R", "P"))
    assert f.structural and f.e_epi and not f.v_epi
    assert is_connected(r) and not is_connected(p)
    assert component_count(r) < component_count(p)


def _single_valued_morphisms(seed, n=TRIALS):
    return morphisms(seed, n, set_valued=False)


def test_connected_domain_gives_connected_codomain_under_ve_epi():
    checked = 0
    for s, t, m in _single_valued_morphisms(23, 400):
        f = check_structural(s, t, m)
        if f.structural and f.ve_epi:
            assert not is_connected(s) or is_connected(t)
            assert is_connected(t) or not is_connected(s)
            checked += 1
    assert checked >= 100


def test_component_count_does_not_grow_under_ve_epi():
    checked = 0
    for s, t, m in _single_valued_morphisms(29, 400):
        f = check_structural(s, t, m)
        if f.structural and f.ve_epi:
            assert component_count(s) >= component_count(t)
            checked += 1
    assert checked >= 100


def test_fan_bound_counterexample_under_edge_epi():
    r = basic("R", "ab", {"e": ("a", "b")})
    p = basic("P", "x", {"e": ("x", "x")})
    m = SchemaMorphism({"a": "x", "b": "x"}, {"e": "e"}, {}, "R", "P")
    f = check_structural(r, p, m)
    assert f.structural and f.e_epi
    assert fan_degrees(schema_grid(p), "x")[0] > 0 and fan_degrees(schema_grid(r), "a")[0] == 0
    r2 = basic("R", "abcd", {"e1": ("a", "b"), "e2": ("c", "d")})
    p2 = basic("P", "xyz", {"e1": ("x", "z"), "e2": ("y", "z")})
    m2 = SchemaMorphism({"a": "x", "b": "z", "c": "y", "d": "z"}, {"e1": "e1", "e2": "e2"},
                        {}, "R", "P")
    assert check_structural(r2, p2, m2).e_epi
    assert max(fan_degrees(schema_grid(r2), v)[0] for v in r2.nodes) < 2
    assert fan_degrees(schema_grid(p2), "z")[0] == 2


def test_edge_mono_bounds_fan_degrees():
    checked = 0
    for s, t, m in _single_valued_morphisms(31, 400):
        f = check_structural(s, t, m)
        if not (f.weak and f.e_mono):
            continue
        gs, gt = schema_grid(s), schema_grid(t)
        for v in s.nodes:
            fin, fout = fan_degrees(gs, v)
            tin, tout = fan_degrees(gt, m.node_map[v])
            assert fin <= tin and fout <= tout
        checked += 1
    assert checked >= 100


# ---------------------------------------------------------------- restriction, image, preimage


def test_restriction_keeps_flags():
    rng = random.Random(37)
    checked = 0
    for s, t, m in morphisms(37, 200):
        q = random_subschema(rng, s, name="Qs")
        before = check_structural(s, t, m)
        after = check_structural(q, t, restrict(m, s, q))
        assert after.structural or not before.structural
        assert after.typed or not before.typed
        for flag in ("v_mono", "e_mono", "ve_mono"):
            assert getattr(after, flag) or not getattr(before, flag)
        checked += 1
    assert checked >= 100


def test_restricting_identity_gives_inclusion():
    s = grasping_schema()
    q = grasp_core()
    assert _same(restrict(identity(s), s, q), inclusion(q, s))


def test_restriction_can_lose_epi():
    s = basic("R", "abc", {"x": ("a", "b"), "y": ("b", "c")})
    q = restrict_schema(s, {"a", "b"}, {"x"})
    assert check_structural(s, s, identity(s)).ve_epi
    assert not check_structural(q, s, restrict(identity(s), s, q)).v_epi


def test_image_factorization():
    checked = 0
    for s, t, m in morphisms(41, TRIALS):
        fac = image(s, t, m)
        onto = check_structural(s, fac.image, fac.onto)
        assert onto.structural and onto.ve_epi
        assert is_subschema(fac.image, t)
        assert check_structural(fac.image, t, fac.into).ve_mono
        checked += 1
    assert checked == TRIALS


def test_image_of_epimorphism_is_codomain():
    for s, t, m in morphisms(43, 200):
        f = check_structural(s, t, m)
        if f.ve_epi and f.p_epi:
            im = image(s, t, m).image
            assert (set(im.nodes), set(im.links), set(im.ports)) == (
                set(t.nodes), set(t.links), set(t.ports))


def test_image_of_closed_schema_is_closed():
    checked = 0
    for s, t, m in morphisms(47, 600, set_valued=False):
        if is_closed_schema(s):
            assert is_closed_schema(image(s, t, m).image)
            f = check_structural(s, t, m)
            if f.ve_epi and f.p_epi:
                assert is_closed_schema(t)
            checked += 1
    assert checked >= 100


def test_ve_epi_image_of_closed_schema_can_be_open():
    # every node and link is hit, but the target also has an unmapped external port
    r = PortSchema("R", {"a": KA})
    ports = {"e": PortSlot(Direction.INLET, Locus.EXTERNAL)}
    p = PortSchema("P", {"x": KA}, ports, {}, {}, {}, {"e": {Target("node", "x")}})
    f = check_structural(r, p, SchemaMorphism({"a": "x"}, {}, {}, "R", "P"))
    assert f.structural and f.ve_epi and not f.p_epi
    assert is_closed_schema(r) and not is_closed_schema(p)


def test_image_of_connected_schema_is_connected():
    checked = 0
    for s, t, m in morphisms(53, 400, set_valued=False):
        if is_connected(s):
            assert is_connected(image(s, t, m).image)
            checked += 1
    assert checked >= 100


def test_preimage_of_whole_codomain():
    for s, t, m in morphisms(59, 60):
        pre = preimage(s, t, m, t)
        assert (set(pre.nodes), set(pre.links)) == (set(s.nodes), set(s.links))


def test_preimage_keeps_vertex_completeness():
    rng = random.Random(61)
    checked = 0
    for s, t, m in morphisms(61, 300):
        if not check_structural(s, t, m).v_epi:
            continue
        q = random_subschema(rng, t, name="Qs", keep_all_nodes=True)
        assert completeness_flags(q, t).v_complete
        assert completeness_flags(preimage(s, t, m, q), s).v_complete
        checked += 1
    assert checked >= 100


def test_preimage_keeps_edge_completeness():
    rng = random.Random(67)
    checked = 0
    for s, t, m in morphisms(67, 800):
        if not check_structural(s, t, m).e_epi:
            continue
        nodes = {n for n in t.nodes if rng.random() < 0.7} or set(t.nodes)
        ports = {p for p in t.ports if rng.random() < 0.6}
        links = set()
        for l in t.links:
            try:
                restrict_schema(t, nodes, {l}, ports)
            except NotASubschema:
                continue
            links.add(l)
        q = restrict_schema(t, nodes, links, ports, name="Qs")
        if not completeness_flags(q, t).e_complete:
            continue
        assert completeness_flags(preimage(s, t, m, q), s).e_complete
        checked += 1
    assert checked >= 100


# ---------------------------------------------------------------- subschemas and completeness


def _chains(seed, n=TRIALS):
    rng = random.Random(seed)
    for _ in range(n):
        q = with_name(any_schema(rng, max_nodes=5, max_links=6), "Q")
        r = random_subschema(rng, q, name="R")
        p = random_subschema(rng, r, name="P")
        yield p, r, q


def test_strong_implies_structural():
    rng = random.Random(71)
    for _ in range(TRIALS):
        r = with_name(any_schema(rng), "R")
        p = with_name(any_schema(rng, max_nodes=2, max_links=2, max_ports=3), "P")
        if type(p) is not type(r):
            continue
        res = subschema_check(p, r)
        assert res.structural or not res.strong_structural
        assert res.structural or not res.subschema


def test_structural_subschema_has_ve_mono_witness():
    rng = random.Random(73)
    hits = 0
    for _ in range(400):
        r = with_name(any_schema(rng), "R")
        p = random_subschema(rng, r, name="P")
        res = subschema_check(p, r)
        if not res.structural:
            continue
        found = find_homomorphisms(p, r, structural=False, mono=True)
        assert found and all(check_structural(p, r, m).ve_mono for m in found)
        if res.strong_structural and isinstance(p, PortSchema):
            strong = find_homomorphisms(p, r, mono=True, port_mono=True)
            assert strong and all(check_structural(p, r, m).structural for m in strong)
        hits += 1
    assert hits >= 100


def test_subschema_relation_is_transitive():
    for p, r, q in _chains(79):
        assert is_subschema(p, r) and is_subschema(r, q)
        assert is_subschema(with_name(p, "P"), q)
        assert subschema_check(p, q).structural


def test_structural_subschema_is_transitive_up_to_renaming():
    checked = 0
    for p, r, q in _chains(83, 200):
        # move p and r away from the slot ids of their parents
        ren_nodes = {n: f"z_{n}" for n in p.nodes}
        p2 = _rename_nodes(p, ren_nodes)
        if subschema_check(p2, r).structural and subschema_check(r, q).structural:
            assert subschema_check(p2, q).structural
            checked += 1
    assert checked >= 100


def _rename_nodes(s, ren):
    from gridschema.multigraph import map_attachment

    f = lambda x: ren.get(x, x)
    if isinstance(s, BasicSchema):
        return BasicSchema(s.name, {f(n): e for n, e in s.nodes.items()}, s.links,
                           {l: {map_attachment(a, f) for a in v} for l, v in s.node_adjacency.items()})
    ext = {p: {t if t.sort != "node" else type(t)("node", f(t.id)) for t in v}
           for p, v in s.external_assignment.items()}
    return PortSchema(s.name, {f(n): e for n, e in s.nodes.items()}, s.ports, s.links,
                      {p: {f(n) for n in v} for p, v in s.internal_assignment.items()},
                      s.adjacency, ext)


def test_all_three_complete_iff_equal():
    rng = random.Random(89)
    for _ in range(TRIALS):
        r = with_name(any_schema(rng), "R")
        q = random_subschema(rng, r, name="R", drop_links=0.1)
        c = completeness_flags(q, r)
        assert (c.v_complete and c.e_complete and c.p_complete) == (q == r)
    r = grasping_schema()
    c = completeness_flags(r, r)
    assert c.v_complete and c.e_complete and c.p_complete


def test_dropping_an_incident_edge_breaks_edge_completeness():
    r = basic("R", "abc", {"x": ("a", "b"), "y": ("b", "c")})
    q = restrict_schema(r, set("abc"), {"x"})
    c = completeness_flags(q, r)
    assert c.v_complete and not c.e_complete


def test_port_completeness_implies_vertex_completeness():
    rng = random.Random(97)
    checked = 0
    for _ in range(600):
        r = with_name(port_schema(rng), "R")
        owned = set().union(*r.internal_assignment.values()) if r.internal_assignment else set()
        if owned != set(r.nodes):
            continue
        q = random_subschema(rng, r, name="Qs")
        if completeness_flags(q, r).p_complete:
            assert completeness_flags(q, r).v_complete
        checked += 1
    assert checked >= 100


def test_port_completeness_without_edges_counterexample():
    ports = {"o": PortSlot(Direction.OUTLET, Locus.INTERNAL), "i": PortSlot(Direction.INLET, Locus.INTERNAL)}
    r = PortSchema("R", {"a": KA, "b": KB}, ports, {"l": LinkSlot(INFO)},
                   {"o": {"a"}, "i": {"b"}}, {"l": {Closed("o", "i")}})
    q = restrict_schema(r, {"a", "b"}, set(), {"o", "i"})
    c = completeness_flags(q, r)
    assert c.p_complete and not c.e_complete


def test_port_completeness_implies_edge_completeness_for_induced_subschemas():
    rng = random.Random(101)
    checked = 0
    for _ in range(600):
        r = with_name(port_schema(rng), "R")
        q = random_subschema(rng, r, name="Qs", drop_links=0.0)
        if completeness_flags(q, r).p_complete:
            assert completeness_flags(q, r).e_complete
            checked += 1
    assert checked >= 100


# ---------------------------------------------------------------- induced morphisms


def test_concretization_and_abstraction_induce_identity_morphisms():
    rng = random.Random(103)
    for _ in range(TRIALS):
        s = any_schema(rng)
        c = concretize(s, random_binding(rng, s))
        m = identity(s)
        f = check_structural(s, c, m)
        assert f.structural and f.typed and f.ve_mono and f.ve_epi
        assert check_structural(c, s, m).structural
        const = any_schema(rng, variables=False)
        spec = _random_spec(rng, const)
        a = abstract_elements(const, spec)
        assert check_structural(const, a, identity(const)).structural
        assert check_structural(a, const, identity(const)).typed
        assert concretize(a, restoring_binding(const, spec)) == const


def test_slot_identity_into_basic_form_is_weak():
    rng = random.Random(107)
    for _ in range(TRIALS):
        s = port_schema(rng)
        b = derive_basic_schema(s)
        m = SchemaMorphism({n: n for n in s.nodes}, {l: l for l in s.links}, {}, s.name, b.name)
        f = check_structural(s, b, m)
        assert f.weak and not f.structural
        assert f.ve_mono and f.ve_epi
