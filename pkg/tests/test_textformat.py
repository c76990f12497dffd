from __future__ import annotations

import random

import pytest
from generators import any_schema, automaton, universe

from gridschema.dot import dot_counts, export_dot
from gridschema.errors import SemanticError, SyntaxError_
from gridschema.fixtures import all_fixtures, heterogeneous_schema, mixed_fragment
from gridschema.grid_automaton import BasicGridAutomaton, GridAutomaton
from gridschema.morphism import find_homomorphisms, identity
from gridschema.schema import (
    BasicSchema,
    PortSchema,
    as_schema,
    classify_schema,
    node_adjacency_sets,
    variable_multiset,
)
from gridschema.textformat import (
    Document,
    parse,
    parse_document,
    serialize,
    serialize_document,
    tokenize,
)
from gridschema.grid_automaton import Role


def schema_of(v):
    return as_schema(v) if isinstance(v, (GridAutomaton, BasicGridAutomaton)) else v


def generated(n=500, seed=99):
    rng = random.Random(seed)
    for i in range(n):
        yield automaton(rng) if i % 5 == 0 else any_schema(rng)


@pytest.mark.parametrize("name", sorted(all_fixtures()))
def test_fixture_round_trip(name):
    v = all_fixtures()[name]
    text = serialize(v)
    back = parse(text, keep_schema=not isinstance(v, (GridAutomaton, BasicGridAutomaton)))
    assert back == v
    assert serialize(back) == text


def test_generated_round_trip():
    for v in generated():
        text = serialize(v)
        keep = isinstance(v, (PortSchema, BasicSchema))
        back = parse(text, keep_schema=keep)
        assert back == v
        assert serialize(parse(serialize(back), keep_schema=keep)) == text


def test_serialization_is_deterministic():
    for v in generated(100, seed=5):
        assert serialize(v) == serialize(v)


def test_constant_documents_load_as_automata():
    v = all_fixtures()["heterogeneous_grid"]
    assert isinstance(parse(serialize(v)), GridAutomaton)
    assert isinstance(parse(serialize(all_fixtures()["grasping_interaction"])), BasicGridAutomaton)
    assert isinstance(parse(serialize(heterogeneous_schema())), PortSchema)


def test_corpus_schema_text_keeps_multiset():
    s = parse(serialize(heterogeneous_schema()))
    assert variable_multiset(s).counts() == variable_multiset(heterogeneous_schema()).counts()


def test_empty_document_is_empty_closed_schema():
    s = parse("")
    assert s.nodes == {} and classify_schema(s).role is Role.CLOSED
    assert parse("# only a comment\n") == s


def test_morphism_and_universe_round_trip():
    u = universe()
    r = mixed_fragment()
    ms = find_homomorphisms(r, r)[:3] + [identity(r)]
    doc = Document([r, *ms], u)
    text = serialize_document(doc)
    back = parse_document(text, keep_schema=True)
    assert back.items == doc.items
    assert back.universe.kinds == u.kinds
    assert serialize_document(back) == text


def test_syntax_error_position():
    with pytest.raises(SyntaxError_) as err:
        parse("schema S {\n  node a : konst k/a;\n}")
    assert (err.value.line, err.value.col) == (2, 12)
    with pytest.raises(SyntaxError_):
        tokenize("schema S { node a : const k/a; } @")


def test_link_from_inlet_is_semantic_error():
    text = """schema S {
      node a : const k/a;
      port i in internal of a;
      port o out internal of a;
      link l : info from i to o;
    }"""
    with pytest.raises(SemanticError) as err:
        parse(text)
    assert err.value.element == "l"


def test_duplicate_id_is_semantic_error():
    with pytest.raises(SemanticError):
        parse("basic B { node a : const k/a; node a : const k/b; }")


def test_set_valued_and_open_clauses():
    text = """basic B {
      node a : var X range {k/a, k/b};
      node b : const k/b;
      link l : control at {a->b | a-> | ->b};
    }"""
    s = parse(text)
    assert len(s.node_adjacency["l"]) == 3
    # one link picks one alternative at a time, so never both open sides
    assert classify_schema(s).roles == {Role.CLOSED, Role.TRANSMITTER, Role.ACCEPTOR}


# ---------------------------------------------------------------- DOT


def test_dot_counts_match_model():
    for v in list(all_fixtures().values()) + list(generated(200, seed=3)):
        s = schema_of(v)
        nodes, edges = dot_counts(export_dot(s))
        assert nodes == len(s.nodes)
        assert edges == sum(len(a) for a in node_adjacency_sets(s).values())


def test_dot_styles_and_phantoms():
    text = export_dot(all_fixtures()["grasping_schema"])
    assert "style=dashed" in text and "style=solid" in text
    gated = export_dot(all_fixtures()["gated_machine"])
    assert gated.count("shape=point") == 3
    assert dot_counts(export_dot(parse(""))) == (0, 0)
