"""Canonical text format for schemas, automata and morphisms.

::

    kind node automaton/turing_machine;        # optional universe registration
    schema S {
      note "free text";
      node T1 : const automaton/turing_machine with tapes=2;
      node X  : var X range {automaton/finite_automaton};
      node Y  : param automaton/turing_machine with tapes=k range {1, 2};
      port p  out internal of T1;
      port q  in internal of {X|Y};
      port e  in external of {node X|port q};
      link d  : info from p to q;
      link c  : control var C range * at {p->q | p->};
    }
    basic B { node a : const x; link l : info from a to a; }
    morphism m : S -> B { node T1 -> a; link d -> l; }

A ``schema``/``basic`` block without variables and with single-valued
clauses loads as a grid automaton unless ``keep_schema`` is set.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import SemanticError, SyntaxError_
from .grid_automaton import (
    PORT_KIND,
    SIMPLE_CHANNEL,
    BasicGridAutomaton,
    Direction,
    GridAutomaton,
    LinkClass,
    Locus,
    Target,
)
from .kinds import SORTS, Kind, KindSet, KindUniverse, ParamRange, RangeDescriptor, Universal
from .morphism import SchemaMorphism
from .multigraph import Attachment, attachment_key, begin_of, end_of, make_attachment
from .schema import (
    BasicSchema,
    Constant,
    LinkSlot,
    PortSchema,
    PortSlot,
    Schema,
    SchemaElement,
    Variable,
    as_schema,
    is_constant,
    is_deterministic,
    parameterized,
    to_automaton,
    validate_schema,
)

Value = Union[PortSchema, BasicSchema, GridAutomaton, BasicGridAutomaton, SchemaMorphism]

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)
      |(?P<string>"(?:[^"\\\n]|\\.)*")
      |(?P<arrow>->)
      |(?P<punct>[{};:,=|*])
      |(?P<word>[A-Za-z0-9_][A-Za-z0-9_/.]*)""",
    re.VERBOSE,
)
_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_PATH = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(/[A-Za-z_][A-Za-z0-9_]*)*$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise SyntaxError_(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("word", "string", "arrow", "punct"):
            out.append(Token(kind, chunk, line, col))
        if kind == "nl":
            line, col = line + 1, 1
        else:
            col += len(chunk)
        i = m.end()
    out.append(Token("eof", "", line, col))
    return out


@dataclass
class Document:
    items: list = field(default_factory=list)
    universe: KindUniverse = field(default_factory=KindUniverse)


class _Parser:
    def __init__(self, text: str, keep_schema: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.keep_schema = keep_schema

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> SyntaxError_:
        tok = tok or self.tok
        return SyntaxError_(f"{msg}, found {tok.text or 'end of input'!r}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "string"

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if (text is not None and (t.text != text or t.kind == "string")) or (
                kind is not None and t.kind != kind):
            raise self.error(f"expected {text or kind}")
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self) -> str:
        t = self.take(kind="word")
        if not _ID.match(t.text):
            raise self.error("expected an identifier", t)
        return t.text

    def path(self) -> tuple[str, ...]:
        t = self.take(kind="word")
        if not _PATH.match(t.text):
            raise self.error("expected a kind path", t)
        return tuple(t.text.split("/"))

    def value(self):
        t = self.tok
        if t.kind == "string":
            self.i += 1
            return json.loads(t.text)
        if t.kind == "word":
            self.i += 1
            return int(t.text) if t.text.isdigit() else t.text
        raise self.error("expected a parameter value")

    # -- document
    def document(self) -> Document:
        doc = Document()
        while self.tok.kind != "eof":
            if self.accept("kind"):
                sort = self.ident()
                if sort not in SORTS:
                    raise self.error(f"unknown sort {sort}", self.toks[self.i - 1])
                doc.universe.register(sort, self.path())
                self.take(";")
            elif self.at("schema") or self.at("basic"):
                doc.items.append(self.block())
            elif self.at("morphism"):
                doc.items.append(self.morphism())
            else:
                raise self.error("expected 'schema', 'basic', 'morphism' or 'kind'")
        return doc

    def morphism(self) -> SchemaMorphism:
        self.take("morphism")
        self.ident()
        self.take(":")
        dom = self.ident()
        self.take("->")
        cod = self.ident()
        self.take("{")
        maps: dict[str, dict[str, str]] = {"node": {}, "port": {}, "link": {}}
        while not self.accept("}"):
            sort = self.take(kind="word")
            if sort.text not in maps:
                raise self.error("expected node, port or link", sort)
            a = self.ident()
            self.take("->")
            maps[sort.text][a] = self.ident()
            self.take(";")
        return SchemaMorphism(maps["node"], maps["link"], maps["port"], dom, cod)

    def block(self):
        basic = self.take(kind="word").text == "basic"
        name = self.ident()
        self.take("{")
        nodes: dict = {}
        ports: dict = {}
        links: dict = {}
        owners: dict = {}
        adjacency: dict = {}
        external: dict = {}
        notes: list[str] = []
        seen: set[str] = set()

        def fresh(tok: Token, i: str) -> str:
            if i in seen:
                raise SemanticError("duplicate id", i)
            seen.add(i)
            return i

        while not self.accept("}"):
            t = self.tok
            if self.accept("note"):
                notes.append(json.loads(self.take(kind="string").text))
            elif self.accept("node"):
                n = fresh(t, self.ident())
                self.take(":")
                nodes[n] = self.element("node")
            elif not basic and self.accept("port"):
                p = fresh(t, self.ident())
                direction = Direction(self.take(kind="word").text) if self.tok.text in ("in", "out") \
                    else self._bad("expected 'in' or 'out'")
                locus_tok = self.take(kind="word")
                if locus_tok.text not in ("internal", "external"):
                    raise self.error("expected 'internal' or 'external'", locus_tok)
                locus = Locus(locus_tok.text)
                if locus is Locus.INTERNAL:
                    self.take("of")
                    owners[p] = frozenset(self.alternatives(self.ident))
                elif self.accept("of"):
                    external[p] = frozenset(self.alternatives(self.target))
                element = self.element("port") if self.accept(":") else Constant(PORT_KIND)
                ports[p] = PortSlot(direction, locus, element)
            elif self.accept("link"):
                l = fresh(t, self.ident())
                self.take(":")
                cls_tok = self.take(kind="word")
                try:
                    cls = LinkClass(cls_tok.text)
                except ValueError:
                    raise self.error("expected info, control or process", cls_tok) from None
                element = Constant(SIMPLE_CHANNEL)
                if self.tok.text in ("const", "var", "param"):
                    element = self.element("link")
                links[l] = LinkSlot(cls, element)
                adjacency[l] = self.attachment_clause()
            else:
                raise self.error("expected a declaration")
            self.take(";")

        if basic:
            value = BasicSchema(name, nodes, links, adjacency, annotations=tuple(notes))
        else:
            value = PortSchema(name, nodes, ports, links, owners, adjacency, external,
                               annotations=tuple(notes))
        violations = validate_schema(value)
        if violations:
            v = violations[0]
            raise SemanticError(f"{v.code}: {v.message}".rstrip(": "), v.element)
        if not self.keep_schema and is_constant(value) and is_deterministic(value):
            return to_automaton(value)
        return value

    def _bad(self, msg: str):
        raise self.error(msg)

    def alternatives(self, item):
        if self.accept("{"):
            out = [item()]
            while self.accept("|"):
                out.append(item())
            self.take("}")
            return out
        return [item()]

    def target(self) -> Target:
        sort = self.take(kind="word")
        if sort.text not in SORTS:
            raise self.error("expected node, port or link", sort)
        return Target(sort.text, self.ident())

    def attachment(self) -> Attachment:
        begin = end = None
        if not self.at("->"):
            begin = self.ident()
        self.take("->")
        if self.tok.kind == "word" and _ID.match(self.tok.text):
            end = self.ident()
        if begin is None and end is None:
            raise self.error("an attachment needs a side")
        return make_attachment(begin, end)

    def attachment_clause(self) -> frozenset[Attachment]:
        if self.accept("at"):
            return frozenset(self.alternatives(self.attachment))
        begin = self.ident() if self.accept("from") else None
        end = self.ident() if self.accept("to") else None
        if begin is None and end is None:
            raise self.error("expected 'from', 'to' or 'at'")
        return frozenset({make_attachment(begin, end)})

    def range_(self, param: bool, sort: str) -> RangeDescriptor:
        if self.accept("*"):
            if param:
                raise self.error("parameter ranges must be listed")
            return Universal(sort)
        self.take("{")
        items = []
        if not self.at("}"):
            items.append(self.value() if param else self.path())
            while self.accept(","):
                items.append(self.value() if param else self.path())
        self.take("}")
        return ParamRange(frozenset(items)) if param else KindSet(frozenset(items))

    def element(self, sort: str) -> SchemaElement:
        head = self.take(kind="word")
        if head.text == "const":
            path = self.path()
            params = {}
            if self.accept("with"):
                while True:
                    k = self.ident()
                    self.take("=")
                    params[k] = self.value()
                    if not self.accept(","):
                        break
            return Constant(Kind(path, tuple(params.items())))
        if head.text == "var":
            name = self.ident()
            self.take("range")
            return Variable(name, self.range_(False, sort))
        if head.text == "param":
            path = self.path()
            self.take("with")
            params = {}
            while True:
                k = self.ident()
                self.take("=")
                v = self.value()
                if self.accept("range"):
                    if not isinstance(v, str) or not _ID.match(v):
                        raise self.error("variable names are identifiers")
                    v = Variable(v, self.range_(True, sort))
                params[k] = v
                if not self.accept(","):
                    break
            return parameterized(path, params)
        raise self.error("expected const, var or param", head)


def parse_document(text: str, keep_schema: bool = False) -> Document:
    return _Parser(text, keep_schema).document()


def parse(text: str, keep_schema: bool = False) -> Value:
    """Parse a single value; an empty document is the empty schema."""
    doc = parse_document(text, keep_schema)
    if not doc.items:
        return PortSchema("empty")
    if len(doc.items) > 1:
        raise SemanticError("expected a single block; use parse_document for several")
    return doc.items[0]


# ---------------------------------------------------------------- serialization


def _fmt_value(v) -> str:
    return str(v) if isinstance(v, int) else json.dumps(v)


def _fmt_range(r: RangeDescriptor) -> str:
    if isinstance(r, Universal):
        return "*"
    if isinstance(r, KindSet):
        return "{" + ", ".join("/".join(p) for p in r.sorted_paths()) + "}"
    return "{" + ", ".join(_fmt_value(v) for v in r.sorted_values()) + "}"


def format_element(e: SchemaElement) -> str:
    if isinstance(e, Constant):
        s = "const " + "/".join(e.kind.path)
        if e.kind.params:
            s += " with " + ", ".join(f"{k}={_fmt_value(v)}" for k, v in e.kind.params)
        return s
    if isinstance(e, Variable):
        return f"var {e.name} range {_fmt_range(e.range)}"
    parts = []
    for k, v in e.params:
        if isinstance(v, Variable):
            parts.append(f"{k}={v.name} range {_fmt_range(v.range)}")
        else:
            parts.append(f"{k}={_fmt_value(v)}")
    return "param " + "/".join(e.path) + " with " + ", ".join(parts)


def _alts(items: list[str]) -> str:
    return items[0] if len(items) == 1 else "{" + "|".join(items) + "}"


def _fmt_attachment(a: Attachment) -> str:
    return f"{begin_of(a) or ''}->{end_of(a) or ''}"


def _fmt_link(l: str, slot: LinkSlot, alts: frozenset[Attachment]) -> str:
    s = f"  link {l} : {slot.link_class.value}"
    if slot.element != Constant(SIMPLE_CHANNEL):
        s += " " + format_element(slot.element)
    if len(alts) == 1:
        (a,) = alts
        if begin_of(a) is not None:
            s += f" from {begin_of(a)}"
        if end_of(a) is not None:
            s += f" to {end_of(a)}"
    else:
        ordered = sorted(alts, key=attachment_key)
        s += " at {" + " | ".join(_fmt_attachment(a) for a in ordered) + "}"
    return s + ";"


def _serialize_schema(s: Schema) -> str:
    keyword = "basic" if isinstance(s, BasicSchema) else "schema"
    lines = [f"{keyword} {s.name} {{"]
    for note in s.annotations:
        lines.append(f"  note {json.dumps(note)};")
    for n, e in s.nodes.items():
        lines.append(f"  node {n} : {format_element(e)};")
    if isinstance(s, PortSchema):
        for p, slot in s.ports.items():
            line = f"  port {p} {slot.direction.value} {slot.locus.value}"
            if slot.locus is Locus.INTERNAL:
                line += " of " + _alts(sorted(s.internal_assignment[p]))
            elif p in s.external_assignment:
                line += " of " + _alts([str(t) for t in sorted(s.external_assignment[p])])
            if slot.element != Constant(PORT_KIND):
                line += " : " + format_element(slot.element)
            lines.append(line + ";")
        adjacency = s.adjacency
    else:
        adjacency = s.node_adjacency
    for l, slot in s.links.items():
        lines.append(_fmt_link(l, slot, adjacency[l]))
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_morphism(m: SchemaMorphism, name: str = "m") -> str:
    lines = [f"morphism {name} : {m.domain or 'S'} -> {m.codomain or 'T'} {{"]
    for sort, table in (("node", m.node_map), ("port", m.port_map), ("link", m.edge_map)):
        for a, b in table.items():
            lines.append(f"  {sort} {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_universe(u: KindUniverse) -> str:
    return "".join(f"kind {sort} {'/'.join(p)};\n"
                   for sort in sorted(u.kinds) for p in sorted(u.kinds[sort]))


def serialize(value: Value) -> str:
    if isinstance(value, SchemaMorphism):
        return serialize_morphism(value)
    if isinstance(value, (GridAutomaton, BasicGridAutomaton)):
        value = as_schema(value)
    return _serialize_schema(value)


def serialize_document(doc: Document) -> str:
    parts = [serialize_universe(doc.universe)] if any(doc.universe.kinds.values()) else []
    parts += [serialize(v) for v in doc.items]
    return "\n".join(parts)


def iter_blocks(text: str) -> Iterator[Value]:
    yield from parse_document(text).items


__all__ = [name for name in dir() if not name.startswith("_")]
