"""Command line interface: ``gridschema VERB ...``.

Exit status is 0 on success, 1 on domain errors and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from . import engine, morphism, schema, textformat, transform
from .dot import export_dot
from .errors import SchemaError, SemanticError
from .grid_automaton import LinkClass
from .kinds import Kind, KindUniverse
from .multigraph import GeneralizedMultigraph
from .schema import Occurrence, Schema

# ---------------------------------------------------------------- loading


def load(path: str) -> Schema:
    value = textformat.parse(Path(path).read_text(encoding="utf-8"), keep_schema=True)
    if isinstance(value, morphism.SchemaMorphism):
        raise SemanticError(f"{path} holds a morphism, not a schema")
    return value


def load_morphism(path: str) -> morphism.SchemaMorphism:
    value = textformat.parse(Path(path).read_text(encoding="utf-8"))
    if not isinstance(value, morphism.SchemaMorphism):
        raise SemanticError(f"{path} does not hold a morphism")
    return value


def universe(args) -> KindUniverse:
    u = KindUniverse.from_env()
    if getattr(args, "universe", None):
        u = u.merged(KindUniverse.from_json(Path(args.universe).read_text(encoding="utf-8")))
    return u


def _fragment(text: str) -> textformat._Parser:
    return textformat._Parser(text, keep_schema=True)


def _occurrence(text: str) -> Occurrence:
    sort, _, rest = text.partition(":")
    slot, _, param = rest.partition(".")
    if sort not in ("node", "port", "link") or not slot:
        raise SchemaError(f"bad occurrence {text!r}; expected SORT:SLOT[.PARAM]")
    return Occurrence(sort, slot, param or None)


def parse_binding(s: Schema, items: Sequence[str]) -> transform.Binding:
    """``NAME=VALUE`` binds a variable, ``SORT:SLOT[.PARAM]=VALUE`` one occurrence."""
    param_names = {v.name for o, v in schema.occurrences(s) if o.param}
    values, overrides = {}, {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise SchemaError(f"bad binding {item!r}; expected NAME=VALUE")
        is_occ = ":" in key
        is_param = _occurrence(key).param is not None if is_occ else key in param_names
        p = _fragment(raw)
        if is_param:
            value = p.value()
        else:
            path = p.path()
            params = {}
            if p.accept("with"):
                while True:
                    k = p.ident()
                    p.take("=")
                    params[k] = p.value()
                    if not p.accept(","):
                        break
            value = Kind(path, tuple(params.items()))
        p.take(kind="eof")
        if is_occ:
            overrides[_occurrence(key)] = value
        else:
            values[key] = value
    return transform.Binding(values, overrides)


def parse_abstraction(s: Schema, items: Sequence[str]) -> transform.AbstractionSpec:
    """``SORT=SLOT[.PARAM][:name=X]:range=RANGE``."""
    entries = []
    for item in items:
        head, _, rest = item.partition(":")
        sort, _, target = head.partition("=")
        slot, _, param = target.partition(".")
        occ = Occurrence(sort, slot, param or None)
        name = f"_{slot}" + (f"_{param}" if param else "")
        rng = None
        while rest:
            if rest.startswith("name="):
                name, _, rest = rest[5:].partition(":")
            elif rest.startswith("range="):
                rng, rest = rest[6:], ""
            else:
                raise SchemaError(f"bad abstraction {item!r}")
        if rng is None or sort not in ("node", "port", "link"):
            raise SchemaError(f"bad abstraction {item!r}; expected SORT=SLOT[:name=X]:range=R")
        p = _fragment(rng)
        r = p.range_(occ.param is not None, sort)
        p.take(kind="eof")
        entries.append(transform.AbstractEntry(occ, name, r))
    return transform.AbstractionSpec(tuple(entries))


def parse_restrictions(s: Schema, items: Sequence[str]) -> transform.DeterminationSpec:
    """``var=X:RANGE``, ``link=L:{a->b|..}``, ``port=P:{n1|n2}``, ``ext=P:{node a|..}``."""
    ranges, assignment, adjacency, external = {}, {}, {}, {}
    sorts = {v.name: ("param" if o.param else o.sort) for o, v in schema.occurrences(s)}
    for item in items:
        head, _, rest = item.partition(":")
        what, _, key = head.partition("=")
        p = _fragment(rest)
        if what == "var":
            sort = sorts.get(key, "node")
            ranges[key] = p.range_(sort == "param", sort)
        elif what == "link":
            adjacency[key] = frozenset(p.alternatives(p.attachment))
        elif what == "port":
            assignment[key] = frozenset(p.alternatives(p.ident))
        elif what == "ext":
            external[key] = frozenset(p.alternatives(p.target))
        else:
            raise SchemaError(f"bad restriction {item!r}")
        p.take(kind="eof")
    return transform.DeterminationSpec(ranges, assignment, adjacency, external)


# ---------------------------------------------------------------- output helpers


def _graph_text(g) -> str:
    lines = [f"vertices: {' '.join(sorted(g.vertices))}"]
    for e, a in g.edges.items():
        if isinstance(g, GeneralizedMultigraph):
            lines.append(f"{e}: {a}")
        else:
            lines.append(f"{e}: {' | '.join(sorted(str(x) for x in a))}")
    return "\n".join(lines)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(obj) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True, default=str))


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    s = load(args.file)
    violations = schema.validate_schema(s)
    for v in violations:
        print(v, file=sys.stderr)
    if violations:
        return 1
    _emit("valid")
    return 0


def cmd_grid(args) -> int:
    _emit(_graph_text(schema.schema_grid(load(args.file))))
    return 0


def cmd_cgrid(args) -> int:
    _emit(_graph_text(schema.schema_connection_grid(load(args.file))))
    return 0


def cmd_classify(args) -> int:
    c = schema.classify_schema(load(args.file))
    _json({"roles": sorted(r.value for r in c.roles), "potentially_open": c.potentially_open})
    return 0


def cmd_vars(args) -> int:
    s = load(args.file)
    ms = schema.variable_multiset(s)
    scaling = ms.scaling(s)
    _json({name: {"range": str(info.range), "count": info.multiplicity,
                  "scaling": scaling[name],
                  "occurrences": [str(o) for o in info.occurrences]}
           for name, info in ms.items()})
    return 0


def cmd_basic(args) -> int:
    s = load(args.file)
    if isinstance(s, schema.PortSchema):
        s = schema.derive_basic_schema(s)
    _emit(textformat.serialize(s))
    return 0


def cmd_concretize(args) -> int:
    s = load(args.file)
    _emit(textformat.serialize(transform.concretize(s, parse_binding(s, args.bind))))
    return 0


def cmd_realize(args) -> int:
    s = load(args.file)
    _emit(textformat.serialize(transform.realize(s, parse_binding(s, args.bind))))
    return 0


def cmd_abstract(args) -> int:
    s = load(args.file)
    _emit(textformat.serialize(transform.abstract_elements(s, parse_abstraction(s, args.abstract))))
    return 0


def cmd_determine(args) -> int:
    s = load(args.file)
    _emit(textformat.serialize(transform.determine(s, parse_restrictions(s, args.restrict))))
    return 0


def cmd_compare(args) -> int:
    c = transform.compare(load(args.first), load(args.second))
    _json({"more_concrete": c.more_concrete, "more_general": c.more_general,
           "more_determined": c.more_determined,
           "binding": None if c.concretization is None else {
               **{k: str(v) for k, v in c.concretization.values.items()},
               **{str(k): str(v) for k, v in c.concretization.overrides.items()}}})
    return 0


def cmd_equiv(args) -> int:
    a, b = load(args.first), load(args.second)
    strong = transform.strongly_equivalent(a, b)
    out = {"strongly_equivalent": strong.equivalent, "renaming": strong.renaming}
    if args.realizations:
        out["equivalent"] = transform.equivalent(a, b, universe(args))
    _json(out)
    return 0


def cmd_maxabs(args) -> int:
    _emit(textformat.serialize(transform.maximal_abstraction(load(args.file))))
    return 0


def cmd_close(args) -> int:
    closed, _ = transform.close_schema(load(args.file))
    _emit(textformat.serialize(closed))
    return 0


def _flags_json(f: morphism.MorphismFlags) -> dict:
    return {"structural": f.structural, "weak": f.weak, "typed": f.typed,
            "v_mono": f.v_mono, "e_mono": f.e_mono, "v_epi": f.v_epi, "e_epi": f.e_epi}


def cmd_hom(args) -> int:
    s, t = load(args.domain), load(args.codomain)
    if args.action == "check":
        if not args.morphism:
            raise SchemaError("hom check needs a morphism file")
        m = load_morphism(args.morphism)
        _json(_flags_json(morphism.check_structural(s, t, m)))
        return 0
    found = morphism.find_homomorphisms(s, t, structural=not args.weak, typed=args.typed,
                                        mono=args.mono, epi=args.epi, limit=args.limit)
    _emit("\n".join(textformat.serialize_morphism(m, f"h{i}") for i, m in enumerate(found))
          or "# no homomorphisms")
    return 0


def cmd_sub(args) -> int:
    r = morphism.subschema_check(load(args.part), load(args.whole))
    _json({"subschema": r.subschema, "structural": r.structural,
           "strong_structural": r.strong_structural})
    return 0


def cmd_complete(args) -> int:
    c = morphism.completeness_flags(load(args.part), load(args.whole))
    _json({"v_complete": c.v_complete, "e_complete": c.e_complete, "p_complete": c.p_complete})
    return 0


def cmd_preimage(args) -> int:
    s, t = load(args.domain), load(args.codomain)
    m = load_morphism(args.morphism)
    _emit(textformat.serialize(morphism.preimage(s, t, m, load(args.part))))
    return 0


FA_PRESETS = engine.FA_PRESETS


def parse_behavior(text: str) -> engine.NodeBehavior:
    name, _, arg = text.partition(":")
    if name == "stub":
        return engine.Stub()
    if name == "gate":
        return engine.Gate()
    if name == "buffer":
        return engine.Buffer(tuple(arg))
    if name == "signal":
        return engine.Buffer(tuple(arg.split(",")) if arg else ("1",), LinkClass.CONTROL,
                             wait_for_input=True)
    if name == "threshold":
        threshold, _, window = arg.partition(",")
        return engine.ThresholdUnit(int(threshold), int(window or 1))
    if name == "fa" and arg in FA_PRESETS:
        return FA_PRESETS[arg]()
    raise SchemaError(f"unknown behavior {text!r}")


def cmd_sim(args) -> int:
    s = load(args.file)
    ga = transform.realize(s, parse_binding(s, args.bind))
    specs = dict(b.split("=", 1) for b in args.behavior)
    behaviors = {n: parse_behavior(specs.get(n, "stub")) for n in ga.nodes}
    inst = engine.instantiate(ga, behaviors)
    stimuli = []
    cycle = 0
    for item in args.input:
        target, sep, word = item.rpartition("=")
        if not sep:
            raise SchemaError(f"bad input {item!r}; expected TARGET=WORD")
        stimuli += engine.word_stimuli(word, target, cycle)
        cycle += len(word) + 1
    result = engine.run(inst, stimuli, args.max_cycles)
    text = engine.trace_jsonl(result.trace)
    if args.trace:
        Path(args.trace).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_dot(args) -> int:
    _emit(export_dot(load(args.file)))
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridschema", description="Grid automata and schemas.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, *files, help=None):
        sp = sub.add_parser(name, help=help)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(func=func)
        return sp

    verb("validate", cmd_validate, "file", help="check well-formedness")
    verb("grid", cmd_grid, "file", help="node-level grid")
    verb("cgrid", cmd_cgrid, "file", help="port-level connection grid")
    verb("classify", cmd_classify, "file", help="closed/acceptor/transmitter/transducer")
    verb("vars", cmd_vars, "file", help="variable multiset")
    verb("basic", cmd_basic, "file", help="derived basic schema")
    for name, func in (("concretize", cmd_concretize), ("realize", cmd_realize)):
        verb(name, func, "file").add_argument("--bind", action="append", default=[])
    verb("abstract", cmd_abstract, "file").add_argument("--abstract", action="append", default=[])
    verb("determine", cmd_determine, "file").add_argument("--restrict", action="append", default=[])
    verb("compare", cmd_compare, "first", "second")
    eq = verb("equiv", cmd_equiv, "first", "second")
    eq.add_argument("--realizations", action="store_true",
                    help="also compare realization sets over the kind universe")
    eq.add_argument("--universe", help="kind universe JSON file")
    verb("maxabs", cmd_maxabs, "file")
    verb("close", cmd_close, "file")
    hom = sub.add_parser("hom", help="check or find homomorphisms")
    hom.add_argument("action", choices=("check", "find"))
    hom.add_argument("domain")
    hom.add_argument("codomain")
    hom.add_argument("morphism", nargs="?")
    hom.add_argument("--weak", action="store_true")
    hom.add_argument("--typed", action="store_true")
    hom.add_argument("--mono", action="store_true")
    hom.add_argument("--epi", action="store_true")
    hom.add_argument("--limit", type=int)
    hom.set_defaults(func=cmd_hom)
    verb("sub", cmd_sub, "part", "whole")
    verb("complete", cmd_complete, "part", "whole")
    verb("preimage", cmd_preimage, "domain", "codomain", "morphism", "part")
    sim = verb("sim", cmd_sim, "file")
    sim.add_argument("--bind", action="append", default=[])
    sim.add_argument("--behavior", action="append", default=[],
                     help="NODE=stub|gate|buffer:WORD|signal|threshold:N[,W]|fa:PRESET")
    sim.add_argument("--input", action="append", default=[], help="TARGET=WORD")
    sim.add_argument("--max-cycles", type=int, default=1000)
    sim.add_argument("--trace")
    verb("dot", cmd_dot, "file")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
