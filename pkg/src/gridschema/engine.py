"""Deterministic discrete-cycle execution of realized grid automata.

Messages emitted in cycle ``c`` are delivered in cycle ``c + 1``.  Within a
cycle nodes react in id order.  A node reacts when something was delivered to
it or its behavior still has queued work; each reaction is one elementary
operation (one symbol, one buffered item, one threshold evaluation).
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

from .errors import (
    AlphabetMismatch,
    BehaviorKindMismatch,
    InvalidAutomaton,
    MissingBehavior,
    ResidualNondeterminism,
    ResidualVariables,
)
from .grid_automaton import (
    BasicGridAutomaton,
    Direction,
    GridAutomaton,
    Link,
    LinkClass,
    Locus,
    Port,
    Target,
    validate_grid_automaton,
)
from .kinds import Kind
from .multigraph import Closed, begin_of, end_of
from .schema import (
    BasicSchema,
    PortSchema,
    basic_as_port_schema,
    is_constant,
    is_deterministic,
    to_automaton,
)

END_OF_WORD = "$"


@dataclass(frozen=True)
class Delivery:
    port: str | None
    link_class: LinkClass
    payload: str | None = None
    param: int | None = None
    source: str = ""


@dataclass(frozen=True)
class Emit:
    link_class: LinkClass
    payload: str | None = None
    param: int | None = None

    def __post_init__(self):
        if self.link_class is not LinkClass.INFORMATION and self.payload is not None:
            raise ValueError("control and process links carry signals, not payloads")
        if self.link_class is LinkClass.INFORMATION and self.payload is None:
            raise ValueError("information links carry a payload")


Reaction = tuple[Any, list[Emit], list[dict]]


def _compatible(accepts: tuple[str, ...], kind: Kind) -> bool:
    return not accepts or any(tag in kind.path for tag in accepts)


# ---------------------------------------------------------------- behaviors


@dataclass(frozen=True)
class FiniteAutomaton:
    """Mealy transducer consuming one symbol per elementary operation.

    A word ends either with the end marker on an information input, or when a
    control signal announces its length.  On completion the automaton records
    the output word, sends a control signal carrying the output length and
    returns to its initial state.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: Mapping[tuple[str, str], tuple[str, str]]
    initial: str
    finals: tuple[str, ...] = ()
    accepts: tuple[str, ...] = ("finite_automaton",)

    def __post_init__(self):
        missing = [(q, a) for q in self.states for a in self.alphabet
                   if (q, a) not in self.transitions]
        if missing:
            raise InvalidAutomaton([f"transition table misses {missing[:3]}"])
        if self.initial not in self.states:
            raise InvalidAutomaton([f"unknown initial state {self.initial}"])

    @property
    def output_alphabet(self) -> frozenset[str]:
        return frozenset(out for _, out in self.transitions.values())

    def transduce(self, word: Iterable[str]) -> tuple[list[str], str]:
        state, trajectory, out = self.initial, [self.initial], []
        for a in word:
            state, o = self.transitions[(state, a)]
            trajectory.append(state)
            out.append(o)
        return trajectory, "".join(out)

    def initial_state(self) -> dict:
        return {"state": self.initial, "queue": (), "out": "", "expected": None}

    def pending(self, st: dict) -> bool:
        return bool(st["queue"]) or self._done(st)

    @staticmethod
    def _done(st: dict) -> bool:
        return st["expected"] is not None and len(st["out"]) >= st["expected"]

    def react(self, st: dict, inbox: Sequence[Delivery]) -> Reaction:
        st = dict(st)
        queue = list(st["queue"])
        for d in inbox:
            if d.link_class is LinkClass.INFORMATION:
                queue.append(d.payload)
            elif d.param is not None:
                st["expected"] = d.param
        emits: list[Emit] = []
        events: list[dict] = []
        if not self._done(st) and queue:
            symbol = queue.pop(0)
            if symbol == END_OF_WORD:
                st["expected"] = len(st["out"])
            else:
                before = st["state"]
                st["state"], out = self.transitions[(before, symbol)]
                st["out"] += out
                events.append({"event": "step", "from": before, "symbol": symbol,
                               "to": st["state"], "payload": out})
                emits.append(Emit(LinkClass.INFORMATION, payload=out))
        if self._done(st):
            events.append({"event": "complete", "payload": st["out"],
                           "accepted": st["state"] in self.finals})
            emits.append(Emit(LinkClass.CONTROL, param=len(st["out"])))
            st.update(state=self.initial, out="", expected=None)
        st["queue"] = tuple(queue)
        return st, emits, events


@dataclass(frozen=True)
class ThresholdUnit:
    """Fires once the signal level summed over the last ``window`` cycles reaches ``threshold``."""

    threshold: int
    window: int = 1
    unit_amplitude: int = 1
    accepts: tuple[str, ...] = ("neuron", "threshold_unit", "neural_network")

    def __post_init__(self):
        if self.threshold < 1 or self.window < 1:
            raise InvalidAutomaton(["threshold and window must be at least 1"])

    def initial_state(self) -> dict:
        return {"arrivals": (), "cycle": 0}

    def pending(self, st: dict) -> bool:
        return False

    def react(self, st: dict, inbox: Sequence[Delivery], cycle: int = 0) -> Reaction:
        amount = sum(self.unit_amplitude if d.param is None else d.param for d in inbox)
        arrivals = [(c, a) for c, a in st["arrivals"] if c > cycle - self.window]
        if amount:
            arrivals.append((cycle, amount))
        level = sum(a for _, a in arrivals)
        if level >= self.threshold:
            return ({"arrivals": (), "cycle": cycle},
                    [Emit(LinkClass.CONTROL, param=level)],
                    [{"event": "fire", "level": level}])
        return {"arrivals": tuple(arrivals), "cycle": cycle}, [], [{"event": "level", "level": level}]


@dataclass(frozen=True)
class Gate:
    """Closed until a control signal arrives; drops data while closed, passes it while open."""

    initially_open: bool = False
    accepts: tuple[str, ...] = ()

    def initial_state(self) -> dict:
        return {"open": self.initially_open}

    def pending(self, st: dict) -> bool:
        return False

    def react(self, st: dict, inbox: Sequence[Delivery]) -> Reaction:
        is_open = st["open"]
        events: list[dict] = []
        emits: list[Emit] = []
        if not is_open and any(d.link_class is not LinkClass.INFORMATION for d in inbox):
            is_open = True
            events.append({"event": "open"})
        for d in inbox:
            if d.link_class is not LinkClass.INFORMATION:
                continue
            if is_open:
                emits.append(Emit(LinkClass.INFORMATION, payload=d.payload))
                events.append({"event": "pass", "payload": d.payload})
            else:
                events.append({"event": "drop", "payload": d.payload})
        return {"open": is_open}, emits, events


@dataclass(frozen=True)
class Buffer:
    """Emits preloaded items one per operation, optionally only after its first input."""

    items: tuple[str, ...] = ()
    link_class: LinkClass = LinkClass.INFORMATION
    wait_for_input: bool = False
    accepts: tuple[str, ...] = ()

    def initial_state(self) -> dict:
        return {"queue": tuple(self.items), "armed": not self.wait_for_input}

    def pending(self, st: dict) -> bool:
        return st["armed"] and bool(st["queue"])

    def react(self, st: dict, inbox: Sequence[Delivery]) -> Reaction:
        armed = st["armed"] or bool(inbox)
        queue = list(st["queue"])
        if not (armed and queue):
            return {"queue": tuple(queue), "armed": armed}, [], []
        item = queue.pop(0)
        if self.link_class is LinkClass.INFORMATION:
            emit = Emit(self.link_class, payload=item)
        else:
            emit = Emit(self.link_class, param=int(item) if str(item).isdigit() else None)
        return {"queue": tuple(queue), "armed": armed}, [emit], [{"event": "emit", "payload": item}]


@dataclass(frozen=True)
class Stub:
    accepts: tuple[str, ...] = ()

    def initial_state(self) -> dict:
        return {}

    def pending(self, st: dict) -> bool:
        return False

    def react(self, st: dict, inbox: Sequence[Delivery]) -> Reaction:
        return st, [], [{"event": "absorb", "count": len(inbox)}]


NodeBehavior = Union[FiniteAutomaton, ThresholdUnit, Gate, Buffer, Stub]


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class Stimulus:
    """Input at ``cycle`` through an external inlet or an end-open link."""

    cycle: int
    target: str
    payload: str | None = None
    param: int | None = None


@dataclass
class Instance:
    automaton: GridAutomaton
    behaviors: Mapping[str, NodeBehavior]
    states: dict[str, Any]
    clock: int = 0
    queue: list[tuple[int, str, int, str, Delivery]] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)
    outputs: list[dict] = field(default_factory=list)
    sequence: int = 0


def _as_automaton(ga) -> GridAutomaton:
    if isinstance(ga, BasicGridAutomaton):
        from .schema import as_schema
        ga = basic_as_port_schema(as_schema(ga))
    if isinstance(ga, BasicSchema):
        ga = basic_as_port_schema(ga)
    if isinstance(ga, PortSchema):
        if not is_constant(ga):
            raise ResidualVariables(f"{ga.name} still has variables")
        if not is_deterministic(ga):
            raise ResidualNondeterminism(f"{ga.name} has set-valued assignments")
        ga = to_automaton(ga)
    return ga


def instantiate(ga, behaviors: Mapping[str, NodeBehavior], config: Mapping | None = None) -> Instance:
    ga = _as_automaton(ga)
    violations = validate_grid_automaton(ga)
    if violations:
        raise InvalidAutomaton(violations)
    missing = sorted(set(ga.nodes) - set(behaviors))
    if missing:
        raise MissingBehavior(", ".join(missing))
    for n, kind in ga.nodes.items():
        b = behaviors[n]
        if not _compatible(b.accepts, kind):
            raise BehaviorKindMismatch(f"{type(b).__name__} cannot run node {n} of kind {kind}")
    return Instance(ga, dict(behaviors), {n: behaviors[n].initial_state() for n in ga.nodes})


def _enqueue(inst: Instance, cycle: int, via: str, node: str, d: Delivery) -> None:
    inst.sequence += 1
    inst.queue.append((cycle, via, inst.sequence, node, d))


def feed(inst: Instance, stimuli: Iterable[Stimulus]) -> None:
    ga = inst.automaton
    for s in stimuli:
        if s.target in ga.ports and ga.ports[s.target].locus is Locus.EXTERNAL:
            t = ga.external_assignment.get(s.target)
            if t is None:
                continue
            if t.sort == "node":
                node, port, cls = t.id, None, LinkClass.INFORMATION
            elif t.sort == "port":
                node, port, cls = ga.internal_assignment[t.id], t.id, LinkClass.INFORMATION
            else:
                end = end_of(ga.adjacency[t.id])
                if end is None:
                    continue
                node, port, cls = ga.internal_assignment[end], end, ga.links[t.id].link_class
        elif s.target in ga.links:
            end = end_of(ga.adjacency[s.target])
            if end is None:
                raise InvalidAutomaton([f"link {s.target} has no end to deliver to"])
            node, port, cls = ga.internal_assignment[end], end, ga.links[s.target].link_class
        else:
            raise InvalidAutomaton([f"{s.target} is neither an external port nor a link"])
        payload = s.payload if cls is LinkClass.INFORMATION else None
        param = s.param if cls is not LinkClass.INFORMATION else None
        if cls is LinkClass.INFORMATION and payload is None:
            payload = ""
        _enqueue(inst, s.cycle, s.target, node, Delivery(port, cls, payload, param, "input"))


def _route(inst: Instance, node: str, emits: list[Emit], cycle: int) -> list[dict]:
    ga = inst.automaton
    outlets = {p for p, n in ga.internal_assignment.items()
               if n == node and ga.ports[p].direction is Direction.OUTLET}
    records = []
    for e in emits:
        for l, a in ga.adjacency.items():
            b = begin_of(a)
            if b not in outlets or ga.links[l].link_class is not e.link_class:
                continue
            end = end_of(a)
            if end is None:
                records.append({"cycle": cycle, "node": node, "event": "output", "via": l,
                                "payload": e.payload, "param": e.param})
            else:
                _enqueue(inst, cycle + 1, l, ga.internal_assignment[end],
                         Delivery(end, e.link_class, e.payload, e.param, node))
        for x, t in ga.external_assignment.items():
            if ga.ports[x].direction is not Direction.OUTLET:
                continue
            if (t.sort == "node" and t.id == node) or (t.sort == "port" and t.id in outlets):
                records.append({"cycle": cycle, "node": node, "event": "output", "via": x,
                                "class": e.link_class.value, "payload": e.payload,
                                "param": e.param})
    return records


def step(inst: Instance) -> list[dict]:
    cycle = inst.clock
    due = sorted(q for q in inst.queue if q[0] <= cycle)
    inst.queue = [q for q in inst.queue if q[0] > cycle]
    inbox: dict[str, list[Delivery]] = {}
    for _, _, _, node, d in due:
        inbox.setdefault(node, []).append(d)
    events: list[dict] = []
    for node in sorted(inst.automaton.nodes):
        behavior = inst.behaviors[node]
        got = inbox.get(node, [])
        if not got and not behavior.pending(inst.states[node]):
            continue
        if isinstance(behavior, ThresholdUnit):
            state, emits, evs = behavior.react(inst.states[node], got, cycle)
        else:
            state, emits, evs = behavior.react(inst.states[node], got)
        inst.states[node] = state
        for ev in evs:
            events.append({"cycle": cycle, "node": node, **ev})
        outs = _route(inst, node, emits, cycle)
        inst.outputs.extend(outs)
        events.extend(outs)
    inst.trace.extend(events)
    inst.clock += 1
    return events


def quiescent(inst: Instance) -> bool:
    return not inst.queue and not any(
        inst.behaviors[n].pending(inst.states[n]) for n in inst.automaton.nodes)


@dataclass(frozen=True)
class RunResult:
    trace: tuple[dict, ...]
    outputs: tuple[dict, ...]
    cycles: int


def run(inst: Instance, inputs: Iterable[Stimulus] = (), max_cycles: int = 1000) -> RunResult:
    feed(inst, inputs)
    start = len(inst.trace)
    out_start = len(inst.outputs)
    ran = 0
    while ran < max_cycles and not quiescent(inst):
        step(inst)
        ran += 1
    return RunResult(tuple(inst.trace[start:]), tuple(inst.outputs[out_start:]), ran)


def trace_jsonl(trace: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in trace)


def link_discipline_violations(inst: Instance, trace: Iterable[dict]) -> list[dict]:
    """Trace records that put a payload on a control or process link (should be none)."""
    ga = inst.automaton
    return [r for r in trace if r.get("event") == "output" and r.get("via") in ga.links
            and ga.links[r["via"]].link_class is not LinkClass.INFORMATION
            and r.get("payload") is not None]


def word_stimuli(word: str, target: str, start: int = 0) -> list[Stimulus]:
    """One symbol per cycle followed by the end marker."""
    out = [Stimulus(start + i, target, payload=a) for i, a in enumerate(word)]
    out.append(Stimulus(start + len(word), target, payload=END_OF_WORD))
    return out


# ---------------------------------------------------------------- sequential composition


def _fa(states, table, initial, finals) -> FiniteAutomaton:
    return FiniteAutomaton(states, ("0", "1"), table, initial, finals)


# small binary transducers used by the CLI, the tests and the docs
FA_PRESETS = {
    "identity": lambda: _fa(("q",), {("q", "0"): ("q", "0"), ("q", "1"): ("q", "1")}, "q", ("q",)),
    "complement": lambda: _fa(("q",), {("q", "0"): ("q", "1"), ("q", "1"): ("q", "0")},
                              "q", ("q",)),
    "parity": lambda: _fa(("e", "o"), {("e", "0"): ("e", "0"), ("e", "1"): ("o", "1"),
                                       ("o", "0"): ("o", "1"), ("o", "1"): ("e", "0")},
                          "e", ("e",)),
    "delay": lambda: _fa(("z", "w"), {("z", "0"): ("z", "0"), ("z", "1"): ("w", "0"),
                                      ("w", "0"): ("z", "1"), ("w", "1"): ("w", "1")},
                         "z", ("z",)),
}


FA_KIND = Kind(("automaton", "finite_automaton"))


def sequential_composition(a: FiniteAutomaton, b: FiniteAutomaton) -> GridAutomaton:
    """Two automata joined by a data link and a control link; inlet on A, outlet on B."""
    if not a.output_alphabet <= set(b.alphabet):
        raise AlphabetMismatch(
            f"outputs {sorted(a.output_alphabet - set(b.alphabet))} are not inputs of B")
    ports = {
        "A_in": Port(Direction.INLET), "A_out": Port(Direction.OUTLET),
        "A_ctl": Port(Direction.OUTLET), "B_in": Port(Direction.INLET),
        "B_ctl": Port(Direction.INLET), "B_out": Port(Direction.OUTLET),
        "X_in": Port(Direction.INLET, Locus.EXTERNAL),
        "X_out": Port(Direction.OUTLET, Locus.EXTERNAL),
    }
    owners = {"A_in": "A", "A_out": "A", "A_ctl": "A", "B_in": "B", "B_ctl": "B", "B_out": "B"}
    return GridAutomaton(
        "sequential",
        {"A": FA_KIND, "B": FA_KIND},
        ports,
        {"data": Link(LinkClass.INFORMATION), "control": Link(LinkClass.CONTROL)},
        owners,
        {"data": Closed("A_out", "B_in"), "control": Closed("A_ctl", "B_ctl")},
        {"X_in": Target("port", "A_in"), "X_out": Target("port", "B_out")},
    )


def run_composition(a: FiniteAutomaton, b: FiniteAutomaton, words: Sequence[str],
                    max_cycles: int = 10_000) -> tuple[list[str], RunResult]:
    """Feed ``words`` back to back through the composition; returns B's output words."""
    inst = instantiate(sequential_composition(a, b), {"A": a, "B": b})
    stimuli: list[Stimulus] = []
    cycle = 0
    for w in words:
        stimuli += word_stimuli(w, "X_in", cycle)
        cycle += len(w) + 1
    result = run(inst, stimuli, max_cycles)
    done = [r["payload"] for r in result.trace if r["node"] == "B" and r["event"] == "complete"]
    return done, result


__all__ = [name for name in dir() if not name.startswith("_")]
