"""Reference automata and schemas used by the tests, the CLI and the docs.

* ``heterogeneous_grid`` - a 19-node grid automaton mixing Turing machines,
  RAMs, a neural network, finite automata, a cellular automaton, modems, a
  server and a nested grid automaton; ``heterogeneous_basic`` is its grid
  written out independently.
* ``heterogeneous_schema`` - the same ports and links with every node replaced
  by a class variable.
* ``grasping_schema`` / ``grasping_interaction`` - the reach-and-grasp
  coordination structure as a variable basic schema and as constants;
  ``grasp_core`` / ``grasp_core_constant`` - their grasping part.
* ``mixed_fragment`` - a small schema embeddable in the grasping schema
  only up to renaming.
* ``gated_machine`` - two Turing machines feeding a two-state gate.
* ``threshold_cell`` - a single neuron with open synaptic input and axon.
"""
from __future__ import annotations

from collections import Counter

from .engine import Buffer, Gate, NodeBehavior
from .grid_automaton import (
    BasicGridAutomaton,
    Direction,
    GridAutomaton,
    Link,
    LinkClass,
    Port,
)
from .kinds import Kind, KindUniverse, kind_set
from .multigraph import BeginOnly, Closed, EndOnly
from .schema import BasicSchema, Constant, LinkSlot, Occurrence, PortSchema, Variable, as_schema
from .transform import AbstractEntry, AbstractionSpec, Binding

INFO, CONTROL, PROCESS = LinkClass.INFORMATION, LinkClass.CONTROL, LinkClass.PROCESS

MACHINE_KINDS = {
    "turing_machine": ("automaton", "turing_machine"),
    "neural_network": ("automaton", "neural_network"),
    "random_access_machine": ("automaton", "random_access_machine"),
    "finite_automaton": ("automaton", "finite_automaton"),
    "cellular_automaton": ("automaton", "cellular_automaton"),
    "modem": ("device", "modem"),
    "server": ("device", "server"),
    "grid_automaton": ("automaton", "grid_automaton"),
}

# node id -> (class name, variable name)
HETEROGENEOUS_NODES = {
    "Tm1": ("turing_machine", "T"), "Tm2": ("turing_machine", "T"),
    "NN": ("neural_network", "N"),
    "RAM1": ("random_access_machine", "R"), "RAM2": ("random_access_machine", "R"),
    **{f"FA{i}": ("finite_automaton", "A") for i in range(1, 6)},
    "CA": ("cellular_automaton", "C"),
    **{f"m{i}": ("modem", "m") for i in range(1, 7)},
    "S": ("server", "S"),
    "GA": ("grid_automaton", "G"),
}

HETEROGENEOUS_LINKS = [
    ("Tm1", "m1", INFO), ("m1", "S", INFO), ("S", "m2", INFO), ("m2", "Tm2", INFO),
    ("RAM1", "m3", INFO), ("m3", "S", INFO), ("S", "m4", INFO), ("m4", "RAM2", INFO),
    ("NN", "m5", INFO), ("m5", "S", INFO), ("S", "m6", INFO), ("m6", "CA", INFO),
    ("FA1", "FA2", INFO), ("FA2", "FA3", INFO), ("FA3", "NN", CONTROL),
    ("FA4", "FA5", INFO), ("FA5", "GA", INFO), ("Tm2", "FA1", CONTROL),
    ("CA", "FA4", INFO), ("RAM2", "FA1", INFO), ("GA", "Tm1", PROCESS),
]

# expected census of the heterogeneous grid, by class
HETEROGENEOUS_CENSUS = Counter({
    "turing_machine": 2, "neural_network": 1, "random_access_machine": 2,
    "finite_automaton": 5, "cellular_automaton": 1, "modem": 6, "server": 1,
    "grid_automaton": 1,
})

# variable multiplicities of the heterogeneous schema
HETEROGENEOUS_MULTISET = {"T": 2, "N": 1, "R": 2, "A": 5, "C": 1, "m": 6, "S": 1, "G": 1}


def _wiring():
    ports: dict[str, Port] = {}
    owners: dict[str, str] = {}
    links: dict[str, Link] = {}
    adjacency: dict[str, Closed] = {}
    for k, (a, b, cls) in enumerate(HETEROGENEOUS_LINKS, start=1):
        out, inn, l = f"{a}_o{k}", f"{b}_i{k}", f"l{k:02d}"
        ports[out], owners[out] = Port(Direction.OUTLET), a
        ports[inn], owners[inn] = Port(Direction.INLET), b
        links[l] = Link(cls)
        adjacency[l] = Closed(out, inn)
    # a spare outlet on the nested grid automaton, left unconnected
    ports["GA_spare"], owners["GA_spare"] = Port(Direction.OUTLET), "GA"
    return ports, owners, links, adjacency


def heterogeneous_grid() -> GridAutomaton:
    ports, owners, links, adjacency = _wiring()
    nodes = {n: Kind(MACHINE_KINDS[c]) for n, (c, _) in HETEROGENEOUS_NODES.items()}
    return GridAutomaton("GA", nodes, ports, links, owners, adjacency, {})


def heterogeneous_basic() -> BasicGridAutomaton:
    """The node-level grid of :func:`heterogeneous_grid`, listed directly."""
    nodes = {n: Kind(MACHINE_KINDS[c]) for n, (c, _) in HETEROGENEOUS_NODES.items()}
    links = {f"l{k:02d}": Link(cls) for k, (_, _, cls) in enumerate(HETEROGENEOUS_LINKS, 1)}
    adj = {f"l{k:02d}": Closed(a, b) for k, (a, b, _) in enumerate(HETEROGENEOUS_LINKS, 1)}
    return BasicGridAutomaton("GA", nodes, links, adj)


def class_range(cls: str):
    return kind_set(MACHINE_KINDS[cls])


def heterogeneous_schema() -> PortSchema:
    base = as_schema(heterogeneous_grid())
    nodes = {n: Variable(v, class_range(c)) for n, (c, v) in HETEROGENEOUS_NODES.items()}
    return PortSchema("GA", nodes, base.ports, base.links, base.internal_assignment,
                      base.adjacency, base.external_assignment)


def heterogeneous_binding() -> Binding:
    """Binding that turns :func:`heterogeneous_schema` into :func:`heterogeneous_grid`."""
    seen = {}
    for c, v in HETEROGENEOUS_NODES.values():
        seen[v] = Kind(MACHINE_KINDS[c])
    return Binding(seen)


def heterogeneous_abstraction() -> AbstractionSpec:
    return AbstractionSpec(tuple(
        AbstractEntry(Occurrence("node", n), v, class_range(c))
        for n, (c, v) in HETEROGENEOUS_NODES.items()))


def machine_universe() -> KindUniverse:
    u = KindUniverse()
    u.register("node", *MACHINE_KINDS.values())
    u.register("port", ("port",))
    u.register("link", ("simple",), ("filtering",), ("correcting",))
    return u


# ---------------------------------------------------------------- reach and grasp

GRASP_ROLES = {
    "X1": "visual_location", "X2": "size_recognition", "X3": "orientation_recognition",
    "X4": "fast_phase_movement", "X5": "hand_preshape", "X6": "hand_rotation",
    "X7": "slow_phase_movement", "X8": "actual_grasp",
}

GRASP_LINKS = {
    "d1": ("X1", "X4", INFO), "d2": ("X1", "X7", INFO), "d3": ("X2", "X5", INFO),
    "d4": ("X3", "X6", INFO), "d5": ("X6", "X8", INFO),
    "a1": ("X4", "X7", CONTROL), "a2": ("X4", "X5", CONTROL), "a3": ("X4", "X6", CONTROL),
    "a4": ("X7", "X8", CONTROL), "a5": ("X5", "X8", CONTROL),
}

GRASP_CORE = ("X4", "X5", "X6", "X7", "X8")


def _grasp(name: str, element, nodes=tuple(GRASP_ROLES)) -> BasicSchema:
    keep = set(nodes)
    links = {l: LinkSlot(cls) for l, (a, b, cls) in GRASP_LINKS.items() if a in keep and b in keep}
    adj = {l: frozenset({Closed(*GRASP_LINKS[l][:2])}) for l in links}
    return BasicSchema(name, {n: element(n) for n in nodes}, links, adj)


def grasp_kind(node: str) -> Kind:
    return Kind(("schema", GRASP_ROLES[node]))


def grasping_schema() -> BasicSchema:
    return _grasp("grasping", lambda n: Variable(n, kind_set(grasp_kind(n).path)))


def grasping_interaction() -> BasicSchema:
    return _grasp("grasping_interaction", lambda n: Constant(grasp_kind(n)))


def grasp_core() -> BasicSchema:
    return _grasp("grasping", lambda n: Variable(n, kind_set(grasp_kind(n).path)), GRASP_CORE)


def grasp_core_constant() -> BasicSchema:
    return _grasp("grasping_interaction", lambda n: Constant(grasp_kind(n)), GRASP_CORE)


def mixed_fragment() -> BasicSchema:
    tm = Constant(Kind(MACHINE_KINDS["turing_machine"]))
    fa = kind_set(MACHINE_KINDS["finite_automaton"])
    nodes = {"T1": tm, "T3": tm, "NN": Constant(Kind(MACHINE_KINDS["neural_network"])),
             "FA": Variable("FA", fa), "FA1": Variable("FA1", fa)}
    links = {"e1": LinkSlot(INFO), "e2": LinkSlot(CONTROL), "e3": LinkSlot(INFO),
             "e4": LinkSlot(CONTROL)}
    adj = {"e1": {Closed("T1", "FA")}, "e2": {Closed("FA", "FA1")},
           "e3": {Closed("T3", "NN")}, "e4": {Closed("FA", "NN")}}
    return BasicSchema("R", nodes, links, adj)


# ---------------------------------------------------------------- gated machine


def gated_machine() -> GridAutomaton:
    tm = Kind(MACHINE_KINDS["turing_machine"])
    ports = {
        "T_in": Port(Direction.INLET), "T_ctl": Port(Direction.OUTLET),
        "M_out": Port(Direction.OUTLET),
        "G_ctl": Port(Direction.INLET), "G_in": Port(Direction.INLET),
        "G_ext": Port(Direction.INLET), "G_out": Port(Direction.OUTLET),
    }
    owners = {"T_in": "T", "T_ctl": "T", "M_out": "M", "G_ctl": "G", "G_in": "G",
              "G_ext": "G", "G_out": "G"}
    # T and G each take one input from outside
    links = {"input": Link(INFO), "outside": Link(INFO), "opening": Link(CONTROL),
             "word": Link(INFO), "result": Link(INFO)}
    adjacency = {"input": EndOnly("T_in"), "outside": EndOnly("G_ext"),
                 "opening": Closed("T_ctl", "G_ctl"), "word": Closed("M_out", "G_in"),
                 "result": BeginOnly("G_out")}
    nodes = {"T": tm, "M": tm, "G": Kind(MACHINE_KINDS["finite_automaton"])}
    return GridAutomaton("gated", nodes, ports, links, owners, adjacency, {})


def gated_behaviors(word: str = "abba") -> dict[str, NodeBehavior]:
    return {
        "T": Buffer(("1",), CONTROL, wait_for_input=True),
        "M": Buffer(tuple(word), INFO),
        "G": Gate(),
    }


# ---------------------------------------------------------------- threshold cell


def threshold_cell() -> GridAutomaton:
    """One neuron: synaptic input on an end-open control link, spikes out on a begin-open one."""
    ports = {"N_syn": Port(Direction.INLET), "N_axon": Port(Direction.OUTLET)}
    return GridAutomaton(
        "cell", {"N": Kind(("automaton", "neural_network", "neuron"))}, ports,
        {"syn": Link(CONTROL), "axon": Link(CONTROL)},
        {"N_syn": "N", "N_axon": "N"},
        {"syn": EndOnly("N_syn"), "axon": BeginOnly("N_axon")}, {})


def all_fixtures() -> dict:
    return {
        "heterogeneous_grid": heterogeneous_grid(),
        "heterogeneous_basic": heterogeneous_basic(),
        "heterogeneous_schema": heterogeneous_schema(),
        "grasping_schema": grasping_schema(),
        "grasping_interaction": grasping_interaction(),
        "grasp_core": grasp_core(),
        "grasp_core_constant": grasp_core_constant(),
        "mixed_fragment": mixed_fragment(),
        "gated_machine": gated_machine(),
        "threshold_cell": threshold_cell(),
    }


def write_fixture_files(directory) -> None:
    from pathlib import Path

    from .textformat import serialize

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, value in all_fixtures().items():
        (out / f"{name}.gs").write_text(serialize(value), encoding="utf-8")


if __name__ == "__main__":
    import sys

    write_fixture_files(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
