from __future__ import annotations

import itertools

import pytest

from gridschema.engine import (
    END_OF_WORD,
    FA_PRESETS,
    Buffer,
    Emit,
    FiniteAutomaton,
    Gate,
    Stimulus,
    Stub,
    ThresholdUnit,
    instantiate,
    link_discipline_violations,
    quiescent,
    run,
    run_composition,
    sequential_composition,
    step,
    trace_jsonl,
    word_stimuli,
)
from gridschema.errors import (
    AlphabetMismatch,
    BehaviorKindMismatch,
    InvalidAutomaton,
    MissingBehavior,
    ResidualVariables,
)
from gridschema.fixtures import gated_behaviors, gated_machine, heterogeneous_schema, threshold_cell
from gridschema.grid_automaton import LinkClass, Role, classify_automaton

WORDS = ["".join(w) for n in range(1, 6) for w in itertools.product("01", repeat=n)]


def fire_cycles(result):
    return [r["cycle"] for r in result.trace if r["event"] == "fire"]


def signals(k, cycle=0):
    return [Stimulus(cycle, "syn") for _ in range(k)]


# ---------------------------------------------------------------- behaviors


def test_emit_enforces_link_discipline():
    with pytest.raises(ValueError):
        Emit(LinkClass.CONTROL, payload="x")
    with pytest.raises(ValueError):
        Emit(LinkClass.INFORMATION)


def test_incomplete_transition_table_rejected():
    with pytest.raises(InvalidAutomaton):
        FiniteAutomaton(("q",), ("0", "1"), {("q", "0"): ("q", "0")}, "q")
    with pytest.raises(InvalidAutomaton):
        ThresholdUnit(0)


def test_presets_transduce():
    assert FA_PRESETS["complement"]().transduce("0110")[1] == "1001"
    assert FA_PRESETS["parity"]().transduce("0110")[1] == "0100"
    assert FA_PRESETS["delay"]().transduce("110")[1] == "011"


# ---------------------------------------------------------------- instantiation


def test_instantiate_errors():
    with pytest.raises(MissingBehavior):
        instantiate(gated_machine(), {"T": Stub(), "M": Stub()})
    with pytest.raises(BehaviorKindMismatch):
        instantiate(gated_machine(), {"T": Stub(), "M": Stub(), "G": ThresholdUnit(3)})
    with pytest.raises(ResidualVariables):
        instantiate(heterogeneous_schema(), {})


def test_fresh_instance_is_quiescent():
    inst = instantiate(gated_machine(), {"T": Stub(), "M": Stub(), "G": Gate()})
    assert inst.clock == 0 and inst.trace == [] and inst.queue == []
    assert inst.states["G"] == {"open": False}
    assert quiescent(inst) and step(inst) == []
    assert run(inst, max_cycles=0).trace == ()


# ---------------------------------------------------------------- gate


def test_gate_passes_word_only_after_opening():
    inst = instantiate(gated_machine(), gated_behaviors("abba"))
    res = run(inst, [Stimulus(2, "input", payload="go")])
    opened = next(r["cycle"] for r in res.trace if r["event"] == "open")
    dropped = [r["payload"] for r in res.trace if r["event"] == "drop"]
    outs = [r for r in res.outputs if r["via"] == "result"]
    assert dropped == ["a", "b"]
    assert "".join(r["payload"] for r in outs) == "ba"
    assert all(r["cycle"] >= opened for r in outs)


def test_gate_without_opening_outputs_nothing():
    inst = instantiate(gated_machine(), gated_behaviors("abba"))
    res = run(inst, [])
    assert res.outputs == () and all(r["event"] != "open" for r in res.trace)


# ---------------------------------------------------------------- threshold unit


@pytest.mark.parametrize("threshold", [20, 30, 50])
def test_threshold_fires_exactly_at_threshold(threshold):
    for k, fires in ((threshold - 1, False), (threshold, True), (threshold + 1, True)):
        inst = instantiate(threshold_cell(), {"N": ThresholdUnit(threshold)})
        res = run(inst, signals(k))
        assert bool(fire_cycles(res)) is fires, k
        assert bool(res.outputs) is fires


def test_threshold_is_monotone_in_signal_count():
    for threshold in (3, 7):
        fired = [bool(fire_cycles(run(instantiate(threshold_cell(),
                                                  {"N": ThresholdUnit(threshold, 2)}),
                                      signals(k)))) for k in range(12)]
        assert fired == sorted(fired)


def test_threshold_window_sums_recent_cycles():
    inputs = signals(10, 0) + signals(10, 2)
    short = run(instantiate(threshold_cell(), {"N": ThresholdUnit(20, window=2)}), inputs)
    wide = run(instantiate(threshold_cell(), {"N": ThresholdUnit(20, window=3)}), inputs)
    assert fire_cycles(short) == [] and fire_cycles(wide) == [2]


# ---------------------------------------------------------------- finite automata


def test_fa_trajectory_matches_table_simulation():
    fa = FA_PRESETS["parity"]()
    from gridschema.grid_automaton import Direction, GridAutomaton, Link, Port
    from gridschema.multigraph import EndOnly
    from gridschema.kinds import Kind

    ga = GridAutomaton("one", {"A": Kind(("automaton", "finite_automaton"))},
                       {"A_in": Port(Direction.INLET)}, {"in": Link(LinkClass.INFORMATION)},
                       {"A_in": "A"}, {"in": EndOnly("A_in")}, {})
    for w in WORDS:
        res = run(instantiate(ga, {"A": fa}), word_stimuli(w, "in"))
        traj = [fa.initial] + [r["to"] for r in res.trace if r["event"] == "step"]
        assert traj == fa.transduce(w)[0]
        done = [r for r in res.trace if r["event"] == "complete"]
        assert [r["payload"] for r in done] == [fa.transduce(w)[1]]


# ---------------------------------------------------------------- sequential composition


def test_composition_shape():
    ga = sequential_composition(FA_PRESETS["identity"](), FA_PRESETS["identity"]())
    assert len(ga.nodes) == 2
    classes = sorted(l.link_class.value for l in ga.links.values())
    assert classes == ["control", "info"]
    assert classify_automaton(ga).role is Role.TRANSDUCER


def test_composition_alphabet_mismatch():
    ab = FiniteAutomaton(("q",), ("0", "1"), {("q", "0"): ("q", "a"), ("q", "1"): ("q", "b")}, "q")
    with pytest.raises(AlphabetMismatch):
        sequential_composition(ab, FA_PRESETS["identity"]())


@pytest.mark.parametrize("first,second", [("complement", "parity"), ("parity", "delay"),
                                          ("identity", "identity")])
def test_composition_computes_g_after_f_on_all_short_words(first, second):
    f, g = FA_PRESETS[first](), FA_PRESETS[second]()
    for w in WORDS:
        got, res = run_composition(f, g, [w])
        assert got == [g.transduce(f.transduce(w)[1])[1]], w


def test_composition_pipelines_words():
    f, g = FA_PRESETS["complement"](), FA_PRESETS["parity"]()
    got, res = run_composition(f, g, WORDS)
    assert got == [g.transduce(f.transduce(w)[1])[1] for w in WORDS]
    alone = sum(run_composition(f, g, [w])[1].cycles for w in WORDS)
    assert res.cycles < alone
    # A starts the next word while B still works on the previous one
    busy = {}
    for r in res.trace:
        if r["event"] == "step":
            busy.setdefault(r["cycle"], set()).add(r["node"])
    assert any(v == {"A", "B"} for v in busy.values())


def test_no_payload_on_control_links():
    f, g = FA_PRESETS["parity"](), FA_PRESETS["delay"]()
    got, res = run_composition(f, g, WORDS[:20])
    inst = instantiate(sequential_composition(f, g), {"A": f, "B": g})
    assert link_discipline_violations(inst, res.trace) == []


def test_traces_are_byte_identical_across_runs():
    texts = set()
    for _ in range(3):
        _, res = run_composition(FA_PRESETS["complement"](), FA_PRESETS["parity"](), WORDS)
        texts.add(trace_jsonl(res.trace))
    assert len(texts) == 1


def test_end_marker_constant():
    assert word_stimuli("01", "x")[-1].payload == END_OF_WORD
    assert Buffer(("1",), LinkClass.CONTROL).initial_state()["armed"]
