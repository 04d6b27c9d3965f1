import random

import pytest

from linlog.formulas import parse_formula, parse_sequent, nnf, size
from linlog.proofs import check_proof, conclusion, iter_nodes, WithRule
from linlog.tcm import (
    TCM, Instruction, TcmError, RunTrace, TraceStep,
    simulate, encode, full_sequent, counter_power, instruction_formula,
    synthesize_proof, validate_trace, parse_machine, render_machine, parse_id,
    chain_machine, fork_machine, canonical_id,
)


def test_chain_machine_simulates():
    trace = simulate(chain_machine(), [("qi", 0, 0)], bound=10)
    assert trace is not None
    assert len(trace.steps) == 2
    assert trace.final == (("qf", 0, 0),)


def test_no_instructions_no_accept():
    m = TCM(frozenset({"qi", "qf"}), "qi", "qf", ())
    assert simulate(m, [("qi", 0, 0)], bound=5) is None


def test_fork_machine_simulates():
    trace = simulate(fork_machine(), [("qi", 0, 0)], bound=5)
    assert trace is not None
    assert trace.final == (("qf", 0, 0), ("qf", 0, 0))


def test_instruction_encoding_shapes():
    plus_a = instruction_formula(Instruction("+A", "qi", "qj"))
    assert plus_a == nnf(parse_formula("?((qi^ @ (qj * a))^)"))
    assert plus_a == parse_formula("?(qi * (qj^ @ a^))")
    fork = instruction_formula(Instruction("fork", "qi", "qj", "qk"))
    assert fork == nnf(parse_formula("?((qi^ @ (qj + qk))^)"))
    assert fork == parse_formula("?(qi * (qj^ & qk^))")
    minus_b = instruction_formula(Instruction("-B", "qi", "qj"))
    assert minus_b == parse_formula("?((qi * b) * qj^)")


def test_goal_shape_at_zero_counters():
    goal, theory = encode(chain_machine(), ("qi", 0, 0))
    assert goal == parse_sequent("|- qi^, bot, bot, qf")
    assert len(theory) == 2


def test_counter_power_size_is_linear():
    for m in range(1, 12):
        assert size(counter_power("a", m)) == 2 * m - 1


def test_validator_rejects_negative_decrement():
    m = chain_machine()
    bad = RunTrace(
        (("qi", 0, 0),),
        (TraceStep((("qi", 0, 0),), Instruction("-A", "q1", "qf"), ("qi", 0, 0)),),
        (("qf", 0, 0),),
    )
    with pytest.raises(TcmError):
        validate_trace(m, bad)


def test_base_case_proof():
    m = chain_machine()
    trace = RunTrace((("qf", 0, 0),), (), (("qf", 0, 0),))
    p = synthesize_proof(m, trace, ("qf", 0, 0))
    assert check_proof(p).ok
    assert conclusion(p) == full_sequent(m, ("qf", 0, 0))


def test_chain_machine_proof():
    m = chain_machine()
    trace = simulate(m, [("qi", 0, 0)], bound=10)
    p = synthesize_proof(m, trace, ("qi", 0, 0))
    report = check_proof(p)
    assert report.ok, report
    assert conclusion(p) == full_sequent(m, ("qi", 0, 0))


def test_fork_machine_proof_has_with_branch():
    m = fork_machine()
    trace = simulate(m, [("qi", 0, 0)], bound=5)
    p = synthesize_proof(m, trace, ("qi", 0, 0))
    assert check_proof(p).ok
    withs = [n for _, n in iter_nodes(p) if isinstance(n.rule, WithRule)]
    assert len(withs) == 1
    # both branches conclude with the final state's dual present
    for premise in withs[0].premises:
        assert parse_formula("qf^") in premise.conclusion.formulas


def test_counters_above_zero():
    m = TCM(
        frozenset({"qi", "q1", "q2", "qf"}), "qi", "qf",
        (
            Instruction("+A", "qi", "q1"),
            Instruction("+B", "q1", "q2"),
            Instruction("-A", "q2", "q1"),
            Instruction("-B", "q1", "qf"),
        ),
    )
    trace = simulate(m, [("qi", 0, 0)], bound=10)
    assert trace is not None
    p = synthesize_proof(m, trace, ("qi", 0, 0))
    assert check_proof(p).ok
    assert conclusion(p) == full_sequent(m, ("qi", 0, 0))


def test_proof_for_every_initial_triplet():
    m = TCM(
        frozenset({"qi", "q1", "qf"}), "qi", "qf",
        (Instruction("+A", "qi", "q1"), Instruction("-A", "q1", "qf"),
         Instruction("-B", "qi", "qi")),
    )
    initial = [("qi", 0, 0), ("qi", 0, 1), ("q1", 1, 0)]
    trace = simulate(m, initial, bound=12)
    assert trace is not None
    for t in set(trace.initial):
        p = synthesize_proof(m, trace, t)
        assert check_proof(p).ok, t
        assert conclusion(p) == full_sequent(m, t)


def test_machine_file_roundtrip():
    m = chain_machine()
    text = render_machine(m)
    assert parse_machine(text) == m
    fancy = "states: qi qf\ninit: qi\nfinal: qf\nqi fork qf qf\n"
    assert parse_machine(fancy) == fork_machine()


def test_parse_id():
    assert parse_id("(qi,0,0);(qf,1,2)") == canonical_id([("qi", 0, 0), ("qf", 1, 2)])
    assert parse_id("qi,0,0") == (("qi", 0, 0),)


def test_state_name_collision_rejected():
    with pytest.raises(TcmError):
        TCM(frozenset({"a", "qf"}), "a", "qf", ())
