import random

import pytest
from hypothesis import given, settings, strategies as st

from linlog.formulas import (
    Atom, DualAtom, Tensor, Par, With, Plus,
    ONE, BOT, ZERO, TOP, FormulaError, Sequent, parse_sequent, size,
)
from linlog.proofs import check_proof, count_cuts, conclusion
from linlog.prover import (
    NOT_PROVABLE, BUDGET_EXCEEDED, SearchLimits, prove_mall, oracle_provable,
)


def P(text):
    return parse_sequent(text)


def test_paper_polarity_pair():
    p = prove_mall(P("|- a @ a^"))
    assert not isinstance(p, type(NOT_PROVABLE))
    assert check_proof(p).ok
    assert prove_mall(P("|- a + a^")) is NOT_PROVABLE


def test_distributivity_provable():
    s = P("|- (a * (b + c))^, (a * b) + (a * c)")
    from linlog.formulas import nnf_sequent
    p = prove_mall(nnf_sequent(s))
    assert check_proof(p).ok


def test_tensor_of_dual_atoms_not_provable():
    # expected value computed by the exhaustive enumeration oracle
    s = P("|- a * a^")
    assert oracle_provable(s) is False
    assert prove_mall(s) is NOT_PROVABLE


def test_oracle_examples():
    assert oracle_provable(P("|- a, a^")) is True
    assert oracle_provable(P("|- a")) is False
    assert oracle_provable(P("|- 1")) is True


def test_oracle_bound_enforced():
    with pytest.raises(FormulaError):
        oracle_provable(P("|- a, a, a, a, a, a, a"), size_bound=5)


def test_prover_rejects_exponentials():
    with pytest.raises(FormulaError):
        prove_mall(P("|- ?a, !(a^)"))


def test_units():
    assert check_proof(prove_mall(P("|- 1"))).ok
    assert check_proof(prove_mall(P("|- bot, 1"))).ok
    assert check_proof(prove_mall(P("|- top, 0"))).ok
    assert check_proof(prove_mall(P("|- a^ @ (a * 1)"))).ok
    assert prove_mall(P("|- 0")) is NOT_PROVABLE
    assert prove_mall(P("|- 1, 1")) is NOT_PROVABLE


def test_budget_exceeded():
    s = P("|- (a @ a) @ (a @ a), (a^ * a^) * (a^ * a^)")
    assert prove_mall(s, SearchLimits(max_visited_sequents=3)) is BUDGET_EXCEEDED


def test_eta_expansion_of_general_axiom():
    # general identities are derivable with atomic axioms
    for text in ["|- (a * b)^, a * b", "|- (a & b)^, a & b", "|- (1 * top)^, 1 * top"]:
        from linlog.formulas import nnf_sequent
        p = prove_mall(nnf_sequent(P(text)))
        assert check_proof(p).ok
        assert count_cuts(p) == 0


_LEAVES = [Atom("a"), Atom("b"), DualAtom("a"), DualAtom("b"), ONE, BOT, ZERO, TOP]


def mall_formula(max_leaves=4):
    return st.recursive(
        st.sampled_from(_LEAVES),
        lambda kids: st.one_of(
            st.builds(Tensor, kids, kids),
            st.builds(Par, kids, kids),
            st.builds(With, kids, kids),
            st.builds(Plus, kids, kids),
        ),
        max_leaves=max_leaves,
    )


@settings(max_examples=150, deadline=None)
@given(st.lists(mall_formula(), min_size=1, max_size=3))
def test_prover_agrees_with_oracle(fs):
    s = Sequent(fs)
    if s.total_size() > 10:
        return
    expected = oracle_provable(s)
    got = prove_mall(s)
    if got is NOT_PROVABLE:
        assert expected is False, f"oracle proves {s}, prover does not"
    else:
        assert expected is True, f"prover proves {s}, oracle does not"
        assert check_proof(got).ok
        assert conclusion(got) == s


@settings(max_examples=100, deadline=None)
@given(st.lists(mall_formula(), min_size=1, max_size=3))
def test_soundness_of_returned_proofs(fs):
    s = Sequent(fs)
    if s.total_size() > 12:
        return
    p = prove_mall(s)
    if p is not NOT_PROVABLE and p is not BUDGET_EXCEEDED:
        assert check_proof(p).ok
        assert conclusion(p) == s
