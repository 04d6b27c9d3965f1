import random

import pytest

from linlog.formulas import (
    Atom, DualAtom, WhyNot, OfCourse, Sequent, parse_sequent, nnf_sequent,
)
from linlog import proofs as pr
from linlog.proofs import check_proof, count_cuts, conclusion, PromotionRule, iter_nodes
from linlog.cutelim import normalize, reduce_step, FuelExhausted, NormalizationStats
from linlog.fixtures import all_fixtures, digging, distributivity_ltr
from linlog.prover import prove_mall, NOT_PROVABLE, SearchLimits

a, b = Atom("a"), Atom("b")
na, nb = DualAtom("a"), DualAtom("b")


def test_axiom_cut_vanishes():
    pi = pr.bot(pr.ax(na))  # |- a^, a, bot
    p = pr.cut(pr.ax(a), pi, a)
    reduced, step = reduce_step(p)
    assert step.kind == "axiom-cut"
    assert reduced == pi


def test_cut_free_proof_is_normal():
    assert reduce_step(distributivity_ltr()) is None
    p, stats = normalize(distributivity_ltr())
    assert stats == NormalizationStats(0, 0, 0)
    assert p == distributivity_ltr()


def test_contraction_promotion_duplicates():
    c1 = pr.weakening(pr.weakening(pr.ax(a), nb), nb)   # |- a, a^, ?b^, ?b^
    c = pr.contraction(c1, nb)                          # |- a, a^, ?b^
    box = pr.promotion(pr.dereliction(pr.ax(b), nb), b)  # |- ?b^, !b
    p = pr.cut(c, box, WhyNot(nb))
    reduced, step = reduce_step(p)
    assert step.kind == "symmetric-logical"
    assert step.detail == "contraction/promotion"
    assert step.duplicates
    assert reduced.conclusion == p.conclusion
    assert check_proof(reduced).ok
    boxes = sum(1 for _, n in iter_nodes(reduced) if isinstance(n.rule, PromotionRule))
    assert boxes == 2
    final, stats = normalize(p)
    assert stats.final_cut_count == 0
    assert conclusion(final) == conclusion(p)
    assert check_proof(final).ok
    assert stats.duplications >= 1


def test_digging_normalizes():
    p = digging()
    assert count_cuts(p) == 1
    q, stats = normalize(p)
    assert count_cuts(q) == 0
    assert conclusion(q) == conclusion(p)
    assert check_proof(q).ok


def test_fuel_exhaustion_carries_partial():
    p = digging()
    with pytest.raises(FuelExhausted) as e:
        normalize(p, fuel=0)
    assert e.value.proof == p
    assert e.value.stats.final_cut_count == 1


def test_all_fixtures_normalize_with_subject_reduction():
    for name, p in all_fixtures().items():
        current = p
        for _ in range(10_000):
            result = reduce_step(current)
            if result is None:
                break
            current, step = result
            assert current.conclusion == p.conclusion, name
            report = check_proof(current)
            assert report.ok, f"{name}: {report}"
        assert count_cuts(current) == 0, name


def _random_provable_sequents(rng, count):
    from linlog.formulas import Tensor, Par, With, Plus, ONE, BOT, ZERO, TOP
    leaves = [Atom("a"), Atom("b"), DualAtom("a"), DualAtom("b"), ONE, BOT, ZERO, TOP]
    ops = [Tensor, Par, With, Plus]

    def rand_formula(budget):
        if budget <= 1:
            return rng.choice(leaves)
        split = rng.randrange(1, budget - 1) if budget > 2 else 1
        if budget == 2:
            return rng.choice(leaves)
        return rng.choice(ops)(rand_formula(split), rand_formula(budget - 1 - split))

    memo = {}
    found = []
    while len(found) < count:
        n = rng.randrange(3, 11)
        sizes = []
        while n > 0:
            k = rng.choice([s for s in range(1, n + 1) if s != 2])
            sizes.append(k)
            n -= k
        s = Sequent(rand_formula(k) for k in sizes)
        proof = prove_mall(s, SearchLimits(), memo)
        if proof is not NOT_PROVABLE:
            found.append(proof)
    return found


def test_random_cut_compositions_normalize():
    rng = random.Random(7)
    proofs = _random_provable_sequents(rng, 40)
    from linlog.formulas import dual as fdual
    for pi in proofs:
        f = rng.choice(pi.conclusion.formulas)
        partner = pr.ax(fdual(f))  # |- f^, f
        composed = pr.cut(pi, partner, f)
        assert check_proof(composed).ok
        normal, stats = normalize(composed)
        assert stats.final_cut_count == 0
        assert conclusion(normal) == conclusion(pi)
        assert check_proof(normal).ok


def test_mall_steps_decrease_node_count():
    rng = random.Random(11)
    from linlog.formulas import dual as fdual
    from linlog.proofs import proof_size
    for pi in _random_provable_sequents(rng, 15):
        f = rng.choice(pi.conclusion.formulas)
        current = pr.cut(pi, pr.ax(fdual(f)), f)
        while True:
            result = reduce_step(current)
            if result is None:
                break
            nxt, step = result
            if step.kind == "symmetric-logical" or step.kind == "axiom-cut":
                assert proof_size(nxt) < proof_size(current)
            current = nxt
