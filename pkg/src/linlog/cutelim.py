"""Stepwise cut elimination on proof objects, for full linear logic.

One reduction step rewrites the leftmost-innermost cut (the first cut in
postorder; its premises are therefore cut-free).  Key cases where both
cut formulas are principal either erase the cut or push it onto smaller
formulas; commutative cases push the cut past a rule that does not touch
it.  Contraction against a promotion duplicates the promoted subproof;
a cut against a top-rule context erases the other premise entirely.

Every step preserves the end sequent and yields a proof that still
checks, which is what the test suite enforces on the whole corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (
    Formula, OfCourse, Par, Plus, Tensor, WhyNot, With, TOP, Sequent, dual,
)
from . import proofs as pr
from .proofs import (
    Proof,
    AxiomRule, CutRule, TensorRule, ParRule, OneRule, BotRule, TopRule,
    WithRule, PlusLeftRule, PlusRightRule,
    DerelictionRule, PromotionRule, ContractionRule, WeakeningRule,
)

AXIOM_CUT = "axiom-cut"
SYMMETRIC = "symmetric-logical"
COMMUTATIVE = "commutative"


@dataclass(frozen=True)
class ReductionStep:
    path: tuple[int, ...]
    kind: str        # axiom-cut | symmetric-logical | commutative
    detail: str      # e.g. "tensor/par", "contraction/promotion", "past with"
    duplicates: bool = False


class CutElimError(ValueError):
    pass


class FuelExhausted(Exception):
    def __init__(self, proof: Proof, stats: "NormalizationStats"):
        super().__init__(f"fuel exhausted after {stats.steps} steps")
        self.proof = proof
        self.stats = stats


@dataclass(frozen=True)
class NormalizationStats:
    steps: int
    duplications: int
    final_cut_count: int


def _find_redex(p: Proof, path: tuple[int, ...] = ()) -> tuple[int, ...] | None:
    for i, q in enumerate(p.premises):
        found = _find_redex(q, path + (i,))
        if found is not None:
            return found
    if isinstance(p.rule, CutRule):
        return path
    return None


def reduce_step(p: Proof) -> tuple[Proof, ReductionStep] | None:
    """Perform one reduction on the leftmost-innermost cut; None if cut-free."""
    path = _find_redex(p)
    if path is None:
        return None
    node = p
    for i in path:
        node = node.premises[i]
    replacement, kind, detail, dup = _reduce_cut(node)
    if replacement.conclusion != node.conclusion:
        raise CutElimError(
            f"subject reduction violated: {node.conclusion} became {replacement.conclusion}"
        )
    return _replace(p, path, replacement), ReductionStep(path, kind, detail, dup)


def _replace(p: Proof, path: tuple[int, ...], new: Proof) -> Proof:
    if not path:
        return new
    i = path[0]
    premises = list(p.premises)
    premises[i] = _replace(premises[i], path[1:], new)
    return Proof(p.conclusion, p.rule, p.principal, tuple(premises))


def normalize(p: Proof, fuel: int = 100_000) -> tuple[Proof, NormalizationStats]:
    """Iterate reduce_step to a cut-free proof; raises FuelExhausted."""
    steps = 0
    duplications = 0
    current = p
    while True:
        if steps >= fuel:
            raise FuelExhausted(
                current, NormalizationStats(steps, duplications, _count_cuts(current))
            )
        result = reduce_step(current)
        if result is None:
            return current, NormalizationStats(steps, duplications, 0)
        current, step = result
        steps += 1
        if step.duplicates:
            duplications += 1


def _count_cuts(p: Proof) -> int:
    return pr.count_cuts(p)


def _principal_value(p: Proof) -> Formula | None:
    if len(p.principal) != 1:
        return None
    return p.conclusion[p.principal[0]]


def _reduce_cut(node: Proof) -> tuple[Proof, str, str, bool]:
    p1, p2 = node.premises
    c: Formula = node.rule.formula
    d = dual(c)

    if isinstance(p1.rule, AxiomRule):
        return p2, AXIOM_CUT, "axiom left", False
    if isinstance(p2.rule, AxiomRule):
        return p1, AXIOM_CUT, "axiom right", False

    c_principal = _principal_value(p1) == c
    d_principal = _principal_value(p2) == d

    if c_principal and d_principal:
        return _reduce_key_case(p1, p2, c, d)
    if not c_principal and not isinstance(p1.rule, PromotionRule):
        new, detail, dup = _commute(p1, p2, c, side="left")
        return new, COMMUTATIVE, detail, dup
    if not d_principal and not isinstance(p2.rule, PromotionRule):
        new, detail, dup = _commute(p2, p1, d, side="right")
        return new, COMMUTATIVE, detail, dup
    # remaining: the cut formula sits in a promotion context on one side and
    # is the promoted formula on the other; re-promote around the cut
    if not c_principal and isinstance(p1.rule, PromotionRule) and d_principal:
        inner_body = _promotion_body(p1)
        inner = pr.cut(p1.premises[0], p2, c)
        return pr.promotion(inner, inner_body), SYMMETRIC, "promotion/promotion", False
    if not d_principal and isinstance(p2.rule, PromotionRule) and c_principal:
        inner_body = _promotion_body(p2)
        inner = pr.cut(p1, p2.premises[0], c)
        return pr.promotion(inner, inner_body), SYMMETRIC, "promotion/promotion", False
    raise CutElimError(f"no reduction applies at cut on {c} between "
                       f"{p1.rule.name} and {p2.rule.name}")


def _promotion_body(p: Proof) -> Formula:
    f = _principal_value(p)
    assert isinstance(f, OfCourse)
    return f.body


def _reduce_key_case(p1: Proof, p2: Proof, c: Formula, d: Formula):
    r1, r2 = p1.rule, p2.rule
    # orient so the positive rule is on the left
    if isinstance(r1, (ParRule, WithRule, BotRule, DerelictionRule,
                       WeakeningRule, ContractionRule)):
        p1, p2, c, d = p2, p1, d, c
        r1, r2 = p1.rule, p2.rule

    match r1, r2:
        case TensorRule(), ParRule():
            assert isinstance(c, Tensor)
            t1, t2 = p1.premises
            q1 = p2.premises[0]
            inner = pr.cut(t1, q1, c.left)
            outer = pr.cut(t2, inner, c.right)
            return outer, SYMMETRIC, "tensor/par", False
        case PlusLeftRule(), WithRule():
            assert isinstance(c, Plus)
            return pr.cut(p1.premises[0], p2.premises[0], c.left), SYMMETRIC, "plus/with", False
        case PlusRightRule(), WithRule():
            assert isinstance(c, Plus)
            return pr.cut(p1.premises[0], p2.premises[1], c.right), SYMMETRIC, "plus/with", False
        case OneRule(), BotRule():
            return p2.premises[0], SYMMETRIC, "one/bot", False
        case PromotionRule(), DerelictionRule():
            assert isinstance(c, OfCourse)
            return pr.cut(p2.premises[0], p1.premises[0], d.body), SYMMETRIC, \
                "dereliction/promotion", False
        case PromotionRule(), WeakeningRule():
            acc = p2.premises[0]
            for f in p1.conclusion.without_index(p1.principal[0]):
                assert isinstance(f, WhyNot)
                acc = pr.weakening(acc, f.body)
            return acc, SYMMETRIC, "weakening/promotion", False
        case PromotionRule(), ContractionRule():
            assert isinstance(d, WhyNot)
            box_context = p1.conclusion.without_index(p1.principal[0])
            inner = pr.cut(p2.premises[0], p1, d)
            outer = pr.cut(inner, p1, d)
            acc = outer
            for f in box_context:
                assert isinstance(f, WhyNot)
                acc = pr.contraction(acc, f.body)
            return acc, SYMMETRIC, "contraction/promotion", True
    raise CutElimError(f"unmatched key case {r1.name}/{r2.name} on {c}")


def _commute(active: Proof, passive: Proof, c: Formula, side: str):
    """Push the cut past `active`'s last rule.  `c` is the cut formula as it
    occurs in `active`; `side` records whether `active` was the first or
    second cut premise, so the rebuilt cuts keep their orientation."""

    def mkcut(sub: Proof) -> Proof:
        if side == "left":
            return pr.cut(sub, passive, c)
        return pr.cut(passive, sub, dual(c))

    f = _principal_value(active)
    match active.rule:
        case ParRule():
            assert isinstance(f, Par)
            return pr.par(mkcut(active.premises[0]), f.left, f.right), "past par", False
        case BotRule():
            return pr.bot(mkcut(active.premises[0])), "past bot", False
        case TopRule():
            concl = active.conclusion.remove(c).union(passive.conclusion.remove(dual(c)))
            return pr.top(concl.remove(TOP)), "past top", False
        case WithRule():
            assert isinstance(f, With)
            left = mkcut(active.premises[0])
            right = mkcut(active.premises[1])
            return pr.with_(left, right, f.left, f.right), "past with", True
        case PlusLeftRule():
            assert isinstance(f, Plus)
            return pr.plus_left(mkcut(active.premises[0]), f.left, f.right), "past plus", False
        case PlusRightRule():
            assert isinstance(f, Plus)
            return pr.plus_right(mkcut(active.premises[0]), f.left, f.right), "past plus", False
        case TensorRule():
            assert isinstance(f, Tensor)
            t1, t2 = active.premises
            in_first = t1.conclusion.count(c) - (1 if c == f.left else 0) > 0
            if in_first:
                return pr.tensor(mkcut(t1), t2, f.left, f.right), "past tensor", False
            return pr.tensor(t1, mkcut(t2), f.left, f.right), "past tensor", False
        case DerelictionRule():
            assert isinstance(f, WhyNot)
            return pr.dereliction(mkcut(active.premises[0]), f.body), "past dereliction", False
        case ContractionRule():
            assert isinstance(f, WhyNot)
            return pr.contraction(mkcut(active.premises[0]), f.body), "past contraction", False
        case WeakeningRule():
            assert isinstance(f, WhyNot)
            return pr.weakening(mkcut(active.premises[0]), f.body), "past weakening", False
    raise CutElimError(f"cannot commute past {active.rule.name}")
