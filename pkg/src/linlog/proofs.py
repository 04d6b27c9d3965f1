"""Proof objects for full linear logic and a local rule checker.

Every proof node stores its own conclusion sequent.  That is redundant
(the rule plus the premises determine it) but it makes proof files
self-describing and lets the checker pin a failure to a single node.

Positions (principal indices, tensor splits) refer to the canonical
order of the stored conclusion's formulas.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .formulas import (
    Formula, Sequent, Tensor, Par, With, Plus, OfCourse, WhyNot,
    ONE, BOT, TOP,
    dual, is_nnf, nnf, parse_sequent, parse_formula,
    render_formula, render_sequent,
)


class ProofError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rule tags

@dataclass(frozen=True)
class AxiomRule:
    name = "ax"
    arity = 0


@dataclass(frozen=True)
class CutRule:
    formula: Formula  # the cut formula as it appears in the first premise
    name = "cut"
    arity = 2


@dataclass(frozen=True)
class TensorRule:
    left: tuple[int, ...]  # conclusion indices sent to the first premise
    name = "tensor"
    arity = 2


@dataclass(frozen=True)
class ParRule:
    name = "par"
    arity = 1


@dataclass(frozen=True)
class OneRule:
    name = "one"
    arity = 0


@dataclass(frozen=True)
class BotRule:
    name = "bot"
    arity = 1


@dataclass(frozen=True)
class TopRule:
    name = "top"
    arity = 0


@dataclass(frozen=True)
class WithRule:
    name = "with"
    arity = 2


@dataclass(frozen=True)
class PlusLeftRule:
    name = "plusl"
    arity = 1


@dataclass(frozen=True)
class PlusRightRule:
    name = "plusr"
    arity = 1


@dataclass(frozen=True)
class DerelictionRule:
    name = "der"
    arity = 1


@dataclass(frozen=True)
class PromotionRule:
    name = "prom"
    arity = 1


@dataclass(frozen=True)
class ContractionRule:
    name = "ctr"
    arity = 1


@dataclass(frozen=True)
class WeakeningRule:
    name = "wk"
    arity = 1


Rule = (
    AxiomRule | CutRule | TensorRule | ParRule | OneRule | BotRule | TopRule
    | WithRule | PlusLeftRule | PlusRightRule
    | DerelictionRule | PromotionRule | ContractionRule | WeakeningRule
)


@dataclass(frozen=True)
class Proof:
    conclusion: Sequent
    rule: Rule
    principal: tuple[int, ...]
    premises: tuple["Proof", ...]

    def __iter__(self) -> Iterator["Proof"]:
        return iter(self.premises)

    def __repr__(self) -> str:
        return f"<Proof {self.rule.name} {render_sequent(self.conclusion)}>"


def conclusion(p: Proof) -> Sequent:
    return p.conclusion


def count_cuts(p: Proof) -> int:
    n = 1 if isinstance(p.rule, CutRule) else 0
    return n + sum(count_cuts(q) for q in p.premises)


def proof_size(p: Proof) -> int:
    return 1 + sum(proof_size(q) for q in p.premises)


def iter_nodes(p: Proof, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Proof]]:
    yield path, p
    for i, q in enumerate(p.premises):
        yield from iter_nodes(q, path + (i,))


# ---------------------------------------------------------------------------
# smart constructors: build nodes whose conclusions are computed, never guessed

def ax(a: Formula) -> Proof:
    """Axiom |- A, A^ for any NNF formula A."""
    if not is_nnf(a):
        raise ProofError(f"axiom formula must be NNF: {a}")
    concl = Sequent([a, dual(a)])
    return Proof(concl, AxiomRule(), (0, 1), ())


def cut(p1: Proof, p2: Proof, formula: Formula) -> Proof:
    """Cut on `formula` (in p1) against its dual (in p2)."""
    d = dual(formula)
    if formula not in p1.conclusion.formulas:
        raise ProofError(f"cut formula {formula} not in first premise {p1.conclusion}")
    if d not in p2.conclusion.formulas:
        raise ProofError(f"dual cut formula {d} not in second premise {p2.conclusion}")
    concl = p1.conclusion.remove(formula).union(p2.conclusion.remove(d))
    return Proof(concl, CutRule(formula), (), (p1, p2))


def _principal_index(concl: Sequent, f: Formula) -> int:
    return concl.index(f)


def tensor(p1: Proof, p2: Proof, a: Formula, b: Formula) -> Proof:
    """From |- A,G1 and |- B,G2 conclude |- A*B, G1, G2."""
    if a not in p1.conclusion.formulas:
        raise ProofError(f"{a} not in {p1.conclusion}")
    if b not in p2.conclusion.formulas:
        raise ProofError(f"{b} not in {p2.conclusion}")
    g1 = p1.conclusion.remove(a)
    g2 = p2.conclusion.remove(b)
    concl = g1.union(g2).add(Tensor(a, b))
    pi = _principal_index(concl, Tensor(a, b))
    # assign, per formula value, the first copies (in canonical order) to g1
    want = Counter(g1.formulas)
    left = []
    for i, f in enumerate(concl.formulas):
        if i == pi:
            continue
        if want[f] > 0:
            want[f] -= 1
            left.append(i)
    return Proof(concl, TensorRule(tuple(left)), (pi,), (p1, p2))


def par(p: Proof, a: Formula, b: Formula) -> Proof:
    if a not in p.conclusion.formulas or b not in p.conclusion.remove(a).formulas:
        raise ProofError(f"{a}, {b} not both in {p.conclusion}")
    concl = p.conclusion.remove(a).remove(b).add(Par(a, b))
    return Proof(concl, ParRule(), (_principal_index(concl, Par(a, b)),), (p,))


def one() -> Proof:
    return Proof(Sequent([ONE]), OneRule(), (0,), ())


def bot(p: Proof) -> Proof:
    concl = p.conclusion.add(BOT)
    return Proof(concl, BotRule(), (_principal_index(concl, BOT),), (p,))


def top(context: Sequent) -> Proof:
    concl = context.add(TOP)
    return Proof(concl, TopRule(), (_principal_index(concl, TOP),), ())


def with_(p1: Proof, p2: Proof, a: Formula, b: Formula) -> Proof:
    """From |- A,G and |- B,G (same G) conclude |- A&B, G."""
    if a not in p1.conclusion.formulas:
        raise ProofError(f"{a} not in {p1.conclusion}")
    if b not in p2.conclusion.formulas:
        raise ProofError(f"{b} not in {p2.conclusion}")
    g1 = p1.conclusion.remove(a)
    g2 = p2.conclusion.remove(b)
    if g1 != g2:
        raise ProofError(f"with-rule contexts differ: {g1} vs {g2}")
    concl = g1.add(With(a, b))
    return Proof(concl, WithRule(), (_principal_index(concl, With(a, b)),), (p1, p2))


def plus_left(p: Proof, a: Formula, b: Formula) -> Proof:
    if a not in p.conclusion.formulas:
        raise ProofError(f"{a} not in {p.conclusion}")
    concl = p.conclusion.remove(a).add(Plus(a, b))
    return Proof(concl, PlusLeftRule(), (_principal_index(concl, Plus(a, b)),), (p,))


def plus_right(p: Proof, a: Formula, b: Formula) -> Proof:
    if b not in p.conclusion.formulas:
        raise ProofError(f"{b} not in {p.conclusion}")
    concl = p.conclusion.remove(b).add(Plus(a, b))
    return Proof(concl, PlusRightRule(), (_principal_index(concl, Plus(a, b)),), (p,))


def dereliction(p: Proof, a: Formula) -> Proof:
    if a not in p.conclusion.formulas:
        raise ProofError(f"{a} not in {p.conclusion}")
    concl = p.conclusion.remove(a).add(WhyNot(a))
    return Proof(concl, DerelictionRule(), (_principal_index(concl, WhyNot(a)),), (p,))


def promotion(p: Proof, a: Formula) -> Proof:
    if a not in p.conclusion.formulas:
        raise ProofError(f"{a} not in {p.conclusion}")
    side = p.conclusion.remove(a)
    if not all(isinstance(f, WhyNot) for f in side):
        raise ProofError(f"promotion context must be all ?-prefixed: {side}")
    concl = side.add(OfCourse(a))
    return Proof(concl, PromotionRule(), (_principal_index(concl, OfCourse(a)),), (p,))


def contraction(p: Proof, a: Formula) -> Proof:
    w = WhyNot(a)
    if p.conclusion.count(w) < 2:
        raise ProofError(f"contraction needs two copies of {w} in {p.conclusion}")
    concl = p.conclusion.remove(w)
    return Proof(concl, ContractionRule(), (_principal_index(concl, w),), (p,))


def weakening(p: Proof, a: Formula) -> Proof:
    w = WhyNot(a)
    concl = p.conclusion.add(w)
    return Proof(concl, WeakeningRule(), (_principal_index(concl, w),), (p,))


# ---------------------------------------------------------------------------
# checking

@dataclass(frozen=True)
class CheckReport:
    failures: tuple[tuple[tuple[int, ...], str], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"at {list(path)}: {msg}" for path, msg in self.failures)


def check_proof(p: Proof) -> CheckReport:
    failures: list[tuple[tuple[int, ...], str]] = []
    for path, node in iter_nodes(p):
        failures.extend((path, msg) for msg in _check_node(node))
    return CheckReport(tuple(failures))


def _get_principal(node: Proof) -> Formula | None:
    if len(node.principal) != 1:
        return None
    i = node.principal[0]
    if not (0 <= i < len(node.conclusion)):
        return None
    return node.conclusion[i]


def _check_node(node: Proof) -> list[str]:
    rule = node.rule
    concl = node.conclusion
    errs: list[str] = []
    for f in concl:
        if not is_nnf(f):
            errs.append(f"formula not in NNF: {f}")
    if errs:
        return errs
    if len(node.premises) != rule.arity:
        return [f"rule {rule.name} expects {rule.arity} premises, has {len(node.premises)}"]

    def premise(i: int) -> Sequent:
        return node.premises[i].conclusion

    match rule:
        case AxiomRule():
            if len(concl) != 2 or concl[1] != dual(concl[0]):
                errs.append(f"axiom must conclude |- A, A^: {concl}")
        case CutRule(formula=f):
            d = dual(f)
            if f not in premise(0).formulas:
                errs.append(f"cut formula {f} missing from first premise")
            elif d not in premise(1).formulas:
                errs.append(f"dual cut formula {d} missing from second premise")
            elif premise(0).remove(f).union(premise(1).remove(d)) != concl:
                errs.append("cut conclusion is not the merge of premise contexts")
        case TensorRule(left=left):
            f = _get_principal(node)
            if not isinstance(f, Tensor):
                errs.append("tensor principal formula missing or not a tensor")
            else:
                pi = node.principal[0]
                rest = [i for i in range(len(concl)) if i != pi]
                if not set(left) <= set(rest):
                    errs.append("tensor split indices out of range or overlap principal")
                else:
                    right = [i for i in rest if i not in set(left)]
                    g1 = Sequent([concl[i] for i in left]).add(f.left)
                    g2 = Sequent([concl[i] for i in right]).add(f.right)
                    if premise(0) != g1:
                        errs.append(f"tensor first premise is {premise(0)}, split demands {g1}")
                    if premise(1) != g2:
                        errs.append(f"tensor second premise is {premise(1)}, split demands {g2}")
        case ParRule():
            f = _get_principal(node)
            if not isinstance(f, Par):
                errs.append("par principal formula missing or not a par")
            elif premise(0) != concl.without_index(node.principal[0]).add(f.left, f.right):
                errs.append("par premise does not release the two components")
        case OneRule():
            if len(concl) != 1 or concl[0] != ONE:
                errs.append(f"one-rule must conclude |- 1 alone: {concl}")
        case BotRule():
            f = _get_principal(node)
            if f != BOT:
                errs.append("bot principal formula missing")
            elif premise(0) != concl.without_index(node.principal[0]):
                errs.append("bot premise must be the conclusion without bot")
        case TopRule():
            if _get_principal(node) != TOP:
                errs.append("top principal formula missing")
        case WithRule():
            f = _get_principal(node)
            if not isinstance(f, With):
                errs.append("with principal formula missing or not a with")
            else:
                side = concl.without_index(node.principal[0])
                if premise(0) != side.add(f.left):
                    errs.append("with first premise must share the context with A")
                if premise(1) != side.add(f.right):
                    errs.append("with second premise must share the context with B")
        case PlusLeftRule():
            f = _get_principal(node)
            if not isinstance(f, Plus):
                errs.append("plus principal formula missing or not a plus")
            elif premise(0) != concl.without_index(node.principal[0]).add(f.left):
                errs.append("plusl premise must replace A+B by A")
        case PlusRightRule():
            f = _get_principal(node)
            if not isinstance(f, Plus):
                errs.append("plus principal formula missing or not a plus")
            elif premise(0) != concl.without_index(node.principal[0]).add(f.right):
                errs.append("plusr premise must replace A+B by B")
        case DerelictionRule():
            f = _get_principal(node)
            if not isinstance(f, WhyNot):
                errs.append("dereliction principal formula missing or not ?-prefixed")
            elif premise(0) != concl.without_index(node.principal[0]).add(f.body):
                errs.append("dereliction premise must strip the ? ")
        case PromotionRule():
            f = _get_principal(node)
            if not isinstance(f, OfCourse):
                errs.append("promotion principal formula missing or not !-prefixed")
            else:
                side = concl.without_index(node.principal[0])
                if not all(isinstance(g, WhyNot) for g in side):
                    errs.append(f"promotion context must be all ?-prefixed: {side}")
                elif premise(0) != side.add(f.body):
                    errs.append("promotion premise must strip the !")
        case ContractionRule():
            f = _get_principal(node)
            if not isinstance(f, WhyNot):
                errs.append("contraction principal formula missing or not ?-prefixed")
            elif premise(0) != concl.add(f):
                errs.append("contraction premise must carry one extra copy")
        case WeakeningRule():
            f = _get_principal(node)
            if not isinstance(f, WhyNot):
                errs.append("weakening principal formula missing or not ?-prefixed")
            elif premise(0) != concl.without_index(node.principal[0]):
                errs.append("weakening premise must drop the ?-formula")
        case _:
            errs.append(f"unknown rule {rule!r}")
    return errs


# ---------------------------------------------------------------------------
# file format: UTF-8 S-expressions
#
# proof   := '(' name '"' sequent '"' args ')'
#   ax     |- quoted conclusion only
#   one    |- quoted conclusion only
#   top    pidx
#   bot par plusl plusr der prom ctr wk   pidx premise
#   with   pidx premise premise
#   tensor pidx '(' 'left' idx* ')' premise premise
#   cut    '"' cut-formula '"' premise premise

def proof_to_sexpr(p: Proof) -> str:
    parts = [p.rule.name, '"' + render_sequent(p.conclusion) + '"']
    match p.rule:
        case AxiomRule() | OneRule():
            pass
        case TopRule():
            parts.append(str(p.principal[0]))
        case CutRule(formula=f):
            parts.append('"' + render_formula(f) + '"')
        case TensorRule(left=left):
            parts.append(str(p.principal[0]))
            parts.append("(left" + "".join(f" {i}" for i in left) + ")")
        case _:
            parts.append(str(p.principal[0]))
    parts.extend(proof_to_sexpr(q) for q in p.premises)
    return "(" + " ".join(parts) + ")"


def _sexpr_tokens(text: str) -> Iterator[str]:
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            yield ch
            i += 1
        elif ch == '"':
            j = text.index('"', i + 1)
            yield text[i : j + 1]
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()"':
                j += 1
            yield text[i:j]
            i = j


def _parse_sexpr(tokens: list[str], i: int):
    if tokens[i] != "(":
        raise ProofError(f"expected '(' in proof file, found {tokens[i]!r}")
    i += 1
    items = []
    while tokens[i] != ")":
        if tokens[i] == "(":
            sub, i = _parse_sexpr(tokens, i)
            items.append(sub)
        else:
            items.append(tokens[i])
            i += 1
    return items, i + 1


_RULES_BY_NAME = {
    "ax": AxiomRule, "cut": CutRule, "tensor": TensorRule, "par": ParRule,
    "one": OneRule, "bot": BotRule, "top": TopRule, "with": WithRule,
    "plusl": PlusLeftRule, "plusr": PlusRightRule,
    "der": DerelictionRule, "prom": PromotionRule,
    "ctr": ContractionRule, "wk": WeakeningRule,
}


def proof_from_sexpr(text: str) -> Proof:
    tokens = list(_sexpr_tokens(text))
    tree, end = _parse_sexpr(tokens, 0)
    if end != len(tokens):
        raise ProofError("trailing content after proof expression")
    return _proof_from_tree(tree)


def _unquote(tok) -> str:
    if not isinstance(tok, str) or not tok.startswith('"'):
        raise ProofError(f"expected a quoted string, found {tok!r}")
    return tok[1:-1]


def _proof_from_tree(tree) -> Proof:
    if not tree:
        raise ProofError("empty proof node")
    name = tree[0]
    if name not in _RULES_BY_NAME:
        raise ProofError(f"unknown rule name {name!r}")
    concl = parse_sequent(_unquote(tree[1]))
    concl = Sequent(nnf(f) for f in concl)
    rest = tree[2:]
    if name in ("ax", "one"):
        rule: Rule = _RULES_BY_NAME[name]()
        principal = tuple(range(len(concl)))
        args = rest
    elif name == "top":
        rule = TopRule()
        principal = (int(rest[0]),)
        args = rest[1:]
    elif name == "cut":
        rule = CutRule(nnf(parse_formula(_unquote(rest[0]))))
        principal = ()
        args = rest[1:]
    elif name == "tensor":
        principal = (int(rest[0]),)
        split = rest[1]
        if not isinstance(split, list) or not split or split[0] != "left":
            raise ProofError("tensor node needs a (left ...) split")
        rule = TensorRule(tuple(int(x) for x in split[1:]))
        args = rest[2:]
    else:
        rule = _RULES_BY_NAME[name]()
        principal = (int(rest[0]),)
        args = rest[1:]
    premises = tuple(_proof_from_tree(sub) for sub in args)
    return Proof(concl, rule, principal, premises)


def write_proof(path: str, p: Proof) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(proof_to_sexpr(p) + "\n")


def read_proof(path: str) -> Proof:
    with open(path, encoding="utf-8") as fh:
        return proof_from_sexpr(fh.read())


# ---------------------------------------------------------------------------
# two-dimensional pretty printing

def pretty_proof(p: Proof) -> str:
    lines, _ = _layout(p)
    return "\n".join(line.rstrip() for line in lines)


def _layout(p: Proof) -> tuple[list[str], int]:
    concl = render_sequent(p.conclusion)
    label = f" {p.rule.name}"
    if not p.premises:
        rule_width = max(len(concl), 2)
        lines = ["-" * rule_width + label, concl.center(rule_width)]
    else:
        blocks = [_layout(q) for q in p.premises]
        h = max(len(lines) for lines, _ in blocks)
        padded = []
        for lines, w in blocks:
            pad = [" " * w] * (h - len(lines))
            padded.append(([line.ljust(w) for line in pad + lines], w))
        gap = "   "
        top_width = sum(w for _, w in padded) + len(gap) * (len(padded) - 1)
        rule_width = max(top_width, len(concl))
        lines = [gap.join(ls[row] for ls, _ in padded).center(rule_width) for row in range(h)]
        lines.append("-" * rule_width + label)
        lines.append(concl.center(rule_width))
    width = max(len(line) for line in lines)
    return [line.ljust(width) for line in lines], width
