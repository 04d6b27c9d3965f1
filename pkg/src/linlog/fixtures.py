"""Checked derivations used across the test suite and the demo corpus.

Each builder returns a Proof assembled with the smart constructors, so a
failing fixture is a bug in the builder, not in the checker.
"""

from __future__ import annotations

from .formulas import (
    Atom, DualAtom, Tensor, Par, With, Plus, OfCourse, WhyNot, Formula,
    Sequent, dual, parse_formula,
)
from . import proofs as pr
from .proofs import Proof


def distributivity_ltr() -> Proof:
    """|- a^ @ (b^ & c^), (a*b) + (a*c)   (tensor distributes over plus)."""
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    na, nb, nc = DualAtom("a"), DualAtom("b"), DualAtom("c")
    rhs = Plus(Tensor(a, b), Tensor(a, c))
    left_branch = pr.plus_left(pr.tensor(pr.ax(a), pr.ax(b), a, b), Tensor(a, b), Tensor(a, c))
    right_branch = pr.plus_right(pr.tensor(pr.ax(a), pr.ax(c), a, c), Tensor(a, b), Tensor(a, c))
    w = pr.with_(left_branch, right_branch, nb, nc)
    return pr.par(w, na, With(nb, nc))


def distributivity_rtl() -> Proof:
    """|- (a^ @ b^) & (a^ @ c^), a * (b + c)   (the converse direction)."""
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    na, nb, nc = DualAtom("a"), DualAtom("b"), DualAtom("c")
    bc = Plus(b, c)
    left = pr.par(pr.tensor(pr.ax(a), pr.plus_left(pr.ax(b), b, c), a, bc), na, nb)
    right = pr.par(pr.tensor(pr.ax(a), pr.plus_right(pr.ax(c), b, c), a, bc), na, nc)
    return pr.with_(left, right, Par(na, nb), Par(na, nc))


def reversibility_par() -> Proof:
    """From |- G, a@b recover |- G, a, b by cutting with a tensor of axioms."""
    a, b = Atom("a"), Atom("b")
    premise = pr.ax(Par(a, b))  # |- a@b, a^*b^   plays the role of |- G, a@b
    expander = pr.tensor(pr.ax(a), pr.ax(b), DualAtom("a"), DualAtom("b"))
    return pr.cut(premise, expander, Par(a, b))


def reversibility_with() -> Proof:
    """From |- a&b, G recover |- a, G by cutting with a plus over an axiom."""
    a, b = Atom("a"), Atom("b")
    premise = pr.ax(With(a, b))  # |- a&b, a^+b^
    selector = pr.plus_left(pr.ax(DualAtom("a")), DualAtom("a"), DualAtom("b"))
    return pr.cut(premise, selector, With(a, b))


def digging() -> Proof:
    """Derive |- ?a, G from |- ??a, G: cut against a promoted axiom."""
    a = Atom("a")
    qa = WhyNot(a)
    premise = pr.ax(WhyNot(qa))  # |- ??a, !!a^   plays the role of |- ??a, G
    boxed = pr.promotion(pr.ax(qa), OfCourse(DualAtom("a")))  # |- ?a, !!a^
    return pr.cut(premise, boxed, WhyNot(qa))


def bang_with_ltr() -> Proof:
    """|- ?a^ @ ?b^, !(a & b)   (one half of the exponential isomorphism)."""
    a, b = Atom("a"), Atom("b")
    na, nb = DualAtom("a"), DualAtom("b")
    left = pr.weakening(pr.dereliction(pr.ax(a), na), nb)
    right = pr.weakening(pr.dereliction(pr.ax(b), nb), na)
    w = pr.with_(left, right, a, b)
    boxed = pr.promotion(w, With(a, b))
    return pr.par(boxed, WhyNot(na), WhyNot(nb))


def bang_with_rtl() -> Proof:
    """|- ?(a^ + b^), !a * !b   (the other half, left to the reader)."""
    a, b = Atom("a"), Atom("b")
    na, nb = DualAtom("a"), DualAtom("b")
    sel = Plus(na, nb)
    left = pr.promotion(pr.dereliction(pr.plus_left(pr.ax(a), na, nb), sel), a)
    right = pr.promotion(pr.dereliction(pr.plus_right(pr.ax(b), na, nb), sel), b)
    t = pr.tensor(left, right, OfCourse(a), OfCourse(b))
    return pr.contraction(t, sel)


def _euro_bundle(n: int) -> Formula:
    """n euros as a left-nested tensor of unit coins."""
    e = Atom("e")
    f: Formula = e
    for _ in range(n - 1):
        f = Tensor(f, e)
    return f


def _prove_bundle(n: int) -> Proof:
    """|- e^n, e^ x n   by splitting one coin at a time."""
    if n == 1:
        return pr.ax(Atom("e"))
    return pr.tensor(_prove_bundle(n - 1), pr.ax(Atom("e")), _euro_bundle(n - 1), Atom("e"))


def lafont_menu() -> Proof:
    """The fixed-price menu, restated with every dish priced in euro coins.

    17 euros buy one entree (5), one dish (8) and one dessert (4); desserts
    offer an internal choice between two 4-euro sweets.
    """
    e5, e8, e4 = _euro_bundle(5), _euro_bundle(8), _euro_bundle(4)
    entree = With(e5, e5)
    main = With(e8, e8)
    dessert = With(e4, Plus(e4, e4))
    menu = Tensor(Tensor(entree, main), dessert)

    entree_proof = pr.with_(_prove_bundle(5), _prove_bundle(5), e5, e5)
    main_proof = pr.with_(_prove_bundle(8), _prove_bundle(8), e8, e8)
    sweet = pr.plus_right(_prove_bundle(4), e4, e4)
    dessert_proof = pr.with_(_prove_bundle(4), sweet, e4, Plus(e4, e4))

    body = pr.tensor(pr.tensor(entree_proof, main_proof, entree, main),
                     dessert_proof, Tensor(entree, main), dessert)
    # fold the 17 loose e^ coins into the dual of the 17-euro bundle
    acc = body
    ne = DualAtom("e")
    folded: Formula = ne
    for _ in range(16):
        acc = pr.par(acc, folded, ne)
        folded = Par(folded, ne)
    assert folded == dual(_euro_bundle(17))
    assert acc.conclusion == Sequent([dual(_euro_bundle(17)), menu])
    return acc


PAPER_FIXTURES: dict[str, object] = {
    "distributivity_ltr": distributivity_ltr,
    "distributivity_rtl": distributivity_rtl,
    "reversibility_par": reversibility_par,
    "reversibility_with": reversibility_with,
    "digging": digging,
    "bang_with_ltr": bang_with_ltr,
    "bang_with_rtl": bang_with_rtl,
    "lafont_menu": lafont_menu,
}


def all_fixtures() -> dict[str, Proof]:
    return {name: build() for name, build in PAPER_FIXTURES.items()}
