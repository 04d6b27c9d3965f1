import random

import pytest

from linlog.formulas import parse_formula, parse_sequent, nnf
from linlog.proofs import check_proof, conclusion, count_cuts
from linlog.cutelim import normalize
from linlog.lam import (
    Var, Abs, App, TAtom, Arrow, TypeError_,
    parse_term, parse_type, render_term, render_type,
    free_vars, term_size, is_affine, beta_normalize, church,
    typecheck, star_type, translate, translated_sequent,
)


def test_parse_term():
    assert parse_term("x") == Var("x")
    assert parse_term("\\x. x") == Abs("x", Var("x"))
    assert parse_term("\\f x. f x") == Abs("f", Abs("x", App(Var("f"), Var("x"))))
    assert parse_term("(\\x. x) y") == App(Abs("x", Var("x")), Var("y"))
    t = parse_term("\\x. x (\\y. y x)")
    assert render_term(t) == "\\x. x (\\y. y x)"


def test_parser_freshens_binders():
    t = parse_term("(\\x. x) x")
    assert isinstance(t, App)
    assert t.fun.var != "x"  # bound x renamed apart from the free one
    assert free_vars(t) == {"x"}


def test_is_affine():
    assert is_affine(parse_term("\\x. x"))
    assert not is_affine(parse_term("\\x. x x"))
    assert is_affine(parse_term("\\f x. f x"))
    assert is_affine(parse_term("(\\x. x) x"))  # disjoint free variables


def test_beta_identity():
    t, steps, done = beta_normalize(parse_term("(\\x. x) y"))
    assert done and steps == 1 and t == Var("y")


def test_normal_form_zero_steps():
    t, steps, done = beta_normalize(parse_term("\\x. x"))
    assert done and steps == 0


def test_church_two_two():
    # underline(2) underline(2) evaluates to four applications of f
    from linlog.lam import alpha_eq
    t, steps, done = beta_normalize(App(church(2), church(2)))
    assert done
    assert alpha_eq(t, church(4))
    assert steps == 6  # frozen from running the interpreter


def test_affine_terms_shrink_every_step():
    rng = random.Random(5)
    for _ in range(200):
        t = _random_affine(rng, rng.randrange(1, 40))
        n0 = term_size(t)
        steps = 0
        while True:
            from linlog.lam import reduce_once
            r = reduce_once(t)
            if r is None:
                break
            assert term_size(r) < term_size(t)
            t = r
            steps += 1
        assert steps <= n0


def _random_affine(rng, budget, free=()):  # builds affine terms using each var at most once
    free = list(free)
    if budget <= 1:
        if free and rng.random() < 0.8:
            return Var(rng.choice(free))
        return Var(f"g{rng.randrange(3)}")
    if rng.random() < 0.5:
        v = f"v{rng.randrange(10**6)}"
        return Abs(v, _random_affine(rng, budget - 1, free + [v]))
    rng.shuffle(free)
    cut_point = rng.randrange(len(free) + 1)
    left = _random_affine(rng, max(1, (budget - 1) // 2), free[:cut_point])
    right = _random_affine(rng, max(1, budget - 1 - term_size(left)), free[cut_point:])
    return App(left, right)


def test_typecheck_examples():
    a, b = TAtom("a"), TAtom("b")
    d = typecheck({}, parse_term("\\x. x"), Arrow(a, a))
    assert d.type == Arrow(a, a)
    d = typecheck({}, parse_term("\\f x. f x"), Arrow(Arrow(a, b), Arrow(a, b)))
    assert d.kind == "abstraction"
    with pytest.raises(TypeError_):
        typecheck({}, parse_term("\\x. x"), Arrow(a, b))
    with pytest.raises(TypeError_):
        typecheck({}, parse_term("\\x. x x"), Arrow(a, b))
    with pytest.raises(TypeError_):
        typecheck({}, parse_term("y"), a)


def test_parse_type():
    assert parse_type("a -> b") == Arrow(TAtom("a"), TAtom("b"))
    assert parse_type("(a -> b) -> a -> b") == Arrow(
        Arrow(TAtom("a"), TAtom("b")), Arrow(TAtom("a"), TAtom("b"))
    )
    assert render_type(parse_type("(a -> a) -> a")) == "(a -> a) -> a"


def test_star_type():
    assert star_type(TAtom("a")) == parse_formula("a")
    assert star_type(parse_type("a -> b")) == nnf(parse_formula("?(a^) @ b"))
    got = star_type(parse_type("(a -> a) -> a"))
    assert got == nnf(parse_formula("?((!a) * a^) @ a"))


def test_translate_variable_case():
    a = TAtom("a")
    d = typecheck({"x": a}, parse_term("x"), a)
    p = translate(d)
    assert check_proof(p).ok
    assert conclusion(p) == parse_sequent("|- ?(a^), a")


def test_translate_identity():
    a = TAtom("a")
    d = typecheck({}, parse_term("\\x. x"), Arrow(a, a))
    p = translate(d)
    assert check_proof(p).ok
    assert conclusion(p) == parse_sequent("|- ?(a^) @ a")


def test_translate_redex_then_normalize():
    a = TAtom("a")
    d = typecheck({"x": a}, parse_term("(\\y. y) x"), a)
    p = translate(d)
    assert check_proof(p).ok
    assert count_cuts(p) >= 1
    assert conclusion(p) == translated_sequent(d) == parse_sequent("|- ?(a^), a")
    q, stats = normalize(p)
    assert stats.final_cut_count == 0
    assert conclusion(q) == conclusion(p)
    assert check_proof(q).ok


def test_translation_conclusion_matches_star():
    rng = random.Random(17)
    a = TAtom("a")
    cases = [
        ({}, "\\f x. f x", "(a -> a) -> a -> a"),
        ({"y": parse_type("a")}, "\\f. f y", "(a -> a) -> a"),
        ({}, "\\f g x. f (g x)", "(a -> a) -> (a -> a) -> a -> a"),
        ({"x": parse_type("a"), "z": parse_type("a -> a")}, "z x", "a"),
    ]
    for ctx, term, ty in cases:
        d = typecheck(ctx, parse_term(term), parse_type(ty))
        p = translate(d)
        assert check_proof(p).ok, (term, check_proof(p))
        assert conclusion(p) == translated_sequent(d)
