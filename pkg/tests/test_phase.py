import itertools
import random

import pytest

from linlog.formulas import parse_formula, parse_sequent, nnf, nnf_sequent, Sequent
from linlog.phase import (
    PhaseError, PhaseMonoid, PhaseModel,
    orth, biorth, product, fact_par, fact_with, interp_formula, is_valid,
    check_topolinear, cyclic_monoid, truncated_monoid, product_monoid,
    random_model, render_model, parse_model, _closed_family,
)


def small_model():
    monoid = cyclic_monoid(3)
    model = PhaseModel(monoid, frozenset({0}))
    a = orth(model, frozenset({1}))
    return PhaseModel(monoid, frozenset({0}), {"a": a, "b": orth(model, frozenset({1, 2}))})


def test_monoid_laws_validated():
    with pytest.raises(PhaseError):
        # commutative and unital but (1.1).2 = 2 while 1.(1.2) = 1
        PhaseMonoid(3, ((0, 1, 2), (1, 2, 0), (2, 0, 2)), 0)
    with pytest.raises(PhaseError):
        PhaseMonoid(2, ((0, 1), (0, 0)), 0)  # not commutative


def test_orth_basics():
    m = small_model()
    everything = frozenset(range(3))
    assert orth(m, frozenset()) == everything
    assert orth(m, frozenset({m.monoid.unit})) == m.antiphases
    rng = random.Random(1)
    for _ in range(50):
        xs = frozenset(i for i in range(3) if rng.random() < 0.5)
        assert orth(m, orth(m, orth(m, xs))) == orth(m, xs)
        assert xs <= biorth(m, xs)


def test_orth_antitone():
    rng = random.Random(2)
    for _ in range(30):
        m = random_model(rng)
        n = m.monoid.size
        xs = frozenset(i for i in range(n) if rng.random() < 0.5)
        ys = xs | frozenset(i for i in range(n) if rng.random() < 0.3)
        assert orth(m, ys) <= orth(m, xs)


def test_interp_units():
    m = small_model()
    assert interp_formula(m, parse_formula("bot")) == m.antiphases
    assert interp_formula(m, parse_formula("top")) == m.everything
    assert interp_formula(m, parse_formula("1")) == orth(m, m.antiphases)
    wa = interp_formula(m, parse_formula("a & b"))
    assert wa == m.atom_interp["a"] & m.atom_interp["b"]


def test_validity_examples():
    rng = random.Random(3)
    for _ in range(25):
        m = random_model(rng)
        assert is_valid(m, parse_sequent("|- a, a^"))
    # |- bot is valid exactly when the unit is an antiphase
    yes = PhaseModel(cyclic_monoid(2), frozenset({0, 1}))
    no = PhaseModel(cyclic_monoid(2), frozenset({1}))
    assert is_valid(yes, parse_sequent("|- bot"))
    assert not is_valid(no, parse_sequent("|- bot"))


def test_validity_iff_inclusion():
    # |- A, B valid iff interp(A^) is included in interp(B)
    rng = random.Random(4)
    formulas = ["a", "a^", "b", "a * b", "a @ b", "a & b", "a + b", "1", "bot", "top", "0"]
    for _ in range(40):
        m = random_model(rng)
        fa = nnf(parse_formula(rng.choice(formulas)))
        fb = nnf(parse_formula(rng.choice(formulas)))
        from linlog.formulas import dual
        lhs = is_valid(m, Sequent([fa, fb]))
        rhs = interp_formula(m, dual(fa)) <= interp_formula(m, fb)
        assert lhs == rhs, (fa, fb)


def test_biorth_product_inclusion():
    # X^^ Y^^ is included in (XY)^^
    rng = random.Random(5)
    for _ in range(300):
        m = random_model(rng)
        n = m.monoid.size
        xs = frozenset(i for i in range(n) if rng.random() < 0.5)
        ys = frozenset(i for i in range(n) if rng.random() < 0.5)
        lhs = product(m, biorth(m, xs), biorth(m, ys))
        assert lhs <= biorth(m, product(m, xs, ys))


def test_fact_distributivity():
    # F par (G with H) = (F par G) with (F par H) for facts
    rng = random.Random(6)
    for _ in range(200):
        m = random_model(rng)
        n = m.monoid.size
        f, g, h = (
            orth(m, frozenset(i for i in range(n) if rng.random() < 0.5))
            for _ in range(3)
        )
        lhs = fact_par(m, f, fact_with(m, g, h))
        rhs = fact_with(m, fact_par(m, f, g), fact_par(m, f, h))
        assert lhs == rhs


def test_topolinear_degenerate():
    monoid = cyclic_monoid(1)
    model = PhaseModel(monoid, frozenset({0}), {},
                       (frozenset({0}),))  # the only fact
    assert check_topolinear(model).ok


def test_topolinear_bot_alone():
    monoid = cyclic_monoid(1)
    model = PhaseModel(monoid, frozenset({0}), {}, (frozenset({0}),))
    # bot par bot = bot here, so the single-member family passes
    assert fact_par(model, model.antiphases, model.antiphases) == model.antiphases
    assert check_topolinear(model).ok


def test_topolinear_missing_bot_fails():
    monoid = cyclic_monoid(2)
    base = PhaseModel(monoid, frozenset({0}))
    everything = frozenset({0, 1})
    model = PhaseModel(monoid, frozenset({0}), {}, (everything,))
    report = check_topolinear(model)
    assert not report.ok
    assert any("(2)" in v or "(3)" in v for v in report.violations)


def test_closed_family_generator():
    rng = random.Random(7)
    found = 0
    for _ in range(40):
        m = random_model(rng, with_exponentials=True)
        assert check_topolinear(m).ok
        found += 1
    assert found == 40


def test_exponential_interpretation_soundness_on_fixtures():
    from linlog.fixtures import all_fixtures
    from linlog.proofs import conclusion
    rng = random.Random(8)
    models = [random_model(rng, with_exponentials=True) for _ in range(10)]
    for name, proof in all_fixtures().items():
        s = conclusion(proof)
        for m in models:
            if any(a not in m.atom_interp for a in _atoms_of(s)):
                continue
            assert is_valid(m, s), (name, render_model(m))


def _atoms_of(s):
    from linlog.formulas import atoms_of
    out = set()
    for f in s:
        out |= atoms_of(f)
    return out


def test_prop52_soundness_on_prover_corpus():
    from linlog.prover import prove_mall, NOT_PROVABLE, SearchLimits
    rng = random.Random(9)
    models = [random_model(rng) for _ in range(20)]
    memo = {}
    texts = [
        "|- a @ a^", "|- 1", "|- bot, 1", "|- top, 0",
        "|- (a * (b + c))^, (a * b) + (a * c)",
        "|- (a & b)^, a & b", "|- a^ @ (a * 1)",
    ]
    for text in texts:
        s = nnf_sequent(parse_sequent(text))
        p = prove_mall(s, SearchLimits(), memo)
        assert p is not NOT_PROVABLE
        for m in models:
            interp = dict(m.atom_interp)
            me = PhaseModel(m.monoid, m.antiphases,
                            {**interp, "c": interp.get("c", orth(m, frozenset({0})))})
            assert is_valid(me, s), (text, render_model(me))


def test_model_file_roundtrip():
    rng = random.Random(10)
    for _ in range(10):
        m = random_model(rng, with_exponentials=rng.random() < 0.5)
        text = render_model(m)
        back = parse_model(text)
        assert back.monoid.table == m.monoid.table
        assert back.antiphases == m.antiphases
        assert back.atom_interp == m.atom_interp
        assert back.closed_facts == m.closed_facts


def test_parse_model_errors():
    with pytest.raises(PhaseError):
        parse_model("elements: x y\nunit: x\n")
    with pytest.raises(PhaseError):
        parse_model("nonsense")
