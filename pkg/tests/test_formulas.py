import pytest
from hypothesis import given, settings, strategies as st

from linlog.formulas import (
    Atom, DualAtom, Dual, Tensor, Par, With, Plus, OfCourse, WhyNot,
    ONE, BOT, ZERO, TOP,
    FormulaSyntaxError, Sequent,
    parse_formula, parse_sequent, render_formula, render_sequent,
    nnf, dual, size, polarity, is_nnf,
)

a, b, c = Atom("a"), Atom("b"), Atom("c")
na, nb, nc = DualAtom("a"), DualAtom("b"), DualAtom("c")


def test_parse_basic():
    assert parse_formula("a * b") == Tensor(a, b)
    assert parse_formula("(a * b)^") == Dual(Tensor(a, b))
    assert parse_formula("a -o b") == Par(na, b)
    assert parse_formula("a @ b") == Par(a, b)
    assert parse_formula("a & b") == With(a, b)
    assert parse_formula("a + b") == Plus(a, b)
    assert parse_formula("!a") == OfCourse(a)
    assert parse_formula("?a^") == WhyNot(na)
    assert parse_formula("(!a)^") == Dual(OfCourse(a))
    assert parse_formula("1") == ONE
    assert parse_formula("bot") == BOT
    assert parse_formula("0") == ZERO
    assert parse_formula("top") == TOP


def test_parse_chains_left_assoc():
    assert parse_formula("a * b * c") == Tensor(Tensor(a, b), c)
    assert parse_formula("a @ (b @ c)") == Par(a, Par(b, c))


def test_parse_lolli_right_assoc():
    assert parse_formula("a -o b -o c") == Par(na, Par(nb, c))
    assert parse_formula("(a * b) -o c") == Par(Dual(Tensor(a, b)), c)


def test_mixed_connectives_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a * b @ c")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a & b + c")


def test_parse_errors_have_positions():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("a * ")
    assert e.value.pos == 4
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a b")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(a * b")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("A")


def test_nnf_de_morgan_table():
    # the rewrite table for ^ on each connective and unit
    assert nnf(parse_formula("(a * b)^")) == Par(na, nb)
    assert nnf(parse_formula("(a @ b)^")) == Tensor(na, nb)
    assert nnf(parse_formula("(a & b)^")) == Plus(na, nb)
    assert nnf(parse_formula("(a + b)^")) == With(na, nb)
    assert nnf(parse_formula("1^")) == BOT
    assert nnf(parse_formula("bot^")) == ONE
    assert nnf(parse_formula("top^")) == ZERO
    assert nnf(parse_formula("0^")) == TOP
    assert nnf(parse_formula("(!a)^")) == WhyNot(na)
    assert nnf(parse_formula("(?a)^")) == OfCourse(na)
    # involution A = A^^
    assert nnf(parse_formula("((a^))^")) == a
    assert nnf(parse_formula("((a * b)^)^")) == Tensor(a, b)


def test_dual_examples():
    assert dual(ONE) == BOT
    assert dual(TOP) == ZERO
    assert dual(With(a, TOP)) == Plus(na, ZERO)
    with pytest.raises(Exception):
        dual(Dual(a))


def test_size():
    assert size(a) == 1
    assert size(parse_formula("a @ a^")) == 3
    assert size(parse_formula("a * (b + c)")) == 5


def test_polarity():
    assert polarity(Tensor(a, b)) == "positive"
    assert polarity(With(a, b)) == "negative"
    assert polarity(a) == "atomic"
    assert polarity(na) == "atomic"
    assert polarity(ONE) == "positive"
    assert polarity(ZERO) == "positive"
    assert polarity(BOT) == "negative"
    assert polarity(TOP) == "negative"
    assert polarity(OfCourse(a)) == "positive"
    assert polarity(WhyNot(a)) == "negative"


def test_sequent_multiset_semantics():
    s1 = parse_sequent("|- a, b, a")
    s2 = parse_sequent("|- b, a, a")
    s3 = parse_sequent("|- a, b")
    assert s1 == s2
    assert s1 != s3
    assert s1.count(a) == 2
    assert s1.remove(a) == parse_sequent("|- a, b")
    assert parse_sequent("|-") == Sequent([])


# ---------------------------------------------------------------------------
# randomized properties

_LEAVES = [Atom("a"), Atom("b"), DualAtom("a"), DualAtom("b"), ONE, BOT, ZERO, TOP]


def formula_strategy(max_depth: int = 5, exponentials: bool = True, duals: bool = True):
    leaf = st.sampled_from(_LEAVES)

    def extend(children):
        opts = [
            st.builds(Tensor, children, children),
            st.builds(Par, children, children),
            st.builds(With, children, children),
            st.builds(Plus, children, children),
        ]
        if exponentials:
            opts += [st.builds(OfCourse, children), st.builds(WhyNot, children)]
        if duals:
            opts.append(st.builds(Dual, children))
        return st.one_of(*opts)

    return st.recursive(leaf, extend, max_leaves=max_depth)


@settings(max_examples=300, deadline=None)
@given(formula_strategy())
def test_nnf_idempotent(f):
    g = nnf(f)
    assert is_nnf(g)
    assert nnf(g) == g


@settings(max_examples=300, deadline=None)
@given(formula_strategy())
def test_nnf_double_dual(f):
    assert nnf(Dual(Dual(f))) == nnf(f)


@settings(max_examples=300, deadline=None)
@given(formula_strategy(duals=False))
def test_dual_involution(f):
    g = nnf(f)
    assert dual(dual(g)) == g


@settings(max_examples=300, deadline=None)
@given(formula_strategy())
def test_render_parse_roundtrip(f):
    # identity up to NNF-irrelevant structure (Dual(Atom) reads back as a literal)
    assert nnf(parse_formula(render_formula(f))) == nnf(f)
    g = nnf(f)
    assert parse_formula(render_formula(g)) == g


@settings(max_examples=200, deadline=None)
@given(formula_strategy())
def test_dual_preserves_family(f):
    # the dual of a multiplicative top connective is multiplicative,
    # of an additive one additive
    g = nnf(f)
    d = dual(g)
    mult = (Tensor, Par, type(ONE), type(BOT))
    add = (With, Plus, type(ZERO), type(TOP))
    if isinstance(g, mult):
        assert isinstance(d, mult)
    if isinstance(g, add):
        assert isinstance(d, add)


@settings(max_examples=200, deadline=None)
@given(formula_strategy(duals=False))
def test_size_strictly_monotone(f):
    g = nnf(f)

    def subformulas(x):
        if hasattr(x, "left"):
            yield x.left
            yield x.right
        elif hasattr(x, "body"):
            yield x.body

    for sub in subformulas(g):
        assert size(sub) < size(g)


@settings(max_examples=200, deadline=None)
@given(st.lists(formula_strategy(duals=False), max_size=5))
def test_sequent_roundtrip(fs):
    s = Sequent(nnf(f) for f in fs)
    assert parse_sequent(render_sequent(s)) == s
