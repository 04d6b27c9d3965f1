"""Formula trees, parsing/printing, De Morgan dualization, size and polarity.

Formulas are immutable trees over named atoms.  The canonical working form
is negation normal form (NNF): ``Dual`` nodes may appear in freshly parsed
formulas but every other part of the package expects them to be eliminated
with :func:`nnf` first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    """Raised on malformed formula/sequent text; carries a position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return render_formula(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {render_formula(self)}>"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class DualAtom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Dual(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Par(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class With(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Plus(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class OfCourse(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class WhyNot(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class One(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Zero(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


ONE = One()
BOT = Bot()
ZERO = Zero()
TOP = Top()

BINARY = (Tensor, Par, With, Plus)
_BINOP = {Tensor: "*", Par: "@", With: "&", Plus: "+"}
_OP_CLASS = {"*": Tensor, "@": Par, "&": With, "+": Plus}

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")
_RESERVED = {"bot", "top"}


# ---------------------------------------------------------------------------
# printing

_render_cache: dict[Formula, str] = {}


def render_formula(f: Formula) -> str:
    """Render to the ASCII grammar; parses back to the same tree."""
    s = _render_cache.get(f)
    if s is None:
        s = _render(f)
        _render_cache[f] = s
    return s


def _render(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case DualAtom(name):
            return name + "^"
        case Dual(body):
            inner = render_formula(body)
            if isinstance(body, (BINARY, OfCourse, WhyNot, Dual, DualAtom)):
                inner = f"({inner})"
            return inner + "^"
        case OfCourse(body):
            return "!" + _render_under_modal(body)
        case WhyNot(body):
            return "?" + _render_under_modal(body)
        case One():
            return "1"
        case Bot():
            return "bot"
        case Zero():
            return "0"
        case Top():
            return "top"
        case _:
            op = _BINOP[type(f)]
            lhs = render_formula(f.left)
            if isinstance(f.left, BINARY) and type(f.left) is not type(f):
                lhs = f"({lhs})"
            rhs = render_formula(f.right)
            # right-nested same-connective needs parens: chains parse left-assoc
            if isinstance(f.right, BINARY):
                rhs = f"({rhs})"
            return f"{lhs} {op} {rhs}"


def _render_under_modal(body: Formula) -> str:
    inner = render_formula(body)
    if isinstance(body, BINARY):
        inner = f"({inner})"
    return inner


def formula_key(f: Formula) -> str:
    """Canonical total order on formulas (used to address multisets)."""
    return render_formula(f)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[a-z][a-z0-9_]*)|(?P<lolli>-o)|(?P<sym>[*@&+^!?(),]|\|-|1|0))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        if m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        elif m.group("lolli"):
            tokens.append(("-o", "-o", m.start("lolli")))
        else:
            tokens.append((m.group("sym"), m.group("sym"), m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    # formula := chain ('-o' formula)?   (linear implication, right-assoc)
    def formula(self) -> Formula:
        lhs = self.chain()
        if self.peek()[0] == "-o":
            self.next()
            rhs = self.formula()
            return Par(_syntactic_dual(lhs), rhs)
        return lhs

    # chain := unary (op unary)*  with a single connective per chain
    def chain(self) -> Formula:
        first = self.unary()
        kind, _, pos = self.peek()
        if kind not in _OP_CLASS:
            return first
        op = kind
        cls = _OP_CLASS[op]
        acc = first
        while self.peek()[0] in _OP_CLASS:
            k2, _, p2 = self.next()
            if k2 != op:
                raise FormulaSyntaxError(
                    f"mixing {op!r} and {k2!r} needs explicit parentheses", p2
                )
            acc = cls(acc, self.unary())
        return acc

    def unary(self) -> Formula:
        kind, _, pos = self.peek()
        if kind == "!":
            self.next()
            return OfCourse(self.unary())
        if kind == "?":
            self.next()
            return WhyNot(self.unary())
        return self.postfix()

    def postfix(self) -> Formula:
        f = self.atomic()
        while self.peek()[0] == "^":
            self.next()
            if isinstance(f, Atom):
                f = DualAtom(f.name)
            else:
                f = Dual(f)
        return f

    def atomic(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "name":
            if value == "bot":
                return BOT
            if value == "top":
                return TOP
            return Atom(value)
        if kind == "1":
            return ONE
        if kind == "0":
            return ZERO
        if kind == "(":
            f = self.formula()
            self.expect(")")
            return f
        raise FormulaSyntaxError(f"expected a formula, found {value or 'end of input'!r}", pos)


def _syntactic_dual(f: Formula) -> Formula:
    # the `A -o B` sugar stands for `A^ @ B`
    if isinstance(f, Atom):
        return DualAtom(f.name)
    return Dual(f)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"trailing input {value!r}", pos)
    return f


# ---------------------------------------------------------------------------
# negation normal form

def nnf(f: Formula) -> Formula:
    match f:
        case Atom() | DualAtom() | One() | Bot() | Zero() | Top():
            return f
        case Dual(body):
            return _nnf_neg(body)
        case Tensor(l, r):
            return Tensor(nnf(l), nnf(r))
        case Par(l, r):
            return Par(nnf(l), nnf(r))
        case With(l, r):
            return With(nnf(l), nnf(r))
        case Plus(l, r):
            return Plus(nnf(l), nnf(r))
        case OfCourse(body):
            return OfCourse(nnf(body))
        case WhyNot(body):
            return WhyNot(nnf(body))
    raise FormulaError(f"not a formula: {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    match f:
        case Atom(name):
            return DualAtom(name)
        case DualAtom(name):
            return Atom(name)
        case Dual(body):
            return nnf(body)
        case Tensor(l, r):
            return Par(_nnf_neg(l), _nnf_neg(r))
        case Par(l, r):
            return Tensor(_nnf_neg(l), _nnf_neg(r))
        case With(l, r):
            return Plus(_nnf_neg(l), _nnf_neg(r))
        case Plus(l, r):
            return With(_nnf_neg(l), _nnf_neg(r))
        case OfCourse(body):
            return WhyNot(_nnf_neg(body))
        case WhyNot(body):
            return OfCourse(_nnf_neg(body))
        case One():
            return BOT
        case Bot():
            return ONE
        case Zero():
            return TOP
        case Top():
            return ZERO
    raise FormulaError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    match f:
        case Dual(_):
            return False
        case Atom() | DualAtom() | One() | Bot() | Zero() | Top():
            return True
        case OfCourse(body) | WhyNot(body):
            return is_nnf(body)
        case _:
            return is_nnf(f.left) and is_nnf(f.right)


def dual(f: Formula) -> Formula:
    """De Morgan dual of an NNF formula; an involution."""
    if not is_nnf(f):
        raise FormulaError(f"dual() expects an NNF formula, got {f}")
    return _nnf_neg(f)


def size(f: Formula) -> int:
    """Node count: connectives, literals and units all weigh 1."""
    match f:
        case Atom() | DualAtom() | One() | Bot() | Zero() | Top():
            return 1
        case OfCourse(body) | WhyNot(body) | Dual(body):
            return 1 + size(body)
        case _:
            return 1 + size(f.left) + size(f.right)


POSITIVE = "positive"
NEGATIVE = "negative"
ATOMIC = "atomic"


def polarity(f: Formula) -> str:
    """Polarity of the top connective: tensor/plus/1/0/! are positive,
    par/with/bot/top/? are negative, literals are atomic."""
    match f:
        case Atom() | DualAtom():
            return ATOMIC
        case Tensor() | Plus() | One() | Zero() | OfCourse():
            return POSITIVE
        case Par() | With() | Bot() | Top() | WhyNot():
            return NEGATIVE
    raise FormulaError(f"polarity of non-NNF node {f!r}")


def atoms_of(f: Formula) -> set[str]:
    match f:
        case Atom(name) | DualAtom(name):
            return {name}
        case One() | Bot() | Zero() | Top():
            return set()
        case OfCourse(body) | WhyNot(body) | Dual(body):
            return atoms_of(body)
        case _:
            return atoms_of(f.left) | atoms_of(f.right)


def has_exponentials(f: Formula) -> bool:
    match f:
        case OfCourse(_) | WhyNot(_):
            return True
        case Dual(body):
            return has_exponentials(body)
        case Tensor(l, r) | Par(l, r) | With(l, r) | Plus(l, r):
            return has_exponentials(l) or has_exponentials(r)
        case _:
            return False


# ---------------------------------------------------------------------------
# sequents

class Sequent:
    """Finite multiset of formulas, stored in a canonical order.

    Equality ignores the order formulas were supplied in and respects
    multiplicity.  Positions reported elsewhere (principal indices, tensor
    splits) refer to the canonical order of ``formulas``.
    """

    __slots__ = ("formulas",)

    def __init__(self, formulas: Iterable[Formula]):
        object.__setattr__(
            self, "formulas", tuple(sorted(formulas, key=formula_key))
        )

    def __setattr__(self, name, value):
        raise AttributeError("Sequent is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Sequent) and self.formulas == other.formulas

    def __hash__(self) -> int:
        return hash(self.formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __getitem__(self, i: int) -> Formula:
        return self.formulas[i]

    def __str__(self) -> str:
        return render_sequent(self)

    def __repr__(self) -> str:
        return f"<Sequent {render_sequent(self)}>"

    def total_size(self) -> int:
        return sum(size(f) for f in self.formulas)

    def count(self, f: Formula) -> int:
        return self.formulas.count(f)

    def index(self, f: Formula) -> int:
        return self.formulas.index(f)

    def without_index(self, *indices: int) -> "Sequent":
        drop = set(indices)
        return Sequent(f for i, f in enumerate(self.formulas) if i not in drop)

    def remove(self, f: Formula) -> "Sequent":
        """Multiset difference by one occurrence; raises if absent."""
        return self.without_index(self.index(f))

    def add(self, *fs: Formula) -> "Sequent":
        return Sequent(self.formulas + fs)

    def union(self, other: "Sequent") -> "Sequent":
        return Sequent(self.formulas + other.formulas)


def render_sequent(s: Sequent) -> str:
    return "|- " + ", ".join(render_formula(f) for f in s.formulas) if s.formulas else "|-"


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    p.expect("|-")
    formulas = []
    if p.peek()[0] != "end":
        formulas.append(p.formula())
        while p.peek()[0] == ",":
            p.next()
            formulas.append(p.formula())
    kind, value, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"trailing input {value!r}", pos)
    return Sequent(formulas)


def nnf_sequent(s: Sequent) -> Sequent:
    return Sequent(nnf(f) for f in s.formulas)
