"""Affine and simply-typed lambda calculus, and its translation to proofs.

Terms reduce under the leftmost-outermost strategy.  Affine terms (no
variable used twice) shrink at every beta step, so their step count is
bounded by their initial size.

Typing uses plain simple types; :func:`typecheck` infers by unification
and then matches the requested type, producing a derivation whose three
node kinds (variable, abstraction, application) drive :func:`translate`:
a judgement ``G |- M : A`` becomes a proof of ``|- ?(G*)^, A*`` where
``(B -> C)* = ?(B*)^ @ C*``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .formulas import (
    Atom, Formula, OfCourse, Par, Tensor, WhyNot, Sequent, dual, nnf,
)
from . import proofs as pr
from .proofs import Proof


class LamError(ValueError):
    pass


class TypeError_(LamError):
    """Type checking failure; named to avoid clobbering the builtin."""


# ---------------------------------------------------------------------------
# terms

class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return render_term(self)

    def __repr__(self) -> str:
        return f"<Term {render_term(self)}>"


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str


@dataclass(frozen=True, repr=False)
class Abs(Term):
    var: str
    body: Term


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term


def render_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case Abs(var, body):
            return f"\\{var}. {render_term(body)}"
        case App(fun, arg):
            f = render_term(fun)
            if isinstance(fun, Abs):
                f = f"({f})"
            a = render_term(arg)
            if isinstance(arg, (Abs, App)):
                a = f"({a})"
            return f"{f} {a}"
    raise LamError(f"not a term: {t!r}")


_TERM_TOKEN = re.compile(r"\s*(?:(?P<name>[a-z][a-z0-9_']*)|(?P<sym>[\\().]))")


def _term_tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise LamError(f"unexpected character {text[pos:].lstrip()[0]!r} in term")
        out.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    out.append(("end", ""))
    return out


class _TermParser:
    def __init__(self, text: str):
        self.toks = _term_tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def term(self) -> Term:
        if self.peek() == ("sym", "\\"):
            self.next()
            names = []
            while self.peek()[0] == "name":
                names.append(self.next()[1])
            if not names:
                raise LamError("lambda needs at least one variable")
            if self.next() != ("sym", "."):
                raise LamError("lambda variables must end with '.'")
            body = self.term()
            for name in reversed(names):
                body = Abs(name, body)
            return body
        return self.application()

    def application(self) -> Term:
        t = self.atom()
        while self.peek()[0] == "name" or self.peek() == ("sym", "(") or self.peek() == ("sym", "\\"):
            if self.peek() == ("sym", "\\"):
                t = App(t, self.term())
                break
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        kind, value = self.next()
        if kind == "name":
            return Var(value)
        if (kind, value) == ("sym", "("):
            t = self.term()
            if self.next() != ("sym", ")"):
                raise LamError("missing ')' in term")
            return t
        raise LamError(f"expected a term, found {value or 'end of input'!r}")


def parse_term(text: str) -> Term:
    p = _TermParser(text)
    t = p.term()
    if p.peek()[0] != "end":
        raise LamError(f"trailing input {p.peek()[1]!r} in term")
    return freshen(t)


def freshen(t: Term) -> Term:
    """Rename binders so no name is bound twice or both bound and free."""
    used = set(free_vars(t))
    counter = itertools.count()

    def fresh(name: str) -> str:
        base = name
        while name in used:
            name = f"{base}_{next(counter)}"
        used.add(name)
        return name

    def go(t: Term, env: dict[str, str]) -> Term:
        match t:
            case Var(name):
                return Var(env.get(name, name))
            case Abs(var, body):
                new = fresh(var)
                return Abs(new, go(body, {**env, var: new}))
            case App(fun, arg):
                return App(go(fun, env), go(arg, env))
        raise LamError(f"not a term: {t!r}")

    return go(t, {})


def free_vars(t: Term) -> set[str]:
    match t:
        case Var(name):
            return {name}
        case Abs(var, body):
            return free_vars(body) - {var}
        case App(fun, arg):
            return free_vars(fun) | free_vars(arg)
    raise LamError(f"not a term: {t!r}")


def term_size(t: Term) -> int:
    match t:
        case Var(_):
            return 1
        case Abs(_, body):
            return 1 + term_size(body)
        case App(fun, arg):
            return 1 + term_size(fun) + term_size(arg)
    raise LamError(f"not a term: {t!r}")


def is_affine(t: Term) -> bool:
    """No variable occurs (as a use site) more than once."""
    counts: dict[str, int] = {}

    def count(t: Term) -> None:
        match t:
            case Var(name):
                counts[name] = counts.get(name, 0) + 1
            case Abs(_, body):
                count(body)
            case App(fun, arg):
                count(fun)
                count(arg)

    count(freshen(t))
    return all(n <= 1 for n in counts.values())


_subst_counter = itertools.count()


def substitute(t: Term, name: str, value: Term) -> Term:
    match t:
        case Var(n):
            return value if n == name else t
        case App(fun, arg):
            return App(substitute(fun, name, value), substitute(arg, name, value))
        case Abs(var, body):
            if var == name:
                return t
            if var in free_vars(value):
                new = f"{var}_{next(_subst_counter)}"
                body = substitute(body, var, Var(new))
                var = new
            return Abs(var, substitute(body, name, value))
    raise LamError(f"not a term: {t!r}")


def reduce_once(t: Term) -> Term | None:
    """Contract the leftmost-outermost beta redex, or None in normal form."""
    match t:
        case App(Abs(var, body), arg):
            return substitute(body, var, arg)
        case App(fun, arg):
            r = reduce_once(fun)
            if r is not None:
                return App(r, arg)
            r = reduce_once(arg)
            return App(fun, r) if r is not None else None
        case Abs(var, body):
            r = reduce_once(body)
            return Abs(var, r) if r is not None else None
        case Var(_):
            return None
    raise LamError(f"not a term: {t!r}")


def beta_normalize(t: Term, fuel: int = 10_000) -> tuple[Term, int, bool]:
    """Reduce to normal form; returns (term, steps, completed)."""
    steps = 0
    while steps < fuel:
        r = reduce_once(t)
        if r is None:
            return t, steps, True
        t = r
        steps += 1
    return t, steps, False


def church(n: int) -> Term:
    """The numeral \\f x. f^n(x)."""
    body: Term = Var("x")
    for _ in range(n):
        body = App(Var("f"), body)
    return Abs("f", Abs("x", body))


def alpha_eq(t1: Term, t2: Term) -> bool:
    def go(t1: Term, t2: Term, env1: dict[str, int], env2: dict[str, int], depth: int) -> bool:
        match t1, t2:
            case Var(n1), Var(n2):
                return env1.get(n1, n1) == env2.get(n2, n2)
            case Abs(v1, b1), Abs(v2, b2):
                return go(b1, b2, {**env1, v1: depth}, {**env2, v2: depth}, depth + 1)
            case App(f1, a1), App(f2, a2):
                return go(f1, f2, env1, env2, depth) and go(a1, a2, env1, env2, depth)
        return False

    return go(t1, t2, {}, {}, 0)


# ---------------------------------------------------------------------------
# simple types

class SimpleType:
    __slots__ = ()

    def __str__(self) -> str:
        return render_type(self)

    def __repr__(self) -> str:
        return f"<SimpleType {render_type(self)}>"


@dataclass(frozen=True, repr=False)
class TAtom(SimpleType):
    name: str


@dataclass(frozen=True, repr=False)
class Arrow(SimpleType):
    dom: SimpleType
    cod: SimpleType


@dataclass(frozen=True, repr=False)
class TVar(SimpleType):
    """Unification variable; never appears in a finished derivation."""
    index: int


def render_type(ty: SimpleType) -> str:
    match ty:
        case TAtom(name):
            return name
        case TVar(i):
            return f"'{i}"
        case Arrow(dom, cod):
            d = render_type(dom)
            if isinstance(dom, Arrow):
                d = f"({d})"
            return f"{d} -> {render_type(cod)}"
    raise LamError(f"not a type: {ty!r}")


def parse_type(text: str) -> SimpleType:
    toks = re.findall(r"[a-z][a-z0-9_]*|->|[()]", text)
    if re.sub(r"\s+", "", text) != "".join(toks):
        raise LamError(f"bad type syntax: {text!r}")
    pos = 0

    def arrow():
        nonlocal pos
        left = atom()
        if pos < len(toks) and toks[pos] == "->":
            pos += 1
            return Arrow(left, arrow())
        return left

    def atom():
        nonlocal pos
        if pos >= len(toks):
            raise LamError("unexpected end of type")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            ty = arrow()
            if pos >= len(toks) or toks[pos] != ")":
                raise LamError("missing ')' in type")
            pos += 1
            return ty
        if tok in ("->", ")"):
            raise LamError(f"unexpected {tok!r} in type")
        return TAtom(tok)

    ty = arrow()
    if pos != len(toks):
        raise LamError(f"trailing input in type: {toks[pos:]}")
    return ty


# ---------------------------------------------------------------------------
# typing derivations

@dataclass(frozen=True)
class TypingDerivation:
    context: tuple[tuple[str, SimpleType], ...]  # sorted by name
    term: Term
    type: SimpleType
    premises: tuple["TypingDerivation", ...]

    @property
    def kind(self) -> str:
        match self.term:
            case Var(_):
                return "variable"
            case Abs(_, _):
                return "abstraction"
            case App(_, _):
                return "application"
        raise LamError("bad derivation")


def _ctx_tuple(ctx: dict[str, SimpleType]) -> tuple[tuple[str, SimpleType], ...]:
    return tuple(sorted(ctx.items()))


class _Unifier:
    def __init__(self):
        self.sub: dict[int, SimpleType] = {}
        self.counter = itertools.count()

    def fresh(self) -> TVar:
        return TVar(next(self.counter))

    def resolve(self, ty: SimpleType) -> SimpleType:
        while isinstance(ty, TVar) and ty.index in self.sub:
            ty = self.sub[ty.index]
        return ty

    def walk(self, ty: SimpleType) -> SimpleType:
        ty = self.resolve(ty)
        if isinstance(ty, Arrow):
            return Arrow(self.walk(ty.dom), self.walk(ty.cod))
        return ty

    def occurs(self, v: TVar, ty: SimpleType) -> bool:
        ty = self.resolve(ty)
        if ty == v:
            return True
        if isinstance(ty, Arrow):
            return self.occurs(v, ty.dom) or self.occurs(v, ty.cod)
        return False

    def unify(self, x: SimpleType, y: SimpleType, where: str) -> None:
        x, y = self.resolve(x), self.resolve(y)
        if x == y:
            return
        if isinstance(x, TVar):
            if self.occurs(x, y):
                raise TypeError_(f"infinite type at {where}")
            self.sub[x.index] = y
            return
        if isinstance(y, TVar):
            self.unify(y, x, where)
            return
        if isinstance(x, Arrow) and isinstance(y, Arrow):
            self.unify(x.dom, y.dom, where)
            self.unify(x.cod, y.cod, where)
            return
        raise TypeError_(f"cannot match {render_type(x)} with {render_type(y)} at {where}")


def typecheck(
    ctx: dict[str, SimpleType], t: Term, ty: SimpleType
) -> TypingDerivation:
    """Check `t` against `ty` under `ctx`; returns the syntax-directed
    derivation or raises TypeError_ naming the offending subterm."""
    t = freshen(t)
    u = _Unifier()
    node_types: dict[int, SimpleType] = {}

    def infer(term: Term, env: dict[str, SimpleType]) -> SimpleType:
        match term:
            case Var(name):
                if name not in env:
                    raise TypeError_(f"unbound variable {name!r}")
                got = env[name]
            case Abs(var, body):
                dom = u.fresh()
                cod = infer(body, {**env, var: dom})
                got = Arrow(dom, cod)
            case App(fun, arg):
                fun_ty = infer(fun, env)
                arg_ty = infer(arg, env)
                cod = u.fresh()
                u.unify(fun_ty, Arrow(arg_ty, cod), f"application {render_term(term)}")
                got = cod
            case _:
                raise LamError(f"not a term: {term!r}")
        node_types[id(term)] = got
        return got

    inferred = infer(t, dict(ctx))
    u.unify(inferred, ty, f"term {render_term(t)}")

    def ground(x: SimpleType) -> SimpleType:
        # unconstrained leftovers are pinned to a fixed atom for determinism
        x = u.resolve(x)
        if isinstance(x, TVar):
            return TAtom("o")
        if isinstance(x, Arrow):
            return Arrow(ground(x.dom), ground(x.cod))
        return x

    def derive(term: Term, env: dict[str, SimpleType]) -> TypingDerivation:
        node_ty = ground(node_types[id(term)])
        match term:
            case Var(_):
                return TypingDerivation(_ctx_tuple(env), term, node_ty, ())
            case Abs(var, body):
                assert isinstance(node_ty, Arrow)
                sub = derive(body, {**env, var: node_ty.dom})
                return TypingDerivation(_ctx_tuple(env), term, node_ty, (sub,))
            case App(fun, arg):
                fun_d = derive(fun, env)
                arg_d = derive(arg, env)
                return TypingDerivation(_ctx_tuple(env), term, node_ty, (fun_d, arg_d))
        raise LamError(f"not a term: {term!r}")

    return derive(t, {k: ground(v) for k, v in ctx.items()})


# ---------------------------------------------------------------------------
# translation into proofs

def star_type(ty: SimpleType) -> Formula:
    """(.)* : atoms stay atoms, (B -> C)* = ?((B*)^) @ C*, in NNF."""
    match ty:
        case TAtom(name):
            return Atom(name)
        case Arrow(dom, cod):
            return Par(WhyNot(dual(star_type(dom))), star_type(cod))
    raise LamError(f"cannot translate type {ty!r}")


def _bang_context(ctx: tuple[tuple[str, SimpleType], ...]) -> list[Formula]:
    return [WhyNot(dual(star_type(ty))) for _, ty in ctx]


def translate(d: TypingDerivation) -> Proof:
    """Turn a typing derivation into a proof of |- ?(G*)^, A*."""
    match d.term:
        case Var(name):
            a_star = star_type(d.type)
            proof = pr.ax(a_star)  # |- A*, (A*)^
            for var, ty in d.context:
                if var != name:
                    proof = pr.weakening(proof, dual(star_type(ty)))
            return pr.dereliction(proof, dual(a_star))
        case Abs(var, _):
            sub = translate(d.premises[0])
            assert isinstance(d.type, Arrow)
            qa = WhyNot(dual(star_type(d.type.dom)))
            return pr.par(sub, qa, star_type(d.type.cod))
        case App(_, _):
            fun_d, arg_d = d.premises
            fun_proof = translate(fun_d)      # |- ?G^, ?(A*)^ @ B*
            arg_proof = translate(arg_d)      # |- ?G^, A*
            a_star = star_type(arg_d.type)
            b_star = star_type(d.type)
            boxed = pr.promotion(arg_proof, a_star)          # |- ?G^, !A*
            axb = pr.ax(b_star)                              # |- B*, (B*)^
            t = pr.tensor(boxed, axb, OfCourse(a_star), dual(b_star))
            cut_formula = Par(WhyNot(dual(a_star)), b_star)
            proof = pr.cut(fun_proof, t, cut_formula)
            for var, ty in d.context:
                proof = pr.contraction(proof, dual(star_type(ty)))
            return proof
    raise LamError(f"cannot translate {d.term!r}")


def translated_sequent(d: TypingDerivation) -> Sequent:
    return Sequent(_bang_context(d.context) + [star_type(d.type)])
