"""Finite coherence spaces: a semantics of proofs.

Webs are finite sets of structured tokens: atom tokens are strings or
ints; pairs (t1, t2) build tensor/par/lollipop tokens; ("inl", t) and
("inr", t) build with/plus tokens; finite cliques (frozensets) are the
tokens of !E; "*" is the token of the one-point space interpreting the
multiplicative units.

A proof of |- A1, ..., An is interpreted as a set of n-tuples, one
coordinate per canonical position of the conclusion; the set is a clique
of the par of the interpretations.  Because sequents are multisets,
coordinates of equal formulas are only determined up to permutation, so
interpretations are canonicalized under those permutations before being
compared across cut-elimination steps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formulas import (
    Atom, DualAtom, Tensor, Par, With, Plus, OfCourse, WhyNot,
    One, Bot, Zero, Top,
    Formula, Sequent, dual, is_nnf,
)
from .proofs import (
    Proof, check_proof,
    AxiomRule, CutRule, TensorRule, ParRule, OneRule, BotRule, TopRule,
    WithRule, PlusLeftRule, PlusRightRule,
    DerelictionRule, PromotionRule, ContractionRule, WeakeningRule,
)

UNIT_TOKEN = "*"


class CoherenceError(ValueError):
    pass


def token_key(t):
    if isinstance(t, frozenset):
        return (4, tuple(sorted(token_key(x) for x in t)))
    if isinstance(t, tuple):
        if len(t) == 2 and t[0] in ("inl", "inr") and not isinstance(t[0], tuple):
            return (1 if t[0] == "inl" else 2, (token_key(t[1]),))
        return (3, tuple(token_key(x) for x in t))
    return (0, (str(type(t).__name__), str(t)))


@dataclass(frozen=True)
class CoherenceSpace:
    web: frozenset
    coh: frozenset  # symmetric, reflexive set of ordered pairs

    def __post_init__(self):
        for e in self.web:
            if (e, e) not in self.coh:
                raise CoherenceError(f"coherence not reflexive at {e!r}")
        for x, y in self.coh:
            if x not in self.web or y not in self.web:
                raise CoherenceError("coherence mentions foreign tokens")
            if (y, x) not in self.coh:
                raise CoherenceError(f"coherence not symmetric at ({x!r},{y!r})")

    def coherent(self, x, y) -> bool:
        return (x, y) in self.coh

    def strictly_coherent(self, x, y) -> bool:
        return x != y and (x, y) in self.coh

    def incoherent(self, x, y) -> bool:
        """Girard's non-strict incoherence: equal or not coherent."""
        return x == y or (x, y) not in self.coh

    def tokens(self) -> list:
        return sorted(self.web, key=token_key)


def space(web, coherent_pairs) -> CoherenceSpace:
    """Build a space from a web and its strictly coherent unordered pairs."""
    web = frozenset(web)
    coh = {(e, e) for e in web}
    for x, y in coherent_pairs:
        coh.add((x, y))
        coh.add((y, x))
    return CoherenceSpace(web, frozenset(coh))


def discrete(tokens) -> CoherenceSpace:
    return space(tokens, [])


def codiscrete(tokens) -> CoherenceSpace:
    tokens = list(tokens)
    return space(tokens, itertools.combinations(tokens, 2))


def nat_space(cutoff: int) -> CoherenceSpace:
    """The flat natural-numbers space truncated to {0..cutoff-1}."""
    return discrete(range(cutoff))


ONE_SPACE = space([UNIT_TOKEN], [])
EMPTY_SPACE = space([], [])


def dual_space(e: CoherenceSpace) -> CoherenceSpace:
    coh = set()
    for x in e.web:
        for y in e.web:
            if e.incoherent(x, y):
                coh.add((x, y))
    return CoherenceSpace(e.web, frozenset(coh))


def tensor_space(e: CoherenceSpace, f: CoherenceSpace) -> CoherenceSpace:
    web = frozenset((a, b) for a in e.web for b in f.web)
    coh = frozenset(
        ((a1, b1), (a2, b2))
        for a1 in e.web for b1 in f.web for a2 in e.web for b2 in f.web
        if e.coherent(a1, a2) and f.coherent(b1, b2)
    )
    return CoherenceSpace(web, coh)


def par_space(e: CoherenceSpace, f: CoherenceSpace) -> CoherenceSpace:
    return dual_space(tensor_space(dual_space(e), dual_space(f)))


def lolli_space(e: CoherenceSpace, f: CoherenceSpace) -> CoherenceSpace:
    return par_space(dual_space(e), f)


def with_space(e: CoherenceSpace, f: CoherenceSpace) -> CoherenceSpace:
    web = frozenset(itertools.chain((("inl", a) for a in e.web),
                                    (("inr", b) for b in f.web)))
    coh = set()
    for x in web:
        for y in web:
            if x[0] != y[0]:
                coh.add((x, y))
            elif x[0] == "inl" and e.coherent(x[1], y[1]):
                coh.add((x, y))
            elif x[0] == "inr" and f.coherent(x[1], y[1]):
                coh.add((x, y))
    return CoherenceSpace(web, frozenset(coh))


def plus_space(e: CoherenceSpace, f: CoherenceSpace) -> CoherenceSpace:
    return dual_space(with_space(dual_space(e), dual_space(f)))


def compatible(e: CoherenceSpace, x: frozenset, y: frozenset) -> bool:
    """x and y extend to a common clique, i.e. their union is one."""
    return is_clique(e, x | y)


def is_clique(e: CoherenceSpace, xs) -> bool:
    xs = list(xs)
    return all(e.coherent(a, b) for a, b in itertools.combinations(xs, 2)) and all(
        x in e.web for x in xs
    )


MAX_BANG_WEB = 14


def of_course_space(e: CoherenceSpace, max_web: int = MAX_BANG_WEB) -> CoherenceSpace:
    """!E: tokens are the finite cliques, coherent when compatible."""
    if len(e.web) > max_web:
        raise CoherenceError(f"web too large for !: {len(e.web)} > {max_web}")
    tokens = [frozenset(c) for c in _cliques(e)]
    coh = frozenset(
        (x, y) for x in tokens for y in tokens if is_clique(e, x | y)
    )
    return CoherenceSpace(frozenset(tokens), coh)


def why_not_space(e: CoherenceSpace, max_web: int = MAX_BANG_WEB) -> CoherenceSpace:
    return dual_space(of_course_space(dual_space(e), max_web))


def _cliques(e: CoherenceSpace):
    """All cliques, grown token by token in canonical order."""
    order = e.tokens()
    out = [frozenset()]
    stack = [(frozenset(), 0)]
    while stack:
        current, start = stack.pop()
        for i in range(start, len(order)):
            t = order[i]
            if all(e.coherent(t, x) for x in current):
                nxt = current | {t}
                out.append(nxt)
                stack.append((nxt, i + 1))
    return out


DEFAULT_ENUM_BOUND = 12


def enum_cliques(e: CoherenceSpace, bound: int = DEFAULT_ENUM_BOUND) -> set[frozenset]:
    """D(E): every clique of the web; guarded by a web-size bound."""
    if len(e.web) > bound:
        raise CoherenceError(f"web too large to enumerate cliques: {len(e.web)} > {bound}")
    return set(_cliques(e))


def build_space(
    f: Formula, atoms: dict[str, CoherenceSpace], max_bang_web: int = MAX_BANG_WEB
) -> CoherenceSpace:
    """Interpret a formula as a space over the given atom spaces."""
    if not is_nnf(f):
        raise CoherenceError(f"build_space needs NNF formulas: {f}")

    def go(f: Formula) -> CoherenceSpace:
        match f:
            case Atom(name):
                if name not in atoms:
                    raise CoherenceError(f"atom {name!r} has no space")
                _check_atom_space(name, atoms[name])
                return atoms[name]
            case DualAtom(name):
                if name not in atoms:
                    raise CoherenceError(f"atom {name!r} has no space")
                _check_atom_space(name, atoms[name])
                return dual_space(atoms[name])
            case Tensor(l, r):
                return tensor_space(go(l), go(r))
            case Par(l, r):
                return par_space(go(l), go(r))
            case With(l, r):
                return with_space(go(l), go(r))
            case Plus(l, r):
                return plus_space(go(l), go(r))
            case OfCourse(body):
                return of_course_space(go(body), max_bang_web)
            case WhyNot(body):
                return why_not_space(go(body), max_bang_web)
            case One() | Bot():
                return ONE_SPACE
            case Zero() | Top():
                return EMPTY_SPACE
        raise CoherenceError(f"cannot build a space for {f!r}")

    return go(f)


def _check_atom_space(name: str, e: CoherenceSpace) -> None:
    for t in e.web:
        if not isinstance(t, (str, int)):
            raise CoherenceError(
                f"atom {name!r} uses structured token {t!r}; atom tokens must be plain"
            )


# ---------------------------------------------------------------------------
# proofs as cliques

MAX_PROMOTION_SUPPORT = 18


def interpret_proof(
    p: Proof, atoms: dict[str, CoherenceSpace], max_bang_web: int = MAX_BANG_WEB
) -> frozenset:
    """The clique denoted by a checked proof, as canonicalized tuples."""
    report = check_proof(p)
    if not report.ok:
        raise CoherenceError(f"interpret_proof needs a correct proof: {report}")
    cache: dict[Formula, CoherenceSpace] = {}

    def space_of(f: Formula) -> CoherenceSpace:
        if f not in cache:
            cache[f] = build_space(f, atoms, max_bang_web)
        return cache[f]

    raw = _interp(p, space_of)
    spaces = [space_of(f) for f in p.conclusion]
    _assert_parfold_clique(raw, spaces)
    return canonicalize_interp(raw, p.conclusion)


def conclusion_spaces(s: Sequent, atoms: dict[str, CoherenceSpace]) -> list[CoherenceSpace]:
    return [build_space(f, atoms) for f in s]


def tuples_coherent(t, u, spaces) -> bool:
    """Coherence in the par-fold: equal, or strictly coherent somewhere."""
    if t == u:
        return True
    return any(sp.strictly_coherent(a, b) for sp, a, b in zip(spaces, t, u))


def _assert_parfold_clique(tuples, spaces) -> None:
    tuples = list(tuples)
    for t in tuples:
        for sp, tok in zip(spaces, t):
            if tok not in sp.web:
                raise CoherenceError(f"token {tok!r} escapes its web")
    for t, u in itertools.combinations(tuples, 2):
        if not tuples_coherent(t, u, spaces):
            raise CoherenceError(f"interpretation is not a clique: {t} vs {u}")


def canonicalize_interp(tuples: frozenset, s: Sequent) -> frozenset:
    """Quotient by permutations of coordinates holding equal formulas."""
    groups = []
    start = 0
    fs = s.formulas
    for i in range(1, len(fs) + 1):
        if i == len(fs) or fs[i] != fs[start]:
            if i - start > 1:
                groups.append(tuple(range(start, i)))
            start = i
    if not groups:
        return frozenset(tuples)
    perm_sets = [list(itertools.permutations(g)) for g in groups]
    total = 1
    for ps in perm_sets:
        total *= len(ps)
        if total > 40_320:
            raise CoherenceError("too many equal formulas to canonicalize")
    best = None
    n = len(fs)
    for combo in itertools.product(*perm_sets):
        sigma = list(range(n))
        for g, perm in zip(groups, combo):
            for src, dst in zip(g, perm):
                sigma[dst] = src
        image = frozenset(tuple(t[sigma[i]] for i in range(n)) for t in tuples)
        key = sorted(image, key=lambda t: tuple(token_key(x) for x in t))
        if best is None or key < best[0]:
            best = (key, image)
    return best[1]


def _match(src: Sequent, dst: Sequent, skip_src: set[int], skip_dst: set[int]) -> dict[int, int]:
    """First-unused assignment of src positions to dst positions with equal
    formulas; positions in the skip sets are excluded."""
    out: dict[int, int] = {}
    used: set[int] = set(skip_dst)
    for i, f in enumerate(src.formulas):
        if i in skip_src:
            continue
        for j, g in enumerate(dst.formulas):
            if j in used or g != f:
                continue
            out[i] = j
            used.add(j)
            break
        else:
            raise CoherenceError(f"cannot match {f} into {dst}")
    return out


def _first_index(s: Sequent, f: Formula, banned: set[int] = frozenset()) -> int:
    for i, g in enumerate(s.formulas):
        if g == f and i not in banned:
            return i
    raise CoherenceError(f"{f} not found in {s}")


def _interp(p: Proof, space_of) -> frozenset:
    concl = p.conclusion
    n = len(concl)
    rule = p.rule

    def mapped(u, mapping, fill: dict[int, object]):
        t = [None] * n
        for i, j in mapping.items():
            t[j] = u[i]
        for j, tok in fill.items():
            t[j] = tok
        return tuple(t)

    match rule:
        case AxiomRule():
            e = space_of(concl[0])
            return frozenset((tok, tok) for tok in e.web)
        case OneRule():
            return frozenset({(UNIT_TOKEN,)})
        case TopRule():
            return frozenset()
        case BotRule():
            i = p.principal[0]
            sub = _interp(p.premises[0], space_of)
            m = _match(p.premises[0].conclusion, concl, set(), {i})
            return frozenset(mapped(u, m, {i: UNIT_TOKEN}) for u in sub)
        case ParRule():
            i = p.principal[0]
            f = concl[i]
            prem = p.premises[0]
            ja = _first_index(prem.conclusion, f.left)
            jb = _first_index(prem.conclusion, f.right, {ja})
            sub = _interp(prem, space_of)
            m = _match(prem.conclusion, concl, {ja, jb}, {i})
            return frozenset(
                mapped(u, m, {i: (u[ja], u[jb])}) for u in sub
            )
        case TensorRule(left=left):
            i = p.principal[0]
            f = concl[i]
            p1, p2 = p.premises
            ja = _first_index(p1.conclusion, f.left)
            jb = _first_index(p2.conclusion, f.right)
            left_set = set(left)
            right_set = set(range(n)) - left_set - {i}
            m1 = _match(p1.conclusion, concl, {ja}, right_set | {i})
            m2 = _match(p2.conclusion, concl, {jb}, left_set | {i})
            s1 = _interp(p1, space_of)
            s2 = _interp(p2, space_of)
            out = set()
            for u in s1:
                for v in s2:
                    t = [None] * n
                    for a, j in m1.items():
                        t[j] = u[a]
                    for b, j in m2.items():
                        t[j] = v[b]
                    t[i] = (u[ja], v[jb])
                    out.add(tuple(t))
            return frozenset(out)
        case CutRule(formula=c):
            p1, p2 = p.premises
            d = dual(c)
            jc = _first_index(p1.conclusion, c)
            jd = _first_index(p2.conclusion, d)
            m1 = _match(p1.conclusion, concl, {jc}, set())
            taken = set(m1.values())
            m2 = _match(p2.conclusion, concl, {jd}, taken)
            s1 = _interp(p1, space_of)
            s2 = _interp(p2, space_of)
            by_token: dict[object, list] = {}
            for v in s2:
                by_token.setdefault(v[jd], []).append(v)
            out = set()
            for u in s1:
                for v in by_token.get(u[jc], ()):
                    t = [None] * n
                    for a, j in m1.items():
                        t[j] = u[a]
                    for b, j in m2.items():
                        t[j] = v[b]
                    out.add(tuple(t))
            return frozenset(out)
        case WithRule():
            i = p.principal[0]
            f = concl[i]
            out = set()
            for tag, prem, comp in (("inl", p.premises[0], f.left),
                                    ("inr", p.premises[1], f.right)):
                ja = _first_index(prem.conclusion, comp)
                m = _match(prem.conclusion, concl, {ja}, {i})
                for u in _interp(prem, space_of):
                    out.add(mapped(u, m, {i: (tag, u[ja])}))
            return frozenset(out)
        case PlusLeftRule() | PlusRightRule():
            i = p.principal[0]
            f = concl[i]
            tag, comp = (("inl", f.left) if isinstance(rule, PlusLeftRule)
                         else ("inr", f.right))
            prem = p.premises[0]
            ja = _first_index(prem.conclusion, comp)
            m = _match(prem.conclusion, concl, {ja}, {i})
            return frozenset(
                mapped(u, m, {i: (tag, u[ja])}) for u in _interp(prem, space_of)
            )
        case DerelictionRule():
            i = p.principal[0]
            body = concl[i].body
            prem = p.premises[0]
            ja = _first_index(prem.conclusion, body)
            m = _match(prem.conclusion, concl, {ja}, {i})
            return frozenset(
                mapped(u, m, {i: frozenset({u[ja]})}) for u in _interp(prem, space_of)
            )
        case WeakeningRule():
            i = p.principal[0]
            prem = p.premises[0]
            m = _match(prem.conclusion, concl, set(), {i})
            return frozenset(
                mapped(u, m, {i: frozenset()}) for u in _interp(prem, space_of)
            )
        case ContractionRule():
            i = p.principal[0]
            f = concl[i]
            prem = p.premises[0]
            j1 = _first_index(prem.conclusion, f)
            j2 = _first_index(prem.conclusion, f, {j1})
            dual_body = dual_space(space_of(f.body))
            m = _match(prem.conclusion, concl, {j1, j2}, {i})
            out = set()
            for u in _interp(prem, space_of):
                merged = u[j1] | u[j2]
                if not is_clique(dual_body, merged):
                    continue
                out.add(mapped(u, m, {i: merged}))
            return frozenset(out)
        case PromotionRule():
            i = p.principal[0]
            body = concl[i].body
            prem = p.premises[0]
            ja = _first_index(prem.conclusion, body)
            body_space = space_of(body)
            m = _match(prem.conclusion, concl, {ja}, {i})
            phi = sorted(
                _interp(prem, space_of),
                key=lambda t: tuple(token_key(x) for x in t),
            )
            if len(phi) > MAX_PROMOTION_SUPPORT:
                raise CoherenceError(
                    f"promotion interpretation over {len(phi)} tokens is too large"
                )
            side_duals = {
                a: dual_space(space_of(prem.conclusion[a].body))
                for a in m
            }
            out = set()
            for r in range(len(phi) + 1):
                for combo in itertools.combinations(phi, r):
                    x = frozenset(u[ja] for u in combo)
                    if not is_clique(body_space, x):
                        continue
                    t = [None] * n
                    ok = True
                    for a, j in m.items():
                        merged = frozenset().union(*(u[a] for u in combo)) if combo else frozenset()
                        if not is_clique(side_duals[a], merged):
                            ok = False
                            break
                        t[j] = merged
                    if not ok:
                        continue
                    t[i] = x
                    out.add(tuple(t))
            return frozenset(out)
    raise CoherenceError(f"no interpretation clause for rule {rule!r}")

# ---------------------------------------------------------------------------
# stable and linear functions

@dataclass(frozen=True)
class FunctionTable:
    """A total map D(dom) -> D(cod), given extensionally."""

    dom: CoherenceSpace
    cod: CoherenceSpace
    mapping: tuple

    @classmethod
    def from_dict(cls, dom, cod, d) -> "FunctionTable":
        items = tuple(sorted(d.items(), key=lambda kv: token_key(kv[0])))
        return cls(dom, cod, items)

    def as_dict(self):
        return dict(self.mapping)

    def __call__(self, x: frozenset) -> frozenset:
        for k, v in self.mapping:
            if k == x:
                return v
        raise CoherenceError(f"{set(x)!r} is not in the function's domain")


def _domain_cliques(e: CoherenceSpace) -> list[frozenset]:
    return sorted(_cliques(e), key=token_key)


def table_from_callable(dom, cod, fn) -> FunctionTable:
    d = {}
    for x in _domain_cliques(dom):
        y = frozenset(fn(x))
        if not is_clique(cod, y):
            raise CoherenceError(f"value {set(y)!r} at {set(x)!r} is not a clique")
        d[x] = y
    return FunctionTable.from_dict(dom, cod, d)


def is_monotone(f: FunctionTable) -> bool:
    m = f.as_dict()
    return all(
        m[x] <= m[y]
        for x in m for y in m
        if x <= y
    )


def stability_witness(f: FunctionTable):
    """None if stable, else a pair (x, y) of compatible cliques with
    f(x & y) != f(x) & f(y)."""
    if not is_monotone(f):
        return ("not monotone",)
    m = f.as_dict()
    for x in m:
        for y in m:
            if compatible(f.dom, x, y) and m[x & y] != m[x] & m[y]:
                return (x, y)
    return None


def is_stable(f: FunctionTable) -> bool:
    return stability_witness(f) is None


def is_linear(f: FunctionTable) -> bool:
    """Stable, preserves the empty clique, and preserves compatible unions."""
    if not is_stable(f):
        return False
    m = f.as_dict()
    if m[frozenset()] != frozenset():
        return False
    return all(
        m[x | y] == m[x] | m[y]
        for x in m for y in m
        if compatible(f.dom, x, y)
    )


def trace(f: FunctionTable) -> frozenset:
    """The clique of !dom -o cod listing minimal points of a stable f."""
    w = stability_witness(f)
    if w is not None:
        raise CoherenceError(f"trace of a non-stable function (witness {w!r})")
    m = f.as_dict()
    out = set()
    for x, fx in m.items():
        for e1 in fx:
            if all(e1 not in m[y] for y in m if y < x):
                out.add((x, e1))
    hom = lolli_space(of_course_space(f.dom), f.cod)
    result = frozenset(out)
    if not is_clique(hom, result):
        raise CoherenceError("trace is not a clique; function was not stable")
    return result


def fun(phi: frozenset, dom: CoherenceSpace, cod: CoherenceSpace) -> FunctionTable:
    """The stable function determined by a clique of !dom -o cod."""
    hom = lolli_space(of_course_space(dom), cod)
    if not is_clique(hom, phi):
        raise CoherenceError("fun() needs a clique of !E -o F")
    d = {}
    for z in _domain_cliques(dom):
        d[z] = frozenset(e1 for x, e1 in phi if x <= z)
    return FunctionTable.from_dict(dom, cod, d)


def stable_functions(dom: CoherenceSpace, cod: CoherenceSpace):
    """Every stable function between two (small) spaces."""
    dom_cliques = _domain_cliques(dom)
    cod_cliques = _domain_cliques(cod)
    out = []

    def extend(i, acc):
        if i == len(dom_cliques):
            f = FunctionTable.from_dict(dom, cod, dict(acc))
            if is_stable(f):
                out.append(f)
            return
        x = dom_cliques[i]
        for y in cod_cliques:
            if all(not (k <= x) or (v <= y) for k, v in acc):
                if all(not (x <= k) or (y <= v) for k, v in acc):
                    extend(i + 1, acc + [(x, y)])

    extend(0, [])
    return out


def stable_leq(f: FunctionTable, g: FunctionTable) -> bool:
    """Berry's order: pointwise below and f(x) = g(x) & f(y) for x <= y."""
    mf, mg = f.as_dict(), g.as_dict()
    if any(mf[x] > mg[x] for x in mf):
        return False
    return all(
        mf[x] == mg[x] & mf[y]
        for x in mf for y in mf
        if x <= y
    )


# ---------------------------------------------------------------------------
# morphisms as cliques (the linear category on finite spaces)

def rel_identity(e: CoherenceSpace) -> frozenset:
    return frozenset((t, t) for t in e.web)


def rel_compose(r1: frozenset, r2: frozenset) -> frozenset:
    """(a, c) whenever (a, b) in r1 and (b, c) in r2."""
    by_left = {}
    for b, c in r2:
        by_left.setdefault(b, []).append(c)
    return frozenset((a, c) for a, b in r1 for c in by_left.get(b, ()))


def rel_transpose(r: frozenset) -> frozenset:
    return frozenset((b, a) for a, b in r)


def rel_tensor(r1: frozenset, r2: frozenset) -> frozenset:
    return frozenset(
        ((a1, a2), (b1, b2)) for a1, b1 in r1 for a2, b2 in r2
    )


def rel_pairing(f: frozenset, g: frozenset) -> frozenset:
    """<f, g>: C -> A & B from f: C -> A and g: C -> B."""
    return frozenset(
        itertools.chain(((c, ("inl", a)) for c, a in f),
                        ((c, ("inr", b)) for c, b in g))
    )


def rel_bang(phi: frozenset, dom: CoherenceSpace, cod: CoherenceSpace) -> frozenset:
    """!phi: !dom -> !cod, the minimal-support lifting of a linear morphism."""
    image = {}
    for a, b in phi:
        image.setdefault(a, set()).add(b)
    bang_dom = of_course_space(dom)
    out = set()
    for x in bang_dom.web:
        reach = set()
        for a in x:
            reach |= image.get(a, set())
        sub = space(
            [t for t in reach],
            [
                (t1, t2)
                for t1, t2 in itertools.combinations(reach, 2)
                if cod.coherent(t1, t2)
            ],
        )
        for y in _cliques(sub):
            y = frozenset(y)
            minimal = True
            for a in x:
                smaller = x - {a}
                reach2 = set()
                for a2 in smaller:
                    reach2 |= image.get(a2, set())
                if y <= reach2:
                    minimal = False
                    break
            if minimal:
                out.add((x, y))
    return frozenset(out)


def rel_eps(e: CoherenceSpace) -> frozenset:
    """Counit !E -> E: singleton tokens project to their element."""
    return frozenset((frozenset({t}), t) for t in e.web)


def rel_delta(e: CoherenceSpace) -> frozenset:
    """Comultiplication !E -> !!E: a token Y comes from the union of Y."""
    bang = of_course_space(e)
    bang_bang = of_course_space(bang)
    return frozenset((frozenset().union(*y) if y else frozenset(), y)
                     for y in bang_bang.web)


def rel_alpha(a: CoherenceSpace, b: CoherenceSpace, c: CoherenceSpace) -> frozenset:
    """A x (B x C) -> (A x B) x C."""
    return frozenset(
        ((x, (y, z)), ((x, y), z))
        for x in a.web for y in b.web for z in c.web
    )


def rel_gamma(a: CoherenceSpace, b: CoherenceSpace) -> frozenset:
    return frozenset(((x, y), (y, x)) for x in a.web for y in b.web)


def rel_iota_l(a: CoherenceSpace) -> frozenset:
    """1 x A -> A."""
    return frozenset(((UNIT_TOKEN, x), x) for x in a.web)


def rel_iota_r(a: CoherenceSpace) -> frozenset:
    """A x 1 -> A."""
    return frozenset(((x, UNIT_TOKEN), x) for x in a.web)


def rel_n(a: CoherenceSpace, b: CoherenceSpace) -> frozenset:
    """!A x !B -> !(A & B): the exponential isomorphism on webs."""
    out = set()
    for x in of_course_space(a).web:
        for y in of_course_space(b).web:
            merged = frozenset(itertools.chain((("inl", t) for t in x),
                                               (("inr", t) for t in y)))
            out.add(((x, y), merged))
    return frozenset(out)


def rel_p() -> frozenset:
    """1 -> !Top."""
    return frozenset({(UNIT_TOKEN, frozenset())})


def comonoid_maps(e: CoherenceSpace) -> tuple[frozenset, frozenset]:
    """(weakening e: !E -> 1, contraction d: !E -> !E x !E) built from the
    categorical recipe: e = p^-1 . !(top) . delta, d = n^-1 . !<eps,eps> . delta."""
    bang = of_course_space(e)
    delta = rel_delta(e)
    top_hat: frozenset = frozenset()  # the unique map !E -> Top
    weak = rel_compose(rel_compose(delta, rel_bang(top_hat, bang, EMPTY_SPACE)),
                       rel_transpose(rel_p()))
    eps = rel_eps(e)
    pair = rel_pairing(eps, eps)  # !E -> E & E
    contr = rel_compose(rel_compose(delta, rel_bang(pair, bang, with_space(e, e))),
                        rel_transpose(rel_n(e, e)))
    return weak, contr


def bang_comonad_maps(e: CoherenceSpace) -> tuple[FunctionTable, FunctionTable]:
    """(eps, delta) as function tables on cliques: eps X = the tokens whose
    singletons are in X; delta X = the !E-cliques whose union lands in X."""
    bang = of_course_space(e)
    bang_bang = of_course_space(bang)
    eps = table_from_callable(
        bang, e, lambda x: frozenset(t for t in e.web if frozenset({t}) in x)
    )
    delta = table_from_callable(
        bang, bang_bang,
        lambda x: frozenset(
            y for y in bang_bang.web
            if (frozenset().union(*y) if y else frozenset()) in x
        ),
    )
    return eps, delta


def check_comonad_laws(e: CoherenceSpace, full_third_law_bound: int = 16) -> list[str]:
    """The three comonad equations on !E.

    The first two are checked extensionally on every clique of !E.  The
    third lives at !!!E; it is checked extensionally whenever the web of
    !!E stays within `full_third_law_bound`, and otherwise on every
    witness clique of at most two !!E-tokens (both sides are linear, and
    every larger witness is a union of these).
    """
    out = []
    bang = of_course_space(e)
    bang_bang = of_course_space(bang)
    eps, delta = bang_comonad_maps(e)
    d = delta.as_dict()

    def flatten(y: frozenset) -> frozenset:
        return frozenset().union(*y) if y else frozenset()

    for x in _domain_cliques(bang):
        z = d[x]
        # (1) eps at !E after delta
        back = frozenset(y for y in bang.web if frozenset({y}) in z)
        if back != x:
            out.append(f"eps.delta != id at {set(x)!r}")
        # (2) !eps after delta
        back2 = frozenset(
            y for y in bang.web
            if frozenset(frozenset({t}) for t in y) in z
        )
        if back2 != x:
            out.append(f"T(eps).delta != id at {set(x)!r}")

    def lhs_pred(w, z) -> bool:  # delta at !E
        return flatten_union(w) in z

    def flatten_union(w: frozenset) -> frozenset:
        return frozenset().union(*w) if w else frozenset()

    def rhs_pred(w, z) -> bool:  # !delta
        return frozenset(flatten(y) for y in w) in z

    if len(bang_bang.web) <= full_third_law_bound:
        bang3 = of_course_space(bang_bang, max_web=full_third_law_bound)
        for x in _domain_cliques(bang):
            z = d[x]
            for w in bang3.web:
                if lhs_pred(w, z) != rhs_pred(w, z):
                    out.append(f"delta.delta != T(delta).delta at {set(x)!r} / {w!r}")
    else:
        tokens = sorted(bang_bang.web, key=token_key)
        witnesses = [frozenset()]
        witnesses += [frozenset({t}) for t in tokens]
        witnesses += [
            frozenset({t1, t2})
            for t1, t2 in itertools.combinations(tokens, 2)
            if bang_bang.coherent(t1, t2)
        ]
        inputs = [frozenset()] + [frozenset({t}) for t in sorted(bang.web, key=token_key)]
        for x in inputs:
            z = d[x]
            for w in witnesses:
                if lhs_pred(w, z) != rhs_pred(w, z):
                    out.append(f"delta.delta != T(delta).delta at {set(x)!r} / {w!r}")
    return out


def check_comonoid_laws(e: CoherenceSpace) -> list[str]:
    """The commutative-comonoid equations for (e, d) on !E."""
    out = []
    bang = of_course_space(e)
    weak, contr = comonoid_maps(e)
    ident = rel_identity(bang)
    left_unit = rel_compose(contr,
                            rel_compose(rel_tensor(weak, ident), rel_iota_l(bang)))
    if left_unit != ident:
        out.append("iota_l . (e x id) . d != id")
    right_unit = rel_compose(contr,
                             rel_compose(rel_tensor(ident, weak), rel_iota_r(bang)))
    if right_unit != ident:
        out.append("iota_r . (id x e) . d != id")
    assoc_l = rel_compose(contr,
                          rel_compose(rel_tensor(ident, contr),
                                      rel_alpha(bang, bang, bang)))
    assoc_r = rel_compose(contr, rel_tensor(contr, ident))
    if assoc_l != assoc_r:
        out.append("alpha . (id x d) . d != (d x id) . d")
    if rel_compose(contr, rel_gamma(bang, bang)) != contr:
        out.append("gamma . d != d")
    return out


def bang_with_iso(a: CoherenceSpace, b: CoherenceSpace) -> list[str]:
    """Check that (x, y) -> inl-tagged x + inr-tagged y is an isomorphism
    of spaces !A x !B -> !(A & B)."""
    out = []
    lhs = tensor_space(of_course_space(a), of_course_space(b))
    rhs = of_course_space(with_space(a, b))
    n = dict(rel_n(a, b))
    if len(n) != len(lhs.web):
        out.append("n is not total")
    if frozenset(n.values()) != rhs.web:
        out.append("n is not a bijection on webs")
    for t1 in lhs.web:
        for t2 in lhs.web:
            if lhs.coherent(t1, t2) != rhs.coherent(n[t1], n[t2]):
                out.append(f"n breaks coherence at {t1!r}, {t2!r}")
                return out
    return out


def all_spaces(max_web: int) -> list[CoherenceSpace]:
    """Every coherence structure on webs {0..k-1}, k <= max_web."""
    out = []
    for k in range(max_web + 1):
        tokens = list(range(k))
        pairs = list(itertools.combinations(tokens, 2))
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            chosen = [p for p, bit in zip(pairs, bits) if bit]
            out.append(space(tokens, chosen))
    return out
