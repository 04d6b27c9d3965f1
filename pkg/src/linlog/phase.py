"""Finite phase-space models: a provability semantics.

A model is a finite commutative monoid with a distinguished subset of
antiphases.  Facts (biorthogonally closed subsets) interpret formulas;
a sequent is valid when the monoid unit lands in the par of its
interpretations.  Exponentials need the extra structure of a family of
closed facts (a topolinear space); ?F is the smallest closed fact
containing F and !F its De Morgan dual.

Everything here is table-driven and exact; the syntactic model used for
completeness is infinite and deliberately out of reach of this module.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .formulas import (
    Atom, DualAtom, Tensor, Par, With, Plus, OfCourse, WhyNot,
    One, Bot, Zero, Top,
    Formula, Sequent, is_nnf,
)


class PhaseError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseMonoid:
    """Finite commutative monoid; elements are 0..n-1, 0 need not be the unit."""

    size: int
    table: tuple[tuple[int, ...], ...]
    unit: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.size
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise PhaseError("multiplication table must be square")
        if not 0 <= self.unit < n:
            raise PhaseError("unit out of range")
        for i in range(n):
            for j in range(n):
                x = self.table[i][j]
                if not 0 <= x < n:
                    raise PhaseError("table entry out of range")
                if x != self.table[j][i]:
                    raise PhaseError(f"multiplication not commutative at ({i},{j})")
            if self.table[self.unit][i] != i:
                raise PhaseError(f"unit law fails at {i}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise PhaseError(f"associativity fails at ({i},{j},{k})")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)


@dataclass(frozen=True)
class PhaseModel:
    monoid: PhaseMonoid
    antiphases: frozenset[int]
    atom_interp: dict[str, frozenset[int]] = field(default_factory=dict)
    closed_facts: tuple[frozenset[int], ...] | None = None

    def __post_init__(self):
        full = frozenset(range(self.monoid.size))
        if not self.antiphases <= full:
            raise PhaseError("antiphases must be monoid elements")
        for name, fact in self.atom_interp.items():
            if orth(self, orth(self, fact)) != fact:
                raise PhaseError(f"atom {name!r} is not interpreted by a fact")
        if self.closed_facts is not None:
            for fact in self.closed_facts:
                if orth(self, orth(self, fact)) != fact:
                    raise PhaseError("closed_facts must contain facts")

    @property
    def everything(self) -> frozenset[int]:
        return frozenset(range(self.monoid.size))


def orth(model: PhaseModel, xs) -> frozenset[int]:
    """X^ = the elements whose product with every member of X is an antiphase."""
    xs = frozenset(xs)
    mul = model.monoid.mul
    bot = model.antiphases
    return frozenset(
        q for q in range(model.monoid.size)
        if all(mul(p, q) in bot for p in xs)
    )


def biorth(model: PhaseModel, xs) -> frozenset[int]:
    return orth(model, orth(model, xs))


def product(model: PhaseModel, xs, ys) -> frozenset[int]:
    mul = model.monoid.mul
    return frozenset(mul(p, q) for p in xs for q in ys)


def fact_tensor(model, f, g):
    return biorth(model, product(model, f, g))


def fact_par(model, f, g):
    return orth(model, product(model, orth(model, f), orth(model, g)))


def fact_plus(model, f, g):
    return biorth(model, f | g)


def fact_with(model, f, g):
    return f & g


def why_not_fact(model: PhaseModel, f) -> frozenset[int]:
    """Smallest closed fact containing f (needs the topolinear family)."""
    if model.closed_facts is None:
        raise PhaseError("model has no closed-fact family for exponentials")
    supersets = [c for c in model.closed_facts if frozenset(f) <= c]
    if not supersets:
        raise PhaseError(f"no closed fact contains {sorted(f)}")
    out = supersets[0]
    for c in supersets[1:]:
        out = out & c
    return out


def interp_formula(model: PhaseModel, f: Formula) -> frozenset[int]:
    if not is_nnf(f):
        raise PhaseError(f"interpretation needs NNF formulas: {f}")
    match f:
        case Atom(name):
            if name not in model.atom_interp:
                raise PhaseError(f"atom {name!r} has no interpretation")
            return model.atom_interp[name]
        case DualAtom(name):
            if name not in model.atom_interp:
                raise PhaseError(f"atom {name!r} has no interpretation")
            return orth(model, model.atom_interp[name])
        case Tensor(l, r):
            return fact_tensor(model, interp_formula(model, l), interp_formula(model, r))
        case Par(l, r):
            return fact_par(model, interp_formula(model, l), interp_formula(model, r))
        case With(l, r):
            return interp_formula(model, l) & interp_formula(model, r)
        case Plus(l, r):
            return fact_plus(model, interp_formula(model, l), interp_formula(model, r))
        case One():
            return orth(model, model.antiphases)
        case Bot():
            return frozenset(model.antiphases)
        case Top():
            return model.everything
        case Zero():
            return orth(model, model.everything)
        case WhyNot(body):
            return why_not_fact(model, interp_formula(model, body))
        case OfCourse(body):
            return orth(model, why_not_fact(model, orth(model, interp_formula(model, body))))
    raise PhaseError(f"cannot interpret {f!r}")


def is_valid(model: PhaseModel, s: Sequent) -> bool:
    """1 belongs to the par-fold of the interpretations."""
    if len(s) == 0:
        return model.monoid.unit in model.antiphases
    acc = interp_formula(model, s[0])
    for f in s.formulas[1:]:
        acc = fact_par(model, acc, interp_formula(model, f))
    return model.monoid.unit in acc


@dataclass(frozen=True)
class TopolinearReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


def check_topolinear(model: PhaseModel) -> TopolinearReport:
    """Checks the four closed-fact axioms: intersection closure, finite-par
    closure with bot present, bot smallest, and F par F closed."""
    if model.closed_facts is None:
        raise PhaseError("model has no closed-fact family")
    family = list(dict.fromkeys(model.closed_facts))
    out: list[str] = []
    bot = frozenset(model.antiphases)
    for f, g in itertools.combinations_with_replacement(family, 2):
        if f & g not in family:
            out.append(f"(1) intersection {sorted(f & g)} escapes the family")
            break
    if bot not in family:
        out.append("(2) bot is not in the family")
    done = False
    for f in family:
        for g in family:
            if fact_par(model, f, g) not in family:
                out.append(f"(2) par of {sorted(f)} and {sorted(g)} escapes the family")
                done = True
                break
        if done:
            break
    for f in family:
        if not bot <= f:
            out.append(f"(3) bot is not below {sorted(f)}")
            break
    for f in family:
        if fact_par(model, f, f) not in family:
            out.append(f"(4) {sorted(f)} par itself escapes the family")
            break
    return TopolinearReport(tuple(out))


# ---------------------------------------------------------------------------
# model builders

def cyclic_monoid(k: int) -> PhaseMonoid:
    """(Z/kZ, +)."""
    table = tuple(tuple((i + j) % k for j in range(k)) for i in range(k))
    return PhaseMonoid(k, table, 0, tuple(str(i) for i in range(k)))


def truncated_monoid(j: int) -> PhaseMonoid:
    """{0..j} with saturating addition, a quotient of the naturals."""
    table = tuple(tuple(min(i + x, j) for x in range(j + 1)) for i in range(j + 1))
    return PhaseMonoid(j + 1, table, 0, tuple(str(i) for i in range(j + 1)))


def product_monoid(m1: PhaseMonoid, m2: PhaseMonoid) -> PhaseMonoid:
    pairs = list(itertools.product(range(m1.size), range(m2.size)))
    index = {p: i for i, p in enumerate(pairs)}
    table = tuple(
        tuple(index[(m1.mul(a1, b1), m2.mul(a2, b2))] for (b1, b2) in pairs)
        for (a1, a2) in pairs
    )
    labels = tuple(f"{m1.label(a)}{m2.label(b)}" for a, b in pairs)
    return PhaseMonoid(len(pairs), table, index[(m1.unit, m2.unit)], labels)


def random_model(
    rng: random.Random,
    atoms: tuple[str, ...] = ("a", "b"),
    max_size: int = 6,
    with_exponentials: bool = False,
) -> PhaseModel:
    """Random finite model built from cyclic and truncated monoids (guaranteed
    associative), a random antiphase subset, and random atom facts."""
    while True:
        kind = rng.randrange(3)
        if kind == 0:
            monoid = cyclic_monoid(rng.randrange(1, max_size + 1))
        elif kind == 1:
            monoid = truncated_monoid(rng.randrange(0, max_size))
        else:
            k1 = rng.randrange(1, 4)
            k2 = rng.randrange(1, max_size // k1 + 1)
            left = cyclic_monoid(k1) if rng.random() < 0.5 else truncated_monoid(k1 - 1)
            right = cyclic_monoid(k2) if rng.random() < 0.5 else truncated_monoid(k2 - 1)
            monoid = product_monoid(left, right)
        if monoid.size > max_size:
            continue
        antiphases = frozenset(i for i in range(monoid.size) if rng.random() < 0.5)
        base = PhaseModel(monoid, antiphases)
        interp = {
            name: orth(base, frozenset(i for i in range(monoid.size) if rng.random() < 0.5))
            for name in atoms
        }
        closed = None
        if with_exponentials:
            closed = _closed_family(base)
            if closed is None:
                continue
        model = PhaseModel(monoid, antiphases, interp, closed)
        if with_exponentials and not check_topolinear(model).ok:
            continue
        return model


def _closed_family(model: PhaseModel) -> tuple[frozenset[int], ...] | None:
    """All facts above bot, when that family is topolinear; None otherwise."""
    n = model.monoid.size
    if n > 10:
        return None
    bot = frozenset(model.antiphases)
    facts = set()
    for bits in itertools.product((0, 1), repeat=n):
        xs = frozenset(i for i in range(n) if bits[i])
        facts.add(orth(model, xs))
    family = tuple(sorted((f for f in facts if bot <= f), key=sorted))
    probe = PhaseModel(model.monoid, model.antiphases, {}, family)
    return family if check_topolinear(probe).ok else None


# ---------------------------------------------------------------------------
# model files

def render_model(model: PhaseModel) -> str:
    lines = ["elements: " + " ".join(model.monoid.label(i) for i in range(model.monoid.size))]
    lines.append(f"unit: {model.monoid.label(model.monoid.unit)}")
    lines.append("table:")
    for i in range(model.monoid.size):
        lines.append("  " + " ".join(model.monoid.label(model.monoid.mul(i, j))
                                     for j in range(model.monoid.size)))
    lines.append("bot: " + " ".join(model.monoid.label(i) for i in sorted(model.antiphases)))
    for name, fact in sorted(model.atom_interp.items()):
        lines.append(f"atom {name}: " + " ".join(model.monoid.label(i) for i in sorted(fact)))
    if model.closed_facts is not None:
        for fact in model.closed_facts:
            lines.append("closed: " + " ".join(model.monoid.label(i) for i in sorted(fact)))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> PhaseModel:
    labels: list[str] = []
    unit_label = None
    rows: list[list[str]] = []
    bot_labels: list[str] = []
    atoms: dict[str, list[str]] = {}
    closed: list[list[str]] = []
    in_table = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if in_table and line.startswith(("  ", "\t")):
            rows.append(line.split())
            continue
        in_table = False
        stripped = line.strip()
        if stripped.startswith("elements:"):
            labels = stripped.split(":", 1)[1].split()
        elif stripped.startswith("unit:"):
            unit_label = stripped.split(":", 1)[1].strip()
        elif stripped == "table:":
            in_table = True
        elif stripped.startswith("bot:"):
            bot_labels = stripped.split(":", 1)[1].split()
        elif stripped.startswith("atom "):
            head, body = stripped.split(":", 1)
            atoms[head.split()[1]] = body.split()
        elif stripped.startswith("closed:"):
            closed.append(stripped.split(":", 1)[1].split())
        else:
            raise PhaseError(f"line {lineno}: cannot parse {stripped!r}")
    if not labels or unit_label is None or len(rows) != len(labels):
        raise PhaseError("model file needs elements:, unit: and a full table")
    index = {lab: i for i, lab in enumerate(labels)}

    def look(lab: str) -> int:
        if lab not in index:
            raise PhaseError(f"unknown element {lab!r}")
        return index[lab]

    table = tuple(tuple(look(x) for x in row) for row in rows)
    monoid = PhaseMonoid(len(labels), table, look(unit_label), tuple(labels))
    return PhaseModel(
        monoid,
        frozenset(look(x) for x in bot_labels),
        {name: frozenset(look(x) for x in xs) for name, xs in atoms.items()},
        tuple(frozenset(look(x) for x in xs) for xs in closed) if closed else None,
    )
