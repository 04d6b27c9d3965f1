"""Proof search for the exponential-free fragment (MALL).

Two independent routes to provability:

- :func:`prove_mall` is the real decision procedure: it applies the
  reversible rules (par, bot, with; top closes) eagerly, then branches
  on plus choices and tensor context splits, memoizing subgoals.  It
  returns a checkable Proof.
- :func:`oracle_provable` enumerates every candidate cut-free proof tree
  with no strategy at all and reports whether any of them checks.  It
  exists to cross-validate the prover and is only usable on small inputs.

Both restrict axioms to atomic formulas; general identities are derivable,
so this does not change provability.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .formulas import (
    Atom, DualAtom, Tensor, Par, With, Plus, One, Bot, Zero, Top,
    ONE, TOP, Formula, FormulaError, Sequent, dual, has_exponentials, is_nnf,
)
from . import proofs as pr
from .proofs import Proof


class SearchOutcome(Enum):
    NOT_PROVABLE = "not-provable"
    BUDGET_EXCEEDED = "budget-exceeded"


NOT_PROVABLE = SearchOutcome.NOT_PROVABLE
BUDGET_EXCEEDED = SearchOutcome.BUDGET_EXCEEDED


@dataclass(frozen=True)
class SearchLimits:
    max_visited_sequents: int = 1_000_000
    time_budget_ms: int = 120_000

    def __post_init__(self):
        if self.max_visited_sequents <= 0 or self.time_budget_ms <= 0:
            raise ValueError("search limits must be positive")


class _Budget(Exception):
    pass


def _require_mall(s: Sequent) -> None:
    for f in s:
        if not is_nnf(f):
            raise FormulaError(f"prover expects NNF formulas: {f}")
        if has_exponentials(f):
            raise FormulaError(f"exponential connective outside MALL: {f}")


def prove_mall(
    s: Sequent,
    limits: SearchLimits = SearchLimits(),
    memo: dict[Sequent, Proof | None] | None = None,
) -> Proof | SearchOutcome:
    """Decide provability of a MALL sequent; returns a checkable proof.

    A shared `memo` dict may be supplied to amortize search across many
    related sequents.
    """
    _require_mall(s)
    state = _Search(limits, memo if memo is not None else {})
    try:
        proof = state.prove(s)
    except _Budget:
        return BUDGET_EXCEEDED
    return proof if proof is not None else NOT_PROVABLE


class _Search:
    def __init__(self, limits: SearchLimits, memo: dict[Sequent, Proof | None]):
        self.limits = limits
        self.memo = memo
        self.visited = 0
        self.deadline = time.monotonic() + limits.time_budget_ms / 1000.0

    def _tick(self) -> None:
        self.visited += 1
        if self.visited > self.limits.max_visited_sequents:
            raise _Budget
        if self.visited % 256 == 0 and time.monotonic() > self.deadline:
            raise _Budget

    def prove(self, s: Sequent) -> Proof | None:
        hit = self.memo.get(s, _MISS)
        if hit is not _MISS:
            return hit
        self._tick()
        proof = self._prove_uncached(s)
        self.memo[s] = proof
        return proof

    def _prove_uncached(self, s: Sequent) -> Proof | None:
        # reversible phase: top closes, then leftmost par/bot/with
        for f in s:
            if f == TOP:
                return pr.top(s.remove(TOP))
        for f in s:
            if isinstance(f, Par):
                sub = self.prove(s.remove(f).add(f.left, f.right))
                return pr.par(sub, f.left, f.right) if sub is not None else None
            if isinstance(f, Bot):
                sub = self.prove(s.remove(f))
                return pr.bot(sub) if sub is not None else None
            if isinstance(f, With):
                left = self.prove(s.remove(f).add(f.left))
                if left is None:
                    return None
                right = self.prove(s.remove(f).add(f.right))
                if right is None:
                    return None
                return pr.with_(left, right, f.left, f.right)

        # leaves
        if len(s) == 1 and s[0] == ONE:
            return pr.one()
        if len(s) == 2 and isinstance(s[0], (Atom, DualAtom)) and s[1] == dual(s[0]):
            return pr.ax(s[0])

        # irreversible phase: leftmost-first plus choices, then tensor splits
        tried: set[Formula] = set()
        for f in s:
            if not isinstance(f, Plus) or f in tried:
                continue
            tried.add(f)
            rest = s.remove(f)
            sub = self.prove(rest.add(f.left))
            if sub is not None:
                return pr.plus_left(sub, f.left, f.right)
            sub = self.prove(rest.add(f.right))
            if sub is not None:
                return pr.plus_right(sub, f.left, f.right)
        tried.clear()
        for f in s:
            if not isinstance(f, Tensor) or f in tried:
                continue
            tried.add(f)
            context = s.remove(f).formulas
            seen_splits: set[tuple[Sequent, Sequent]] = set()
            for mask in range(1 << len(context)):
                g1 = Sequent(context[i] for i in range(len(context)) if mask >> i & 1)
                g2 = Sequent(context[i] for i in range(len(context)) if not mask >> i & 1)
                if (g1, g2) in seen_splits:
                    continue
                seen_splits.add((g1, g2))
                left = self.prove(g1.add(f.left))
                if left is None:
                    continue
                right = self.prove(g2.add(f.right))
                if right is None:
                    continue
                return pr.tensor(left, right, f.left, f.right)
        return None


_MISS = object()


# ---------------------------------------------------------------------------
# brute-force oracle

DEFAULT_ORACLE_BOUND = 12


def oracle_provable(s: Sequent, size_bound: int = DEFAULT_ORACLE_BOUND) -> bool:
    """Enumerate all candidate cut-free proof trees of `s` and report whether
    one checks.  No strategy, no memo; the only pruning is the size measure
    built into the rules themselves (every premise is smaller).
    """
    _require_mall(s)
    if s.total_size() > size_bound:
        raise FormulaError(
            f"oracle bound exceeded: sequent size {s.total_size()} > {size_bound}"
        )
    return _oracle(s)


def _oracle(s: Sequent) -> bool:
    # candidate leaves
    if len(s) == 1 and s[0] == ONE:
        return True
    if (
        len(s) == 2
        and isinstance(s[0], (Atom, DualAtom))
        and s[1] == dual(s[0])
    ):
        return True
    if any(f == TOP for f in s):
        return True

    tried: set[Formula] = set()
    for f in s:
        if f in tried:
            continue
        tried.add(f)
        rest = s.remove(f)
        match f:
            case Par(l, r):
                if _oracle(rest.add(l, r)):
                    return True
            case Bot():
                if _oracle(rest):
                    return True
            case With(l, r):
                if _oracle(rest.add(l)) and _oracle(rest.add(r)):
                    return True
            case Plus(l, r):
                if _oracle(rest.add(l)) or _oracle(rest.add(r)):
                    return True
            case Tensor(l, r):
                context = rest.formulas
                seen: set[tuple[Sequent, Sequent]] = set()
                for mask in range(1 << len(context)):
                    g1 = Sequent(context[i] for i in range(len(context)) if mask >> i & 1)
                    g2 = Sequent(context[i] for i in range(len(context)) if not mask >> i & 1)
                    if (g1, g2) in seen:
                        continue
                    seen.add((g1, g2))
                    if _oracle(g1.add(l)) and _oracle(g2.add(r)):
                        return True
            case _:
                pass
    return False
