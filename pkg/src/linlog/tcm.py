"""Two-counter machines (fork variant), their sequent encoding, and a
synthesizer that turns an accepting run into a checkable proof.

A machine acts on multisets of triplets (state, counter A, counter B);
the fork instruction splits one triplet into two, so a run is a cluster
of machines working in parallel.  Acceptance means reaching a multiset
consisting only of (final, 0, 0) triplets.

The encoding maps each instruction to a ?-wrapped axiom formula, carried
inside every sequent so it can be reused by contraction; a triplet
(q, m, n) is claimed accepting via |- q^, (a^m)^, (b^n)^, q_final plus
the instruction theory, where a^0 = 1 and a^(k+1) = a^k * a.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .formulas import (
    Atom, DualAtom, Dual, Formula, Par, Plus, Tensor, With, WhyNot,
    ONE, BOT, Sequent, dual, nnf,
)
from . import proofs as pr
from .proofs import Proof

COUNTER_ATOMS = ("a", "b")

Triplet = tuple[str, int, int]
ID = tuple[Triplet, ...]  # canonical: sorted


class TcmError(ValueError):
    pass


@dataclass(frozen=True)
class Instruction:
    kind: str  # one of +A -A +B -B fork
    src: str
    dst: str
    dst2: str | None = None

    def __str__(self) -> str:
        if self.kind == "fork":
            return f"{self.src} fork {self.dst} {self.dst2}"
        return f"{self.src} {self.kind} {self.dst}"


@dataclass(frozen=True)
class TCM:
    states: frozenset[str]
    initial: str
    final: str
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        if self.initial not in self.states or self.final not in self.states:
            raise TcmError("initial and final states must be listed states")
        for ins in self.instructions:
            targets = {ins.src, ins.dst} | ({ins.dst2} if ins.dst2 else set())
            if not targets <= self.states:
                raise TcmError(f"instruction {ins} uses unknown states")
            if ins.kind not in ("+A", "-A", "+B", "-B", "fork"):
                raise TcmError(f"unknown instruction kind {ins.kind!r}")
            if (ins.kind == "fork") != (ins.dst2 is not None):
                raise TcmError(f"malformed instruction {ins}")
        for s in self.states:
            if s in COUNTER_ATOMS:
                raise TcmError(f"state name {s!r} collides with a counter atom")


def canonical_id(triplets) -> ID:
    return tuple(sorted(triplets))


def is_accepting(machine: TCM, s: ID) -> bool:
    return all(t == (machine.final, 0, 0) for t in s)


def apply_instruction(ins: Instruction, t: Triplet) -> tuple[Triplet, ...] | None:
    """Result of firing `ins` on one triplet, or None if it does not apply."""
    q, m, n = t
    if q != ins.src:
        return None
    match ins.kind:
        case "+A":
            return ((ins.dst, m + 1, n),)
        case "-A":
            return ((ins.dst, m - 1, n),) if m > 0 else None
        case "+B":
            return ((ins.dst, m, n + 1),)
        case "-B":
            return ((ins.dst, m, n - 1),) if n > 0 else None
        case "fork":
            return ((ins.dst, m, n), (ins.dst2, m, n))
    return None


def step_id(s: ID, ins: Instruction, t: Triplet) -> ID:
    produced = apply_instruction(ins, t)
    if produced is None:
        raise TcmError(f"instruction {ins} does not apply to {t}")
    rest = list(s)
    rest.remove(t)
    return canonical_id(rest + list(produced))


@dataclass(frozen=True)
class TraceStep:
    before: ID
    instruction: Instruction
    triplet: Triplet


@dataclass(frozen=True)
class RunTrace:
    initial: ID
    steps: tuple[TraceStep, ...]
    final: ID


def validate_trace(machine: TCM, trace: RunTrace) -> None:
    current = trace.initial
    for step in trace.steps:
        if step.before != current:
            raise TcmError(f"trace step starts at {step.before}, expected {current}")
        if step.triplet not in current:
            raise TcmError(f"triplet {step.triplet} not in {current}")
        current = step_id(current, step.instruction, step.triplet)
    if current != trace.final:
        raise TcmError(f"trace ends at {current}, declared {trace.final}")


def simulate(
    machine: TCM, initial, bound: int, max_visited: int = 50_000
) -> RunTrace | None:
    """Breadth-first search for an accepting run within `bound` transitions.

    Fork chains can blow the reachable set up exponentially, so the search
    also stops after `max_visited` distinct descriptions."""
    if bound <= 0:
        raise TcmError("bound must be positive")
    start = canonical_id(initial)
    if is_accepting(machine, start):
        return RunTrace(start, (), start)
    parents: dict[ID, tuple[ID, Instruction, Triplet]] = {}
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        current, depth = frontier.popleft()
        if depth >= bound:
            continue
        for ins in machine.instructions:
            for t in sorted(set(current)):
                produced = apply_instruction(ins, t)
                if produced is None:
                    continue
                nxt = step_id(current, ins, t)
                if nxt in seen:
                    continue
                if len(seen) >= max_visited:
                    return None
                seen.add(nxt)
                parents[nxt] = (current, ins, t)
                if is_accepting(machine, nxt):
                    return _rebuild_trace(start, nxt, parents)
                frontier.append((nxt, depth + 1))
    return None


def _rebuild_trace(start: ID, final: ID, parents) -> RunTrace:
    steps = []
    current = final
    while current != start:
        before, ins, t = parents[current]
        steps.append(TraceStep(before, ins, t))
        current = before
    steps.reverse()
    return RunTrace(start, tuple(steps), final)


# ---------------------------------------------------------------------------
# encoding

def counter_power(atom: str, n: int) -> Formula:
    """a^0 = 1, a^1 = a, a^(k+1) = a^k * a."""
    if n == 0:
        return ONE
    f: Formula = Atom(atom)
    for _ in range(n - 1):
        f = Tensor(f, Atom(atom))
    return f


def instruction_formula(ins: Instruction) -> Formula:
    """The ?((...)^) encoding of one instruction, stored in NNF."""
    qi, qj = Atom(ins.src), Atom(ins.dst)
    match ins.kind:
        case "+A":
            body = Par(Dual(qi), Tensor(qj, Atom("a")))
        case "-A":
            body = Par(Dual(Tensor(qi, Atom("a"))), qj)
        case "+B":
            body = Par(Dual(qi), Tensor(qj, Atom("b")))
        case "-B":
            body = Par(Dual(Tensor(qi, Atom("b"))), qj)
        case "fork":
            body = Par(Dual(qi), Plus(qj, Atom(ins.dst2)))
        case _:
            raise TcmError(f"unknown instruction {ins}")
    return nnf(WhyNot(Dual(body)))


def theory(machine: TCM) -> tuple[Formula, ...]:
    return tuple(instruction_formula(ins) for ins in machine.instructions)


def goal_sequent(machine: TCM, t: Triplet) -> Sequent:
    q, m, n = t
    return Sequent([
        DualAtom(q),
        dual(counter_power("a", m)),
        dual(counter_power("b", n)),
        Atom(machine.final),
    ])


def encode(machine: TCM, t: Triplet) -> tuple[Sequent, tuple[Formula, ...]]:
    """(goal, theory): the claimed sequent and the instruction formulas that
    accompany every sequent of the encoding."""
    return goal_sequent(machine, t), theory(machine)


def full_sequent(machine: TCM, t: Triplet) -> Sequent:
    goal, th = encode(machine, t)
    return goal.union(Sequent(th))


# ---------------------------------------------------------------------------
# proof synthesis (accepting run -> proof)

def synthesize_proof(machine: TCM, trace: RunTrace, t: Triplet) -> Proof:
    """Proof of the encoded sequent for `t`, which must occur in the trace's
    initial multiset, by induction on the run."""
    validate_trace(machine, trace)
    if t not in trace.initial:
        raise TcmError(f"triplet {t} not in the trace's initial description")
    th = theory(machine)
    proof = _synth(machine, th, trace.steps, t, 0)
    assert proof.conclusion == full_sequent(machine, t)
    return proof


def _synth(machine: TCM, th, steps, t: Triplet, k: int) -> Proof:
    if k == len(steps):
        if t != (machine.final, 0, 0):
            raise TcmError(f"run leaves triplet {t} unfinished")
        return _base_proof(machine, th)
    step = steps[k]
    if step.triplet != t:
        return _synth(machine, th, steps, t, k + 1)
    ins = step.instruction
    produced = apply_instruction(ins, t)
    if ins.kind == "fork":
        left = _synth(machine, th, steps, produced[0], k + 1)
        right = _synth(machine, th, steps, produced[1], k + 1)
        return _fork_case(machine, ins, t, left, right)
    ih = _synth(machine, th, steps, produced[0], k + 1)
    if ins.kind in ("+A", "+B"):
        return _increment_case(machine, ins, t, ih)
    return _decrement_case(machine, ins, t, ih)


def _base_proof(machine: TCM, th) -> Proof:
    p = pr.ax(Atom(machine.final))      # |- q_F, q_F^
    p = pr.bot(pr.bot(p))               # |- q_F, q_F^, bot, bot
    for f in th:
        assert isinstance(f, WhyNot)
        p = pr.weakening(p, f.body)
    return p


def _instruction_axiom(ins: Instruction) -> tuple[Proof, Formula, Formula]:
    """(|- ?(I^), I  by dereliction of an axiom,  I,  I^)."""
    f = instruction_formula(ins)
    assert isinstance(f, WhyNot)
    body_dual = f.body            # I^ in NNF
    body = dual(body_dual)        # I
    derelicted = pr.dereliction(pr.ax(body), body_dual)
    return derelicted, body, body_dual


def _increment_case(machine: TCM, ins: Instruction, t: Triplet, ih: Proof) -> Proof:
    q, m, n = t
    atom = "a" if ins.kind == "+A" else "b"
    count = m if atom == "a" else n
    nq_dst, natom = DualAtom(ins.dst), DualAtom(atom)

    lam = ih
    if count > 0:
        # unfold (x^(count+1))^ into (x^count)^, x^ by cutting a tensor of axioms
        power = counter_power(atom, count)
        expander = pr.tensor(pr.ax(power), pr.ax(Atom(atom)), power, Atom(atom))
        lam = pr.cut(ih, expander, dual(counter_power(atom, count + 1)))
    lam = pr.par(lam, nq_dst, natom)

    derelicted, body, body_dual = _instruction_axiom(ins)
    tensored = pr.tensor(
        pr.ax(Atom(ins.src)), pr.ax(Par(nq_dst, natom)),
        Atom(ins.src), Par(nq_dst, natom),
    )  # |- I^, src^, dst * x
    opened = pr.cut(derelicted, tensored, body)   # |- ?(I^), src^, dst * x
    joined = pr.cut(lam, opened, Par(nq_dst, natom))
    result = pr.contraction(joined, body_dual)
    if count == 0:
        result = pr.bot(result)
    return result


def _decrement_case(machine: TCM, ins: Instruction, t: Triplet, ih: Proof) -> Proof:
    q, m, n = t
    atom = "a" if ins.kind == "-A" else "b"
    count = m if atom == "a" else n
    if count <= 0:
        raise TcmError(f"{ins.kind} requires a positive counter at {t}")
    nq_src, nq_dst, natom = DualAtom(ins.src), DualAtom(ins.dst), DualAtom(atom)

    if count - 1 == 0:
        ih = pr.cut(ih, pr.one(), BOT)  # spend the (x^0)^ = bot coordinate
    derelicted, body, body_dual = _instruction_axiom(ins)
    # body = (src^ @ x^) @ dst ; open both pars with tensors of axioms
    src_x = Tensor(Atom(ins.src), Atom(atom))
    outer = pr.tensor(pr.ax(src_x), pr.ax(nq_dst), src_x, nq_dst)
    # |- (src*x)*dst^, src^ @ x^, dst
    opened = pr.cut(derelicted, outer, body)      # |- ?(I^), src^ @ x^, dst
    inner = pr.tensor(pr.ax(Atom(ins.src)), pr.ax(Atom(atom)), Atom(ins.src), Atom(atom))
    # |- src*x, src^, x^
    opened = pr.cut(opened, inner, Par(nq_src, natom))  # |- ?(I^), dst, src^, x^
    joined = pr.cut(opened, ih, Atom(ins.dst))
    if count - 1 > 0:
        joined = pr.par(joined, dual(counter_power(atom, count - 1)), natom)
    return pr.contraction(joined, body_dual)


def _fork_case(machine: TCM, ins: Instruction, t: Triplet, left: Proof, right: Proof) -> Proof:
    nq_dst, nq_dst2 = DualAtom(ins.dst), DualAtom(ins.dst2)
    branch = pr.with_(left, right, nq_dst, nq_dst2)
    derelicted, body, body_dual = _instruction_axiom(ins)
    choice = Plus(Atom(ins.dst), Atom(ins.dst2))
    tensored = pr.tensor(
        pr.ax(Atom(ins.src)), pr.ax(With(nq_dst, nq_dst2)),
        Atom(ins.src), With(nq_dst, nq_dst2),
    )  # |- I^, src^, dst + dst2
    opened = pr.cut(derelicted, tensored, body)
    joined = pr.cut(opened, branch, choice)
    return pr.contraction(joined, body_dual)


# ---------------------------------------------------------------------------
# machine files: line oriented, `states:`/`init:`/`final:` headers then
# one instruction per line (`qi +A qj`, `qi fork qj qk`)

def parse_machine(text: str) -> TCM:
    states: list[str] = []
    initial = final = None
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("states:"):
            states = line.split(":", 1)[1].split()
        elif line.startswith("init:"):
            initial = line.split(":", 1)[1].strip()
        elif line.startswith("final:"):
            final = line.split(":", 1)[1].strip()
        else:
            parts = line.split()
            if len(parts) == 3 and parts[1] in ("+A", "-A", "+B", "-B"):
                instructions.append(Instruction(parts[1], parts[0], parts[2]))
            elif len(parts) == 4 and parts[1] == "fork":
                instructions.append(Instruction("fork", parts[0], parts[2], parts[3]))
            else:
                raise TcmError(f"line {lineno}: cannot parse instruction {line!r}")
    if not states or initial is None or final is None:
        raise TcmError("machine file needs states:, init: and final: headers")
    return TCM(frozenset(states), initial, final, tuple(instructions))


def render_machine(machine: TCM) -> str:
    lines = [
        "states: " + " ".join(sorted(machine.states)),
        f"init: {machine.initial}",
        f"final: {machine.final}",
    ]
    lines.extend(str(ins) for ins in machine.instructions)
    return "\n".join(lines) + "\n"


def parse_id(text: str) -> ID:
    """Parse `(q,0,0);(p,1,2)` or `q,0,0` into a canonical description."""
    triplets = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        parts = [x.strip() for x in chunk.split(",")]
        if len(parts) != 3:
            raise TcmError(f"bad triplet {chunk!r}")
        triplets.append((parts[0], int(parts[1]), int(parts[2])))
    if not triplets:
        raise TcmError("empty instantaneous description")
    return canonical_id(triplets)


def chain_machine() -> TCM:
    """Increment then decrement: accepts from (qi, 0, 0) in two steps."""
    return TCM(
        frozenset({"qi", "q1", "qf"}), "qi", "qf",
        (Instruction("+A", "qi", "q1"), Instruction("-A", "q1", "qf")),
    )


def fork_machine() -> TCM:
    """A single fork into two final copies."""
    return TCM(
        frozenset({"qi", "qf"}), "qi", "qf",
        (Instruction("fork", "qi", "qf", "qf"),),
    )
