"""linlog: a workbench for propositional linear logic.

Layers, each usable on its own:

- ``formulas``: formula trees, parser/printer, NNF, duals, polarity
- ``proofs``: explicit proof objects and a local rule checker
- ``prover``: decision procedure for the exponential-free fragment,
  plus a brute-force enumeration oracle
- ``cutelim``: stepwise cut elimination on proof objects
- ``lam``: affine/simply-typed lambda calculus and its proof translation
- ``tcm``: two-counter machines (fork variant), their encoding as
  sequents, and a proof synthesizer for accepting runs
- ``phase``: finite phase-space models (provability semantics)
- ``coherence``: finite coherence spaces (proof semantics)
"""

from .formulas import (
    Atom, DualAtom, Dual, Tensor, Par, With, Plus, OfCourse, WhyNot,
    One, Bot, Zero, Top, ONE, BOT, ZERO, TOP,
    Formula, FormulaError, FormulaSyntaxError, Sequent,
    parse_formula, parse_sequent, render_formula, render_sequent,
    nnf, nnf_sequent, dual, size, polarity, is_nnf,
)

__all__ = [
    "Atom", "DualAtom", "Dual", "Tensor", "Par", "With", "Plus",
    "OfCourse", "WhyNot", "One", "Bot", "Zero", "Top",
    "ONE", "BOT", "ZERO", "TOP",
    "Formula", "FormulaError", "FormulaSyntaxError", "Sequent",
    "parse_formula", "parse_sequent", "render_formula", "render_sequent",
    "nnf", "nnf_sequent", "dual", "size", "polarity", "is_nnf",
]
