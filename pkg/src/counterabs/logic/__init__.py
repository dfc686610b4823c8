"""Restricted formula language: syntax, linear forms, evaluation, normalization."""
from .evaluate import ConcreteState, eval_term, evaluate
from .linear import (
    CONG, EQ, LE, Constraint, Lin, NotLinear, atom_alternatives, canonical_literal,
    constraint_str, constraint_to_formula, dnf, linearize, normalize,
)
from .normal import atoms_of, simplify, split_atoms
from .syntax import *  # noqa: F401,F403
from .syntax import free_symbols, prime_state, show, substitute

eval = evaluate  # noqa: A001  -- public alias matching the operation name
