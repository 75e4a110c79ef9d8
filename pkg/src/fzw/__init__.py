"""Fermionic string diagrams: terms, evaluation, normal forms, axioms and circuits."""
from .errors import (ArityError, CapacityError, FzwError, MixedParityError, NoMatch,
                     OddParityError, ParseError)
from .evaluate import closed_amplitude, eval_state, evaluate, generator_matrix
from .linalg import GradedMatrix, Parity, StateVector, compose, fock, parity_classify, tensor
from .terms import BLACK2, BLACK3, DUAL, DUAL_DAGGER, FSWAP, SWAP, Gen, Generator, Id, Par, Seq, Term, White
from .dsl import format_term, parse
from .normalform import NormalForm, PreNormalForm, equal, nf_to_term, normalize, synthesize

__all__ = [
    "ArityError", "CapacityError", "FzwError", "MixedParityError", "NoMatch", "OddParityError",
    "ParseError", "closed_amplitude", "eval_state", "evaluate", "generator_matrix", "GradedMatrix",
    "Parity", "StateVector", "compose", "fock", "parity_classify", "tensor", "BLACK2", "BLACK3",
    "DUAL", "DUAL_DAGGER", "FSWAP", "SWAP", "Gen", "Generator", "Id", "Par", "Seq", "Term", "White",
    "format_term", "parse", "NormalForm", "PreNormalForm", "equal", "nf_to_term", "normalize",
    "synthesize",
]
