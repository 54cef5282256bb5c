"""Finitary automaton groups: the word problem, its compressed variant,
and executable reductions from 3-SAT and 3-QBF."""

from .action import (
    GenSymbol,
    StateSequence,
    Verdict,
    apply,
    apply_with_residual,
    decide_identity,
    decide_identity_exhaustive,
    invert_sequence,
    parse_sequence,
    parse_word,
    seq,
)
from .automaton import (
    GAutomaton,
    depth,
    identity_state,
    inverse_step,
    is_finitary,
    parse_automaton,
    serialize_automaton,
    step,
)
from .commutator import BalancedSpec, balanced_commutator, iter_balanced_commutator
from .errors import FinitaryError, LimitExceeded, NotFinitaryError, ParseError, ValidationError
from .formulas import (
    Cnf,
    Literal,
    NnfQbf,
    PrenexQbf,
    brute_force_sat,
    eval_nnf_qbf,
    eval_prenex_qbf,
    normalize_to_3qbf,
    parse_dimacs,
    parse_qdimacs,
    preprocess_3cnf,
)
from .permutation import Permutation, SigmaTriple, find_sigma_triple
from .reductions import CwpInstance, WpInstance, encode_assignment, qbf_to_cwp, sat_to_wp
from .slp import (
    NonTerminal,
    Slp,
    decompress,
    expansion_length,
    parse_slp,
    serialize_slp,
    slp_decide_identity,
    stream_apply,
)

__version__ = "0.1.0"
