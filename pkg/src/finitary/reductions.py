"""Executable hardness reductions.

``sat_to_wp`` maps a 3-CNF formula to a finitary automaton over five
letters and a state sequence that moves some word iff the formula is
satisfiable. ``qbf_to_cwp`` maps a ``¬∀``-chain 3-QBF to the same kind of
automaton (plus a counter chain ``t_n``) and an SLP whose sequence moves
some word iff the formula is true.

Letter 0 encodes false, letter 1 true; letters 2..4 are "malformed" and
send every checking state to ``id``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .action import GenSymbol, StateSequence
from .automaton import GAutomaton, Transition
from .commutator import BalancedSpec, balanced_commutator
from .errors import ValidationError
from .formulas import Cnf, NnfQbf, preprocess_3cnf
from .permutation import SigmaTriple, find_sigma_triple
from .slp import NonTerminal, Slp

ALPHABET = 5
BOTTOM = 0
TOP = 1
ID = "id"


def alpha_state(n: int) -> str:
    return f"alpha_{n}"


def beta_state(n: int) -> str:
    return f"beta_{n}"


def sigma_state(n: int) -> str:
    return f"sigma_{n}"


def clause_state(k: int, n: int) -> str:
    # the clause chain ends in id
    return ID if n == 0 else f"c_{k}_{n}"


def t_state(n: int) -> str:
    return f"t_{n}"


@dataclass(frozen=True)
class ReductionLayout:
    num_vars: int
    num_clauses: int
    padded: int
    triple: SigmaTriple = field(default_factory=find_sigma_triple)

    def comments(self) -> list[str]:
        t = self.triple
        return [
            f"N={self.num_vars} K={self.num_clauses} D={self.padded}",
            f"bottom={BOTTOM} top={TOP}",
            f"sigma={t.sigma} alpha={t.alpha} beta={t.beta}",
        ]


@dataclass(frozen=True)
class WpInstance:
    automaton: GAutomaton
    sequence: StateSequence
    layout: ReductionLayout


@dataclass(frozen=True)
class CwpInstance:
    automaton: GAutomaton
    slp: Slp
    layout: ReductionLayout


def encode_assignment(assignment: dict[int, bool], num_vars: int | None = None) -> list[int]:
    """Word ``A(x_N) ... A(x_1)``: the last letter carries x_1."""
    n = len(assignment) if num_vars is None else num_vars
    return [TOP if assignment[v] else BOTTOM for v in range(n, 0, -1)]


def _next_pow2(k: int) -> int:
    d = 1
    while d < k:
        d *= 2
    return d


def _base_transitions(n: int, cnf3: Cnf, triple: SigmaTriple) -> list[Transition]:
    """Identity state, the alpha/beta/sigma chains and the clause checkers."""
    trans: list[Transition] = [(ID, a, a, ID) for a in range(ALPHABET)]
    for chain, perm in ((alpha_state, triple.alpha), (beta_state, triple.beta)):
        for m in range(n, 0, -1):
            trans += [(chain(m), a, a, chain(m - 1)) for a in range(ALPHABET)]
        trans += [(chain(0), a, perm(a), ID) for a in range(ALPHABET)]

    for m in range(n, 0, -1):
        trans += [(sigma_state(m), a, a, sigma_state(m - 1)) for a in (BOTTOM, TOP)]
        trans += [(sigma_state(m), b, b, ID) for b in range(2, ALPHABET)]
    trans += [(sigma_state(0), a, triple.sigma(a), ID) for a in range(ALPHABET)]

    for k, c in enumerate(cnf3.clauses, start=1):
        polarity = {lit.var: lit.negated for lit in c}
        for m in range(n, 0, -1):
            here, below = clause_state(k, m), clause_state(k, m - 1)
            if m not in polarity:
                targets = {BOTTOM: below, TOP: below}
            elif polarity[m]:
                targets = {BOTTOM: sigma_state(m - 1), TOP: below}
            else:
                targets = {BOTTOM: below, TOP: sigma_state(m - 1)}
            trans += [(here, a, a, q) for a, q in targets.items()]
            trans += [(here, b, b, ID) for b in range(2, ALPHABET)]
    return trans


def _clause_sequence(n: int, num_clauses: int) -> tuple[StateSequence, int]:
    """``B_N[c_{K,N}, ..., c_{1,N}]`` with K padded by repeating ``c_{K,N}``."""
    if num_clauses == 0:
        return (GenSymbol(sigma_state(n)),), 0
    d = _next_pow2(num_clauses)
    entries = [(GenSymbol(clause_state(num_clauses, n)),)] * (d - num_clauses)
    entries += [(GenSymbol(clause_state(k, n)),) for k in range(num_clauses, 0, -1)]
    spec = BalancedSpec(
        tuple(entries),
        alpha=(GenSymbol(alpha_state(n)),),
        beta=(GenSymbol(beta_state(n)),),
    )
    return balanced_commutator(spec), d


def sat_to_wp(cnf: Cnf) -> WpInstance:
    """Word-problem instance whose sequence is non-trivial iff ``cnf`` is satisfiable.

    The formula is run through :func:`preprocess_3cnf` first. When every
    clause was a tautology (K = 0) the sequence is just ``sigma_N``.
    """
    cnf3 = preprocess_3cnf(cnf)
    n = cnf3.num_vars
    if n < 1:
        raise ValidationError("the reduction needs at least one variable")
    triple = find_sigma_triple()
    automaton = GAutomaton(ALPHABET, _base_transitions(n, cnf3, triple), identity=ID)
    sequence, d = _clause_sequence(n, len(cnf3.clauses))
    return WpInstance(automaton, sequence, ReductionLayout(n, len(cnf3.clauses), d, triple))


def _t_transitions(n: int) -> list[Transition]:
    trans: list[Transition] = []
    for m in range(n - 1, 0, -1):
        trans += [(t_state(m), a, a, t_state(m - 1)) for a in (BOTTOM, TOP)]
        trans += [(t_state(m), b, b, ID) for b in range(2, ALPHABET)]
    trans += [(t_state(0), BOTTOM, TOP, ID), (t_state(0), TOP, BOTTOM, ID)]
    trans += [(t_state(0), b, b, ID) for b in range(2, ALPHABET)]
    return trans


def level_name(n: int, prime: bool = False) -> str:
    return f"A_{n}_prime" if prime else f"A_{n}"


def qbf_to_cwp(q: NnfQbf) -> CwpInstance:
    """Compressed word-problem instance non-trivial iff ``q`` is true.

    Rules: ``A_0`` is the clause-commutator sequence of the matrix;
    ``A_n_prime`` is ``B_N[A_{n-1}^{t_{N-n}}, A_{n-1}]`` written out with
    signed references; ``A_n = A_n_prime^-1 sigma_N``. Start symbol ``A_N``.
    """
    n = q.num_vars
    if n < 1:
        raise ValidationError("the reduction needs at least one variable")
    cnf3 = preprocess_3cnf(q.matrix)
    triple = find_sigma_triple()
    trans = _base_transitions(n, cnf3, triple) + _t_transitions(n)
    automaton = GAutomaton(ALPHABET, trans, identity=ID)

    base, d = _clause_sequence(n, len(cnf3.clauses))
    alpha, beta, sigma = GenSymbol(alpha_state(n)), GenSymbol(beta_state(n)), GenSymbol(sigma_state(n))
    rules: dict[str, tuple] = {level_name(0): base}
    for m in range(1, n + 1):
        t = GenSymbol(t_state(n - m))
        below = level_name(m - 1)
        up, down = NonTerminal(below, 1), NonTerminal(below, -1)
        rules[level_name(m, prime=True)] = (
            beta.inverse(), t.inverse(), down, t, beta,
            alpha.inverse(), down, alpha,
            beta.inverse(), t.inverse(), up, t, beta,
            alpha.inverse(), up, alpha,
        )
        rules[level_name(m)] = (NonTerminal(level_name(m, prime=True), -1), sigma)
    slp = Slp(rules, level_name(n))
    return CwpInstance(automaton, slp, ReductionLayout(n, len(cnf3.clauses), d, triple))


def paper_state_count(num_vars: int, num_clauses: int) -> int:
    """State count as stated alongside the SAT construction: (3+K)(N+1)+1."""
    return (3 + num_clauses) * (num_vars + 1) + 1


def constructed_state_count(num_vars: int, num_clauses: int) -> int:
    """States actually built when each clause chain ends in ``id``."""
    return 1 + 3 * (num_vars + 1) + num_clauses * num_vars
