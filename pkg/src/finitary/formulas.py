"""CNF and prenex QBF: parsing, brute-force evaluation, normalization.

The evaluators here are deliberately plain enumerations; they serve as
oracles for the reductions and must stay easy to trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import LimitExceeded, ParseError, ValidationError

SAT_GUARD = 30
QBF_GUARD = 20

EXISTS = "e"
FORALL = "a"


class Literal(NamedTuple):
    var: int
    negated: bool = False

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __neg__(self) -> Literal:
        return Literal(self.var, not self.negated)

    def __str__(self) -> str:
        return f"¬x{self.var}" if self.negated else f"x{self.var}"


Clause = tuple[Literal, ...]


def clause(*lits: int) -> Clause:
    """``clause(1, -2, 3)`` is ``x1 ∨ ¬x2 ∨ x3``."""
    return tuple(Literal.from_int(i) for i in lits)


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValidationError("number of variables must be non-negative")
        for c in self.clauses:
            for lit in c:
                if not 1 <= lit.var <= self.num_vars:
                    raise ValidationError(f"variable {lit.var} out of range 1..{self.num_vars}")

    @classmethod
    def of(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> Cnf:
        return cls(num_vars, tuple(clause(*c) for c in clauses))

    def variables(self) -> set[int]:
        return {lit.var for c in self.clauses for lit in c}

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[l.var] != l.negated for l in c) for c in self.clauses)


@dataclass(frozen=True)
class PrenexQbf:
    """``Q1 v1 Q2 v2 ... : matrix``, prefix listed outermost first.

    Matrix variables missing from the prefix are free; they count as
    existentials quantified outside everything else.
    """

    prefix: tuple[tuple[str, int], ...]
    matrix: Cnf

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple((q, v) for q, v in self.prefix))
        seen = set()
        for q, v in self.prefix:
            if q not in (EXISTS, FORALL):
                raise ValidationError(f"unknown quantifier {q!r}")
            if not 1 <= v <= self.matrix.num_vars:
                raise ValidationError(f"quantified variable {v} out of range 1..{self.matrix.num_vars}")
            if v in seen:
                raise ValidationError(f"variable {v} quantified twice")
            seen.add(v)

    def free_variables(self) -> list[int]:
        bound = {v for _, v in self.prefix}
        return sorted(self.matrix.variables() - bound)

    def closed_prefix(self) -> tuple[tuple[str, int], ...]:
        return tuple((EXISTS, v) for v in self.free_variables()) + self.prefix


@dataclass(frozen=True)
class NnfQbf:
    """``¬∀x_N ¬∀x_{N-1} ... ¬∀x_1 : matrix`` (x_N outermost)."""

    num_vars: int
    matrix: Cnf

    def __post_init__(self):
        used = self.matrix.variables()
        if used and max(used) > self.num_vars:
            raise ValidationError("matrix uses variables beyond num_vars")
        if self.matrix.num_vars != self.num_vars:
            object.__setattr__(self, "matrix", Cnf(self.num_vars, self.matrix.clauses))


# -- DIMACS / QDIMACS ------------------------------------------------------

def _decode(text: bytes | str) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 ({exc.reason})") from None
    return text


def _header(src: str) -> tuple[int, int, list[tuple[int, list[str]]]]:
    """Find ``p cnf N M``; return (N, M, remaining (lineno, tokens) lines)."""
    body: list[tuple[int, list[str]]] = []
    header = None
    for lineno, line in enumerate(src.splitlines(), start=1):
        toks = line.split()
        if not toks or toks[0].startswith("c"):
            continue
        if toks[0] == "%":
            # SATLIB end-of-data marker
            break
        if toks[0] == "p":
            if header is not None:
                raise ParseError("second problem line", lineno, 1)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("malformed header, expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                n, m = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("malformed header counts", lineno, 1) from None
            if n < 0 or m < 0:
                raise ParseError("negative header counts", lineno, 1)
            header = (n, m)
            continue
        if header is None:
            raise ParseError("content before the 'p cnf' header", lineno, 1)
        body.append((lineno, toks))
    if header is None:
        raise ParseError("missing 'p cnf' header")
    return header[0], header[1], body


def _clauses(n: int, m: int, lines: list[tuple[int, list[str]]]) -> list[Clause]:
    clauses: list[Clause] = []
    current: list[Literal] = []
    last_line = 0
    for lineno, toks in lines:
        last_line = lineno
        for tok in toks:
            try:
                value = int(tok)
            except ValueError:
                raise ParseError(f"expected integer literal, got {tok!r}", lineno) from None
            if value == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(value) > n:
                raise ParseError(f"variable {abs(value)} out of range 1..{n}", lineno)
            current.append(Literal.from_int(value))
    if current:
        raise ParseError("last clause is not terminated by 0", last_line)
    if len(clauses) != m:
        raise ParseError(f"header announces {m} clauses, found {len(clauses)}")
    return clauses


def parse_dimacs(text: bytes | str) -> Cnf:
    n, m, body = _header(_decode(text))
    return Cnf(n, tuple(_clauses(n, m, body)))


def parse_qdimacs(text: bytes | str) -> PrenexQbf:
    """QDIMACS: quantifier lines (``e``/``a`` ... ``0``) outermost first, then clauses."""
    n, m, body = _header(_decode(text))
    prefix: list[tuple[str, int]] = []
    rest = 0
    for lineno, toks in body:
        if toks[0] not in (EXISTS, FORALL):
            break
        rest += 1
        if toks[-1] != "0":
            raise ParseError("quantifier line must end with 0", lineno)
        for tok in toks[1:-1]:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"expected variable, got {tok!r}", lineno) from None
            if not 1 <= v <= n:
                raise ParseError(f"quantified variable {v} out of range 1..{n}", lineno)
            if any(v == w for _, w in prefix):
                raise ParseError(f"variable {v} quantified twice", lineno)
            prefix.append((toks[0], v))
    for lineno, toks in body[rest:]:
        if toks[0] in (EXISTS, FORALL):
            raise ParseError("quantifier line after clauses", lineno)
    return PrenexQbf(tuple(prefix), Cnf(n, tuple(_clauses(n, m, body[rest:]))))


def format_dimacs(cnf: Cnf, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines += [" ".join(str(l.to_int()) for l in c) + (" 0" if c else "0") for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def format_qdimacs(q: PrenexQbf, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {q.matrix.num_vars} {len(q.matrix.clauses)}")
    for quant, v in q.prefix:
        lines.append(f"{quant} {v} 0")
    lines += [" ".join(str(l.to_int()) for l in c) + (" 0" if c else "0") for c in q.matrix.clauses]
    return "\n".join(lines) + "\n"


# -- oracles ---------------------------------------------------------------

def _masks(clauses: Iterable[Clause]) -> list[tuple[int, int]]:
    """Per clause: (bits of positive vars, bits of negated vars); x_i is bit i-1."""
    out = []
    for c in clauses:
        pos = neg = 0
        for lit in c:
            if lit.negated:
                neg |= 1 << (lit.var - 1)
            else:
                pos |= 1 << (lit.var - 1)
        out.append((pos, neg))
    return out


def _holds(masks: list[tuple[int, int]], bits: int) -> bool:
    return all((bits & pos) or (~bits & neg) for pos, neg in masks)


def brute_force_sat(cnf: Cnf) -> dict[int, bool] | None:
    """Least satisfying assignment in binary counting order (x1 is the low bit)."""
    n = cnf.num_vars
    if n > SAT_GUARD:
        raise LimitExceeded(f"brute force limited to {SAT_GUARD} variables, got {n}")
    masks = _masks(cnf.clauses)
    for bits in range(1 << n):
        if _holds(masks, bits):
            return {v: bool(bits >> (v - 1) & 1) for v in range(1, n + 1)}
    return None


def eval_nnf_qbf(q: NnfQbf) -> bool:
    """Evaluate ``¬∀x_N ... ¬∀x_1: matrix`` by recursion on the level.

    Level 0 is the matrix; level n is ``not (level(n-1)[x_n=0] and
    level(n-1)[x_n=1])``. A variable absent from the matrix gives equal
    branches, so its level is evaluated once.
    """
    n = q.num_vars
    if n > QBF_GUARD:
        raise LimitExceeded(f"QBF evaluation limited to {QBF_GUARD} variables, got {n}")
    masks = _masks(q.matrix.clauses)
    used = 0
    for pos, neg in masks:
        used |= pos | neg

    def level(m: int, bits: int) -> bool:
        if m == 0:
            return _holds(masks, bits)
        bit = 1 << (m - 1)
        if not used & bit:
            return not level(m - 1, bits)
        return not (level(m - 1, bits) and level(m - 1, bits | bit))

    return level(n, 0)


def eval_prenex_qbf(q: PrenexQbf) -> bool:
    """Brute-force truth value; free variables are outermost existentials."""
    prefix = q.closed_prefix()
    if len(prefix) > QBF_GUARD:
        raise LimitExceeded(f"QBF evaluation limited to {QBF_GUARD} variables, got {len(prefix)}")
    masks = _masks(q.matrix.clauses)

    def value(i: int, bits: int) -> bool:
        if i == len(prefix):
            return _holds(masks, bits)
        quant, v = prefix[i]
        branches = (value(i + 1, bits), value(i + 1, bits | 1 << (v - 1)))
        return any(branches) if quant == EXISTS else all(branches)

    return value(0, 0)


# -- normalization ---------------------------------------------------------

class PreprocessError(ValidationError):
    pass


def _clean(c: Sequence[Literal]) -> Clause | None:
    """Deduplicate literals; None for a tautology."""
    lits = tuple(dict.fromkeys(c))
    vars_ = {}
    for lit in lits:
        if vars_.get(lit.var, lit.negated) != lit.negated:
            return None
        vars_[lit.var] = lit.negated
    return lits


def preprocess_3cnf(cnf: Cnf) -> Cnf:
    """Drop tautologies, deduplicate, require exactly three distinct variables
    per clause, and order each clause by descending variable index."""
    out = []
    for k, c in enumerate(cnf.clauses, start=1):
        cleaned = _clean(c)
        if cleaned is None:
            continue
        if len(cleaned) != 3:
            raise PreprocessError(
                f"clause {k} has {len(cleaned)} distinct variables after cleanup, expected 3"
            )
        out.append(tuple(sorted(cleaned, key=lambda l: -l.var)))
    return Cnf(cnf.num_vars, tuple(out))


def split_clause(c: Sequence[Literal], z: int) -> tuple[Clause, Clause]:
    """One splitting step with fresh ``z``: ``(L1 ∨ L2 ∨ z)`` and ``(¬z ∨ L3 ∨ ... ∨ Lℓ)``.

    ``∃z`` of the conjunction is equivalent to the original clause.
    """
    if len(c) < 4:
        raise ValidationError("only clauses with more than three literals are split")
    return (c[0], c[1], Literal(z)), (Literal(z, True),) + tuple(c[2:])


def normalize_to_3qbf(q: PrenexQbf) -> NnfQbf:
    """Rewrite into the ``¬∀`` chain form with a 3-CNF matrix.

    1. clauses longer than three are split with fresh innermost ∃ variables;
    2. shorter ones are padded with fresh innermost ∀ variables;
    3. dummy variables make the prefix alternate ∃∀...∃∀ (∃ outermost);
    4. reading ∃z as ¬∀z¬ turns that prefix into the chain unchanged.

    Variables are renumbered so that the innermost one is x_1.
    """
    next_var = q.matrix.num_vars + 1
    fresh: list[tuple[str, int]] = []
    clauses: list[Clause] = []

    def new_var(quant: str) -> int:
        nonlocal next_var
        v = next_var
        next_var += 1
        fresh.append((quant, v))
        return v

    for c in q.matrix.clauses:
        lits = _clean(c)
        if lits is None:
            continue
        while len(lits) > 3:
            head, lits = split_clause(lits, new_var(EXISTS))
            clauses.append(head)
        while len(lits) < 3:
            lits = lits + (Literal(new_var(FORALL)),)
        clauses.append(lits)

    prefix = list(q.closed_prefix()) + fresh
    chain: list[int] = []
    expected = EXISTS
    for quant, v in prefix:
        if quant != expected:
            chain.append(new_var(expected))
            expected = quant
        chain.append(v)
        expected = FORALL if expected == EXISTS else EXISTS
    if expected == FORALL or not chain:
        # close with an innermost ∀ (or build the smallest chain ∃∀)
        if not chain:
            chain.append(new_var(EXISTS))
        chain.append(new_var(FORALL))

    n = len(chain)
    rename = {v: n - i for i, v in enumerate(chain)}
    matrix = Cnf(n, tuple(tuple(Literal(rename[l.var], l.negated) for l in c) for c in clauses))
    return NnfQbf(n, preprocess_3cnf(matrix))
