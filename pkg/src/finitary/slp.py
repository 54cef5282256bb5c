"""Straight-line programs over signed state symbols.

A rule's right-hand side mixes terminals (``GenSymbol``) and signed
references to other rules (``NonTerminal``). A reference with sign -1
stands for the inverse of the referenced expansion: reversed, with every
symbol inverted. That replaces explicit mirrored rules.

The expansion may be exponentially long, so :func:`stream_apply` walks the
derivation with an explicit frame stack instead of decompressing.
"""

from __future__ import annotations

import graphlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .action import (
    IDENTITY,
    GenSymbol,
    StateSequence,
    Verdict,
    _check_word,
    transduce_code,
)
from .automaton import GAutomaton, _decode, _tokens, depth
from .errors import LimitExceeded, ParseError, ValidationError

HEADER = "slp v1"
MAX_LENGTH = (1 << 128) - 1
DEFAULT_LIMIT = 10**7


class NonTerminal(NamedTuple):
    name: str
    sign: int = 1

    def __str__(self) -> str:
        return f"@{self.name}" if self.sign > 0 else f"@{self.name}^-1"


SymbolRef = Union[GenSymbol, NonTerminal]


class Slp:
    """An acyclic grammar with one rule per nonterminal, generating one sequence."""

    def __init__(self, rules: dict[str, Sequence[SymbolRef]], start: str):
        self.rules: dict[str, tuple[SymbolRef, ...]] = {
            name: tuple(rhs) for name, rhs in rules.items()
        }
        self.start = start
        if start not in self.rules:
            raise ValidationError(f"start symbol {start} has no rule")
        graph = {}
        for name, rhs in self.rules.items():
            refs = set()
            for sym in rhs:
                if isinstance(sym, NonTerminal):
                    if sym.name not in self.rules:
                        raise ValidationError(f"rule {name} references {sym.name}, which has no rule")
                    refs.add(sym.name)
            graph[name] = refs
        try:
            # children first
            self._bottom_up = tuple(graphlib.TopologicalSorter(graph).static_order())
        except graphlib.CycleError as exc:
            raise ValidationError(f"cycle detected: {' -> '.join(exc.args[1])}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Slp):
            return NotImplemented
        return self.start == other.start and self._tagged() == other._tagged()

    def _tagged(self):
        # GenSymbol and NonTerminal are both (str, int) tuples; keep them apart
        return {
            name: tuple((isinstance(s, NonTerminal), s) for s in rhs)
            for name, rhs in self.rules.items()
        }

    def __repr__(self) -> str:
        return f"Slp(start={self.start!r}, rules={len(self.rules)})"

    def terminals(self) -> set[str]:
        return {s.state for rhs in self.rules.values() for s in rhs if isinstance(s, GenSymbol)}

    def inverted(self) -> Slp:
        """Same rules, start symbol referenced with sign -1 through a fresh rule."""
        name = self.start + "^inv"
        while name in self.rules:
            name += "'"
        return Slp({**self.rules, name: (NonTerminal(self.start, -1),)}, name)


# -- text format -----------------------------------------------------------

def _parse_symbol(tok: str) -> SymbolRef:
    sign = 1
    body = tok
    if body.endswith("^-1"):
        body, sign = body[:-3], -1
    if body.startswith("@"):
        if len(body) == 1:
            raise ValueError("empty nonterminal name")
        return NonTerminal(body[1:], sign)
    if not body or body.startswith("#") or body == "-":
        raise ValueError(f"bad terminal {tok!r}")
    return GenSymbol(body, sign)


def parse_slp(text: bytes | str) -> Slp:
    src = _decode(text)
    header_seen = False
    start: str | None = None
    rules: dict[str, tuple[SymbolRef, ...]] = {}
    for lineno, line in enumerate(src.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if not header_seen:
            if [t for t, _ in toks] != ["slp", "v1"]:
                raise ParseError(f"expected header {HEADER!r}", lineno, col)
            header_seen = True
            continue
        if start is None:
            if head != "start" or len(toks) != 2:
                raise ParseError("expected 'start <Name>'", lineno, col)
            start = toks[1][0]
            continue
        if head != "rule" or len(toks) < 2:
            raise ParseError("expected 'rule <Name> <sym>...'", lineno, col)
        name, ncol = toks[1]
        if name.startswith("@") or name.endswith("^-1"):
            raise ParseError(f"bad rule name {name!r}", lineno, ncol)
        if name in rules:
            raise ParseError(f"duplicate rule {name}", lineno, ncol)
        rhs = []
        for tok, tcol in toks[2:]:
            try:
                rhs.append(_parse_symbol(tok))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, tcol) from None
        rules[name] = tuple(rhs)
    if not header_seen:
        raise ParseError(f"missing header {HEADER!r}", 1, 1)
    if start is None:
        raise ParseError("missing 'start' line")
    return Slp(rules, start)


def rule_order(slp: Slp) -> list[str]:
    """Parents before children: reverse post-order from the start symbol
    (references visited left to right), then unreachable rules by name."""
    post: list[str] = []
    done: set[str] = set()

    def visit(root: str) -> None:
        stack = [(root, iter(slp.rules[root]))]
        done.add(root)
        while stack:
            name, it = stack[-1]
            for sym in it:
                if isinstance(sym, NonTerminal) and sym.name not in done:
                    done.add(sym.name)
                    stack.append((sym.name, iter(slp.rules[sym.name])))
                    break
            else:
                stack.pop()
                post.append(name)

    visit(slp.start)
    order = post[::-1]
    for name in sorted(slp.rules):
        if name not in done:
            post = []
            visit(name)
            order.extend(post[::-1])
    return order


def serialize_slp(slp: Slp, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" if c else "#" for c in comments]
    lines += [HEADER, f"start {slp.start}"]
    for name in rule_order(slp):
        rhs = " ".join(str(s) for s in slp.rules[name])
        lines.append(f"rule {name} {rhs}".rstrip())
    return "\n".join(lines) + "\n"


# -- length and decompression ----------------------------------------------

class ExpansionLength(NamedTuple):
    value: int
    saturated: bool


def _lengths(slp: Slp) -> dict[str, int]:
    lengths: dict[str, int] = {}
    for name in slp._bottom_up:
        total = 0
        for sym in slp.rules[name]:
            total += lengths[sym.name] if isinstance(sym, NonTerminal) else 1
        lengths[name] = min(total, MAX_LENGTH)
    return lengths


def expansion_length(slp: Slp) -> ExpansionLength:
    """Length of the generated sequence, saturating at 2^128 - 1."""
    n = _lengths(slp)[slp.start]
    return ExpansionLength(n, n >= MAX_LENGTH)


def decompress(slp: Slp, limit: int | None = DEFAULT_LIMIT) -> StateSequence:
    """The generated sequence; refuses (without partial output) above ``limit``.

    ``limit=None`` means no limit beyond the 128-bit saturation point.
    """
    n = expansion_length(slp)
    if n.saturated or (limit is not None and n.value > limit):
        shown = "at least 2^128-1" if n.saturated else str(n.value)
        raise LimitExceeded(f"expansion length {shown} exceeds limit {limit}")
    memo: dict[str, StateSequence] = {}
    for name in slp._bottom_up:
        parts: list[GenSymbol] = []
        for sym in slp.rules[name]:
            if isinstance(sym, GenSymbol):
                parts.append(sym)
            elif sym.sign > 0:
                parts.extend(memo[sym.name])
            else:
                parts.extend(GenSymbol(g.state, -g.sign) for g in reversed(memo[sym.name]))
        memo[name] = tuple(parts)
    return memo[slp.start]


# -- streaming -------------------------------------------------------------

@dataclass
class StreamStats:
    """Instrumentation for :func:`iter_terminals`."""

    terminals: int = 0
    peak_frames: int = 0


def iter_terminals(slp: Slp, stats: StreamStats | None = None) -> Iterator[tuple[str, int]]:
    """Yield the expansion's symbols as ``(state, sign)``, rightmost first.

    Each frame is ``[rhs, position, sign]``. A positive frame walks its rule
    from the right end; a negative one walks from the left with every sign
    flipped, which is exactly the rightmost-first order of the inverse.
    Since the grammar is acyclic a rule occurs at most once on the stack.
    """
    rules = slp.rules
    rhs = rules[slp.start]
    stack = [[rhs, len(rhs) - 1, 1]]
    peak = 1
    count = 0
    while stack:
        frame = stack[-1]
        rhs, pos, sign = frame
        if pos < 0 or pos >= len(rhs):
            stack.pop()
            continue
        frame[1] = pos - 1 if sign > 0 else pos + 1
        sym = rhs[pos]
        s = sign * sym.sign
        if isinstance(sym, NonTerminal):
            child = rules[sym.name]
            stack.append([child, len(child) - 1 if s > 0 else 0, s])
            if len(stack) > peak:
                peak = len(stack)
        else:
            count += 1
            yield sym.state, s
    if stats is not None:
        stats.terminals += count
        stats.peak_frames = max(stats.peak_frames, peak)


def stream_apply(
    aut: GAutomaton, slp: Slp, word: Iterable[int], stats: StreamStats | None = None
) -> tuple[int, ...]:
    """Apply the generated sequence to ``word`` without decompressing it.

    Memory is the word plus at most one frame per rule.
    """
    w = _check_word(aut, word)
    index = aut.index
    for state, sign in iter_terminals(slp, stats):
        try:
            i = index[state]
        except KeyError:
            raise ValidationError(f"state {state!r} is not in the automaton") from None
        transduce_code(aut, 2 * i + (sign < 0), w)
    return tuple(w)


class _Tables:
    def __init__(self, aut: GAutomaton):
        k = aut.alphabet_size
        self.k = k
        self.out = np.asarray(aut.out, dtype=np.int64).reshape(-1)
        self.pre = np.asarray(aut.pre, dtype=np.int64).reshape(-1)
        self.nxt = np.asarray(aut.nxt, dtype=np.int64).reshape(-1)
        self.is_id = np.asarray(aut.is_identity, dtype=bool)


def _transduce_many(t: _Tables, i: int, negative: bool, words: np.ndarray) -> None:
    """One symbol across every row of ``words`` (in place)."""
    if t.is_id[i]:
        return
    k = t.k
    state = np.full(words.shape[0], i, dtype=np.int64)
    for j in range(words.shape[1]):
        col = words[:, j]
        flat = state * k + col
        if negative:
            a = t.pre[flat]
            words[:, j] = a
            state = t.nxt[state * k + a]
        else:
            words[:, j] = t.out[flat]
            state = t.nxt[flat]
        if t.is_id[state].all():
            break


def stream_apply_many(
    aut: GAutomaton, slp: Slp, words: np.ndarray, stats: StreamStats | None = None
) -> np.ndarray:
    """Batched :func:`stream_apply`: one walk of the grammar, every row of
    ``words`` (an ``(m, n)`` integer array) transduced per symbol."""
    words = np.array(words, dtype=np.int64, copy=True)
    if words.ndim != 2:
        raise ValidationError("words must be a 2-d array")
    if words.size and (words.min() < 0 or words.max() >= aut.alphabet_size):
        raise ValidationError("letter out of range")
    if words.shape[1] == 0:
        for _ in iter_terminals(slp, stats):
            pass
        return words
    t = _Tables(aut)
    index = aut.index
    for state, sign in iter_terminals(slp, stats):
        try:
            i = index[state]
        except KeyError:
            raise ValidationError(f"state {state!r} is not in the automaton") from None
        _transduce_many(t, i, sign < 0, words)
    return words


def all_words(k: int, n: int, prefix: Sequence[int] = ()) -> np.ndarray:
    """Every word of length ``n`` starting with ``prefix``, in lexicographic order."""
    free = n - len(prefix)
    m = k**free
    words = np.empty((m, n), dtype=np.int64)
    words[:, : len(prefix)] = prefix
    idx = np.arange(m, dtype=np.int64)
    for j in range(n - 1, len(prefix) - 1, -1):
        words[:, j] = idx % k
        idx //= k
    return words


def _blocks(k: int, d: int, block: int) -> list[tuple[int, ...]]:
    """Prefixes splitting the length-d words into lex-ordered chunks of at most ``block``."""
    fixed = 0
    while fixed < d and k ** (d - fixed) > block:
        fixed += 1
    return [tuple(int(x) for x in row) for row in all_words(k, fixed)] if fixed else [()]


PERMUTATION_BUDGET = 1 << 24


def _state_permutations(aut: GAutomaton, states: Sequence[str], d: int) -> dict[tuple[str, int], np.ndarray]:
    """For each state and its inverse, its action on all ``k^d`` words of
    length d as a permutation of their lexicographic indices."""
    k = aut.alphabet_size
    words = all_words(k, d)
    weights = k ** np.arange(d - 1, -1, -1, dtype=np.int64)
    t = _Tables(aut)
    perms = {}
    for p in states:
        moved = words.copy()
        _transduce_many(t, aut.index[p], False, moved)
        forward = (moved @ weights).astype(np.int32)
        backward = np.empty_like(forward)
        backward[forward] = np.arange(forward.size, dtype=np.int32)
        perms[p, 1] = forward
        perms[p, -1] = backward
    return perms


def slp_decide_identity(
    aut: GAutomaton, slp: Slp, threads: int = 1, block: int = 1 << 16
) -> Verdict:
    """Decide whether the generated sequence acts trivially.

    All words of length ``depth(aut)`` are pushed through the streamed
    grammar at once, and the witness is the least moved word. When the
    word set is small enough, each state's action on it is tabulated once
    as an index permutation and every streamed terminal is a single
    gather; otherwise words are transduced block by block (lexicographic
    blocks, optionally on ``threads`` workers, least witness still wins).
    """
    d = depth(aut)
    k = aut.alphabet_size
    used = slp.terminals()
    missing = used - set(aut.index)
    if missing:
        raise ValidationError(f"states {sorted(missing)} are not in the automaton")
    if d == 0:
        return IDENTITY

    if k**d * max(len(used), 1) * 2 <= PERMUTATION_BUDGET:
        perms = _state_permutations(aut, sorted(used), d)
        current = np.arange(k**d, dtype=np.int32)
        for state, sign in iter_terminals(slp):
            current = perms[state, sign][current]
        hits = np.flatnonzero(current != np.arange(k**d, dtype=np.int32))
        if hits.size:
            return Verdict(tuple(int(x) for x in all_words(k, d)[hits[0]]))
        return IDENTITY

    def check(prefix: tuple[int, ...]) -> tuple[int, ...] | None:
        words = all_words(k, d, prefix)
        moved = np.any(stream_apply_many(aut, slp, words) != words, axis=1)
        hits = np.flatnonzero(moved)
        if hits.size:
            return tuple(int(x) for x in words[hits[0]])
        return None

    prefixes = _blocks(k, d, block)
    if threads <= 1:
        for prefix in prefixes:
            found = check(prefix)
            if found is not None:
                return Verdict(found)
        return IDENTITY
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for found in pool.map(check, prefixes):
            # map yields in submission (lexicographic) order
            if found is not None:
                return Verdict(found)
    return IDENTITY


def slp_from_sequence(s: Sequence[GenSymbol], name: str = "S") -> Slp:
    return Slp({name: tuple(s)}, name)
