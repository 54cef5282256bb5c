"""Left action of signed state sequences on words, and the word problem.

A sequence is written left to right but acts right to left: the rightmost
symbol transduces the input word first. Positive symbols follow the
transition table; negative ones follow the inverted cross diagram
(``inverse_step``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .automaton import GAutomaton, depth
from .errors import ParseError, ValidationError


class GenSymbol(NamedTuple):
    state: str
    sign: int = 1

    def inverse(self) -> GenSymbol:
        return GenSymbol(self.state, -self.sign)

    def __str__(self) -> str:
        return self.state if self.sign > 0 else f"{self.state}^-1"


StateSequence = tuple[GenSymbol, ...]
Word = tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a word-problem query: identity, or a word that is moved."""

    witness: Word | None = None

    @property
    def is_identity(self) -> bool:
        return self.witness is None

    def __str__(self) -> str:
        if self.witness is None:
            return "identity"
        return f"non-identity witness: {format_word(self.witness)}"


IDENTITY = Verdict()


def seq(*tokens: str) -> StateSequence:
    """Shorthand: ``seq("p", "q^-1")``."""
    return parse_sequence(" ".join(tokens)) if tokens else ()


# -- text formats ----------------------------------------------------------

def parse_sequence(text: str) -> StateSequence:
    toks = text.split()
    if toks == ["-"]:
        return ()
    if not toks:
        raise ParseError("empty sequence must be written '-'")
    out = []
    for tok in toks:
        if tok.endswith("^-1"):
            name, sign = tok[:-3], -1
        else:
            name, sign = tok, 1
        if not name or name == "-" or name[0] in "#@":
            raise ParseError(f"bad sequence token {tok!r}")
        out.append(GenSymbol(name, sign))
    return tuple(out)


def format_sequence(s: Iterable[GenSymbol]) -> str:
    return " ".join(str(g) for g in s) or "-"


def parse_word(text: str) -> Word:
    toks = text.split()
    if toks == ["-"]:
        return ()
    if not toks:
        raise ParseError("empty word must be written '-'")
    try:
        return tuple(int(t) for t in toks)
    except ValueError:
        raise ParseError(f"bad word {text!r}: expected integers") from None


def format_word(w: Iterable[int]) -> str:
    return " ".join(map(str, w)) or "-"


# -- core action -----------------------------------------------------------

def invert_sequence(s: Sequence[GenSymbol]) -> StateSequence:
    return tuple(GenSymbol(g.state, -g.sign) for g in reversed(s))


def _compile(aut: GAutomaton, s: Iterable[GenSymbol]) -> list[int]:
    """Encode symbols as ``2*index + (1 if inverse)``; ``code ^ 1`` inverts."""
    codes = []
    for g in s:
        try:
            i = aut.index[g.state]
        except KeyError:
            raise ValidationError(f"state {g.state!r} is not in the automaton") from None
        codes.append(2 * i + (g.sign < 0))
    return codes


def _check_word(aut: GAutomaton, word: Iterable[int]) -> list[int]:
    w = list(word)
    k = aut.alphabet_size
    for a in w:
        if not 0 <= a < k:
            raise ValidationError(f"letter {a} out of range for alphabet {k}")
    return w


def transduce_code(aut: GAutomaton, code: int, w: list[int]) -> int:
    """Run one encoded symbol across ``w`` in place; return the final state index."""
    i = code >> 1
    out, nxt, pre, is_id = aut.out, aut.nxt, aut.pre, aut.is_identity
    if code & 1:
        for j, x in enumerate(w):
            if is_id[i]:
                break
            a = pre[i][x]
            w[j] = a
            i = nxt[i][a]
    else:
        for j, x in enumerate(w):
            if is_id[i]:
                break
            w[j] = out[i][x]
            i = nxt[i][x]
    return i


def apply(aut: GAutomaton, s: Sequence[GenSymbol], word: Iterable[int]) -> Word:
    """``s ∘ word``: rightmost symbol first, each across the whole word."""
    w = _check_word(aut, word)
    for code in reversed(_compile(aut, s)):
        transduce_code(aut, code, w)
    return tuple(w)


def apply_with_residual(
    aut: GAutomaton, s: Sequence[GenSymbol], word: Iterable[int]
) -> tuple[Word, StateSequence]:
    """Like :func:`apply`, also returning the states each symbol ends in (signs kept)."""
    w = _check_word(aut, word)
    codes = _compile(aut, s)
    residual = [None] * len(codes)
    for pos in range(len(codes) - 1, -1, -1):
        code = codes[pos]
        end = transduce_code(aut, code, w)
        residual[pos] = GenSymbol(aut.states[end], -1 if code & 1 else 1)
    return tuple(w), tuple(residual)


# -- word problem ----------------------------------------------------------

def _reduce(aut: GAutomaton, codes: Iterable[int]) -> tuple[int, ...]:
    """Drop identity-state symbols and cancel adjacent ``p p^-1`` pairs.

    Both rewrites preserve the action on every word.
    """
    is_id = aut.is_identity
    stack: list[int] = []
    for c in codes:
        if is_id[c >> 1]:
            continue
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def decide_identity(aut: GAutomaton, s: Sequence[GenSymbol]) -> Verdict:
    """Decide whether ``s`` acts trivially on all words.

    Depth-first search over the letter tree up to ``depth(aut)``, carrying
    the residual sequence of the current prefix. A subtree is pruned once
    the reduced residual is empty (only identity states left, after
    cancellation) or was already shown trivial at the same remaining depth.
    A witness is the lexicographically least moved word of length
    ``depth(aut)``, which is what :func:`decide_identity_exhaustive` reports.
    """
    d = depth(aut)
    k = aut.alphabet_size
    out, nxt, pre = aut.out, aut.nxt, aut.pre
    trivial: set[tuple[int, tuple[int, ...]]] = set()

    def search(residual: tuple[int, ...], remaining: int) -> list[int] | None:
        if not residual or remaining == 0 or (remaining, residual) in trivial:
            return None
        for a in range(k):
            x = a
            moved = list(residual)
            for pos in range(len(residual) - 1, -1, -1):
                code = residual[pos]
                i = code >> 1
                if code & 1:
                    y = pre[i][x]
                    moved[pos] = 2 * nxt[i][y] + 1
                else:
                    y = out[i][x]
                    moved[pos] = 2 * nxt[i][x]
                x = y
            if x != a:
                return [a] + [0] * (remaining - 1)
            found = search(_reduce(aut, moved), remaining - 1)
            if found is not None:
                return [a] + found
        trivial.add((remaining, residual))
        return None

    found = search(_reduce(aut, _compile(aut, s)), d)
    return IDENTITY if found is None else Verdict(tuple(found))


def decide_identity_exhaustive(aut: GAutomaton, s: Sequence[GenSymbol]) -> Verdict:
    """Reference decision: try every word of length ``depth(aut)`` in lex order."""
    d = depth(aut)
    s = tuple(s)
    for word in product(range(aut.alphabet_size), repeat=d):
        if apply(aut, s, word) != word:
            return Verdict(word)
    return IDENTITY
