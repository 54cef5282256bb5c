"""G-automata: deterministic, complete, invertible letter-to-letter transducers.

Letters are the integers ``0 .. k-1``; states are named by whitespace-free
tokens. An automaton is immutable once built. Its state order is canonical
and independent of how the transitions were listed (see ``_canonical_order``),
so serialization is byte-stable.
"""

from __future__ import annotations

import graphlib
from collections import deque
from functools import cached_property
from typing import Iterable, Iterator

from .errors import NotFinitaryError, ParseError, ValidationError

Transition = tuple[str, int, int, str]

HEADER = "gaut v1"


def check_state_name(name: str) -> str | None:
    """Return a complaint about ``name`` as a state token, or None if fine."""
    if not name or any(ch.isspace() for ch in name):
        return "state names must be non-empty and whitespace-free"
    if name[0] in "#@":
        return f"state name {name!r} may not start with '#' or '@'"
    if name == "-" or name.endswith("^-1"):
        return f"state name {name!r} clashes with the sequence syntax"
    return None


class GAutomaton:
    """An invertible letter-to-letter transducer over ``range(alphabet_size)``.

    ``transitions`` lists every ``(p, a, b, q)`` meaning: in state ``p``
    reading ``a``, write ``b`` and move to ``q``. All invariants are checked
    here; a constructed instance is always valid.
    """

    def __init__(
        self,
        alphabet_size: int,
        transitions: Iterable[Transition],
        identity: str | None = None,
    ):
        if alphabet_size < 1:
            raise ValidationError("alphabet size must be at least 1")
        k = alphabet_size
        table: dict[str, list[tuple[int, str] | None]] = {}
        for p, a, b, q in transitions:
            for name in (p, q):
                bad = check_state_name(name)
                if bad:
                    raise ValidationError(bad)
            for letter in (a, b):
                if not 0 <= letter < k:
                    raise ValidationError(f"letter {letter} out of range for alphabet {k}")
            row = table.setdefault(p, [None] * k)
            if row[a] is not None:
                raise ValidationError(f"duplicate transition for state {p} on letter {a}")
            row[a] = (b, q)
            table.setdefault(q, [None] * k)

        if not table:
            raise ValidationError("automaton has no states")
        for p, row in table.items():
            missing = [a for a, cell in enumerate(row) if cell is None]
            if missing:
                raise ValidationError(f"missing transition for state {p} on letter {missing[0]}")
            if len({cell[0] for cell in row}) != k:
                raise ValidationError(f"non-bijective output column at {p}")

        order = _canonical_order(table, k)
        index = {name: i for i, name in enumerate(order)}
        self.alphabet_size = k
        self.states: tuple[str, ...] = tuple(order)
        self.index: dict[str, int] = index
        self.out: tuple[tuple[int, ...], ...] = tuple(
            tuple(table[p][a][0] for a in range(k)) for p in order
        )
        self.nxt: tuple[tuple[int, ...], ...] = tuple(
            tuple(index[table[p][a][1]] for a in range(k)) for p in order
        )
        pre = []
        for row in self.out:
            inv = [0] * k
            for a, b in enumerate(row):
                inv[b] = a
            pre.append(tuple(inv))
        self.pre: tuple[tuple[int, ...], ...] = tuple(pre)
        self.is_identity: tuple[bool, ...] = tuple(
            all(self.out[i][a] == a and self.nxt[i][a] == i for a in range(k))
            for i in range(len(order))
        )

        if identity is not None:
            if identity not in index:
                raise ValidationError(f"declared identity state {identity} does not exist")
            if not self.is_identity[index[identity]]:
                raise ValidationError(f"declared identity state {identity} is not an identity")
        self.identity = identity

    def __repr__(self) -> str:
        return f"GAutomaton(alphabet_size={self.alphabet_size}, states={len(self.states)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GAutomaton):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @cached_property
    def _key(self):
        return (self.alphabet_size, self.identity, frozenset(self.transitions()))

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: str) -> bool:
        return state in self.index

    def transitions(self) -> Iterator[Transition]:
        """Yield all transitions sorted by (state index, input letter)."""
        for i, p in enumerate(self.states):
            for a in range(self.alphabet_size):
                yield p, a, self.out[i][a], self.states[self.nxt[i][a]]

    def successors(self, i: int) -> set[int]:
        return set(self.nxt[i])


def _canonical_order(table: dict[str, list], k: int) -> list[str]:
    """Breadth-first discovery order, independent of transition listing order.

    Roots are the states without incoming edges from other states, taken in
    name order; targets are discovered in letter order. States left over
    (only reachable through cycles) start new searches, smallest name first.
    Listing transitions in this order makes it the first-seen order of the text.
    """
    has_incoming = set()
    for p, row in table.items():
        for _, q in row:
            if q != p:
                has_incoming.add(q)
    roots = sorted(p for p in table if p not in has_incoming)
    seen: dict[str, None] = {}

    def visit(root: str) -> None:
        seen[root] = None
        queue = deque([root])
        while queue:
            p = queue.popleft()
            for _, q in table[p]:
                if q not in seen:
                    seen[q] = None
                    queue.append(q)

    for root in roots:
        if root not in seen:
            visit(root)
    for p in sorted(table):
        if p not in seen:
            visit(p)
    return list(seen)


# -- text format -----------------------------------------------------------

def _tokens(line: str) -> list[tuple[str, int]]:
    """Split a line into (token, column) pairs, dropping a trailing comment."""
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line[i] == "#":
            break
        j = i
        while j < n and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _int_token(tok: str, col: int, lineno: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", lineno, col) from None
    if tok.strip() != tok or not tok.lstrip("-").isdigit():
        raise ParseError(f"expected integer {what}, got {tok!r}", lineno, col)
    return value


def _decode(text: bytes | str) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 ({exc.reason})") from None
    return text


def parse_automaton(text: bytes | str) -> GAutomaton:
    """Parse the ``gaut v1`` format.

    Syntax problems are reported as :class:`ParseError` with a position;
    semantic ones (missing transitions, a non-bijective column, a bogus
    identity declaration) as :class:`ValidationError`.
    """
    src = _decode(text)
    header_seen = False
    alphabet: int | None = None
    identity: str | None = None
    transitions: list[Transition] = []
    seen: dict[tuple[str, int], int] = {}

    for lineno, line in enumerate(src.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if not header_seen:
            if [t for t, _ in toks] != ["gaut", "v1"]:
                raise ParseError(f"expected header {HEADER!r}", lineno, col)
            header_seen = True
            continue
        if alphabet is None:
            if head != "alphabet" or len(toks) != 2:
                raise ParseError("expected 'alphabet <k>'", lineno, col)
            alphabet = _int_token(*toks[1], lineno, "alphabet size")
            if alphabet < 1:
                raise ParseError("alphabet size must be at least 1", lineno, toks[1][1])
            continue
        if head == "identity":
            if len(toks) != 2:
                raise ParseError("expected 'identity <state>'", lineno, col)
            if identity is not None or transitions:
                raise ParseError("identity must be declared once, before transitions", lineno, col)
            identity = toks[1][0]
            continue
        if head != "trans":
            raise ParseError(f"unknown directive {head!r}", lineno, col)
        if len(toks) != 5:
            raise ParseError("expected 'trans <p> <a> <b> <q>'", lineno, col)
        (p, pcol), (a_tok, acol), (b_tok, bcol), (q, qcol) = toks[1:]
        for name, c in ((p, pcol), (q, qcol)):
            bad = check_state_name(name)
            if bad:
                raise ParseError(bad, lineno, c)
        a = _int_token(a_tok, acol, lineno, "input letter")
        b = _int_token(b_tok, bcol, lineno, "output letter")
        for letter, c in ((a, acol), (b, bcol)):
            if not 0 <= letter < alphabet:
                raise ParseError(f"letter {letter} out of range [0, {alphabet})", lineno, c)
        if (p, a) in seen:
            raise ParseError(
                f"duplicate transition for state {p} on letter {a} (first on line {seen[p, a]})",
                lineno, col,
            )
        seen[p, a] = lineno
        transitions.append((p, a, b, q))

    if not header_seen:
        raise ParseError(f"missing header {HEADER!r}", 1, 1)
    if alphabet is None:
        raise ParseError("missing 'alphabet' line")
    return GAutomaton(alphabet, transitions, identity)


def serialize_automaton(aut: GAutomaton, comments: Iterable[str] = ()) -> bytes:
    """Canonical ``gaut v1`` text. ``comments`` become leading ``#`` lines."""
    lines = [f"# {c}" if c else "#" for c in comments]
    lines.append(HEADER)
    lines.append(f"alphabet {aut.alphabet_size}")
    if aut.identity is not None:
        lines.append(f"identity {aut.identity}")
    lines.extend(f"trans {p} {a} {b} {q}" for p, a, b, q in aut.transitions())
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- queries ---------------------------------------------------------------

def step(aut: GAutomaton, p: str, a: int) -> tuple[int, str]:
    i = aut.index[p]
    return aut.out[i][a], aut.states[aut.nxt[i][a]]


def inverse_step(aut: GAutomaton, p: str, b: int) -> tuple[int, str]:
    """Transition of ``p^-1`` on input ``b``: the ``(a, q)`` with ``step(p, a) == (b, q)``.

    The returned ``q`` stands for ``q^-1`` in the inverted cross diagram.
    """
    i = aut.index[p]
    a = aut.pre[i][b]
    return a, aut.states[aut.nxt[i][a]]


def identity_states(aut: GAutomaton) -> list[str]:
    return [p for p, ident in zip(aut.states, aut.is_identity) if ident]


def identity_state(aut: GAutomaton) -> str | None:
    """The least-index identity state, or None when there is none."""
    for p, ident in zip(aut.states, aut.is_identity):
        if ident:
            return p
    return None


def _successor_graph(aut: GAutomaton) -> dict[int, set[int]]:
    graph = {}
    for i in range(len(aut.states)):
        succ = set(aut.nxt[i])
        if aut.is_identity[i]:
            succ.discard(i)
        graph[i] = succ
    return graph


def is_finitary(aut: GAutomaton) -> bool:
    """True iff the only cycles are the self-loops of identity states."""
    try:
        _depths(aut)
    except NotFinitaryError:
        return False
    return True


def _depths(aut: GAutomaton) -> tuple[int, ...]:
    cached = aut.__dict__.get("_depth_cache")
    if cached is not None:
        if isinstance(cached, NotFinitaryError):
            raise cached
        return cached
    graph = _successor_graph(aut)
    try:
        order = list(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as exc:
        cycle = [aut.states[i] for i in exc.args[1]]
        err = NotFinitaryError(f"automaton is not finitary: cycle through {' -> '.join(cycle)}")
        aut.__dict__["_depth_cache"] = err
        raise err from None
    depth = [0] * len(aut.states)
    # successors come first in static_order
    for i in order:
        if not aut.is_identity[i]:
            depth[i] = 1 + max(depth[j] for j in graph[i])
    result = tuple(depth)
    aut.__dict__["_depth_cache"] = result
    return result


def state_depth(aut: GAutomaton, p: str) -> int:
    """Longest number of letters read from ``p`` before sitting at an identity."""
    return _depths(aut)[aut.index[p]]


def depth(aut: GAutomaton) -> int:
    """Minimal d such that every path of length d ends at an identity state.

    Raises NotFinitaryError for automata with other cycles.
    """
    return max(_depths(aut), default=0)
