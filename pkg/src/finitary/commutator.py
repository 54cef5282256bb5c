"""Balanced iterated commutators of state sequences.

``B[q_D, ..., q_1]`` is split in the middle: with ``U`` the commutator of
the upper half and ``L`` of the lower half,

    B = [U^beta, L^alpha]
      = beta^-1 U^-1 beta  alpha^-1 L^-1 alpha  beta^-1 U beta  alpha^-1 L alpha

Entries are given top-down, so ``q_1`` is the last list element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .action import GenSymbol, StateSequence, invert_sequence
from .errors import ValidationError


def conjugate_sequence(q: Sequence[GenSymbol], p: Sequence[GenSymbol]) -> StateSequence:
    """``q^p = p^-1 q p``."""
    return invert_sequence(p) + tuple(q) + tuple(p)


def commutator_sequence(q: Sequence[GenSymbol], p: Sequence[GenSymbol]) -> StateSequence:
    """``[q, p] = q^-1 p^-1 q p``."""
    return invert_sequence(q) + invert_sequence(p) + tuple(q) + tuple(p)


@dataclass(frozen=True)
class BalancedSpec:
    entries: tuple[StateSequence, ...]
    alpha: StateSequence
    beta: StateSequence

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "beta", tuple(self.beta))
        n = len(self.entries)
        if n == 0 or n & (n - 1):
            raise ValidationError(f"number of entries must be a power of two, got {n}")


def _signed(s: Sequence[GenSymbol], sign: int) -> Iterator[GenSymbol]:
    if sign > 0:
        yield from s
    else:
        for g in reversed(s):
            yield GenSymbol(g.state, -g.sign)


def _expand(spec: BalancedSpec, lo: int, hi: int, sign: int) -> Iterator[GenSymbol]:
    # entries[lo:hi], inverted when sign < 0
    if hi - lo == 1:
        yield from _signed(spec.entries[lo], sign)
        return
    mid = (lo + hi) // 2
    a, b = spec.alpha, spec.beta
    upper, lower = ("sub", lo, mid), ("sub", mid, hi)
    pieces = (
        (b, -1), (upper, -1), (b, 1),
        (a, -1), (lower, -1), (a, 1),
        (b, -1), (upper, 1), (b, 1),
        (a, -1), (lower, 1), (a, 1),
    )
    if sign < 0:
        pieces = tuple((part, -s) for part, s in reversed(pieces))
    for part, s in pieces:
        if part is upper or part is lower:
            yield from _expand(spec, part[1], part[2], s)
        else:
            yield from _signed(part, s)


def iter_balanced_commutator(spec: BalancedSpec, sign: int = 1) -> Iterator[GenSymbol]:
    """Stream the expansion symbol by symbol; only one recursion path is live."""
    return _expand(spec, 0, len(spec.entries), sign)


def balanced_commutator(spec: BalancedSpec) -> StateSequence:
    return tuple(iter_balanced_commutator(spec))


def balanced_length(spec: BalancedSpec) -> int:
    """Length of the expansion without generating it."""
    extra = 4 * (len(spec.alpha) + len(spec.beta))

    def length(lo: int, hi: int) -> int:
        if hi - lo == 1:
            return len(spec.entries[lo])
        mid = (lo + hi) // 2
        return 2 * length(lo, mid) + 2 * length(mid, hi) + extra

    return length(0, len(spec.entries))
