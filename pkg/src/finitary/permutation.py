"""Permutations of the alphabet, and the A5 triple used by the reductions.

``compose(g, h)`` is ``g ∘ h``: ``h`` acts first. This matches the action
of a state sequence ``g h`` whose rightmost symbol acts first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValidationError(f"{images} is not a permutation of 0..{len(images) - 1}")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def __len__(self) -> int:
        return len(self.images)

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.images)) + ")"

    @property
    def is_identity(self) -> bool:
        return all(a == b for a, b in enumerate(self.images))


def identity(k: int) -> Permutation:
    return Permutation(tuple(range(k)))


def parse_permutation(text: str) -> Permutation:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError(f"permutation literal must look like '(i0 i1 ...)': {text!r}")
    try:
        return Permutation(tuple(int(t) for t in body[1:-1].split()))
    except ValueError:
        raise ParseError(f"bad permutation literal {text!r}") from None


def _same_size(*perms: Permutation) -> None:
    if len({len(p) for p in perms}) > 1:
        raise ValidationError("permutations act on different alphabets")


def compose(g: Permutation, h: Permutation) -> Permutation:
    """``a ↦ g(h(a))``."""
    _same_size(g, h)
    return Permutation(tuple(g.images[x] for x in h.images))


def inverse(g: Permutation) -> Permutation:
    inv = [0] * len(g)
    for a, b in enumerate(g.images):
        inv[b] = a
    return Permutation(tuple(inv))


def compose_all(perms: Iterable[Permutation], k: int) -> Permutation:
    """Product of a sequence written left to right (rightmost acts first)."""
    result = identity(k)
    for p in perms:
        result = compose(result, p)
    return result


def conjugate(g: Permutation, k: Permutation) -> Permutation:
    """``g^k = k^-1 g k``."""
    return compose_all([inverse(k), g, k], len(g))


def commutator(h: Permutation, g: Permutation) -> Permutation:
    """``[h, g] = h^-1 g^-1 h g``."""
    return compose_all([inverse(h), inverse(g), h, g], len(g))


def parity(g: Permutation) -> int:
    """0 for even, 1 for odd (via cycle decomposition)."""
    seen = [False] * len(g)
    transpositions = 0
    for start in range(len(g)):
        if seen[start]:
            continue
        length = 0
        a = start
        while not seen[a]:
            seen[a] = True
            a = g.images[a]
            length += 1
        transpositions += length - 1
    return transpositions % 2


def is_even(g: Permutation) -> bool:
    return parity(g) == 0


def alternating_group(n: int) -> list[Permutation]:
    """All even permutations of ``n`` points, in lexicographic order of images."""
    return [p for p in map(Permutation, permutations(range(n))) if is_even(p)]


@dataclass(frozen=True)
class SigmaTriple:
    sigma: Permutation
    alpha: Permutation
    beta: Permutation

    def holds(self) -> bool:
        s = self.sigma
        return (
            not s.is_identity
            and all(is_even(p) for p in (self.sigma, self.alpha, self.beta))
            and commutator(conjugate(s, self.beta), conjugate(s, self.alpha)) == s
        )


@lru_cache(maxsize=None)
def find_sigma_triple() -> SigmaTriple:
    """Least ``(sigma, alpha, beta)`` in A5 with ``sigma != 1`` and
    ``sigma = [sigma^beta, sigma^alpha]``, searching A5^3 lexicographically.

    The search runs over index tables of the 60 group elements, so each
    candidate costs a handful of lookups.
    """
    elems = alternating_group(5)
    pos = {p.images: i for i, p in enumerate(elems)}
    n = len(elems)
    mul = [[pos[compose(g, h).images] for h in elems] for g in elems]
    inv = [pos[inverse(g).images] for g in elems]

    def conj(g: int, k: int) -> int:
        return mul[inv[k]][mul[g][k]]

    for s in range(n):
        if elems[s].is_identity:
            continue
        for a in range(n):
            sa = conj(s, a)
            sa_inv = inv[sa]
            for b in range(n):
                sb = conj(s, b)
                # [sb, sa] = sb^-1 sa^-1 sb sa
                if mul[mul[inv[sb]][sa_inv]][mul[sb][sa]] == s:
                    return SigmaTriple(elems[s], elems[a], elems[b])
    raise AssertionError("A5 has no sigma triple")  # unreachable for A5


def balanced_commutator_value(
    entries: Sequence[Permutation], alpha: Permutation, beta: Permutation
) -> Permutation:
    """Evaluate ``B_{beta,alpha}[entries]`` in the permutation group.

    ``entries`` is listed top-down (``q_D`` first, ``q_1`` last); its length
    must be a power of two.
    """
    n = len(entries)
    if n == 0 or n & (n - 1):
        raise ValidationError(f"number of entries must be a power of two, got {n}")
    if n == 1:
        return entries[0]
    upper = balanced_commutator_value(entries[: n // 2], alpha, beta)
    lower = balanced_commutator_value(entries[n // 2:], alpha, beta)
    return commutator(conjugate(upper, beta), conjugate(lower, alpha))
