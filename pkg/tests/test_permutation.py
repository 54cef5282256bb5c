import itertools
import random

import pytest

from finitary.errors import ParseError, ValidationError
from finitary.permutation import (
    Permutation,
    SigmaTriple,
    alternating_group,
    balanced_commutator_value,
    commutator,
    compose,
    compose_all,
    conjugate,
    find_sigma_triple,
    identity,
    inverse,
    is_even,
    parity,
    parse_permutation,
)

FROZEN_SIGMA = Permutation((0, 1, 3, 4, 2))
FROZEN_ALPHA = Permutation((1, 2, 0, 3, 4))
FROZEN_BETA = Permutation((2, 1, 3, 0, 4))


def random_perm(rng: random.Random, k: int = 5) -> Permutation:
    images = list(range(k))
    rng.shuffle(images)
    return Permutation(tuple(images))


def naive_least_triple():
    """Independent search with plain tuples and inversion-count parity."""

    def even(p):
        return sum(p[i] > p[j] for i in range(5) for j in range(i + 1, 5)) % 2 == 0

    def mul(g, h):  # h first
        return tuple(g[h[a]] for a in range(5))

    def inv(g):
        out = [0] * 5
        for a, b in enumerate(g):
            out[b] = a
        return tuple(out)

    a5 = [p for p in itertools.permutations(range(5)) if even(p)]
    ident = tuple(range(5))
    for s in a5:
        if s == ident:
            continue
        for a in a5:
            sa = mul(inv(a), mul(s, a))
            for b in a5:
                sb = mul(inv(b), mul(s, b))
                if mul(mul(inv(sb), inv(sa)), mul(sb, sa)) == s:
                    return s, a, b
    return None


class TestArithmetic:
    def test_validation_and_text(self):
        with pytest.raises(ValidationError):
            Permutation((0, 0, 1))
        p = parse_permutation("(1 2 0)")
        assert p.images == (1, 2, 0) and str(p) == "(1 2 0)"
        with pytest.raises(ParseError):
            parse_permutation("1 2 0")
        with pytest.raises(ParseError):
            parse_permutation("(a b)")

    def test_compose_order(self):
        g, h = Permutation((1, 0, 2)), Permutation((0, 2, 1))
        assert compose(g, h)(1) == g(h(1)) == 2
        assert compose_all([g, h], 3) == compose(g, h)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            compose(identity(2), identity(3))

    def test_examples(self):
        rng = random.Random(31)
        for _ in range(50):
            g = random_perm(rng)
            assert commutator(g, identity(5)).is_identity
            assert conjugate(g, identity(5)) == g
        assert is_even(Permutation((1, 2, 3, 4, 0)))
        assert parity(Permutation((1, 0, 2))) == 1
        assert parity(identity(4)) == 0

    def test_group_laws_random(self):
        rng = random.Random(32)
        for _ in range(300):
            k = rng.randint(1, 6)
            f, g, h = (random_perm(rng, k) for _ in range(3))
            assert compose(compose(f, g), h) == compose(f, compose(g, h))
            assert inverse(compose(g, h)) == compose(inverse(h), inverse(g))
            assert compose(g, inverse(g)).is_identity
            assert parity(compose(g, h)) == (parity(g) + parity(h)) % 2
            assert conjugate(g, h) == compose_all([inverse(h), g, h], k)
            assert commutator(g, h) == compose_all([inverse(g), inverse(h), g, h], k)

    def test_alternating_group(self):
        a5 = alternating_group(5)
        assert len(a5) == 60 and len(set(a5)) == 60
        assert all(is_even(p) for p in a5)
        assert a5 == sorted(a5)


class TestSigmaTriple:
    def test_frozen_value(self):
        t = find_sigma_triple()
        assert (t.sigma, t.alpha, t.beta) == (FROZEN_SIGMA, FROZEN_ALPHA, FROZEN_BETA)

    def test_frozen_value_matches_naive_search(self):
        s, a, b = naive_least_triple()
        assert (s, a, b) == (FROZEN_SIGMA.images, FROZEN_ALPHA.images, FROZEN_BETA.images)

    def test_invariants(self):
        t = find_sigma_triple()
        assert t.holds()
        assert not t.sigma.is_identity
        assert commutator(conjugate(t.sigma, t.beta), conjugate(t.sigma, t.alpha)) == t.sigma
        assert find_sigma_triple() == t

    def test_sigma_fixes_bottom_and_top(self):
        # the reductions rely on sigma moving some letter, nothing more
        s = find_sigma_triple().sigma
        assert [a for a in range(5) if s(a) != a] == [2, 3, 4]

    def test_holds_rejects_identity(self):
        e = identity(5)
        assert not SigmaTriple(e, e, e).holds()

    def test_propagation_through_balanced_commutator(self):
        t = find_sigma_triple()
        for d in range(7):
            value = balanced_commutator_value([t.sigma] * 2**d, t.alpha, t.beta)
            assert value == t.sigma
        for n in range(1, 65):
            # pad to a power of two with extra sigmas, as the reductions do
            size = 1 << (n - 1).bit_length()
            assert balanced_commutator_value([t.sigma] * size, t.alpha, t.beta) == t.sigma

    def test_identity_entry_collapses(self):
        t = find_sigma_triple()
        rng = random.Random(33)
        for _ in range(50):
            d = rng.randint(1, 4)
            entries = [t.sigma] * 2**d
            entries[rng.randrange(len(entries))] = identity(5)
            assert balanced_commutator_value(entries, t.alpha, t.beta).is_identity

    def test_bad_entry_count(self):
        t = find_sigma_triple()
        with pytest.raises(ValidationError):
            balanced_commutator_value([t.sigma] * 3, t.alpha, t.beta)
        with pytest.raises(ValidationError):
            balanced_commutator_value([], t.alpha, t.beta)
