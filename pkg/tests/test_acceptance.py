"""The eight acceptance criteria, each at its stated size and time limit.

Every test records a PASS/FAIL line (shown in the terminal summary) and
then asserts, so a failing criterion also fails the run.
"""

import itertools
import random
import time

from finitary.action import (
    apply,
    apply_with_residual,
    decide_identity,
    decide_identity_exhaustive,
    invert_sequence,
)
from finitary.automaton import depth
from finitary.commutator import BalancedSpec, balanced_commutator
from finitary.formulas import (
    EXISTS,
    FORALL,
    QBF_GUARD,
    Cnf,
    NnfQbf,
    PrenexQbf,
    brute_force_sat,
    eval_nnf_qbf,
    eval_prenex_qbf,
    normalize_to_3qbf,
)
from finitary.permutation import balanced_commutator_value, find_sigma_triple
from finitary.reductions import constructed_state_count, paper_state_count, qbf_to_cwp, sat_to_wp
from finitary.slp import (
    StreamStats,
    decompress,
    expansion_length,
    slp_decide_identity,
    slp_from_sequence,
    stream_apply,
)

from randgen import deep_slp, doubling_chain, random_3cnf, random_finitary, random_sequence, random_slp, random_word

SIGN_PATTERNS_3 = [
    (3 * a, 2 * b, 1 * c) for a, b, c in itertools.product((1, -1), repeat=3)
]


def test_c1_structural_remark(acceptance_report):
    rng = random.Random(101)
    start = time.perf_counter()
    bad = []
    rows = []
    for n in (3, 4, 5, 6):
        for k in (1, 2, 4, 8):
            aut = sat_to_wp(random_3cnf(rng, n, k)).automaton
            d, states = depth(aut), len(aut)
            rows.append(f"N={n} K={k}: {states} states (formula (3+K)(N+1)+1 = {paper_state_count(n, k)})")
            if d != n + 1 or states != constructed_state_count(n, k) or states != 1 + 3 * (n + 1) + k * n:
                bad.append((n, k, d, states))
    elapsed = time.perf_counter() - start
    for row in rows:
        print(row)
    ok = not bad and elapsed < 1.0
    acceptance_report("C1 structural remark", ok, f"16 instances, depth N+1 and 1+3(N+1)+KN states, {len(bad)} violations, {elapsed:.2f}s (< 1s)")
    assert not bad
    assert elapsed < 1.0


def test_c2_sat_reduction(acceptance_report):
    rng = random.Random(102)
    cases = [random_3cnf(rng, rng.randint(3, 6), rng.randint(1, 16)) for _ in range(300)]
    cases.append(Cnf.of(3, SIGN_PATTERNS_3))
    start = time.perf_counter()
    disagree = 0
    sat = 0
    for cnf in cases:
        inst = sat_to_wp(cnf)
        moved = not decide_identity(inst.automaton, inst.sequence).is_identity
        model = brute_force_sat(cnf) is not None
        sat += model
        disagree += moved != model
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and elapsed < 60
    acceptance_report(
        "C2 SAT reduction", ok,
        f"{len(cases)} instances ({sat} sat, {len(cases) - sat} unsat), {disagree} disagreements, {elapsed:.1f}s (< 60s)",
    )
    assert disagree == 0
    assert elapsed < 60


def test_c3_qbf_reduction(acceptance_report):
    rng = random.Random(103)
    cases = [
        NnfQbf(3, Cnf.of(3, cs))
        for m in range(3)
        for cs in itertools.combinations(SIGN_PATTERNS_3, m)
    ]
    exhaustive = len(cases)
    for _ in range(100):
        n = rng.choice((3, 4))
        cases.append(NnfQbf(n, random_3cnf(rng, n, rng.randint(0, 8))))
    start = time.perf_counter()
    disagree = 0
    true = 0
    for q in cases:
        inst = qbf_to_cwp(q)
        moved = not slp_decide_identity(inst.automaton, inst.slp).is_identity
        value = eval_nnf_qbf(q)
        true += value
        disagree += moved != value
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and elapsed < 300
    acceptance_report(
        "C3 QBF reduction", ok,
        f"{exhaustive} exhaustive + 100 random ({true} true), {disagree} disagreements, {elapsed:.1f}s (< 300s)",
    )
    assert exhaustive == 37
    assert disagree == 0
    assert elapsed < 300


def test_c4_slp_streaming(acceptance_report):
    rng = random.Random(104)
    violations = 0
    frame_violations = 0
    largest = 0
    for i in range(500):
        aut = random_finitary(rng)
        # every 25th SLP is deep, so expansions reach the 10^4..10^6 range
        if i % 25 == 0:
            s = deep_slp(rng, list(aut.states), low=rng.choice((10**4, 10**5, 5 * 10**5)))
        else:
            s = random_slp(rng, list(aut.states), max_rules=8, max_rhs=4)
        largest = max(largest, expansion_length(s).value)
        w = random_word(rng, aut.alphabet_size, depth(aut))
        stats = StreamStats()
        violations += stream_apply(aut, s, w, stats) != apply(aut, decompress(s), w)
        frame_violations += stats.peak_frames > len(s.rules)

    reductions = 0
    instances = [qbf_to_cwp(NnfQbf(n, Cnf(n, ()))) for n in (1, 2)]
    instances += [
        qbf_to_cwp(NnfQbf(3, Cnf.of(3, cs)))
        for m in range(len(SIGN_PATTERNS_3) + 1)
        for cs in itertools.combinations(SIGN_PATTERNS_3, m)
    ]
    slp_instances = [(inst.automaton, inst.slp) for inst in instances]
    for m in range(1, 4):
        for cs in itertools.combinations(SIGN_PATTERNS_3, m):
            inst = sat_to_wp(Cnf.of(3, cs))
            slp_instances.append((inst.automaton, slp_from_sequence(inst.sequence)))
    for aut, s in slp_instances:
        d = depth(aut)
        expanded = decompress(s, limit=None)
        for w in [(0,) * d, (0,) * (d - 1) + (2,), tuple(random_word(rng, 5, d))]:
            stats = StreamStats()
            violations += stream_apply(aut, s, w, stats) != apply(aut, expanded, w)
            frame_violations += stats.peak_frames > len(s.rules)
        reductions += 1

    chain = doubling_chain(21)
    start = time.perf_counter()
    n = expansion_length(chain)
    chain_ms = (time.perf_counter() - start) * 1000
    chain_ok = n.value == 2**20 and not n.saturated and chain_ms < 10
    ok = violations == 0 and frame_violations == 0 and chain_ok
    acceptance_report(
        "C4 SLP streaming", ok,
        f"500 random SLPs (largest expansion {largest}) + {reductions} reduction outputs, "
        f"{violations} mismatches, {frame_violations} frame-bound violations, "
        f"21-rule doubling chain length {n.value} in {chain_ms:.2f}ms (< 10ms)",
    )
    assert violations == 0
    assert frame_violations == 0
    assert chain_ok


def test_c5_a5_triple(acceptance_report):
    find_sigma_triple.cache_clear()
    start = time.perf_counter()
    t = find_sigma_triple()
    elapsed = time.perf_counter() - start
    propagation = []
    for d in range(1, 65):
        # the entry count must be a power of two; extra copies pad it as in the reductions
        size = 1 << (d - 1).bit_length()
        propagation.append(balanced_commutator_value([t.sigma] * size, t.alpha, t.beta) == t.sigma)
    ok = elapsed < 1 and not t.sigma.is_identity and t.holds() and all(propagation)
    acceptance_report(
        "C5 A5 triple", ok,
        f"sigma={t.sigma} alpha={t.alpha} beta={t.beta} found in {elapsed * 1000:.1f}ms (< 1s), "
        f"B over D=1..64 copies of sigma gives sigma: {sum(propagation)}/64",
    )
    assert ok


def test_c6_commutator_laws(acceptance_report):
    rng = random.Random(106)
    collapse_bad = 0
    for _ in range(1000):
        aut = random_finitary(rng)
        d = rng.randint(0, 3)
        entries = [random_sequence(rng, aut, 4) for _ in range(2**d)]
        trivial = random_sequence(rng, aut, 3)
        if rng.random() < 0.5:
            trivial = trivial + invert_sequence(trivial)
        else:
            other = random_sequence(rng, aut, 2)
            trivial = invert_sequence(other) + trivial + invert_sequence(trivial) + other
        entries[rng.randrange(len(entries))] = trivial
        spec = BalancedSpec(entries, random_sequence(rng, aut, 2), random_sequence(rng, aut, 2))
        assert decide_identity(aut, trivial).is_identity
        collapse_bad += not decide_identity(aut, balanced_commutator(spec)).is_identity

    lifting_bad = 0
    lifted = 0
    while lifted < 1000:
        aut = random_finitary(rng, k=rng.choice((2, 3)))
        u = tuple(random_word(rng, aut.alphabet_size, rng.randint(1, 3)))
        pool = [s for s in (random_sequence(rng, aut, 3) for _ in range(40)) if apply(aut, s, u) == u]
        if len(pool) < 3:
            continue
        d = rng.randint(0, 3)
        entries = [rng.choice(pool) for _ in range(2**d)]
        alpha, beta = rng.choice(pool), rng.choice(pool)
        out, residual = apply_with_residual(aut, balanced_commutator(BalancedSpec(entries, alpha, beta)), u)
        res = lambda s: apply_with_residual(aut, s, u)[1]
        expected = balanced_commutator(BalancedSpec([res(e) for e in entries], res(alpha), res(beta)))
        lifting_bad += out != u or residual != expected
        lifted += 1

    ok = collapse_bad == 0 and lifting_bad == 0
    acceptance_report(
        "C6 commutator laws", ok,
        f"1000 collapse cases, {collapse_bad} violations; 1000 lifting cases, {lifting_bad} violations",
    )
    assert ok


def test_c7_action_algebra(acceptance_report):
    rng = random.Random(107)
    bad = {"inverse": 0, "prefix": 0, "suffix": 0, "decide": 0}
    identities = 0
    for i in range(1000):
        aut = random_finitary(rng)
        k, d = aut.alphabet_size, depth(aut)
        s = random_sequence(rng, aut, 10)
        u = random_word(rng, k, rng.randint(0, d + 2))
        v = random_word(rng, k, rng.randint(0, 3))
        bad["inverse"] += apply(aut, invert_sequence(s), apply(aut, s, u)) != tuple(u)
        bad["prefix"] += apply(aut, s, u + v)[: len(u)] != apply(aut, s, u)
        long_u = random_word(rng, k, d + rng.randint(0, 2))
        bad["suffix"] += apply(aut, s, long_u + v) != apply(aut, s, long_u) + tuple(v)
        if i % 2:
            # a conjugated trivial product, so both verdicts occur
            t = random_sequence(rng, aut, 4)
            s = invert_sequence(t) + s + invert_sequence(s) + t
        verdict = decide_identity(aut, s)
        identities += verdict.is_identity
        bad["decide"] += verdict != decide_identity_exhaustive(aut, s)
    ok = not any(bad.values())
    detail = ", ".join(f"{name} {count}" for name, count in bad.items())
    acceptance_report(
        "C7 action algebra", ok,
        f"1000 cases per law, violations: {detail} ({identities} identity verdicts)",
    )
    assert ok


def _all_prefixes(v: int, ordered: bool):
    """Quantifier prefixes over x1..xv: all orders and partial prefixes, or the fixed full order."""
    if not ordered:
        for qs in itertools.product((EXISTS, FORALL), repeat=v):
            yield tuple(zip(qs, range(1, v + 1)))
        return
    for r in range(v + 1):
        for vs in itertools.permutations(range(1, v + 1), r):
            for qs in itertools.product((EXISTS, FORALL), repeat=r):
                yield tuple(zip(qs, vs))


def test_c8_normalization(acceptance_report):
    start = time.perf_counter()
    checked = 0
    disagree = 0
    for v in (1, 2, 3):
        lits = [l for x in range(1, v + 1) for l in (x, -x)]
        clauses = [c for r in range(5) for c in itertools.combinations(lits, r)]
        prefixes = list(_all_prefixes(v, ordered=v < 3))
        for m in range(4):
            for cs in itertools.combinations(clauses, m):
                cnf = Cnf.of(v, cs)
                for prefix in prefixes:
                    q = PrenexQbf(prefix, cnf)
                    checked += 1
                    disagree += eval_nnf_qbf(normalize_to_3qbf(q)) != eval_prenex_qbf(q)
    exhaustive = checked

    rng = random.Random(108)
    larger = 0
    while larger < 200:
        v = rng.randint(4, 6)
        cs = [
            [x * rng.choice((1, -1)) for x in rng.choices(range(1, v + 1), k=rng.randint(1, 6))]
            for _ in range(rng.randint(1, 5))
        ]
        order = rng.sample(range(1, v + 1), v)
        prefix = tuple((rng.choice((EXISTS, FORALL)), x) for x in order[: rng.randint(v - 2, v)])
        q = PrenexQbf(prefix, Cnf.of(v, cs))
        out = normalize_to_3qbf(q)
        if out.num_vars > QBF_GUARD:
            continue
        larger += 1
        disagree += eval_nnf_qbf(out) != eval_prenex_qbf(q)
    elapsed = time.perf_counter() - start
    ok = disagree == 0
    acceptance_report(
        "C8 normalization", ok,
        f"{exhaustive} exhaustive + {larger} random formulas, {disagree} disagreements, {elapsed:.1f}s",
    )
    assert ok
