"""Command-line front-end.

Exit codes: 0 success (whatever the answer), 2 usage error, 3 input or
validation error. ``-`` in place of a file name reads standard input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .action import apply, decide_identity, format_word, parse_sequence, parse_word
from .automaton import GAutomaton, depth, is_finitary, parse_automaton, serialize_automaton
from .errors import FinitaryError
from .formulas import brute_force_sat, eval_nnf_qbf, normalize_to_3qbf, parse_dimacs, parse_qdimacs
from .permutation import find_sigma_triple
from .reductions import qbf_to_cwp, sat_to_wp
from .slp import DEFAULT_LIMIT, decompress, expansion_length, parse_slp, serialize_slp, slp_decide_identity

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3

SAT_ORACLE_GUARD = 20
QBF_ORACLE_GUARD = 12


def _read(name: str) -> bytes:
    if name == "-":
        return sys.stdin.buffer.read()
    return Path(name).read_bytes()


def _load_automaton(name: str) -> GAutomaton:
    return parse_automaton(_read(name))


def _sequence_arg(args: argparse.Namespace):
    if args.seq_file is not None:
        lines = [
            line.strip()
            for line in _read(args.seq_file).decode("utf-8").splitlines()
            if line.strip() and not line.lstrip().startswith("#")
        ]
        if len(lines) != 1:
            raise FinitaryError(f"{args.seq_file}: expected exactly one sequence line, found {len(lines)}")
        return parse_sequence(lines[0])
    return parse_sequence(args.seq)


def cmd_validate(args: argparse.Namespace) -> int:
    aut = _load_automaton(args.automaton)
    finitary = is_finitary(aut)
    print("ok")
    print(f"alphabet: {aut.alphabet_size}")
    print(f"states: {len(aut.states)}")
    print(f"finitary: {'yes' if finitary else 'no'}")
    if finitary:
        print(f"depth: {depth(aut)}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    aut = _load_automaton(args.automaton)
    print(format_word(apply(aut, _sequence_arg(args), parse_word(args.word))))
    return EXIT_OK


def cmd_wp(args: argparse.Namespace) -> int:
    aut = _load_automaton(args.automaton)
    print(decide_identity(aut, _sequence_arg(args)))
    return EXIT_OK


def cmd_cwp(args: argparse.Namespace) -> int:
    aut = _load_automaton(args.automaton)
    slp = parse_slp(_read(args.slp))
    print(slp_decide_identity(aut, slp, threads=args.threads))
    return EXIT_OK


def cmd_slp_len(args: argparse.Namespace) -> int:
    n = expansion_length(parse_slp(_read(args.slp)))
    print(f"{n.value} (saturated)" if n.saturated else n.value)
    return EXIT_OK


def cmd_slp_expand(args: argparse.Namespace) -> int:
    s = decompress(parse_slp(_read(args.slp)), limit=args.limit)
    print(" ".join(map(str, s)) if s else "-")
    return EXIT_OK


def _write_outputs(prefix: str, files: dict[str, bytes]) -> None:
    for suffix, data in files.items():
        path = Path(prefix + suffix)
        path.write_bytes(data)
        print(f"wrote {path}")


def cmd_reduce_sat(args: argparse.Namespace) -> int:
    inst = sat_to_wp(parse_dimacs(_read(args.dimacs)))
    meta = inst.layout.comments()
    seq_text = "".join(f"# {c}\n" for c in meta) + (" ".join(map(str, inst.sequence)) or "-") + "\n"
    _write_outputs(args.out, {
        ".gaut": serialize_automaton(inst.automaton, meta),
        ".seq": seq_text.encode("utf-8"),
    })
    return EXIT_OK


def cmd_reduce_qbf(args: argparse.Namespace) -> int:
    inst = qbf_to_cwp(normalize_to_3qbf(parse_qdimacs(_read(args.qdimacs))))
    meta = inst.layout.comments()
    _write_outputs(args.out, {
        ".gaut": serialize_automaton(inst.automaton, meta),
        ".slp": serialize_slp(inst.slp, meta).encode("utf-8"),
    })
    return EXIT_OK


def cmd_solve_sat(args: argparse.Namespace) -> int:
    cnf = parse_dimacs(_read(args.dimacs))
    inst = sat_to_wp(cnf)
    sat = not decide_identity(inst.automaton, inst.sequence).is_identity
    print("SAT" if sat else "UNSAT")
    if cnf.num_vars <= SAT_ORACLE_GUARD:
        oracle = brute_force_sat(cnf) is not None
        print(f"oracle: {'agree' if oracle == sat else 'disagree'}")
    return EXIT_OK


def cmd_solve_qbf(args: argparse.Namespace) -> int:
    q = normalize_to_3qbf(parse_qdimacs(_read(args.qdimacs)))
    inst = qbf_to_cwp(q)
    true = not slp_decide_identity(inst.automaton, inst.slp, threads=args.threads).is_identity
    print("TRUE" if true else "FALSE")
    if q.num_vars <= QBF_ORACLE_GUARD:
        print(f"oracle: {'agree' if eval_nnf_qbf(q) == true else 'disagree'}")
    return EXIT_OK


def cmd_find_sigma(args: argparse.Namespace) -> int:
    t = find_sigma_triple()
    print(f"sigma: {t.sigma}")
    print(f"alpha: {t.alpha}")
    print(f"beta: {t.beta}")
    print(f"sigma = [sigma^beta, sigma^alpha]: {'verified' if t.holds() else 'FAILED'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finitary",
        description="Finitary automaton groups: word problems and SAT/QBF reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("validate", help="check a gaut v1 automaton and report its depth")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_validate)

    def seq_options(p: argparse.ArgumentParser) -> None:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--seq", help="state sequence, rightmost symbol acts first; '-' is empty")
        g.add_argument("--seq-file", help="file holding one sequence line ('#' comments allowed)")

    p = sub.add_parser("eval", help="apply a state sequence to a word")
    p.add_argument("automaton")
    seq_options(p)
    p.add_argument("--word", required=True, help="letters separated by spaces; '-' is empty")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("wp", help="decide whether a sequence acts as the identity")
    p.add_argument("automaton")
    seq_options(p)
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("cwp", help="word problem for a sequence given as an SLP")
    p.add_argument("automaton")
    p.add_argument("--slp", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_cwp)

    p = sub.add_parser("slp-len", help="length of the sequence an SLP generates")
    p.add_argument("slp")
    p.set_defaults(func=cmd_slp_len)

    p = sub.add_parser("slp-expand", help="decompress an SLP")
    p.add_argument("slp")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_slp_expand)

    p = sub.add_parser("reduce-sat", help="DIMACS CNF to word-problem instance")
    p.add_argument("dimacs")
    p.add_argument("--out", required=True, help="output prefix for .gaut and .seq")
    p.set_defaults(func=cmd_reduce_sat)

    p = sub.add_parser("reduce-qbf", help="QDIMACS to compressed word-problem instance")
    p.add_argument("qdimacs")
    p.add_argument("--out", required=True, help="output prefix for .gaut and .slp")
    p.set_defaults(func=cmd_reduce_qbf)

    p = sub.add_parser("solve-sat", help="decide satisfiability through the word problem")
    p.add_argument("dimacs")
    p.set_defaults(func=cmd_solve_sat)

    p = sub.add_parser("solve-qbf", help="decide a QBF through the compressed word problem")
    p.add_argument("qdimacs")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_solve_qbf)

    p = sub.add_parser("find-sigma", help="print the A5 triple used by the reductions")
    p.set_defaults(func=cmd_find_sigma)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if getattr(args, "threads", 1) < 1 or getattr(args, "limit", 1) < 0:
        parser.print_usage(sys.stderr)
        print("finitary: error: --threads must be positive and --limit non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (FinitaryError, ValueError, OSError) as e:
        print(f"finitary: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
