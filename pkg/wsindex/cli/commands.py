"""Contains the wsindex command line.

Subcommands:
    gen       write a random weighted sequence
    build     build a weighted (``--z``) or approximate (``--eps``) index
    query     answer a batch of ``<mode> <pattern> [zprime]`` lines
    verify    check the constructions against brute-force oracles

Exit codes are 0 on success, 1 when a verification check fails, 2 for usage,
parse and validation errors, and 3 for unreadable files and corrupt indexes.
Construction statistics go to standard error as ``key=value`` lines.

Example:
    $ wsindex gen 6 2 --seed 1 -o x.wseq
    $ wsindex build x.wseq --z 4 -o x.wix
    $ echo "report AA" | wsindex query x.wix
"""

from __future__ import annotations  # Doc aliases
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import os
import sys
import time
import logging
import argparse

from wsindex.approx.approxindex import ApproxIndex, build_approx_index
from wsindex.core.errors import IndexLoadError, WSeqParseError, WSeqValidationError
from wsindex.core.oracles import (enumerate_solid_factors, match_probability,
                                  naive_weighted_occurrences, solid_occurrence_set)
from wsindex.core.probability import DELTA_CMP, at_least, from_log
from wsindex.core.weightedseq import WeightedSequence, random_weighted_sequence, read_weighted_sequence
from wsindex.index.specialseq import to_special_weighted_sequence
from wsindex.index.weightedindex import WeightedIndex
from wsindex.rand.sampling import RandomizedConfig, build_randomized_family
from wsindex.zest.zestimation import build_z_estimation, check_compatibility, verify_z_estimation


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_LOAD = 3

QUERY_MODES = ("decide", "count", "report", "approx")

AnyIndex = Union[WeightedIndex, ApproxIndex]


class UsageError(ValueError):
    """Command-line input that can't be acted upon."""


# --------
# Commands
# --------

def cmd_gen(args: argparse.Namespace) -> int:
    """Writes a random weighted sequence to ``-o`` or standard output."""
    x = random_weighted_sequence(args.n, args.sigma, args.seed)
    if args.output:
        x.write(args.output)
    else:
        sys.stdout.write(x.dumps())

    return EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    """Builds an index and writes it in the ``WIX1`` format."""
    x = read_weighted_sequence(args.input, normalize=args.normalize)
    config = RandomizedConfig(args.confidence, args.seed) if args.randomized else None

    start = time.perf_counter()
    if args.eps is not None:
        index = build_approx_index(x, args.eps, config)
    elif config is not None:
        index = WeightedIndex.from_family(build_randomized_family(x, args.z, config),
                                          args.z, randomized=True)
    else:
        index = WeightedIndex.from_family(build_z_estimation(x, args.z), args.z)
    elapsed = time.perf_counter() - start

    output = args.output or _default_output(args.input, args.eps is not None)
    index.save(output)

    stats = dict(index.stats)
    stats["build_seconds"] = round(elapsed, 6)
    stats["output"] = output
    _print_stats(stats)

    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    """Answers a query batch, one result line per query line."""
    index = load_index(args.index)
    if args.batch and args.batch != "-":
        with open(os.path.join(os.getcwd(), args.batch), encoding="utf-8") as file:
            lines = file.read().splitlines()
    else:
        lines = sys.stdin.read().splitlines()

    queries = parse_query_batch(lines)
    if isinstance(index, ApproxIndex):
        sys.stdout.write(f"approximate eps={index.eps:g}\n")

    for mode, pattern, zprime in queries:
        sys.stdout.write(answer_query(index, mode, pattern, zprime) + "\n")

    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Runs the oracle checks on a weighted sequence and prints one line per check."""
    x = read_weighted_sequence(args.input, normalize=args.normalize)
    checks = oracle_checks(x, args.z, args.seeds)

    passed = True
    for name, check in checks:
        start = time.perf_counter()
        ok = check()
        logger.info("Check %s took %.3fs", name, time.perf_counter() - start)
        sys.stdout.write(f"check {name} {'pass' if ok else 'fail'}\n")
        passed = passed and ok

    return EXIT_OK if passed else EXIT_VERIFY_FAILED


# -------
# Queries
# -------

def load_index(filepath: str) -> AnyIndex:
    """Loads a ``WIX1`` file as a weighted or approximate index."""
    index = WeightedIndex.load(filepath)
    return ApproxIndex(index) if index.approximate else index


def parse_query_batch(lines: Sequence[str]) -> List[Tuple[str, str, Optional[float]]]:
    """Parses query lines; blank lines and ``#`` comments are skipped.

    Raises:
        UsageError: Unknown mode, missing or extra fields, or a bad zprime.
    """
    queries = []
    for number, line in enumerate(lines, start=1):
        fields = line.split("#", 1)[0].split()
        if not fields:
            continue

        mode = fields[0]
        if mode not in QUERY_MODES:
            raise UsageError(f"line {number}: unknown query mode '{mode}'.")

        expected = 3 if mode == "approx" else 2
        if len(fields) != expected:
            raise UsageError(f"line {number}: '{mode}' takes {expected - 1} argument(s).")

        zprime = None
        if mode == "approx":
            try:
                zprime = float(fields[2])
            except ValueError:
                raise UsageError(f"line {number}: zprime '{fields[2]}' is not a number.") from None

        queries.append((mode, fields[1], zprime))

    return queries


def answer_query(index: AnyIndex, mode: str, pattern: str, zprime: Optional[float] = None) -> str:
    """Returns the result line of one query.

    Raises:
        UsageError: An approx query against an exact index.
    """
    if mode == "approx":
        if not isinstance(index, ApproxIndex):
            raise UsageError("approx queries need an index built with --eps.")
        return _format_positions(mode, pattern, index.report(pattern, zprime))

    exact = index.index if isinstance(index, ApproxIndex) else index
    if mode == "decide":
        return f"decide {pattern} {'true' if exact.decide(pattern) else 'false'}"
    if mode == "count":
        return f"count {pattern} {exact.count(pattern)}"

    return _format_positions(mode, pattern, exact.report(pattern))


# ------------
# Verification
# ------------

def oracle_checks(x: WeightedSequence, z: float, seeds: int) -> List[Tuple[str, Callable[[], bool]]]:
    """Returns the named oracle checks for a weighted sequence and threshold.

    Raises:
        WSeqValidationError: floor(z) < 1.
    """
    fam = build_z_estimation(x, z)
    solid = solid_occurrence_set(x, z)
    patterns = sorted({pattern for pattern, _ in solid})

    def check_index() -> bool:
        index = WeightedIndex.from_family(fam, z)
        loaded = WeightedIndex.from_bytes(index.to_bytes())
        candidates = set(patterns)
        candidates.update(p + c for p in patterns for c in x.alphabet)
        candidates.update(x.alphabet)

        for pattern in sorted(candidates):
            expected = naive_weighted_occurrences(x, z, pattern)
            for idx in (index, loaded):
                if idx.report(pattern) != expected or idx.count(pattern) != len(expected) \
                        or idx.decide(pattern) != bool(expected):
                    logger.debug("Index answer for '%s' differs from %s", pattern, expected)
                    return False
        return True

    def check_special() -> bool:
        special = to_special_weighted_sequence(fam, x)
        if len(special) != fam.k * x.n + fam.k - 1:
            return False

        for i in range(1, x.n + 1):
            found = set()
            for j in range(1, fam.k + 1):
                found |= {p for p in special.solid_factors_at(special.image(j, i), z)
                          if i + len(p) - 1 <= x.n}
            if found != enumerate_solid_factors(x, z, i):
                logger.debug("Special sequence solid factors differ at %d", i)
                return False
        return True

    def check_approx() -> bool:
        approx = build_approx_index(x, 1.0 / z)
        zprimes = sorted({1.0, min(2.0, z), z})
        for pattern in patterns:
            probs = [from_log(match_probability(x, pattern, i, log=True))
                     for i in range(1, x.n - len(pattern) + 2)]
            for zprime in zprimes:
                found = set(approx.report(pattern, zprime))
                upper = {i for i, p in enumerate(probs, 1) if p * zprime >= 1 - DELTA_CMP}
                lower = {i for i, p in enumerate(probs, 1) if at_least(p, 1 / zprime - approx.eps)}
                if not upper <= found <= lower:
                    logger.debug("Approximate report of '%s' for z'=%g breaks the bounds", pattern, zprime)
                    return False
        return True

    def check_randomized() -> bool:
        exact = 0
        for seed in range(seeds):
            sampled = build_randomized_family(x, z, RandomizedConfig(seed=seed))
            found = {(f[:length], i) for i in range(1, x.n + 1) for f in sampled.factor_multiset(i)
                     for length in range(1, len(f) + 1)}
            if not found <= solid:
                logger.debug("Seed %d sampled a factor below the threshold", seed)
                return False
            exact += found == solid
        logger.info("Randomized families matched the solid factors for %d of %d seeds", exact, seeds)
        return True

    return [
        ("z-estimation", lambda: verify_z_estimation(x, z, fam)),
        ("compatibility", lambda: check_compatibility(fam)),
        ("weighted-index", check_index),
        ("special-sequence", check_special),
        ("approximate-index", check_approx),
        ("randomized-soundness", check_randomized),
    ]


# ------
# Parser
# ------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsindex", description="Index weighted sequences.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log INFO with -v, DEBUG with -vv")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="write a random weighted sequence")
    gen.add_argument("n", type=int, help="sequence length")
    gen.add_argument("sigma", type=int, help="alphabet size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", help="output file (default: standard output)")
    gen.set_defaults(func=cmd_gen)

    build = commands.add_parser("build", help="build and save an index")
    build.add_argument("input", help="WSEQ file")
    threshold = build.add_mutually_exclusive_group(required=True)
    threshold.add_argument("--z", type=float, help="probability threshold 1/z")
    threshold.add_argument("--eps", type=float, help="accuracy of an approximate index")
    build.add_argument("--normalize", action="store_true", help="rescale rows to sum to 1")
    build.add_argument("--randomized", action="store_true", help="sample the family")
    build.add_argument("--confidence", type=float, default=2.0, help="confidence constant c")
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("-o", "--output", help="index file (default: input with .wix/.awix)")
    build.set_defaults(func=cmd_build)

    query = commands.add_parser("query", help="answer a batch of queries")
    query.add_argument("index", help="WIX1 file")
    query.add_argument("batch", nargs="?", help="query file (default: standard input)")
    query.set_defaults(func=cmd_query)

    verify = commands.add_parser("verify", help="check constructions against oracles")
    verify.add_argument("input", help="WSEQ file")
    verify.add_argument("--z", type=float, required=True, help="probability threshold 1/z")
    verify.add_argument("--normalize", action="store_true", help="rescale rows to sum to 1")
    verify.add_argument("--seeds", type=int, default=10, help="randomized seeds to check")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except (IndexLoadError, OSError) as err:
        _print_error(err)
        return EXIT_LOAD
    except (WSeqParseError, WSeqValidationError, UsageError) as err:
        _print_error(err)
        return EXIT_USAGE


# Helpers

def _default_output(input_path: str, approximate: bool) -> str:
    stem, _ = os.path.splitext(input_path)
    return stem + (".awix" if approximate else ".wix")


def _format_positions(mode: str, pattern: str, positions: List[int]) -> str:
    return " ".join([mode, pattern] + [str(p) for p in positions])


def _print_stats(stats: Dict[str, object]):
    for key in sorted(stats):
        sys.stderr.write(f"{key}={stats[key]}\n")


def _print_error(err: Exception):
    sys.stderr.write(f"error: {err}\n")


if __name__ == "__main__":
    sys.exit(main())
