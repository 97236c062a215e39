# Copyright 2026 The canonical-complex Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command Line Front End

Usage:
    canonical-complex homology --algebra sl2 --cutoff 8 --format json
    canonical-complex verify --algebra sl3 --cutoff 6 --workers 8
    canonical-complex cycles --algebra abelian3
    canonical-complex validate --algebra gl2

Exit codes: 0 when every check passes, 1 on a failed check or internal
error, 2 on a usage error. Verdicts and reports go to stdout (or --output),
logs to stderr.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, TextIO, Tuple

from canonical_complex.catalog import CATALOG_NAMES, CatalogError, build_catalog_algebra
from canonical_complex.config_utils import DEFAULT_SEED, LOG_LEVEL, get_worker_count
from canonical_complex.differential import LambdaTable, d_squared_failures, flip_sign, lambda_table
from canonical_complex.equivariance import (
    conjugated_homology_check,
    conjugation_check,
    known_symmetries,
    sample_automorphisms,
)
from canonical_complex.evaluation import (
    CheckOutcome,
    boundary_vanishing_test,
    commuting_tangent_dim,
    sample_commuting_pair,
    support_check,
)
from canonical_complex.exact_linalg import SizeGuardError
from canonical_complex.fingerprint import algebra_fingerprint
from canonical_complex.homology import compute_report, verify_vanishing
from canonical_complex.invariant_cycles import centralizer_check, generator_independence_check, witness_cycles
from canonical_complex.lie_algebra import LieAlgebra, load_algebra, validate_algebra
from canonical_complex.rank_cache import is_redis_available
from canonical_complex.transcript import Transcript

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Cutoff used by the conjugated homology comparison
CONJUGATION_CUTOFF = 5
AUTOMORPHISM_SAMPLES = 5
TANGENT_SAMPLES = 10


class UsageError(ValueError):
    """Raised for invalid command line configuration."""


@dataclass
class RunConfig:
    algebra: str
    cutoff: int = 6
    format: str = "json"
    output: Optional[str] = None
    seed: int = DEFAULT_SEED
    workers: int = 1
    dump_blocks: Optional[str] = None
    exact_only: bool = False
    timings: bool = False
    transcript: Optional[str] = None
    corrupt_sign: Optional[Tuple[int, int, int]] = None

    def validate(self) -> None:
        if self.cutoff < 0:
            raise UsageError(f"--cutoff must be nonnegative, got {self.cutoff}")
        if self.workers < 1:
            raise UsageError(f"--workers must be at least 1, got {self.workers}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"--format must be json or csv, got {self.format!r}")


def _corrupt_sign(value: str) -> Tuple[int, int, int]:
    try:
        k, a, b = (int(part) for part in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K,A,B, got {value!r}") from None
    return k, a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, help=f"catalog name ({', '.join(CATALOG_NAMES)}) or a JSON file")
    common.add_argument("--cutoff", type=int, default=6, help="verify all bidegrees with p + q <= N")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--workers", type=int, default=None, help="bidegree worker processes (env WORKERS)")
    common.add_argument("--dump-blocks", metavar="DIR", help="dump every assembled block to DIR")
    common.add_argument("--exact-only", action="store_true", help="certify every rank by exact elimination")
    common.add_argument("--timings", action="store_true", help="record wall-time per bidegree")
    common.add_argument("--transcript", metavar="PATH", help="JSON-lines transcript of individual checks")
    common.add_argument(
        "--log-level", type=str.upper, default=LOG_LEVEL, choices=("DEBUG", "INFO", "WARNING", "ERROR")
    )
    common.add_argument("--corrupt-sign", type=_corrupt_sign, default=None, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="canonical-complex",
        description="Homology of the canonical complex of a reductive Lie algebra",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("homology", parents=[common], help="bigraded homology dimension table")
    subparsers.add_parser("verify", parents=[common], help="run the full verification suite")
    subparsers.add_parser("cycles", parents=[common], help="certified non-boundary cycles up to the rank")
    subparsers.add_parser("validate", parents=[common], help="check the algebra axioms")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        algebra=args.algebra,
        cutoff=args.cutoff,
        format=args.format,
        output=args.output,
        seed=args.seed,
        workers=args.workers if args.workers is not None else get_worker_count(),
        dump_blocks=args.dump_blocks,
        exact_only=args.exact_only,
        timings=args.timings,
        transcript=args.transcript,
        corrupt_sign=args.corrupt_sign,
    )
    config.validate()
    return config


def resolve_algebra(name: str) -> LieAlgebra:
    if name.endswith(".json"):
        with open(name, encoding="utf-8") as f:
            return load_algebra(f.read())
    return build_catalog_algebra(name)


def resolve_table(L: LieAlgebra, config: RunConfig) -> LambdaTable:
    table = lambda_table(L)
    if config.corrupt_sign:
        try:
            table = flip_sign(table, *config.corrupt_sign)
        except (ValueError, IndexError) as e:
            raise UsageError(f"--corrupt-sign {config.corrupt_sign}: {e}") from None
    return table


def _emit(text: str, config: RunConfig, stdout: TextIO) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        stdout.write(text)


def cmd_homology(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    L = resolve_algebra(config.algebra)
    report = compute_report(
        L,
        config.cutoff,
        workers=config.workers,
        exact_only=config.exact_only,
        table=resolve_table(L, config),
        timings=config.timings,
        dump_dir=config.dump_blocks,
    )
    _emit(report.to_json() if config.format == "json" else report.to_csv(), config, stdout)
    return EXIT_OK


def _tangent_check(L: LieAlgebra, seed: int) -> CheckOutcome:
    outcome = CheckOutcome("tangent_dimension", True)
    for s in range(TANGENT_SAMPLES):
        pt = sample_commuting_pair(L, seed + s, regular_semisimple=bool(L.cartan))
        found = commuting_tangent_dim(L, pt)
        outcome.checked += 1
        if found != L.dim + L.rank:
            outcome.passed = False
            outcome.failures.append({"sample": s, "dimension": found, "expected": L.dim + L.rank, **pt.to_dict()})
    return outcome


def run_verify_suite(L: LieAlgebra, config: RunConfig, transcript: Optional[Transcript] = None) -> List[CheckOutcome]:
    """
    Every check of the verification suite, in a fixed order.

    The mutation hook (--corrupt-sign) only alters the differential under
    test; automorphism checks keep the true differential.
    """
    transcript = transcript or Transcript()
    table = resolve_table(L, config)
    outcomes: List[CheckOutcome] = []

    def run(name: str, check: Callable[[], CheckOutcome]) -> None:
        outcome = transcript.track(name)(check)()
        logger.info("%s %s", "PASS" if outcome.passed else "FAIL", name)
        outcomes.append(outcome)

    report = compute_report(
        L,
        config.cutoff,
        workers=config.workers,
        exact_only=config.exact_only,
        table=table,
        timings=config.timings,
        dump_dir=config.dump_blocks,
    )

    def vanishing() -> CheckOutcome:
        result = verify_vanishing(L, max(config.cutoff, 2), report=report)
        failures = [{"i": i, "p": p, "q": q, "h": h} for i, p, q, h in result.witnesses]
        return CheckOutcome("vanishing", result.passed, len(report.blocks), failures)

    def euler() -> CheckOutcome:
        failures = [{"p": b.p, "q": b.q} for b in report.blocks if not b.euler_ok]
        return CheckOutcome("euler", not failures, len(report.blocks), failures)

    def d_squared() -> CheckOutcome:
        failures = [{"i": i, "p": p, "q": q} for i, p, q in d_squared_failures(L, config.cutoff, table=table)]
        return CheckOutcome("d_squared", not failures, len(report.blocks), failures)

    def witnesses() -> CheckOutcome:
        found = witness_cycles(L, seed=config.seed, table=table, exact_only=config.exact_only)
        failures = [w.to_dict() for w in found if not w.passed]
        return CheckOutcome("witnesses", not failures, len(found), failures)

    def automorphisms() -> CheckOutcome:
        outcome = CheckOutcome("conjugation", True)
        for A in sample_automorphisms(L, AUTOMORPHISM_SAMPLES, config.seed) + known_symmetries(L):
            for check in (
                conjugation_check(L, A, samples=20, seed=config.seed),
                conjugated_homology_check(
                    L, A, min(config.cutoff, CONJUGATION_CUTOFF), workers=config.workers, exact_only=config.exact_only
                ),
            ):
                outcome.checked += check.checked
                if not check.passed:
                    outcome.passed = False
                    outcome.failures.append({"automorphism": A.to_dict(), "check": check.name})
        return outcome

    run("vanishing", vanishing)
    run("euler", euler)
    run("d_squared", d_squared)
    run("witnesses", witnesses)
    run("boundary_vanishing", lambda: boundary_vanishing_test(L, 20, 20, config.seed, table=table, transcript=transcript))
    run("conjugation", automorphisms)
    run("tangent_dimension", lambda: _tangent_check(L, config.seed))
    run("generator_independence", lambda: generator_independence_check(L, seed=config.seed))
    run("centralizer", lambda: centralizer_check(L, seed=config.seed))
    run("support", lambda: support_check(L, seed=config.seed))
    return outcomes


def cmd_verify(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    L = resolve_algebra(config.algebra)
    fingerprint = algebra_fingerprint(L)
    logger.info(
        "Verifying %s (%s), rank cache: %s", L.name, fingerprint[:12], "redis" if is_redis_available() else "memory"
    )
    with Transcript.open(config.transcript) as transcript:
        outcomes = run_verify_suite(L, config, transcript)

    for outcome in outcomes:
        stdout.write(f"{'PASS' if outcome.passed else 'FAIL'} {outcome.name} ({outcome.checked} checked)\n")
        for failure in outcome.failures:
            stdout.write(f"  witness {json.dumps(failure, sort_keys=True, default=str)}\n")
    if config.output:
        document = {
            "algebra": L.name,
            "fingerprint": fingerprint,
            "cutoff": config.cutoff,
            "seed": config.seed,
            "checks": [outcome.to_dict() for outcome in outcomes],
        }
        with open(config.output, "w", encoding="utf-8") as f:
            f.write(json.dumps(document, indent=2, sort_keys=True, default=str) + "\n")
    return EXIT_OK if all(outcome.passed for outcome in outcomes) else EXIT_FAILURE


def cmd_cycles(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    L = resolve_algebra(config.algebra)
    found = witness_cycles(L, seed=config.seed, table=resolve_table(L, config), exact_only=config.exact_only)
    document = {"algebra": L.name, "rank": L.rank, "witnesses": [w.to_dict() for w in found]}
    _emit(json.dumps(document, indent=2) + "\n", config, stdout)
    return EXIT_OK if all(w.passed for w in found) else EXIT_FAILURE


def cmd_validate(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    L = resolve_algebra(config.algebra)
    report = validate_algebra(L, seed=config.seed)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", config, stdout)
    return EXIT_OK if report.ok else EXIT_FAILURE


COMMANDS = {
    "homology": cmd_homology,
    "verify": cmd_verify,
    "cycles": cmd_cycles,
    "validate": cmd_validate,
}


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(level=args.log_level, stream=sys.stderr)
    try:
        config = config_from_args(args)
        return COMMANDS[args.command](config, stdout)
    except (UsageError, CatalogError, FileNotFoundError) as e:
        logger.error("Usage error: %s", e)
        return EXIT_USAGE
    except SizeGuardError as e:
        logger.error("Usage error: %s; lower --cutoff or drop --exact-only", e)
        return EXIT_USAGE
    except Exception:
        logger.exception("Internal failure")
        return EXIT_FAILURE
