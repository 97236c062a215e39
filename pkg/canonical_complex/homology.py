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
Bigraded Homology Dimensions

For each bidegree (p, q) and exterior degree i:

    n_i = dim C_i^(p,q),  r_i = rank of d on C_i^(p,q),  h_i = n_i - r_i - r_{i+1}

d preserves (p, q), so every bidegree is an independent job. Reports are
assembled in a fixed order and carry no wall-times unless asked for, so two
runs with the same inputs serialize identically whatever the worker count.

Usage:
    from canonical_complex.homology import compute_report
    report = compute_report(build_catalog_algebra("sl2"), cutoff=6, workers=4)
    print(report.to_json())
"""

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

from canonical_complex.differential import LambdaTable, assemble_block, lambda_table
from canonical_complex.exact_linalg import RankResult, certified_rank, dump_matrix
from canonical_complex.fingerprint import table_fingerprint
from canonical_complex.graded_basis import component_basis, euler_characteristic
from canonical_complex.lie_algebra import LieAlgebra
from canonical_complex.rank_cache import cached_rank

logger = logging.getLogger(__name__)

REPORT_SCHEMA = {
    "type": "object",
    "required": ["algebra", "cutoff", "blocks"],
    "additionalProperties": False,
    "properties": {
        "algebra": {"type": "string"},
        "cutoff": {"type": "integer", "minimum": 0},
        "blocks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["p", "q", "table", "euler_ok", "millis"],
                "additionalProperties": False,
                "properties": {
                    "p": {"type": "integer", "minimum": 0},
                    "q": {"type": "integer", "minimum": 0},
                    "table": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["i", "n", "r", "h", "certified"],
                            "additionalProperties": False,
                            "properties": {
                                "i": {"type": "integer", "minimum": 0},
                                "n": {"type": "integer", "minimum": 0},
                                "r": {"type": "integer", "minimum": 0},
                                "h": {"type": "integer", "minimum": 0},
                                "certified": {"type": "boolean"},
                            },
                        },
                    },
                    "euler_ok": {"type": "boolean"},
                    "millis": {"type": ["integer", "null"]},
                },
            },
        },
    },
}

CSV_COLUMNS = ("algebra", "p", "q", "i", "n", "r", "h", "certified")


class BlockEntry(NamedTuple):
    i: int
    n: int
    r: int
    h: int
    certified: bool


@dataclass
class BidegreeHomology:
    p: int
    q: int
    table: List[BlockEntry]
    euler_ok: bool
    millis: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "q": self.q,
            "table": [entry._asdict() for entry in self.table],
            "euler_ok": self.euler_ok,
            "millis": self.millis,
        }


@dataclass
class HomologyReport:
    """Truncated table of homology dimensions, one BidegreeHomology per (p, q) with p + q <= cutoff."""

    algebra: str
    cutoff: int
    blocks: List[BidegreeHomology] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"algebra": self.algebra, "cutoff": self.cutoff, "blocks": [b.to_dict() for b in self.blocks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for block in self.blocks:
            for e in block.table:
                writer.writerow([self.algebra, block.p, block.q, e.i, e.n, e.r, e.h, str(e.certified).lower()])
        return buffer.getvalue()

    def dimension_table(self) -> Dict[Tuple[int, int, int], int]:
        """h_i keyed by (i, p, q), for comparing reports of different presentations."""
        return {(e.i, b.p, b.q): e.h for b in self.blocks for e in b.table}

    def rank_table(self) -> Dict[Tuple[int, int, int], int]:
        return {(e.i, b.p, b.q): e.r for b in self.blocks for e in b.table}

    @property
    def euler_ok(self) -> bool:
        return all(b.euler_ok for b in self.blocks)

    @property
    def certified(self) -> bool:
        return all(e.certified for b in self.blocks for e in b.table)


@dataclass
class VanishingResult:
    passed: bool
    cutoff: int
    rank: int
    witnesses: List[Tuple[int, int, int, int]] = field(default_factory=list)  # (i, p, q, h_i)


def bidegrees(cutoff: int) -> List[Tuple[int, int]]:
    """All (p, q) with p + q <= cutoff, by total degree then p."""
    return [(p, total - p) for total in range(cutoff + 1) for p in range(total + 1)]


def block_rank(
    L: LieAlgebra,
    i: int,
    p: int,
    q: int,
    *,
    table: Optional[LambdaTable] = None,
    exact_only: bool = False,
    dump_dir: Optional[str] = None,
) -> RankResult:
    """Certified rank of d on C_i^(p,q); r_0 and empty blocks are 0."""
    if i < 1 or i > L.dim:
        return RankResult(0, True, "trivial")
    if not component_basis(L, i, p, q).dimension or not component_basis(L, i - 1, p, q).dimension:
        return RankResult(0, True, "trivial")
    if table is None:
        table = lambda_table(L)

    if dump_dir:
        block = assemble_block(L, i, p, q, table=table)
        os.makedirs(dump_dir, exist_ok=True)
        with open(os.path.join(dump_dir, f"{L.name}_d{i}_{p}_{q}.mtx"), "w", encoding="utf-8") as f:
            dump_matrix(block, f)

    mode = "exact" if exact_only else "modular"
    key = f"rank:{table_fingerprint(table)}:{mode}:{i}:{p}:{q}"
    result = cached_rank(key, lambda: certified_rank(assemble_block(L, i, p, q, table=table), exact_only=exact_only))
    logger.debug("rank d_%d at (%d, %d) = %d via %s", i, p, q, result.value, result.method)
    return result


def homology_dims(
    L: LieAlgebra,
    p: int,
    q: int,
    *,
    table: Optional[LambdaTable] = None,
    exact_only: bool = False,
    dump_dir: Optional[str] = None,
) -> List[BlockEntry]:
    """
    (i, n_i, r_i, h_i, certified) for i = 0..dim at bidegree (p, q).

    h_i is certified only when both r_i and r_{i+1} are.

    Raises:
        ArithmeticError: If some h_i comes out negative
    """
    if p < 0 or q < 0:
        raise ValueError(f"Bidegree ({p}, {q}) must be nonnegative")
    if table is None:
        table = lambda_table(L)
    ranks = [block_rank(L, i, p, q, table=table, exact_only=exact_only, dump_dir=dump_dir) for i in range(L.dim + 2)]
    ranks = squeeze_ranks(L, p, q, ranks, table=table)
    entries = []
    for i in range(L.dim + 1):
        n = component_basis(L, i, p, q).dimension
        r, r_next = ranks[i], ranks[i + 1]
        h = n - r.value - r_next.value
        if h < 0:
            raise ArithmeticError(f"Negative homology h_{i} = {h} at ({p}, {q}); ranks are inconsistent")
        entries.append(BlockEntry(i, n, r.value, h, r.certified and r_next.certified))
    return entries


def _composes_to_zero(L: LieAlgebra, i: int, p: int, q: int, table: LambdaTable) -> bool:
    """d_i o d_{i+1} == 0 as exact matrices; trivially true when either side is empty."""
    if i < 1 or i + 1 > L.dim:
        return True
    if not all(component_basis(L, j, p, q).dimension for j in (i - 1, i, i + 1)):
        return True
    lower = assemble_block(L, i, p, q, table=table)
    upper = assemble_block(L, i + 1, p, q, table=table)
    return (lower @ upper).is_zero()


def squeeze_ranks(
    L: LieAlgebra, p: int, q: int, ranks: List[RankResult], *, table: Optional[LambdaTable] = None
) -> List[RankResult]:
    """
    Certify modular ranks pinned between their lower and upper bounds.

    Every rank value here is a lower bound on the rational rank, and
    d_i o d_{i+1} = 0 gives r_i + r_{i+1} <= n_i over the rationals. So where
    the values already satisfy r_i + r_{i+1} = n_i (h_i = 0) and the
    composite is checked to vanish, both ranks are exact.
    """
    if table is None:
        table = lambda_table(L)
    squeezed = list(ranks)
    for i in range(L.dim + 1):
        lower, upper = ranks[i], ranks[i + 1]
        if lower.certified and upper.certified:
            continue
        if component_basis(L, i, p, q).dimension != lower.value + upper.value:
            continue
        if not _composes_to_zero(L, i, p, q, table):
            logger.error("d_%d o d_%d is not zero at (%d, %d); ranks left uncertified", i, i + 1, p, q)
            continue
        for j in (i, i + 1):
            if not squeezed[j].certified:
                squeezed[j] = RankResult(squeezed[j].value, True, "squeezed", squeezed[j].primes)
                logger.debug("rank d_%d at (%d, %d) certified by h_%d = 0", j, p, q, i)
    return squeezed


def euler_check(L: LieAlgebra, p: int, q: int, entries: Optional[List[BlockEntry]] = None, **kwargs) -> bool:
    """Sum (-1)^i h_i == sum (-1)^i n_i, with the n-side also matching the closed form and every h_i >= 0."""
    if entries is None:
        entries = homology_dims(L, p, q, **kwargs)
    h_side = sum((-1) ** e.i * e.h for e in entries)
    n_side = sum((-1) ** e.i * e.n for e in entries)
    return h_side == n_side == euler_characteristic(L.dim, p, q) and all(e.h >= 0 for e in entries)


def _bidegree_job(args) -> BidegreeHomology:
    L, p, q, table, exact_only, timings, dump_dir = args
    start = time.perf_counter()
    entries = homology_dims(L, p, q, table=table, exact_only=exact_only, dump_dir=dump_dir)
    millis = int((time.perf_counter() - start) * 1000) if timings else None
    return BidegreeHomology(p, q, entries, euler_check(L, p, q, entries), millis)


def compute_report(
    L: LieAlgebra,
    cutoff: int,
    *,
    workers: int = 1,
    exact_only: bool = False,
    table: Optional[LambdaTable] = None,
    timings: bool = False,
    dump_dir: Optional[str] = None,
) -> HomologyReport:
    """
    Homology table for every (p, q) with p + q <= cutoff.

    Args:
        L: The algebra
        cutoff: Total degree bound N >= 0
        workers: Size of the process pool; 1 computes in-process
        exact_only: Use fraction-free elimination for every rank
        table: Quadratics to use instead of lambda_table(L)
        timings: Record wall-time per bidegree
        dump_dir: Directory for Matrix Market-style block dumps

    Returns:
        HomologyReport with blocks in bidegrees() order
    """
    if cutoff < 0:
        raise ValueError(f"Cutoff must be nonnegative, got {cutoff}")
    if workers < 1:
        raise ValueError(f"Worker count must be at least 1, got {workers}")
    if table is None:
        table = lambda_table(L)

    jobs = [(L, p, q, table, exact_only, timings, dump_dir) for p, q in bidegrees(cutoff)]
    if workers == 1:
        blocks = [_bidegree_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(_bidegree_job, jobs))

    for block in blocks:
        logger.info(
            "%s (%d, %d): h = %s%s",
            L.name,
            block.p,
            block.q,
            [e.h for e in block.table],
            "" if block.euler_ok else " (Euler check FAILED)",
        )
    return HomologyReport(L.name, cutoff, blocks)


def verify_vanishing(L: LieAlgebra, cutoff: int, *, report: Optional[HomologyReport] = None, **kwargs) -> VanishingResult:
    """
    h_i = 0 for every i > rank and every (p, q) with p + q <= cutoff.

    On failure every offending (i, p, q, h_i) is listed.
    """
    if cutoff < 2:
        raise ValueError(f"Vanishing verification needs a cutoff of at least 2, got {cutoff}")
    if report is None:
        report = compute_report(L, cutoff, **kwargs)
    witnesses = [
        (e.i, b.p, b.q, e.h) for b in report.blocks for e in b.table if b.p + b.q <= cutoff and e.i > L.rank and e.h
    ]
    for i, p, q, h in witnesses:
        logger.warning("%s: h_%d = %d at (%d, %d) above the rank", L.name, i, h, p, q)
    return VanishingResult(not witnesses, cutoff, L.rank, witnesses)
