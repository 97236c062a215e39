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
Exact Sparse Linear Algebra

Rank of sparse rational matrices, computed modulo large primes with a
two-prime agreement protocol and certified by fraction-free elimination
over the integers when the block is small enough.

Usage:
    from canonical_complex.exact_linalg import SparseMatrix, certified_rank
    M = SparseMatrix.from_dict(3, 3, {(0, 0): 1, (1, 1): 1, (2, 2): 1})
    result = certified_rank(M)
    result.value, result.certified
"""

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

import sympy
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from canonical_complex.config_utils import EXACT_SIZE_GUARD, RANK_CERTIFY_LIMIT

logger = logging.getLogger(__name__)

# Primes are drawn downward from here
PRIME_CEILING = 2**31
PRIME_FLOOR = 2**30
MAX_PRIMES = 6

Entry = Tuple[int, int, Fraction]
SparseVector = Dict[int, Fraction]


class DimensionMismatchError(ValueError):
    """Raised when vector or matrix shapes do not fit together."""


class BadPrimeError(ArithmeticError):
    """Raised when a denominator vanishes modulo the chosen prime."""


class SizeGuardError(ValueError):
    """Raised when exact elimination is requested on an oversized matrix."""


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, strings and sympy rationals to a Fraction."""
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


@dataclass(frozen=True)
class SparseMatrix:
    """
    Sparse rational matrix in canonical form.

    Entries are (row, col, value) triples sorted by (col, row), with no
    duplicate positions and no explicit zeros.
    """

    rows: int
    cols: int
    entries: Tuple[Entry, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError(f"Negative shape {self.rows}x{self.cols}")
        previous = None
        for row, col, value in self.entries:
            if not (0 <= row < self.rows and 0 <= col < self.cols):
                raise DimensionMismatchError(f"Entry ({row}, {col}) outside {self.rows}x{self.cols}")
            if value == 0:
                raise ValueError(f"Explicit zero at ({row}, {col})")
            key = (col, row)
            if previous is not None and key <= previous:
                raise ValueError("Entries must be sorted by (col, row) without duplicates")
            previous = key

    @classmethod
    def from_dict(cls, rows: int, cols: int, values: Mapping[Tuple[int, int], object]) -> "SparseMatrix":
        entries = []
        for (row, col), value in values.items():
            value = to_fraction(value)
            if value:
                entries.append((row, col, value))
        entries.sort(key=lambda e: (e[1], e[0]))
        return cls(rows, cols, tuple(entries))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        entries = []
        for col, column in enumerate(columns):
            for row in sorted(column):
                value = to_fraction(column[row])
                if value:
                    entries.append((row, col, value))
        return cls(rows, len(columns), tuple(entries))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]], cols: Optional[int] = None) -> "SparseMatrix":
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        values = {}
        for r, line in enumerate(dense):
            if len(line) != cols:
                raise DimensionMismatchError("Ragged dense matrix")
            for c, value in enumerate(line):
                values[(r, c)] = value
        return cls.from_dict(rows, cols, values)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, tuple((k, k, Fraction(1)) for k in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def columns(self) -> List[SparseVector]:
        result: List[SparseVector] = [{} for _ in range(self.cols)]
        for row, col, value in self.entries:
            result[col][row] = value
        return result

    def to_dict(self) -> Dict[Tuple[int, int], Fraction]:
        return {(row, col): value for row, col, value in self.entries}

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for row, col, value in self.entries:
            dense[row][col] = value
        return dense

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_dict(self.cols, self.rows, {(c, r): v for r, c, v in self.entries})

    def scale(self, factor) -> "SparseMatrix":
        factor = to_fraction(factor)
        return SparseMatrix.from_dict(self.rows, self.cols, {(r, c): v * factor for r, c, v in self.entries})

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if other.rows != self.rows:
            raise DimensionMismatchError(f"Cannot stack {self.rows} rows beside {other.rows} rows")
        shifted = tuple((r, c + self.cols, v) for r, c, v in other.entries)
        return SparseMatrix(self.rows, self.cols + other.cols, self.entries + shifted)

    def with_column(self, vector: Union[Mapping[int, object], Sequence[object]]) -> "SparseMatrix":
        column = _sparse_vector(vector, self.rows)
        return self.hstack(SparseMatrix.from_columns(self.rows, [column]))

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for r, c, v in self.entries:
            by_row.setdefault(c, []).append((r, v))
        product: Dict[Tuple[int, int], Fraction] = {}
        for k, c, v in other.entries:
            for r, w in by_row.get(k, ()):
                product[(r, c)] = product.get((r, c), 0) + w * v
        return SparseMatrix.from_dict(self.rows, other.cols, product)


def _sparse_vector(vector: Union[Mapping[int, object], Sequence[object]], length: int) -> SparseVector:
    if isinstance(vector, Mapping):
        result = {}
        for index, value in vector.items():
            if not 0 <= index < length:
                raise DimensionMismatchError(f"Index {index} outside vector of length {length}")
            value = to_fraction(value)
            if value:
                result[index] = value
        return result
    if len(vector) != length:
        raise DimensionMismatchError(f"Vector of length {len(vector)} where {length} was expected")
    return {index: to_fraction(value) for index, value in enumerate(vector) if value}


@dataclass(frozen=True)
class RankResult:
    """A rank together with how it was obtained."""

    value: int
    certified: bool
    method: str
    primes: Tuple[int, ...] = field(default=())

    def to_dict(self) -> Dict:
        return {"value": self.value, "certified": self.certified, "method": self.method, "primes": list(self.primes)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "RankResult":
        return cls(int(data["value"]), bool(data["certified"]), str(data["method"]), tuple(data.get("primes", ())))


@lru_cache(maxsize=None)
def modular_primes(count: int = MAX_PRIMES) -> Tuple[int, ...]:
    """The first `count` primes below 2^31, in descending order."""
    primes = []
    current = PRIME_CEILING
    while len(primes) < count:
        current = sympy.prevprime(current)
        primes.append(current)
    return tuple(primes)


def _residue(value: Fraction, prime: int) -> int:
    denominator = value.denominator % prime
    if denominator == 0:
        raise BadPrimeError(f"Denominator {value.denominator} vanishes modulo {prime}")
    return value.numerator * pow(denominator, -1, prime) % prime


def rank_modular(M: SparseMatrix, prime: int) -> int:
    """
    Rank of M reduced modulo `prime`.

    Columns are eliminated sparsest first; each pivot column is kept with
    its leading row as pivot, so all of its other entries sit below it.

    Raises:
        ValueError: If prime is not an odd prime above 2^30
        BadPrimeError: If some denominator is divisible by prime
    """
    if prime <= PRIME_FLOOR or not sympy.isprime(prime):
        raise ValueError(f"{prime} is not a prime above 2^30")

    columns = []
    for column in M.columns():
        reduced = {}
        for row, value in column.items():
            residue = _residue(value, prime)
            if residue:
                reduced[row] = residue
        if reduced:
            columns.append(reduced)
    # Markowitz-lite: sparse columns first keep the pivot set sparse
    columns.sort(key=len)

    limit = min(M.rows, M.cols)
    pivots: Dict[int, Dict[int, int]] = {}
    rank = 0
    for vector in columns:
        pending = [row for row in vector if row in pivots]
        heapq.heapify(pending)
        while pending:
            pivot_row = heapq.heappop(pending)
            coeff = vector.get(pivot_row)
            if not coeff:
                continue
            for row, value in pivots[pivot_row].items():
                updated = (vector.get(row, 0) - coeff * value) % prime
                if updated:
                    if row not in vector and row in pivots:
                        heapq.heappush(pending, row)
                    vector[row] = updated
                else:
                    vector.pop(row, None)
        if not vector:
            continue
        lead = min(vector)
        inverse = pow(vector[lead], -1, prime)
        pivots[lead] = {row: value * inverse % prime for row, value in vector.items()}
        rank += 1
        if rank == limit:
            break
    return rank


def rank_exact(M: SparseMatrix) -> int:
    """
    Rank over the rationals by fraction-free elimination over the integers.

    Each column is cleared of denominators first; scaling a column by a
    nonzero integer does not change the rank.

    Raises:
        SizeGuardError: If rows * cols exceeds the exact size guard
    """
    if M.rows * M.cols > EXACT_SIZE_GUARD:
        raise SizeGuardError(f"Refusing exact elimination on a {M.rows}x{M.cols} matrix")
    if M.is_zero():
        return 0

    rows: Dict[int, Dict[int, object]] = {}
    for col, column in enumerate(M.columns()):
        if not column:
            continue
        scale = lcm(*(value.denominator for value in column.values()))
        for row, value in column.items():
            rows.setdefault(row, {})[col] = ZZ(int(value * scale))
    matrix = DomainMatrix(rows, (M.rows, M.cols), ZZ)
    _, _, pivots = matrix.rref_den(method="FF")
    return len(pivots)


def certified_rank(M: SparseMatrix, exact_only: bool = False, certify_limit: int = RANK_CERTIFY_LIMIT) -> RankResult:
    """
    Rank of M with certification metadata.

    Ranks modulo two distinct primes are compared; further primes are drawn
    until two agree on the largest value seen. Rank modulo p never exceeds the
    rational rank, so an agreed value equal to min(rows, cols) is certified
    outright; smaller values are certified by exact elimination when the block
    is within `certify_limit`, and reported as probabilistic otherwise.

    Args:
        M: The matrix
        exact_only: Skip the modular protocol and use exact elimination
        certify_limit: Largest rows * cols re-ranked exactly for certification

    Returns:
        RankResult
    """
    if M.is_zero():
        return RankResult(0, True, "trivial")
    if exact_only:
        return RankResult(rank_exact(M), True, "exact")

    full = min(M.rows, M.cols)
    seen: List[Tuple[int, int]] = []
    agreed: Optional[int] = None
    for prime in modular_primes():
        try:
            value = rank_modular(M, prime)
        except BadPrimeError as e:
            logger.warning("Skipping prime: %s", e)
            continue
        seen.append((prime, value))
        best = max(v for _, v in seen)
        if sum(1 for _, v in seen if v == best) >= 2:
            agreed = best
            break
        if len(seen) >= 2:
            logger.warning("Modular ranks disagree on a %dx%d block: %s", M.rows, M.cols, seen)

    primes = tuple(p for p, _ in seen)
    if agreed is None:
        if M.rows * M.cols <= EXACT_SIZE_GUARD:
            logger.warning("Escalating %dx%d block to exact elimination", M.rows, M.cols)
            return RankResult(rank_exact(M), True, "exact", primes)
        best = max((v for _, v in seen), default=0)
        return RankResult(best, False, "modular", primes)

    if agreed == full:
        return RankResult(agreed, True, "modular-full", primes)
    if M.rows * M.cols <= certify_limit:
        exact = rank_exact(M)
        if exact != agreed:
            logger.warning("Modular rank %d corrected to exact rank %d", agreed, exact)
        return RankResult(exact, True, "exact", primes)
    return RankResult(agreed, False, "modular", primes)


def rank(M: SparseMatrix) -> int:
    """Rank of M by the certified protocol."""
    return certified_rank(M).value


def in_column_span(M: SparseMatrix, v: Union[Mapping[int, object], Sequence[object]], exact_only: bool = False) -> bool:
    """
    True iff v lies in the column span of M, by comparing rank([M | v]) with rank(M).

    Raises:
        DimensionMismatchError: If v does not have M.rows coordinates
    """
    augmented = M.with_column(v)
    return (
        certified_rank(augmented, exact_only=exact_only).value
        == certified_rank(M, exact_only=exact_only).value
    )


def dump_matrix(M: SparseMatrix, stream: TextIO) -> None:
    """Write M as 'rows cols nnz' followed by 1-based 'row col num/den' lines."""
    stream.write(f"{M.rows} {M.cols} {M.nnz}\n")
    for row, col, value in M.entries:
        stream.write(f"{row + 1} {col + 1} {value.numerator}/{value.denominator}\n")


def load_matrix(lines: Iterable[str]) -> SparseMatrix:
    """Inverse of dump_matrix."""
    iterator = (line.strip() for line in lines)
    iterator = (line for line in iterator if line and not line.startswith("%"))
    header = next(iterator).split()
    rows, cols, nnz = (int(token) for token in header)
    values = {}
    for line in iterator:
        row, col, value = line.split()
        values[(int(row) - 1, int(col) - 1)] = Fraction(value)
    if len(values) != nnz:
        raise ValueError(f"Header announces {nnz} entries, found {len(values)}")
    return SparseMatrix.from_dict(rows, cols, values)
