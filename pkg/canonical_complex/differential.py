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
The Differential of the Canonical Complex

d is the coefficient-linear derivation of S(g) (x) S(g) (x) L(g) that sends
e_k to the quadratic (x, y) -> <e_k, [x, y]> = sum m^k[a][b] x_a y_b.
On a basis element (alpha, beta, J = {j_1 < ... < j_i}):

    d = sum_t (-1)^(t-1) sum_{a,b} m^{j_t}[a][b] (alpha + e_a, beta + e_b, J - {j_t})

Usage:
    from canonical_complex.differential import assemble_block, lambda_table
    table = lambda_table(L)
    block = assemble_block(L, 2, 2, 2, table=table)
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from canonical_complex.config_utils import SAMPLE_BOUND
from canonical_complex.exact_linalg import DimensionMismatchError, SparseMatrix, to_fraction
from canonical_complex.graded_basis import BasisIndex, ComponentBasis, component_basis
from canonical_complex.lie_algebra import LieAlgebra

logger = logging.getLogger(__name__)

LambdaEntry = Tuple[int, int, Fraction]


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


@dataclass(frozen=True)
class LambdaTable:
    """
    The quadratics m^k[a][b] = <e_k, [e_a, e_b]>, one sparse list per k.

    Entries for each k are (a, b, value) sorted by (a, b) with no zeros.
    """

    dim: int
    entries: Tuple[Tuple[LambdaEntry, ...], ...]

    @classmethod
    def from_dense(cls, matrices: Sequence[Sequence[Sequence[object]]]) -> "LambdaTable":
        dim = len(matrices)
        entries = []
        for k in range(dim):
            row = []
            for a in range(dim):
                for b in range(dim):
                    value = to_fraction(matrices[k][a][b])
                    if value:
                        row.append((a, b, value))
            entries.append(tuple(row))
        return cls(dim, tuple(entries))

    def value(self, k: int, a: int, b: int) -> Fraction:
        for a2, b2, v in self.entries[k]:
            if (a2, b2) == (a, b):
                return v
        return Fraction(0)

    def matrix(self, k: int) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for a, b, v in self.entries[k]:
            dense[a][b] = v
        return dense

    def is_zero(self) -> bool:
        return not any(self.entries)

    def scaled(self, factor) -> "LambdaTable":
        factor = to_fraction(factor)
        return LambdaTable(self.dim, tuple(tuple((a, b, v * factor) for a, b, v in row) for row in self.entries))

    def to_text(self) -> str:
        """Canonical text form, one 'k a b num/den' line per entry."""
        lines = [f"dim {self.dim}"]
        for k, row in enumerate(self.entries):
            for a, b, v in row:
                lines.append(f"{k} {a} {b} {v.numerator}/{v.denominator}")
        return "\n".join(lines)


@lru_cache(maxsize=64)
def lambda_table(L: LieAlgebra) -> LambdaTable:
    """m^k[a][b] = sum_c c[a][b][c] * B[k][c]."""
    if L.dim == 0:
        return LambdaTable(0, ())
    lowered = np.tensordot(L.constants, L.form_matrix, axes=(2, 1))  # (a, b, k)
    return LambdaTable.from_dense([[[lowered[a, b, k] for b in range(L.dim)] for a in range(L.dim)] for k in range(L.dim)])


def flip_sign(table: LambdaTable, k: int, a: int, b: int) -> LambdaTable:
    """
    Negate the single entry m^k[a][b], leaving m^k[b][a] alone.

    Only used to build deliberately broken differentials.

    Raises:
        ValueError: If the entry is zero, so flipping would change nothing
    """
    if not table.value(k, a, b):
        raise ValueError(f"m^{k}[{a}][{b}] is zero; pick a nonzero entry to corrupt")
    entries = list(table.entries)
    entries[k] = tuple((a2, b2, -v if (a2, b2) == (a, b) else v) for a2, b2, v in entries[k])
    logger.warning("Using corrupted differential: m^%d[%d][%d] negated", k, a, b)
    return LambdaTable(table.dim, tuple(entries))


def _bump(exponents: Tuple[int, ...], index: int) -> Tuple[int, ...]:
    return exponents[:index] + (exponents[index] + 1,) + exponents[index + 1 :]


def _boundary_terms(table: LambdaTable, b: BasisIndex) -> Iterable[Tuple[BasisIndex, Fraction]]:
    for t, j in enumerate(b.J):
        sign = 1 if t % 2 == 0 else -1
        rest = b.J[:t] + b.J[t + 1 :]
        for a, c, value in table.entries[j]:
            yield BasisIndex(_bump(b.alpha, a), _bump(b.beta, c), rest), sign * value


@dataclass(frozen=True)
class ComplexElement:
    """
    A finite sum of basis elements of one exterior degree.

    Terms may span several bidegrees; coefficients are nonzero Fractions.
    """

    dim: int
    degree: int
    terms: Dict[BasisIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for b, value in self.terms.items():
            if len(b.J) != self.degree or len(b.alpha) != self.dim or len(b.beta) != self.dim:
                raise DimensionMismatchError(f"{b} does not fit degree {self.degree} over dimension {self.dim}")
            if not value:
                raise ValueError(f"Explicit zero coefficient on {b}")

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Iterable[Tuple[BasisIndex, object]]) -> "ComplexElement":
        """Sum possibly repeated terms, dropping zeros."""
        collected: Dict[BasisIndex, Fraction] = {}
        for b, value in terms:
            collected[b] = collected.get(b, Fraction(0)) + to_fraction(value)
        return cls(dim, degree, {b: v for b, v in collected.items() if v})

    @classmethod
    def from_vector(cls, basis: ComponentBasis, vector: Union[Mapping[int, object], Sequence[object]]) -> "ComplexElement":
        items = vector.items() if isinstance(vector, Mapping) else enumerate(vector)
        return cls.from_terms(basis.dim, basis.i, ((basis.unrank_index(n), v) for n, v in items))

    @classmethod
    def basis_element(cls, dim: int, b: BasisIndex) -> "ComplexElement":
        return cls(dim, len(b.J), {b: Fraction(1)})

    @classmethod
    def zero(cls, dim: int, degree: int) -> "ComplexElement":
        return cls(dim, degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({b.bidegree for b in self.terms})

    def component(self, p: int, q: int) -> "ComplexElement":
        return ComplexElement(self.dim, self.degree, {b: v for b, v in self.terms.items() if b.bidegree == (p, q)})

    def to_vector(self, basis: ComponentBasis) -> Dict[int, Fraction]:
        """
        Coordinates in `basis`.

        Raises:
            BasisLookupError: If some term lies outside the component
        """
        return {basis.rank_index(b): v for b, v in self.terms.items()}

    def _check_compatible(self, other: "ComplexElement") -> None:
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise DimensionMismatchError(
                f"Cannot combine degree {self.degree} (dim {self.dim}) with degree {other.degree} (dim {other.dim})"
            )

    def __add__(self, other: "ComplexElement") -> "ComplexElement":
        self._check_compatible(other)
        return ComplexElement.from_terms(self.dim, self.degree, [*self.terms.items(), *other.terms.items()])

    def __neg__(self) -> "ComplexElement":
        return ComplexElement(self.dim, self.degree, {b: -v for b, v in self.terms.items()})

    def __sub__(self, other: "ComplexElement") -> "ComplexElement":
        return self + (-other)

    def __mul__(self, factor) -> "ComplexElement":
        factor = to_fraction(factor)
        if not factor:
            return ComplexElement.zero(self.dim, self.degree)
        return ComplexElement(self.dim, self.degree, {b: v * factor for b, v in self.terms.items()})

    __rmul__ = __mul__


def apply_differential(L: LieAlgebra, c: ComplexElement, *, table: Optional[LambdaTable] = None) -> ComplexElement:
    """
    d(c), term by term.

    Raises:
        DomainError: If c has exterior degree 0
        DimensionMismatchError: If c lives over an algebra of another dimension
    """
    if c.degree < 1:
        raise DomainError("The differential is not defined on exterior degree 0")
    if c.dim != L.dim:
        raise DimensionMismatchError(f"Element over dimension {c.dim} for algebra of dimension {L.dim}")
    if table is None:
        table = lambda_table(L)
    return ComplexElement.from_terms(
        c.dim,
        c.degree - 1,
        ((target, value * coeff) for b, coeff in c.terms.items() for target, value in _boundary_terms(table, b)),
    )


def assemble_block(L: LieAlgebra, i: int, p: int, q: int, *, table: Optional[LambdaTable] = None) -> SparseMatrix:
    """
    Matrix of d from component (i, p, q) to component (i-1, p, q).

    Built column by column; empty components give empty matrices.

    Raises:
        DomainError: If i < 1
    """
    if i < 1:
        raise DomainError(f"No block leaves exterior degree {i}")
    if table is None:
        table = lambda_table(L)
    source = component_basis(L, i, p, q)
    target = component_basis(L, i - 1, p, q)
    columns = []
    for b in source:
        column: Dict[int, Fraction] = {}
        for image, value in _boundary_terms(table, b):
            row = target.rank_index(image)
            column[row] = column.get(row, Fraction(0)) + value
        columns.append(column)
    block = SparseMatrix.from_columns(target.dimension, columns)
    logger.debug("Assembled block (i=%d, p=%d, q=%d): %dx%d, %d nonzeros", i, p, q, block.rows, block.cols, block.nnz)
    return block


def random_element(
    L: LieAlgebra,
    i: int,
    p: int,
    q: int,
    rng: random.Random,
    terms: int = 4,
) -> ComplexElement:
    """Random element of component (i, p, q) with up to `terms` small rational coefficients."""
    basis = component_basis(L, i, p, q)
    if not basis.dimension:
        return ComplexElement.zero(L.dim, i)
    picks = [basis.unrank_index(rng.randrange(basis.dimension)) for _ in range(terms)]
    return ComplexElement.from_terms(
        L.dim,
        i,
        ((b, Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND), rng.randint(1, 5))) for b in picks),
    )


def d_squared_failures(L: LieAlgebra, cutoff: int, *, table: Optional[LambdaTable] = None) -> List[Tuple[int, int, int]]:
    """Every (i, p, q) with p + q <= cutoff where block(i-1) @ block(i) is not the zero matrix."""
    if table is None:
        table = lambda_table(L)
    failures = []
    for total in range(cutoff + 1):
        for p in range(total + 1):
            q = total - p
            lower = None
            for i in range(1, min(L.dim, p, q) + 1):
                upper = assemble_block(L, i, p, q, table=table)
                if lower is not None and not (lower @ upper).is_zero():
                    failures.append((i, p, q))
                lower = upper
    return failures
