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
Bigraded Monomial Bases

The component of C_i in bidegree (p, q) is S^{p-i}(g) (x) S^{q-i}(g) (x) L^i(g):
every exterior generator carries bidegree (1, 1), so the differential
preserves (p, q). Basis elements are (alpha, beta, J) with alpha, beta
exponent vectors and J an increasing subset, ordered alpha-major, then beta,
then J. Exponent vectors of one degree are listed in descending lexicographic
order, subsets in lexicographic order.

Usage:
    from canonical_complex.graded_basis import component_basis
    basis = component_basis(L, i=1, p=2, q=1)
    basis.dimension, basis.unrank_index(0)
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterator, NamedTuple, Tuple

from canonical_complex.lie_algebra import LieAlgebra

Exponents = Tuple[int, ...]
Subset = Tuple[int, ...]


class BasisLookupError(LookupError):
    """Raised when an index or basis element lies outside a component."""


class BasisIndex(NamedTuple):
    alpha: Exponents
    beta: Exponents
    J: Subset

    @property
    def degree(self) -> int:
        return len(self.J)

    @property
    def bidegree(self) -> Tuple[int, int]:
        i = len(self.J)
        return sum(self.alpha) + i, sum(self.beta) + i


def sym_dimension(dim: int, a: int) -> int:
    """dim S^a of a dim-dimensional space; 0 for negative a."""
    if dim < 1:
        raise ValueError(f"Dimension must be positive, got {dim}")
    if a < 0:
        return 0
    return comb(a + dim - 1, dim - 1)


def component_dimension(dim: int, i: int, p: int, q: int) -> int:
    """Closed form s(p-i) * s(q-i) * binom(dim, i)."""
    if i < 0 or i > dim or p < i or q < i:
        return 0
    return sym_dimension(dim, p - i) * sym_dimension(dim, q - i) * comb(dim, i)


def euler_characteristic(dim: int, p: int, q: int) -> int:
    """Alternating sum of closed-form component dimensions at (p, q)."""
    return sum((-1) ** i * component_dimension(dim, i, p, q) for i in range(dim + 1))


@lru_cache(maxsize=None)
def monomials(dim: int, degree: int) -> Tuple[Exponents, ...]:
    """Exponent vectors of total `degree` in descending lexicographic order."""
    if degree < 0:
        return ()
    if dim == 1:
        return ((degree,),)
    result = []
    for first in range(degree, -1, -1):
        for rest in monomials(dim - 1, degree - first):
            result.append((first,) + rest)
    return tuple(result)


@lru_cache(maxsize=None)
def exterior_subsets(dim: int, size: int) -> Tuple[Subset, ...]:
    if size < 0 or size > dim:
        return ()
    return tuple(combinations(range(dim), size))


@dataclass(frozen=True)
class ComponentBasis:
    """Ordered basis of the (i, p, q) component for an algebra of dimension `dim`."""

    dim: int
    i: int
    p: int
    q: int

    @cached_property
    def alphas(self) -> Tuple[Exponents, ...]:
        return monomials(self.dim, self.p - self.i) if self._nonempty else ()

    @cached_property
    def betas(self) -> Tuple[Exponents, ...]:
        return monomials(self.dim, self.q - self.i) if self._nonempty else ()

    @cached_property
    def subsets(self) -> Tuple[Subset, ...]:
        return exterior_subsets(self.dim, self.i) if self._nonempty else ()

    @cached_property
    def _alpha_positions(self) -> Dict[Exponents, int]:
        return {alpha: n for n, alpha in enumerate(self.alphas)}

    @cached_property
    def _beta_positions(self) -> Dict[Exponents, int]:
        return {beta: n for n, beta in enumerate(self.betas)}

    @cached_property
    def _subset_positions(self) -> Dict[Subset, int]:
        return {J: n for n, J in enumerate(self.subsets)}

    @property
    def _nonempty(self) -> bool:
        return 0 <= self.i <= self.dim and self.p >= self.i and self.q >= self.i

    @property
    def dimension(self) -> int:
        return len(self.alphas) * len(self.betas) * len(self.subsets)

    def __len__(self) -> int:
        return self.dimension

    def __iter__(self) -> Iterator[BasisIndex]:
        for alpha in self.alphas:
            for beta in self.betas:
                for J in self.subsets:
                    yield BasisIndex(alpha, beta, J)

    def __contains__(self, b: BasisIndex) -> bool:
        try:
            self.rank_index(b)
        except BasisLookupError:
            return False
        return True

    def rank_index(self, b: BasisIndex) -> int:
        """
        Position of b in the ordered basis.

        Raises:
            BasisLookupError: If b does not belong to this component
        """
        try:
            a = self._alpha_positions[tuple(b.alpha)]
            c = self._beta_positions[tuple(b.beta)]
            j = self._subset_positions[tuple(b.J)]
        except KeyError:
            raise BasisLookupError(f"{b} is not in component (i={self.i}, p={self.p}, q={self.q})") from None
        return (a * len(self.betas) + c) * len(self.subsets) + j

    def unrank_index(self, n: int) -> BasisIndex:
        """
        Basis element at position n.

        Raises:
            BasisLookupError: If n is outside [0, dimension)
        """
        if not 0 <= n < self.dimension:
            raise BasisLookupError(f"Index {n} outside component of dimension {self.dimension}")
        rest, j = divmod(n, len(self.subsets))
        a, c = divmod(rest, len(self.betas))
        return BasisIndex(self.alphas[a], self.betas[c], self.subsets[j])


def component_basis(L: LieAlgebra, i: int, p: int, q: int) -> ComponentBasis:
    """Basis of S^{p-i} (x) S^{q-i} (x) L^i for L; empty on degenerate input."""
    return _component_basis(L.dim, i, p, q)


@lru_cache(maxsize=256)
def _component_basis(dim: int, i: int, p: int, q: int) -> ComponentBasis:
    return ComponentBasis(dim, i, p, q)
