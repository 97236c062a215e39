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
Catalog of reductive Lie algebras.

Matrix algebras are given by a basis of matrices; structure constants are
read off commutators through the trace pairing, and the invariant form is
the Killing form plus the identity on the chosen center basis.

    abelian1..abelian4, sl2, sl3, gl2, sl2xsl2, so3
"""

import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy

from canonical_complex.exact_linalg import to_fraction
from canonical_complex.lie_algebra import LieAlgebra, killing_form

logger = logging.getLogger(__name__)

CATALOG_NAMES = ("abelian1", "abelian2", "abelian3", "abelian4", "sl2", "sl3", "gl2", "sl2xsl2", "so3")


class CatalogError(KeyError):
    """Raised for names outside the catalog."""


def _unit(n: int, row: int, col: int) -> np.ndarray:
    m = np.full((n, n), Fraction(0), dtype=object)
    m[row, col] = Fraction(1)
    return m


def _block_diag(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    n, m = first.shape[0], second.shape[0]
    out = np.full((n + m, n + m), Fraction(0), dtype=object)
    out[:n, :n] = first
    out[n:, n:] = second
    return out


def _sl2_basis(n: int = 2, offset: int = 0) -> List[np.ndarray]:
    e = _unit(n, offset, offset + 1)
    h = _unit(n, offset, offset) - _unit(n, offset + 1, offset + 1)
    f = _unit(n, offset + 1, offset)
    return [e, h, f]


def _sl3_basis() -> List[np.ndarray]:
    E = lambda i, j: _unit(3, i, j)  # noqa: E731
    return [E(0, 1), E(0, 2), E(1, 2), E(0, 0) - E(1, 1), E(1, 1) - E(2, 2), E(1, 0), E(2, 0), E(2, 1)]


def _so3_basis() -> List[np.ndarray]:
    E = lambda i, j: _unit(3, i, j)  # noqa: E731
    return [E(2, 1) - E(1, 2), E(0, 2) - E(2, 0), E(1, 0) - E(0, 1)]


def _gl2_basis() -> List[np.ndarray]:
    return _sl2_basis() + [_unit(2, 0, 0) + _unit(2, 1, 1)]


def _sl2xsl2_basis() -> List[np.ndarray]:
    zero = np.full((2, 2), Fraction(0), dtype=object)
    return [_block_diag(m, zero) for m in _sl2_basis()] + [_block_diag(zero, m) for m in _sl2_basis()]


def _trace_dual(basis: Sequence[np.ndarray]) -> sympy.Matrix:
    gram = sympy.Matrix(
        len(basis), len(basis), lambda a, b: sympy.Rational(str(np.trace(basis[a] @ basis[b])))
    )
    return gram.inv()


def matrix_coordinates(basis: Sequence[np.ndarray], M: np.ndarray, dual: sympy.Matrix = None) -> Tuple[Fraction, ...]:
    """Coordinates of M in `basis`, assuming M lies in its span and the trace pairing is nondegenerate on it."""
    if dual is None:
        dual = _trace_dual(basis)
    traces = sympy.Matrix([sympy.Rational(str(np.trace(E @ M))) for E in basis])
    return tuple(to_fraction(value) for value in dual * traces)


def from_matrices(
    name: str,
    basis: Sequence[np.ndarray],
    rank: int,
    center: Sequence[int] = (),
    cartan: Sequence[int] = (),
) -> LieAlgebra:
    """
    Build a LieAlgebra from a basis of matrices.

    Args:
        name: Catalog name
        basis: Linearly independent square matrices closed under commutator
        rank: Ground-truth rank
        center: Indices of basis elements spanning the center
        cartan: Indices of basis elements spanning a Cartan subalgebra
    """
    dim = len(basis)
    dual = _trace_dual(basis)
    constants = [[None] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            commutator = basis[a] @ basis[b] - basis[b] @ basis[a]
            constants[a][b] = matrix_coordinates(basis, commutator, dual)
    realization = tuple(tuple(tuple(Fraction(v) for v in row) for row in m) for m in basis)
    draft = LieAlgebra(
        name=name,
        dim=dim,
        structure_constants=tuple(tuple(plane) for plane in constants),
        form=tuple(tuple(Fraction(int(a == b)) for b in range(dim)) for a in range(dim)),
        rank=rank,
        center_dim=len(center),
        realization=realization,
    )
    form = killing_form(draft)
    for k in center:
        form[k, k] += 1
    return LieAlgebra(
        name=name,
        dim=dim,
        structure_constants=draft.structure_constants,
        form=tuple(tuple(Fraction(v) for v in row) for row in form),
        rank=rank,
        center_dim=len(center),
        cartan=tuple(draft.basis_vector(k) for k in cartan),
        realization=realization,
    )


def abelian(n: int) -> LieAlgebra:
    zero = tuple(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)) for _ in range(n))
    identity = tuple(tuple(Fraction(int(a == b)) for b in range(n)) for a in range(n))
    return LieAlgebra(
        name=f"abelian{n}",
        dim=n,
        structure_constants=zero,
        form=identity,
        rank=n,
        center_dim=n,
        cartan=identity,
    )


_BUILDERS: Dict[str, Callable[[], LieAlgebra]] = {
    "sl2": lambda: from_matrices("sl2", _sl2_basis(), rank=1, cartan=(1,)),
    "sl3": lambda: from_matrices("sl3", _sl3_basis(), rank=2, cartan=(3, 4)),
    "gl2": lambda: from_matrices("gl2", _gl2_basis(), rank=2, center=(3,), cartan=(1, 3)),
    "sl2xsl2": lambda: from_matrices("sl2xsl2", _sl2xsl2_basis(), rank=2, cartan=(1, 4)),
    "so3": lambda: from_matrices("so3", _so3_basis(), rank=1, cartan=(2,)),
}


def normalize_name(name: str) -> str:
    """Accept 'abelian(2)', 'sl2×sl2' and friends."""
    cleaned = name.strip().lower().replace("×", "x").replace(" ", "")
    return re.sub(r"^abelian\((\d+)\)$", r"abelian\1", cleaned)


@lru_cache(maxsize=None)
def build_catalog_algebra(name: str) -> LieAlgebra:
    """
    Instantiate a catalog algebra.

    Raises:
        CatalogError: If name is not in the catalog
    """
    key = normalize_name(name)
    if key not in CATALOG_NAMES:
        raise CatalogError(f"Unknown algebra {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    if key.startswith("abelian"):
        return abelian(int(key[len("abelian"):]))
    L = _BUILDERS[key]()
    logger.debug("Built %s (dim %d, rank %d)", L.name, L.dim, L.rank)
    return L
