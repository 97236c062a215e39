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
Reductive Lie Algebras by Structure Constants

A LieAlgebra stores c[a][b][k] with [e_a, e_b] = sum_k c[a][b][k] e_k, an
invariant nondegenerate symmetric form extending the Killing form of the
derived algebra, and the rank. Everything is exact: entries are Fractions,
dense work goes through numpy object arrays.
"""

import json
import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from canonical_complex.config_utils import DEFAULT_SEED, SAMPLE_BOUND
from canonical_complex.exact_linalg import DimensionMismatchError, SparseMatrix, rank_exact, to_fraction

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class LieAlgebra:
    """
    A finite-dimensional Lie algebra with an invariant form.

    `cartan` (a basis of a Cartan subalgebra) and `realization` (one square
    matrix per basis element) are optional catalog data used by samplers and
    by the matrix-valued generators of invariant vector fields.
    """

    name: str
    dim: int
    structure_constants: Tuple[Tuple[Vector, ...], ...]
    form: Matrix
    rank: int
    center_dim: int
    cartan: Tuple[Vector, ...] = ()
    realization: Tuple[Matrix, ...] = field(default=(), compare=False)

    @cached_property
    def constants(self) -> np.ndarray:
        """c[a][b][k] as a (dim, dim, dim) object array."""
        array = np.empty((self.dim, self.dim, self.dim), dtype=object)
        for a in range(self.dim):
            for b in range(self.dim):
                for k in range(self.dim):
                    array[a, b, k] = self.structure_constants[a][b][k]
        return array

    @cached_property
    def form_matrix(self) -> np.ndarray:
        return _object_array(self.form)

    def basis_vector(self, index: int) -> Vector:
        return tuple(Fraction(1 if k == index else 0) for k in range(self.dim))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    """Outcome of validate_algebra, one entry per axiom."""

    algebra: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def violations(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def failed_names(self) -> List[str]:
        return [check.name for check in self.violations]

    def to_dict(self) -> Dict:
        return {
            "algebra": self.algebra,
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _object_array(rows: Sequence[Sequence[object]]) -> np.ndarray:
    array = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for r, line in enumerate(rows):
        for c, value in enumerate(line):
            array[r, c] = to_fraction(value)
    return array


def as_vector(L: LieAlgebra, x: Sequence[object]) -> np.ndarray:
    """Coordinates of x as an object array, checked against L.dim."""
    if len(x) != L.dim:
        raise DimensionMismatchError(f"Vector of length {len(x)} for algebra of dimension {L.dim}")
    array = np.empty(L.dim, dtype=object)
    for k, value in enumerate(x):
        array[k] = to_fraction(value)
    return array


def _freeze(array: np.ndarray) -> Tuple:
    if array.ndim == 1:
        return tuple(Fraction(v) for v in array)
    return tuple(_freeze(sub) for sub in array)


def bracket(L: LieAlgebra, x: Sequence[object], y: Sequence[object]) -> Vector:
    """[x, y] = sum c[a][b][k] x_a y_b e_k."""
    xv, yv = as_vector(L, x), as_vector(L, y)
    if L.dim == 0:
        return ()
    partial = np.tensordot(xv, L.constants, axes=(0, 0))  # (b, k)
    return _freeze(np.tensordot(yv, partial, axes=(0, 0)))


def ad_matrix(L: LieAlgebra, x: Sequence[object]) -> np.ndarray:
    """Matrix of ad x: entry [k][b] is the e_k-coordinate of [x, e_b]."""
    xv = as_vector(L, x)
    return np.tensordot(xv, L.constants, axes=(0, 0)).T


def pairing(L: LieAlgebra, x: Sequence[object], y: Sequence[object]) -> Fraction:
    return Fraction(as_vector(L, x) @ L.form_matrix @ as_vector(L, y))


def killing_form(L: LieAlgebra) -> np.ndarray:
    """K[a][b] = trace(ad e_a o ad e_b)."""
    ads = [ad_matrix(L, L.basis_vector(a)) for a in range(L.dim)]
    killing = np.empty((L.dim, L.dim), dtype=object)
    for a in range(L.dim):
        for b in range(L.dim):
            killing[a, b] = Fraction(np.trace(ads[a] @ ads[b]))
    return killing


def kernel_dimension(matrix: np.ndarray) -> int:
    """dim ker of a square object matrix."""
    return matrix.shape[1] - rank_exact(SparseMatrix.from_dense(matrix.tolist(), cols=matrix.shape[1]))


def rank_estimate(L: LieAlgebra, samples: int = 20, seed: int = DEFAULT_SEED) -> int:
    """
    Minimum of dim ker(ad x) over `samples` random integer points.

    Entries are drawn uniformly from [-SAMPLE_BOUND, SAMPLE_BOUND] with a
    generator seeded by `seed`.
    """
    if samples < 1:
        raise ValueError("rank_estimate needs at least one sample")
    rng = random.Random(seed)
    best = L.dim
    for _ in range(samples):
        x = [rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND) for _ in range(L.dim)]
        best = min(best, kernel_dimension(ad_matrix(L, x)))
    return best


def _derived_spanning_set(L: LieAlgebra) -> List[Vector]:
    vectors = []
    for a in range(L.dim):
        for b in range(a + 1, L.dim):
            v = tuple(L.structure_constants[a][b])
            if any(v) and v not in vectors:
                vectors.append(v)
    return vectors


def validate_algebra(L: LieAlgebra, rank_samples: int = 20, seed: int = DEFAULT_SEED) -> ValidationReport:
    """
    Check every standing hypothesis on L exactly.

    Never raises: failures are collected in the report.
    """
    report = ValidationReport(L.name)
    basis = [L.basis_vector(a) for a in range(L.dim)]
    C = L.constants
    B = L.form_matrix

    # Antisymmetry
    bad = [(a, b, k) for a in range(L.dim) for b in range(L.dim) for k in range(L.dim) if C[a, b, k] != -C[b, a, k]]
    report.checks.append(CheckResult("antisymmetry", not bad, f"violated at {bad[:5]}" if bad else ""))

    # Jacobi
    bad = []
    for a in range(L.dim):
        for b in range(L.dim):
            for c in range(L.dim):
                x, y, z = basis[a], basis[b], basis[c]
                total = (
                    as_vector(L, bracket(L, x, bracket(L, y, z)))
                    + as_vector(L, bracket(L, y, bracket(L, z, x)))
                    + as_vector(L, bracket(L, z, bracket(L, x, y)))
                )
                if any(total):
                    bad.append((a, b, c))
    report.checks.append(CheckResult("jacobi", not bad, f"violated at {bad[:5]}" if bad else ""))

    # Form symmetric and nondegenerate
    symmetric = all(B[a, b] == B[b, a] for a in range(L.dim) for b in range(L.dim))
    report.checks.append(CheckResult("form_symmetric", symmetric))
    nondegenerate = kernel_dimension(B) == 0 if L.dim else True
    report.checks.append(CheckResult("form_nondegenerate", nondegenerate, "" if nondegenerate else "det B = 0"))

    # Invariance <[x,y],z> + <y,[x,z]> = 0
    bad = []
    for a in range(L.dim):
        for b in range(L.dim):
            for c in range(L.dim):
                x, y, z = basis[a], basis[b], basis[c]
                if pairing(L, bracket(L, x, y), z) + pairing(L, y, bracket(L, x, z)) != 0:
                    bad.append((a, b, c))
    report.checks.append(CheckResult("invariance", not bad, f"violated at {bad[:5]}" if bad else ""))

    # Killing form on the derived algebra
    killing = killing_form(L)
    derived = [as_vector(L, v) for v in _derived_spanning_set(L)]
    bad = [(i, j) for i, u in enumerate(derived) for j, v in enumerate(derived) if u @ B @ v != u @ killing @ v]
    report.checks.append(CheckResult("extends_killing", not bad, f"differs on {len(bad)} derived pairs" if bad else ""))

    # Rank
    try:
        estimate = rank_estimate(L, rank_samples, seed)
        report.checks.append(CheckResult("rank", estimate == L.rank, f"estimated {estimate}, stored {L.rank}"))
    except Exception as e:
        report.checks.append(CheckResult("rank", False, f"rank estimate failed: {e}"))

    if not report.ok:
        logger.info("Algebra %s fails: %s", L.name, ", ".join(report.failed_names()))
    return report


def permute_basis(L: LieAlgebra, perm: Sequence[int], name: Optional[str] = None) -> LieAlgebra:
    """
    Relabel the basis: new basis vector j is old basis vector perm[j].
    """
    if sorted(perm) != list(range(L.dim)):
        raise ValueError(f"{list(perm)} is not a permutation of range({L.dim})")
    position = {old: new for new, old in enumerate(perm)}
    constants = tuple(
        tuple(tuple(L.structure_constants[perm[a]][perm[b]][perm[k]] for k in range(L.dim)) for b in range(L.dim))
        for a in range(L.dim)
    )
    form = tuple(tuple(L.form[perm[a]][perm[b]] for b in range(L.dim)) for a in range(L.dim))
    cartan = tuple(tuple(v[perm[k]] for k in range(L.dim)) for v in L.cartan)
    realization = tuple(L.realization[perm[a]] for a in range(L.dim)) if L.realization else ()
    logger.debug("Permuted %s with position map %s", L.name, position)
    return replace(
        L,
        name=name or f"{L.name}-permuted",
        structure_constants=constants,
        form=form,
        cartan=cartan,
        realization=realization,
    )


def scale_form(L: LieAlgebra, factor: object, name: Optional[str] = None) -> LieAlgebra:
    """Replace B by factor * B. The result no longer extends the Killing form unless factor is 1."""
    factor = to_fraction(factor)
    if factor == 0:
        raise ValueError("Form scale factor must be nonzero")
    form = tuple(tuple(value * factor for value in row) for row in L.form)
    return replace(L, name=name or f"{L.name}-scaled", form=form)


def algebra_to_dict(L: LieAlgebra) -> Dict:
    """JSON document with 0-based sparse [a, b, k, num, den] constants and [a, b, num, den] form entries."""
    constants = [
        [a, b, k, value.numerator, value.denominator]
        for a in range(L.dim)
        for b in range(L.dim)
        for k, value in enumerate(L.structure_constants[a][b])
        if value
    ]
    form = [
        [a, b, value.numerator, value.denominator]
        for a in range(L.dim)
        for b, value in enumerate(L.form[a])
        if value
    ]
    document = {
        "name": L.name,
        "dim": L.dim,
        "rank": L.rank,
        "center_dim": L.center_dim,
        "structure_constants": constants,
        "form": form,
    }
    if L.cartan:
        document["cartan"] = [[str(v) for v in vector] for vector in L.cartan]
    if L.realization:
        document["realization"] = [[[str(v) for v in row] for row in matrix] for matrix in L.realization]
    return document


def algebra_from_dict(document: Dict) -> LieAlgebra:
    dim = int(document["dim"])
    constants = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for a, b, k, num, den in document["structure_constants"]:
        constants[a][b][k] = Fraction(num, den)
    form = [[Fraction(0)] * dim for _ in range(dim)]
    for a, b, num, den in document["form"]:
        form[a][b] = Fraction(num, den)
    cartan = tuple(tuple(Fraction(v) for v in vector) for vector in document.get("cartan", ()))
    realization = tuple(
        tuple(tuple(Fraction(v) for v in row) for row in matrix) for matrix in document.get("realization", ())
    )
    return LieAlgebra(
        name=document["name"],
        dim=dim,
        structure_constants=tuple(tuple(tuple(row) for row in plane) for plane in constants),
        form=tuple(tuple(row) for row in form),
        rank=int(document["rank"]),
        center_dim=int(document["center_dim"]),
        cartan=cartan,
        realization=realization,
    )


def dump_algebra(L: LieAlgebra) -> str:
    return json.dumps(algebra_to_dict(L), indent=2)


def load_algebra(text: str) -> LieAlgebra:
    return algebra_from_dict(json.loads(text))
