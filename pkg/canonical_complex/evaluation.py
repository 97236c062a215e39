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
Pointwise Evaluation on g x g

Complex elements are evaluated at rational pairs (x, y). Boundaries vanish
on the commuting variety; off it, the fiber complex at (x, y) is contracted
to zero by wedging with any u on which the form v -> <v, [x, y]> is 1.

Usage:
    from canonical_complex.evaluation import sample_commuting_pair, evaluate
    pt = sample_commuting_pair(L, seed=3)
    evaluate(L, cycle, pt)
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from canonical_complex.config_utils import DEFAULT_SEED, SAMPLE_BOUND
from canonical_complex.differential import (
    ComplexElement,
    DomainError,
    LambdaTable,
    apply_differential,
    lambda_table,
    random_element,
)
from canonical_complex.exact_linalg import SparseMatrix, in_column_span, rank_exact, to_fraction
from canonical_complex.graded_basis import exterior_subsets
from canonical_complex.lie_algebra import LieAlgebra, Vector, ad_matrix, as_vector, bracket, kernel_dimension
from canonical_complex.transcript import Transcript, null_transcript

logger = logging.getLogger(__name__)

# Attempts at drawing a regular element before giving up
MAX_REGULAR_ATTEMPTS = 100
# Largest total degree p + q of random chains
CHAIN_DEGREE = 6

ExteriorVector = Dict[Tuple[int, ...], Fraction]


@dataclass(frozen=True)
class PointPair:
    x: Vector
    y: Vector

    def commutes(self, L: LieAlgebra) -> bool:
        return not any(bracket(L, self.x, self.y))

    def to_dict(self) -> Dict:
        return {"x": [str(v) for v in self.x], "y": [str(v) for v in self.y]}


@dataclass
class CheckOutcome:
    """Verdict of a sampled check, with the cases that failed."""

    name: str
    passed: bool
    checked: int = 0
    failures: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}


def _rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND), rng.randint(1, 5))


def _integer_vector(rng: random.Random, dim: int) -> Vector:
    return tuple(Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND)) for _ in range(dim))


def _to_sympy(matrix: np.ndarray) -> sympy.Matrix:
    rows, cols = matrix.shape
    return sympy.Matrix(rows, cols, lambda r, c: sympy.Rational(matrix[r, c].numerator, matrix[r, c].denominator))


def evaluate(L: LieAlgebra, c: ComplexElement, pt: PointPair) -> Vector:
    """
    Substitute (x, y) into every coefficient of c.

    Returns:
        Coordinates in L^i(g), indexed like exterior_subsets(dim, i)
    """
    x, y = as_vector(L, pt.x), as_vector(L, pt.y)
    positions = {J: n for n, J in enumerate(exterior_subsets(L.dim, c.degree))}
    values = [Fraction(0)] * comb(L.dim, c.degree)
    for b, coeff in c.terms.items():
        term = coeff
        for a, power in enumerate(b.alpha):
            if power:
                term *= x[a] ** power
        for a, power in enumerate(b.beta):
            if power:
                term *= y[a] ** power
        values[positions[b.J]] += term
    return tuple(values)


def kernel_basis(L: LieAlgebra, x: Sequence[object]) -> List[Vector]:
    """Exact basis of ker(ad x)."""
    nullspace = _to_sympy(ad_matrix(L, x)).nullspace()
    return [tuple(Fraction(int(v.p), int(v.q)) for v in vector) for vector in nullspace]


def _regular_semisimple(L: LieAlgebra, rng: random.Random) -> Vector:
    if not L.cartan:
        raise DomainError(f"{L.name} carries no Cartan basis for regular semisimple sampling")
    for _ in range(MAX_REGULAR_ATTEMPTS):
        weights = [rng.choice([k for k in range(-SAMPLE_BOUND, SAMPLE_BOUND + 1) if k]) for _ in L.cartan]
        x = tuple(sum((w * h[k] for w, h in zip(weights, L.cartan)), Fraction(0)) for k in range(L.dim))
        if kernel_dimension(ad_matrix(L, x)) == L.rank:
            return x
    raise DomainError(f"No regular semisimple element of {L.name} found in {MAX_REGULAR_ATTEMPTS} draws")


def sample_commuting_pair(L: LieAlgebra, seed: int = DEFAULT_SEED, regular_semisimple: bool = False) -> PointPair:
    """
    A pair with [x, y] = 0 exactly.

    x has integer entries in [-10, 10] (or is a regular combination of the
    Cartan basis); y is a random rational combination of a basis of ker(ad x),
    which always contains x.
    """
    rng = random.Random(seed)
    x = _regular_semisimple(L, rng) if regular_semisimple else _integer_vector(rng, L.dim)
    kernel = kernel_basis(L, x)
    # One weight per kernel vector, shared by every coordinate
    weights = [_rational(rng) for _ in kernel]
    y = tuple(sum((w * v[k] for w, v in zip(weights, kernel)), Fraction(0)) for k in range(L.dim))
    pair = PointPair(x, y)
    if not pair.commutes(L):
        raise ArithmeticError("Sampled pair does not commute")
    return pair


def sample_noncommuting_pair(L: LieAlgebra, seed: int = DEFAULT_SEED) -> Optional[PointPair]:
    """A random integer pair with [x, y] != 0, or None for abelian algebras."""
    if not any(v for plane in L.structure_constants for row in plane for v in row):
        return None
    rng = random.Random(seed)
    while True:
        pair = PointPair(_integer_vector(rng, L.dim), _integer_vector(rng, L.dim))
        if not pair.commutes(L):
            return pair


def random_chain(L: LieAlgebra, rng: random.Random, max_total: int = CHAIN_DEGREE) -> ComplexElement:
    """Random element of a random component (i, p, q) with i >= 1 and p + q <= max_total."""
    components = [
        (i, p, total - p)
        for total in range(max_total + 1)
        for p in range(total + 1)
        for i in range(1, min(L.dim, p, total - p) + 1)
    ]
    if not components:
        raise DomainError(f"No component of positive degree with p + q <= {max_total}")
    i, p, q = rng.choice(components)
    return random_element(L, i, p, q, rng)


def boundary_vanishing_test(
    L: LieAlgebra,
    chains: int = 20,
    pairs: int = 20,
    seed: int = DEFAULT_SEED,
    *,
    table: Optional[LambdaTable] = None,
    transcript: Transcript = null_transcript,
) -> CheckOutcome:
    """
    Evaluate d(b) for random chains b at sampled commuting pairs; pass iff every value is exactly zero.

    One transcript record is written per chain x pair check.
    """
    if chains < 1 or pairs < 1:
        raise ValueError("boundary_vanishing_test needs at least one chain and one pair")
    rng = random.Random(seed)
    points = [sample_commuting_pair(L, rng.randrange(2**31)) for _ in range(pairs)]
    outcome = CheckOutcome("boundary_vanishing", True)
    for n in range(chains):
        b = random_chain(L, rng)
        boundary = apply_differential(L, b, table=table)
        for j, pt in enumerate(points):
            value = evaluate(L, boundary, pt)
            ok = not any(value)
            outcome.checked += 1
            transcript.record("boundary", algebra=L.name, chain=n, pair=j, bidegrees=b.bidegrees, passed=ok)
            if not ok:
                outcome.passed = False
                outcome.failures.append({"chain": n, "pair": j, "bidegrees": b.bidegrees})
    logger.info("%s boundary vanishing: %d checks, %d failures", L.name, outcome.checked, len(outcome.failures))
    return outcome


def commuting_tangent_dim(L: LieAlgebra, pt: PointPair) -> int:
    """
    dim of {(u, v) : [u, y] + [x, v] = 0}, the tangent space of the commuting variety at (x, y).

    Raises:
        DomainError: If [x, y] != 0
    """
    if not pt.commutes(L):
        raise DomainError("Tangent space requested at a non-commuting pair")
    # [u, y] = -ad(y) u and [x, v] = ad(x) v
    constraint = np.concatenate([-ad_matrix(L, pt.y), ad_matrix(L, pt.x)], axis=1)
    M = SparseMatrix.from_dense(constraint.tolist(), cols=2 * L.dim)
    return 2 * L.dim - rank_exact(M)


def fiber_form(L: LieAlgebra, pt: PointPair, table: Optional[LambdaTable] = None) -> Vector:
    """w_k = <e_k, [x, y]>, the linear form the fiber differential contracts with."""
    if table is None:
        table = lambda_table(L)
    x, y = as_vector(L, pt.x), as_vector(L, pt.y)
    return tuple(sum((v * x[a] * y[b] for a, b, v in table.entries[k]), Fraction(0)) for k in range(L.dim))


def _contract(w: Sequence[Fraction], c: ExteriorVector) -> ExteriorVector:
    result: ExteriorVector = {}
    for J, coeff in c.items():
        for t, j in enumerate(J):
            if w[j]:
                rest = J[:t] + J[t + 1 :]
                result[rest] = result.get(rest, Fraction(0)) + (-1) ** t * w[j] * coeff
    return {J: v for J, v in result.items() if v}


def _wedge(u: Sequence[Fraction], c: ExteriorVector) -> ExteriorVector:
    result: ExteriorVector = {}
    for J, coeff in c.items():
        for k, uk in enumerate(u):
            if uk and k not in J:
                position = sum(1 for j in J if j < k)
                merged = tuple(sorted(J + (k,)))
                result[merged] = result.get(merged, Fraction(0)) + (-1) ** position * uk * coeff
    return {J: v for J, v in result.items() if v}


def fiber_homology(L: LieAlgebra, pt: PointPair, table: Optional[LambdaTable] = None) -> List[int]:
    """
    Homology dimensions of L(g) with the differential contracting with fiber_form(pt), i = 0..dim.

    binom(dim, i) everywhere on the commuting variety, zero everywhere off it.
    """
    w = fiber_form(L, pt, table)
    ranks = [0] * (L.dim + 2)
    for i in range(1, L.dim + 1):
        target = {J: n for n, J in enumerate(exterior_subsets(L.dim, i - 1))}
        columns = [
            {target[J]: v for J, v in _contract(w, {S: Fraction(1)}).items()} for S in exterior_subsets(L.dim, i)
        ]
        ranks[i] = rank_exact(SparseMatrix.from_columns(len(target), columns))
    return [comb(L.dim, i) - ranks[i] - ranks[i + 1] for i in range(L.dim + 1)]


def contracting_homotopy_check(
    L: LieAlgebra, pt: PointPair, samples: int = 10, seed: int = DEFAULT_SEED, table: Optional[LambdaTable] = None
) -> bool:
    """
    Off the commuting variety, d(u ^ c) + u ^ d(c) = c on random fiber elements c,
    where u is scaled so that the fiber form takes the value 1 on it.

    Raises:
        DomainError: If pt commutes, so no such u exists
    """
    w = fiber_form(L, pt, table)
    pivot = next((k for k, value in enumerate(w) if value), None)
    if pivot is None:
        raise DomainError("The fiber form vanishes at a commuting pair; there is no contracting homotopy")
    u = [Fraction(0)] * L.dim
    u[pivot] = 1 / w[pivot]
    rng = random.Random(seed)
    for _ in range(samples):
        degree = rng.randint(0, L.dim)
        subsets = exterior_subsets(L.dim, degree)
        c = {}
        for J in rng.sample(subsets, min(3, len(subsets))):
            value = _rational(rng)
            if value:
                c[J] = value
        lhs = _contract(w, _wedge(u, c))
        for J, v in _wedge(u, _contract(w, c)).items():
            lhs[J] = lhs.get(J, Fraction(0)) + v
        if {J: v for J, v in lhs.items() if v} != c:
            return False
    return True


def support_check(L: LieAlgebra, samples: int = 10, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """
    Pointwise shadow of the support statement: the fiber complex is exact off
    the commuting variety (with an explicit homotopy) and has full homology on it.
    """
    rng = random.Random(seed)
    full = [comb(L.dim, i) for i in range(L.dim + 1)]
    outcome = CheckOutcome("support", True)
    for n in range(samples):
        on = sample_commuting_pair(L, rng.randrange(2**31))
        outcome.checked += 1
        if fiber_homology(L, on) != full:
            outcome.passed = False
            outcome.failures.append({"sample": n, "kind": "commuting", **on.to_dict()})
        off = sample_noncommuting_pair(L, rng.randrange(2**31))
        if off is None:
            continue
        outcome.checked += 1
        if any(fiber_homology(L, off)) or not contracting_homotopy_check(L, off, seed=rng.randrange(2**31)):
            outcome.passed = False
            outcome.failures.append({"sample": n, "kind": "non-commuting", **off.to_dict()})
    return outcome


def _minor(rows: Sequence[Sequence[Fraction]], columns: Sequence[int]) -> Fraction:
    matrix = sympy.Matrix([[sympy.Rational(r[j].numerator, r[j].denominator) for j in columns] for r in rows])
    return to_fraction(matrix.det())


def exterior_coordinates(vectors: Sequence[Sequence[Fraction]], degree: int) -> List[Vector]:
    """Coordinates of the wedge of every `degree`-subset of `vectors`, indexed like exterior_subsets."""
    dim = len(vectors[0])
    wedges = []
    for chosen in exterior_subsets(len(vectors), degree):
        rows = [[to_fraction(v) for v in vectors[s]] for s in chosen]
        wedges.append(tuple(_minor(rows, J) if degree else Fraction(1) for J in exterior_subsets(dim, degree)))
    return wedges


def lies_in_exterior_power(omega: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], degree: int) -> bool:
    """True iff omega lies in L^degree of the span of the independent `vectors`."""
    if not any(omega):
        return True
    if not vectors or degree > len(vectors):
        return False
    spanning = exterior_coordinates(vectors, degree)
    M = SparseMatrix.from_columns(len(omega), [dict(enumerate(w)) for w in spanning])
    return in_column_span(M, list(omega), exact_only=True)
