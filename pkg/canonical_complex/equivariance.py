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
Transport Under Automorphisms

A Lie algebra automorphism A acts on g x g diagonally, (x, y) -> (Ax, Ay),
and on coefficients by pullback f -> f(Ax, Ay). Replacing the quadratics
<v, [x, y]> by <v, [Ax, Ay]> gives the conjugated differential, whose
quadratics are A^T m^k A; it equals pullback o d o pullback^-1.

Usage:
    from canonical_complex.equivariance import exp_ad_nilpotent, conjugation_check
    A = exp_ad_nilpotent(L, L.basis_vector(0))
    conjugation_check(L, A).passed
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from canonical_complex.config_utils import DEFAULT_SEED
from canonical_complex.differential import (
    ComplexElement,
    DomainError,
    LambdaTable,
    apply_differential,
    assemble_block,
    lambda_table,
    random_element,
)
from canonical_complex.evaluation import CheckOutcome
from canonical_complex.exact_linalg import SparseMatrix, in_column_span, rank_exact, to_fraction
from canonical_complex.graded_basis import BasisIndex, component_basis
from canonical_complex.homology import compute_report
from canonical_complex.lie_algebra import LieAlgebra, Matrix, ad_matrix, bracket

logger = logging.getLogger(__name__)

# Coefficient range for random nilpotent directions
NILPOTENT_WEIGHT = 3


@dataclass(frozen=True)
class AlgebraAutomorphism:
    """An invertible matrix acting on coordinates, x -> A x."""

    matrix: Matrix
    orthogonal: bool = False
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def array(self) -> np.ndarray:
        array = np.empty((self.dim, self.dim), dtype=object)
        for r, row in enumerate(self.matrix):
            for c, value in enumerate(row):
                array[r, c] = value
        return array

    def apply(self, x: Sequence[object]) -> Tuple[Fraction, ...]:
        return tuple(sum((a * to_fraction(v) for a, v in zip(row, x)), Fraction(0)) for row in self.matrix)

    def inverse(self) -> "AlgebraAutomorphism":
        inverse = _sympy_matrix(self.matrix).inv()
        return AlgebraAutomorphism(_freeze(inverse), self.orthogonal, f"{self.name}^-1" if self.name else "")

    def to_dict(self) -> Dict:
        return {"name": self.name, "orthogonal": self.orthogonal, "matrix": [[str(v) for v in r] for r in self.matrix]}


def _sympy_matrix(rows: Sequence[Sequence[object]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(str(to_fraction(v))) for v in row] for row in rows])


def _freeze(matrix) -> Matrix:
    rows, cols = matrix.shape
    return tuple(tuple(to_fraction(matrix[r, c]) for c in range(cols)) for r in range(rows))


def identity_automorphism(L: LieAlgebra) -> AlgebraAutomorphism:
    return AlgebraAutomorphism(tuple(L.basis_vector(k) for k in range(L.dim)), True, "identity")


def is_lie_automorphism(L: LieAlgebra, A: AlgebraAutomorphism) -> bool:
    """A invertible and A[e_a, e_b] = [A e_a, A e_b] on all basis pairs."""
    if A.dim != L.dim or _sympy_matrix(A.matrix).det() == 0:
        return False
    images = [A.apply(L.basis_vector(a)) for a in range(L.dim)]
    for a in range(L.dim):
        for b in range(L.dim):
            if A.apply(bracket(L, L.basis_vector(a), L.basis_vector(b))) != bracket(L, images[a], images[b]):
                return False
    return True


def preserves_form(L: LieAlgebra, A: AlgebraAutomorphism) -> bool:
    """A^T B A = B."""
    M = A.array
    return bool(np.all(M.T @ L.form_matrix @ M == L.form_matrix))


def validate_automorphism(L: LieAlgebra, matrix: Sequence[Sequence[object]], name: str = "") -> AlgebraAutomorphism:
    """
    Wrap `matrix` as an automorphism of L, flagging whether it preserves the form.

    Raises:
        DomainError: If the matrix is not a Lie algebra automorphism
    """
    A = AlgebraAutomorphism(tuple(tuple(to_fraction(v) for v in row) for row in matrix), name=name)
    if not is_lie_automorphism(L, A):
        raise DomainError(f"{name or 'matrix'} is not an automorphism of {L.name}")
    return AlgebraAutomorphism(A.matrix, preserves_form(L, A), name)


def exp_ad_nilpotent(L: LieAlgebra, n: Sequence[object]) -> AlgebraAutomorphism:
    """
    exp(ad n) as a finite sum.

    Raises:
        DomainError: If ad n is not nilpotent
    """
    N = ad_matrix(L, n)
    power = np.identity(L.dim, dtype=object) * Fraction(1)
    total = power.copy()
    for k in range(1, L.dim + 1):
        power = power @ N
        if not any(power.flat):
            break
        total = total + power * Fraction(1, factorial(k))
    else:
        raise DomainError(f"ad n is not nilpotent on {L.name}")
    return validate_automorphism(L, total.tolist(), name="exp(ad n)")


def cayley_automorphism(L: LieAlgebra, s: Sequence[object]) -> AlgebraAutomorphism:
    """(I - ad s)^-1 (I + ad s); a rotation when ad s is skew, as on so3."""
    S = _sympy_matrix(ad_matrix(L, s).tolist())
    identity = sympy.eye(L.dim)
    if (identity - S).det() == 0:
        raise DomainError("I - ad s is singular")
    return validate_automorphism(L, ((identity - S).inv() * (identity + S)).tolist(), name="cayley(ad s)")


def permutation_automorphism(L: LieAlgebra, perm: Sequence[int], name: str = "") -> AlgebraAutomorphism:
    """The basis permutation e_j -> e_{perm[j]}."""
    if sorted(perm) != list(range(L.dim)):
        raise DomainError(f"{list(perm)} is not a permutation of range({L.dim})")
    matrix = [[Fraction(0)] * L.dim for _ in range(L.dim)]
    for j, target in enumerate(perm):
        matrix[target][j] = Fraction(1)
    return validate_automorphism(L, matrix, name=name or f"perm{tuple(perm)}")


def nilpotent_basis(L: LieAlgebra) -> Dict[str, List[int]]:
    """Basis indices realized by strictly upper and strictly lower triangular matrices."""
    sides: Dict[str, List[int]] = {"upper": [], "lower": []}
    for k, m in enumerate(L.realization):
        n = len(m)
        entries = [(r, c) for r in range(n) for c in range(n) if m[r][c]]
        if entries and all(r < c for r, c in entries):
            sides["upper"].append(k)
        elif entries and all(r > c for r, c in entries):
            sides["lower"].append(k)
    return sides


def known_symmetries(L: LieAlgebra) -> List[AlgebraAutomorphism]:
    """Catalog automorphisms that are not exponentials, such as the factor swap of sl2xsl2."""
    if L.name == "sl2xsl2":
        return [permutation_automorphism(L, (3, 4, 5, 0, 1, 2), name="factor_swap")]
    return []


def sample_automorphisms(L: LieAlgebra, count: int = 5, seed: int = DEFAULT_SEED) -> List[AlgebraAutomorphism]:
    """
    `count` automorphisms exp(ad n) along random nilpotent directions.

    Without rational nilpotents (so3) Cayley rotations are used instead; on
    abelian algebras every exponential is the identity.
    """
    rng = random.Random(seed)
    sides = [indices for indices in nilpotent_basis(L).values() if indices]
    automorphisms = []
    while len(automorphisms) < count:
        if sides:
            indices = rng.choice(sides)
            weights = [rng.randint(-NILPOTENT_WEIGHT, NILPOTENT_WEIGHT) for _ in indices]
            if not any(weights):
                continue
            n = [Fraction(0)] * L.dim
            for k, w in zip(indices, weights):
                n[k] = Fraction(w)
            automorphisms.append(exp_ad_nilpotent(L, n))
        elif L.name == "so3":
            s = [Fraction(rng.randint(-NILPOTENT_WEIGHT, NILPOTENT_WEIGHT)) for _ in range(L.dim)]
            automorphisms.append(cayley_automorphism(L, s))
        else:
            automorphisms.append(exp_ad_nilpotent(L, [Fraction(rng.randint(-3, 3)) for _ in range(L.dim)]))
    return automorphisms


def pullback(L: LieAlgebra, A: AlgebraAutomorphism, c: ComplexElement) -> ComplexElement:
    """
    Substitute x -> Ax and y -> Ay in every coefficient; the exterior part is untouched.
    """
    xs = sympy.symbols(f"x0:{L.dim}")
    ys = sympy.symbols(f"y0:{L.dim}")
    gens = (*xs, *ys)
    M = _sympy_matrix(A.matrix)
    ax = [sympy.Poly(sum(M[a, b] * xs[b] for b in range(L.dim)), *gens, domain="QQ") for a in range(L.dim)]
    ay = [sympy.Poly(sum(M[a, b] * ys[b] for b in range(L.dim)), *gens, domain="QQ") for a in range(L.dim)]
    powers: Dict[Tuple[str, int, int], sympy.Poly] = {}

    def power(kind: str, a: int, e: int) -> sympy.Poly:
        key = (kind, a, e)
        if key not in powers:
            powers[key] = (ax if kind == "x" else ay)[a] ** e
        return powers[key]

    by_subset: Dict[Tuple[int, ...], sympy.Poly] = {}
    one = sympy.Poly(1, *gens, domain="QQ")
    for b, coeff in c.terms.items():
        term = one * sympy.Rational(coeff.numerator, coeff.denominator)
        for a, e in enumerate(b.alpha):
            if e:
                term = term * power("x", a, e)
        for a, e in enumerate(b.beta):
            if e:
                term = term * power("y", a, e)
        by_subset[b.J] = by_subset[b.J] + term if b.J in by_subset else term

    terms = []
    for J, poly in by_subset.items():
        for monom, value in poly.terms():
            terms.append((BasisIndex(tuple(monom[: L.dim]), tuple(monom[L.dim :]), J), to_fraction(value)))
    return ComplexElement.from_terms(c.dim, c.degree, terms)


def conjugated_table(L: LieAlgebra, A: AlgebraAutomorphism, table: Optional[LambdaTable] = None) -> LambdaTable:
    """Quadratics of <v, [Ax, Ay]>: m^k -> A^T m^k A."""
    if table is None:
        table = lambda_table(L)
    M = A.array
    matrices = []
    for k in range(L.dim):
        m = np.empty((L.dim, L.dim), dtype=object)
        m[:, :] = Fraction(0)
        for a, b, v in table.entries[k]:
            m[a, b] = v
        matrices.append((M.T @ m @ M).tolist())
    return LambdaTable.from_dense(matrices)


def conjugation_check(
    L: LieAlgebra,
    A: AlgebraAutomorphism,
    samples: int = 20,
    seed: int = DEFAULT_SEED,
    max_degree: int = 5,
) -> CheckOutcome:
    """d_A(c) == pullback_A(d(pullback_{A^-1}(c))) exactly on random elements with p + q <= max_degree."""
    conjugated = conjugated_table(L, A)
    inverse = A.inverse()
    components = [
        (i, p, total - p)
        for total in range(max_degree + 1)
        for p in range(total + 1)
        for i in range(1, min(L.dim, p, total - p) + 1)
    ]
    rng = random.Random(seed)
    outcome = CheckOutcome("conjugation", True)
    for n in range(samples):
        i, p, q = rng.choice(components)
        c = random_element(L, i, p, q, rng)
        lhs = apply_differential(L, c, table=conjugated)
        rhs = pullback(L, A, apply_differential(L, pullback(L, inverse, c)))
        outcome.checked += 1
        if lhs != rhs:
            outcome.passed = False
            outcome.failures.append({"sample": n, "component": [i, p, q]})
    logger.info("%s conjugation by %s: %d/%d agree", L.name, A.name or "A", outcome.checked - len(outcome.failures), samples)
    return outcome


def conjugated_homology_check(L: LieAlgebra, A: AlgebraAutomorphism, cutoff: int, **kwargs) -> CheckOutcome:
    """Homology tables of d and of the conjugated differential agree for p + q <= cutoff."""
    plain = compute_report(L, cutoff, **kwargs).dimension_table()
    conjugated = compute_report(L, cutoff, table=conjugated_table(L, A), **kwargs).dimension_table()
    differing = sorted(key for key in plain if plain[key] != conjugated.get(key))
    return CheckOutcome(
        "conjugated_homology",
        not differing,
        len(plain),
        [{"i": i, "p": p, "q": q} for i, p, q in differing],
    )


def ideal_transport_check(L: LieAlgebra, A: AlgebraAutomorphism) -> bool:
    """
    Degree-one shadow of image transport: the (1, 1, 1) blocks of d and of the
    conjugated differential have equal rank, and every conjugated quadratic
    expands in the pullbacks of the original quadratics.
    """
    conjugated = conjugated_table(L, A)
    plain_block = assemble_block(L, 1, 1, 1)
    conjugated_block = assemble_block(L, 1, 1, 1, table=conjugated)
    if rank_exact(plain_block) != rank_exact(conjugated_block):
        return False

    target = component_basis(L, 0, 1, 1)
    generators = [
        ComplexElement.basis_element(L.dim, BasisIndex((0,) * L.dim, (0,) * L.dim, (k,))) for k in range(L.dim)
    ]
    pulled = SparseMatrix.from_columns(
        target.dimension, [pullback(L, A, apply_differential(L, e)).to_vector(target) for e in generators]
    )
    for e in generators:
        image = apply_differential(L, e, table=conjugated).to_vector(target)
        if not in_column_span(pulled, image, exact_only=True):
            return False
    return True
