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
Non-boundary Cycles from Invariant Vector Fields

A polynomial map phi: g -> g with [x, phi(x)] = 0 for all x gives the
degree-1 cycle (x, y) -> phi(x). Wedging rank-many independent such maps
gives a cycle in every degree up to the rank; it is not a boundary because
boundaries vanish on commuting pairs while the wedge does not.

Usage:
    from canonical_complex.invariant_cycles import canonical_cycle, certify_nonboundary
    cycle = canonical_cycle(L, (1, 2))
    certificate = certify_nonboundary(L, cycle)
"""

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from canonical_complex.catalog import CATALOG_NAMES, normalize_name
from canonical_complex.config_utils import DEFAULT_SEED, SAMPLE_BOUND
from canonical_complex.differential import (
    ComplexElement,
    DomainError,
    LambdaTable,
    apply_differential,
    assemble_block,
)
from canonical_complex.evaluation import (
    CheckOutcome,
    PointPair,
    evaluate,
    kernel_basis,
    lies_in_exterior_power,
    sample_commuting_pair,
)
from canonical_complex.exact_linalg import SparseMatrix, in_column_span, rank_exact, to_fraction
from canonical_complex.graded_basis import BasisIndex, component_basis, exterior_subsets
from canonical_complex.lie_algebra import LieAlgebra, Vector, ad_matrix, bracket, kernel_dimension

logger = logging.getLogger(__name__)

# Points tried by the small-integer grid fallback of the witness search
GRID_LIMIT = 400
GRID_VALUES = (1, 0, -1, 2)


class UnsupportedAlgebraError(ValueError):
    """Raised when no closed-form invariant vector fields are known for an algebra."""


def coordinate_symbols(dim: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.symbols(f"x0:{dim}"))


def _sym(value: Fraction) -> sympy.Rational:
    value = to_fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


@dataclass(frozen=True)
class EquivariantMap:
    """A homogeneous polynomial map g -> g, one sympy expression in x0..x{dim-1} per output coordinate."""

    name: str
    degree: int
    components: Tuple[sympy.Expr, ...]

    @property
    def dim(self) -> int:
        return len(self.components)

    def evaluate(self, x: Sequence[object]) -> Vector:
        substitution = dict(zip(coordinate_symbols(self.dim), (_sym(v) for v in x)))
        return tuple(to_fraction(sympy.sympify(expr).subs(substitution)) for expr in self.components)

    def check_identity(self, L: LieAlgebra) -> bool:
        """[x, phi(x)] = 0 as a polynomial identity."""
        xs = coordinate_symbols(L.dim)
        for k in range(L.dim):
            total = sum(
                (
                    _sym(L.structure_constants[a][b][k]) * xs[a] * self.components[b]
                    for a in range(L.dim)
                    for b in range(L.dim)
                    if L.structure_constants[a][b][k]
                ),
                sympy.Integer(0),
            )
            if sympy.expand(total) != 0:
                return False
        return True


def identity_map(L: LieAlgebra) -> EquivariantMap:
    return EquivariantMap("identity", 1, coordinate_symbols(L.dim))


def constant_map(L: LieAlgebra, vector: Sequence[object], name: str) -> EquivariantMap:
    return EquivariantMap(name, 0, tuple(_sym(v) for v in vector))


def projection_map(L: LieAlgebra, indices: Sequence[int], name: str) -> EquivariantMap:
    xs = coordinate_symbols(L.dim)
    return EquivariantMap(name, 1, tuple(xs[k] if k in indices else sympy.Integer(0) for k in range(L.dim)))


def traceless_square_map(L: LieAlgebra) -> EquivariantMap:
    """x -> x^2 - tr(x^2)/n Id, read back into the basis through the trace pairing of the realization."""
    if not L.realization:
        raise UnsupportedAlgebraError(f"{L.name} has no matrix realization")
    mats = [sympy.Matrix([[_sym(v) for v in row] for row in m]) for m in L.realization]
    n = mats[0].shape[0]
    xs = coordinate_symbols(L.dim)
    X = sum((x * m for x, m in zip(xs, mats)), sympy.zeros(n, n))
    square = (X * X).applyfunc(sympy.expand)
    traceless = square - (square.trace() / n) * sympy.eye(n)
    gram = sympy.Matrix(L.dim, L.dim, lambda a, b: (mats[a] * mats[b]).trace())
    traces = sympy.Matrix([sympy.expand((m * traceless).trace()) for m in mats])
    coords = gram.inv() * traces
    return EquivariantMap("traceless_square", 2, tuple(sympy.expand(c) for c in coords))


def center_basis(L: LieAlgebra) -> List[Vector]:
    """Exact basis of the center: the common kernel of every ad e_a."""
    rows = []
    for a in range(L.dim):
        rows.extend(ad_matrix(L, L.basis_vector(a)).tolist())
    stacked = sympy.Matrix([[_sym(v) for v in row] for row in rows])
    return [tuple(to_fraction(v) for v in vector) for vector in stacked.nullspace()]


def lg_generators(L: LieAlgebra) -> List[EquivariantMap]:
    """
    Closed-form free generators of the invariant vector fields, rank-many.

    Raises:
        UnsupportedAlgebraError: If L is not a catalog algebra, or a map fails the invariance identity
    """
    key = normalize_name(L.name)
    if key not in CATALOG_NAMES:
        raise UnsupportedAlgebraError(f"No invariant vector fields known for {L.name!r}")
    if key.startswith("abelian"):
        generators = [constant_map(L, L.basis_vector(k), f"e{k}") for k in range(L.dim)]
    elif key in ("sl2", "so3"):
        generators = [identity_map(L)]
    elif key == "sl3":
        generators = [identity_map(L), traceless_square_map(L)]
    elif key == "gl2":
        generators = [identity_map(L)] + [constant_map(L, z, "center") for z in center_basis(L)]
    else:  # sl2xsl2
        generators = [projection_map(L, (0, 1, 2), "first_factor"), projection_map(L, (3, 4, 5), "second_factor")]

    if len(generators) != L.rank:
        raise UnsupportedAlgebraError(f"Found {len(generators)} generators for {L.name} of rank {L.rank}")
    # The choice above goes by name only; a relabeled basis must not slip through
    broken = [phi.name for phi in generators if not phi.check_identity(L)]
    if broken:
        raise UnsupportedAlgebraError(f"Maps {broken} do not satisfy [x, phi(x)] = 0 on {L.name}")
    return generators


def canonical_cycle(
    L: LieAlgebra, subset: Sequence[int], generators: Optional[List[EquivariantMap]] = None
) -> ComplexElement:
    """
    The wedge phi_{k_1} ^ ... ^ phi_{k_i} as a complex element with no y-dependence.

    The e_J coefficient is det[phi_{k_s}(x)_{j_t}]; the bidegree is (sum of degrees + i, i).

    Args:
        L: The algebra
        subset: 1-based generator indices
        generators: Defaults to lg_generators(L)

    Raises:
        DomainError: If subset is empty, repeats an index, or leaves 1..rank
    """
    generators = generators or lg_generators(L)
    if not subset:
        raise DomainError("canonical_cycle needs a nonempty generator subset")
    if len(set(subset)) != len(subset) or not all(1 <= k <= len(generators) for k in subset):
        raise DomainError(f"Generator subset {list(subset)} must be distinct indices in 1..{len(generators)}")

    chosen = [generators[k - 1] for k in subset]
    degree = len(chosen)
    xs = coordinate_symbols(L.dim)
    zero = (0,) * L.dim
    terms: List[Tuple[BasisIndex, Fraction]] = []
    for J in exterior_subsets(L.dim, degree):
        minor = sympy.Matrix([[phi.components[j] for j in J] for phi in chosen]).det(method="berkowitz")
        minor = sympy.expand(minor)
        if minor == 0:
            continue
        for monom, coeff in sympy.Poly(minor, *xs).terms():
            terms.append((BasisIndex(tuple(monom), zero, J), to_fraction(coeff)))
    cycle = ComplexElement.from_terms(L.dim, degree, terms)
    logger.debug("Cycle %s of %s: %d terms in %s", list(subset), L.name, len(cycle.terms), cycle.bidegrees)
    return cycle


def verify_cycle(L: LieAlgebra, c: ComplexElement, *, table: Optional[LambdaTable] = None) -> bool:
    """True iff d(c) = 0 exactly."""
    return apply_differential(L, c, table=table).is_zero()


@dataclass
class NonBoundaryCertificate:
    """Two independent proofs that a cycle is not a boundary."""

    bidegree: Tuple[int, int]
    span: bool
    evaluation: bool
    witness: Optional[PointPair] = None
    value: Optional[Vector] = None

    @property
    def passed(self) -> bool:
        return self.span and self.evaluation

    @property
    def agree(self) -> bool:
        return self.span == self.evaluation

    def to_dict(self) -> Dict:
        return {
            "bidegree": list(self.bidegree),
            "span": self.span,
            "evaluation": self.evaluation,
            "witness": self.witness.to_dict() if self.witness else None,
            "value": [str(v) for v in self.value] if self.value else None,
        }


def _grid_points(dim: int):
    return itertools.islice(itertools.product(GRID_VALUES, repeat=dim), GRID_LIMIT)


def find_evaluation_witness(
    L: LieAlgebra, c: ComplexElement, seed: int = DEFAULT_SEED, attempts: int = 10
) -> Optional[Tuple[PointPair, Vector]]:
    """
    A commuting pair where c does not vanish.

    Regular semisimple samples are tried first, then a small-integer grid of x
    paired with x itself and with each kernel basis vector of ad x.
    """
    for s in range(attempts):
        pt = sample_commuting_pair(L, seed + s, regular_semisimple=bool(L.cartan))
        value = evaluate(L, c, pt)
        if any(value):
            return pt, value
    for x in _grid_points(L.dim):
        x = tuple(Fraction(v) for v in x)
        for y in [x, *kernel_basis(L, x)]:
            pt = PointPair(x, y)
            value = evaluate(L, c, pt)
            if any(value):
                return pt, value
    return None


def certify_nonboundary(
    L: LieAlgebra,
    c: ComplexElement,
    *,
    seed: int = DEFAULT_SEED,
    table: Optional[LambdaTable] = None,
    exact_only: bool = False,
) -> NonBoundaryCertificate:
    """
    Certify that the cycle c is not a boundary.

    The span certificate checks that c is outside the image of the
    (i+1, p, q) block. The evaluation certificate is a commuting pair at
    which c is nonzero, which no boundary admits.

    Raises:
        DomainError: If c is not a cycle, or spreads over several bidegrees
    """
    if not verify_cycle(L, c, table=table):
        raise DomainError("certify_nonboundary needs a cycle")
    if len(c.bidegrees) > 1:
        raise DomainError(f"Cycle spans several bidegrees {c.bidegrees}")
    if c.is_zero():
        return NonBoundaryCertificate((0, 0), False, False)

    p, q = c.bidegrees[0]
    i = c.degree
    block = assemble_block(L, i + 1, p, q, table=table)
    span = not in_column_span(block, c.to_vector(component_basis(L, i, p, q)), exact_only=exact_only)

    found = find_evaluation_witness(L, c, seed)
    witness, value = found if found else (None, None)
    certificate = NonBoundaryCertificate((p, q), span, found is not None, witness, value)
    if not certificate.agree:
        logger.error("Non-boundary certificates disagree at (%d, %d): span=%s evaluation=%s", p, q, span, found)
    return certificate


@dataclass
class CycleWitness:
    degree: int
    subset: Tuple[int, ...]
    is_cycle: bool
    certificate: Optional[NonBoundaryCertificate] = None

    @property
    def passed(self) -> bool:
        return self.is_cycle and self.certificate is not None and self.certificate.passed

    def to_dict(self) -> Dict:
        return {
            "degree": self.degree,
            "subset": list(self.subset),
            "is_cycle": self.is_cycle,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "passed": self.passed,
        }


def witness_cycles(
    L: LieAlgebra,
    *,
    seed: int = DEFAULT_SEED,
    table: Optional[LambdaTable] = None,
    exact_only: bool = False,
) -> List[CycleWitness]:
    """One certified cycle phi_1 ^ ... ^ phi_i for every degree i = 1..rank."""
    generators = lg_generators(L)
    witnesses = []
    for i in range(1, L.rank + 1):
        subset = tuple(range(1, i + 1))
        cycle = canonical_cycle(L, subset, generators)
        if not verify_cycle(L, cycle, table=table):
            logger.warning("%s: wedge of generators %s is not a cycle", L.name, list(subset))
            witnesses.append(CycleWitness(i, subset, False))
            continue
        certificate = certify_nonboundary(L, cycle, seed=seed, table=table, exact_only=exact_only)
        witnesses.append(CycleWitness(i, subset, True, certificate))
        logger.info("%s: degree %d witness at %s, passed=%s", L.name, i, certificate.bidegree, certificate.passed)
    return witnesses


def _regular_point(L: LieAlgebra, rng: random.Random) -> Vector:
    while True:
        x = tuple(Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND)) for _ in range(L.dim))
        if kernel_dimension(ad_matrix(L, x)) == L.rank:
            return x


def generator_independence_check(L: LieAlgebra, points: int = 10, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """At random regular x the generator values lie in ker(ad x) and span a space of dimension rank."""
    generators = lg_generators(L)
    rng = random.Random(seed)
    outcome = CheckOutcome("generator_independence", True)
    for n in range(points):
        x = _regular_point(L, rng)
        values = [phi.evaluate(x) for phi in generators]
        independent = rank_exact(SparseMatrix.from_columns(L.dim, [dict(enumerate(v)) for v in values])) == L.rank
        central = all(not any(bracket(L, x, v)) for v in values)
        outcome.checked += 1
        if not (independent and central):
            outcome.passed = False
            outcome.failures.append({"point": n, "x": [str(v) for v in x], "independent": independent, "central": central})
    return outcome


def centralizer_check(L: LieAlgebra, points: int = 10, seed: int = DEFAULT_SEED) -> CheckOutcome:
    """Each witness cycle evaluated at a commuting pair with regular x lies in L^i(ker ad x)."""
    generators = lg_generators(L)
    cycles = [canonical_cycle(L, tuple(range(1, i + 1)), generators) for i in range(1, L.rank + 1)]
    rng = random.Random(seed)
    outcome = CheckOutcome("centralizer", True)
    n = 0
    while n < points:
        pt = sample_commuting_pair(L, rng.randrange(2**31))
        kernel = kernel_basis(L, pt.x)
        if len(kernel) != L.rank:
            continue
        for cycle in cycles:
            outcome.checked += 1
            if not lies_in_exterior_power(evaluate(L, cycle, pt), kernel, cycle.degree):
                outcome.passed = False
                outcome.failures.append({"point": n, "degree": cycle.degree, **pt.to_dict()})
        n += 1
    return outcome
