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

"""Tests for invariant vector fields and certified non-boundary cycles."""

from dataclasses import replace

import pytest

from canonical_complex.catalog import build_catalog_algebra
from canonical_complex.differential import ComplexElement, DomainError, flip_sign, lambda_table
from canonical_complex.graded_basis import BasisIndex
from canonical_complex.invariant_cycles import (
    UnsupportedAlgebraError,
    canonical_cycle,
    center_basis,
    centralizer_check,
    certify_nonboundary,
    generator_independence_check,
    lg_generators,
    verify_cycle,
    witness_cycles,
)
from canonical_complex.lie_algebra import permute_basis


class TestGenerators:
    """Tests for lg_generators."""

    @pytest.mark.parametrize("name", ["abelian2", "sl2", "so3", "gl2", "sl2xsl2", "sl3"])
    def test_generators_are_invariant(self, name):
        """Test [x, phi(x)] = 0 identically for every generator."""
        L = build_catalog_algebra(name)
        generators = lg_generators(L)
        assert len(generators) == L.rank
        assert all(phi.check_identity(L) for phi in generators)

    def test_sl3_degrees(self, sl3):
        """Test sl3 generators have degrees 1 and 2."""
        assert [phi.degree for phi in lg_generators(sl3)] == [1, 2]

    def test_gl2_center(self, gl2):
        """Test the center of gl2 is the identity matrix direction."""
        assert center_basis(gl2) == [(0, 0, 0, 1)]

    def test_unknown_algebra(self, sl2):
        """Test algebras outside the catalog have no known generators."""
        with pytest.raises(UnsupportedAlgebraError):
            lg_generators(replace(sl2, name="custom"))

    def test_relabeled_basis_rejected(self, sl2xsl2):
        """Test factor projections chosen by name fail once the basis interleaves the factors."""
        interleaved = permute_basis(sl2xsl2, (0, 3, 1, 4, 2, 5), name="sl2xsl2")
        with pytest.raises(UnsupportedAlgebraError, match="first_factor"):
            lg_generators(interleaved)


class TestCanonicalCycle:
    """Tests for canonical_cycle and verify_cycle."""

    @pytest.mark.parametrize(
        "name,subset,bidegree",
        [
            ("sl2", (1,), (2, 1)),
            ("abelian2", (1, 2), (2, 2)),
            ("gl2", (1, 2), (3, 2)),
            ("sl2xsl2", (1, 2), (4, 2)),
            ("sl3", (1, 2), (5, 2)),
        ],
    )
    def test_bidegree_and_cycle(self, name, subset, bidegree):
        """Test each wedge of generators is a cycle in its expected bidegree."""
        L = build_catalog_algebra(name)
        cycle = canonical_cycle(L, subset)
        assert cycle.bidegrees == [bidegree]
        assert cycle.degree == len(subset)
        assert verify_cycle(L, cycle)

    def test_sl2_cycle_is_tautological(self, sl2):
        """Test the sl2 cycle is x_e e_e + x_h e_h + x_f e_f."""
        zero = (0, 0, 0)
        expected = ComplexElement.from_terms(
            3, 1, [(BasisIndex(tuple(int(a == k) for a in range(3)), zero, (k,)), 1) for k in range(3)]
        )
        assert canonical_cycle(sl2, (1,)) == expected

    @pytest.mark.parametrize("subset", [(), (1, 1), (3,), (0,)])
    def test_invalid_subsets(self, sl3, subset):
        """Test empty, repeated and out-of-range subsets raise."""
        with pytest.raises(DomainError):
            canonical_cycle(sl3, subset)

    def test_corrupted_differential_breaks_cycle(self, sl2):
        """Test a flipped sign makes the canonical cycle fail."""
        table = flip_sign(lambda_table(sl2), 1, 0, 2)
        assert not verify_cycle(sl2, canonical_cycle(sl2, (1,)), table=table)


class TestCertifyNonboundary:
    """Tests for certify_nonboundary and witness_cycles."""

    def test_sl2_certificate(self, sl2):
        """Test both certificates agree that the sl2 cycle is not a boundary."""
        certificate = certify_nonboundary(sl2, canonical_cycle(sl2, (1,)))
        assert certificate.span and certificate.evaluation
        assert certificate.bidegree == (2, 1)
        assert certificate.witness.commutes(sl2)
        assert any(certificate.value)

    def test_rejects_non_cycle(self, sl2):
        """Test a non-cycle cannot be certified."""
        zero = (0, 0, 0)
        with pytest.raises(DomainError):
            certify_nonboundary(sl2, ComplexElement.basis_element(3, BasisIndex(zero, zero, (1,))))

    def test_rejects_mixed_bidegrees(self, abelian2):
        """Test a cycle spread over two bidegrees is rejected."""
        zero = (0, 0)
        c = ComplexElement.from_terms(
            2, 1, [(BasisIndex(zero, zero, (0,)), 1), (BasisIndex((1, 0), zero, (0,)), 1)]
        )
        with pytest.raises(DomainError):
            certify_nonboundary(abelian2, c)

    @pytest.mark.parametrize("name", ["abelian2", "sl2", "so3", "gl2", "sl2xsl2", "sl3"])
    def test_witness_cycles_pass(self, name):
        """Test one certified witness per degree up to the rank."""
        L = build_catalog_algebra(name)
        witnesses = witness_cycles(L)
        assert [w.degree for w in witnesses] == list(range(1, L.rank + 1))
        assert all(w.passed for w in witnesses)

    def test_witness_report_on_corrupted_table(self, sl2):
        """Test a broken differential yields a failed witness instead of an exception."""
        table = flip_sign(lambda_table(sl2), 1, 0, 2)
        (witness,) = witness_cycles(sl2, table=table)
        assert not witness.is_cycle
        assert witness.to_dict()["passed"] is False


class TestPointwiseChecks:
    """Tests for generator_independence_check and centralizer_check."""

    def test_sl3_generators_independent(self, sl3):
        """Test generator values span a rank-dimensional subspace of the centralizer."""
        outcome = generator_independence_check(sl3, points=3)
        assert outcome.passed
        assert outcome.checked == 3

    @pytest.mark.parametrize("name", ["sl2", "gl2"])
    def test_centralizer(self, name):
        """Test witness cycles take values in the exterior power of ker ad x."""
        outcome = centralizer_check(build_catalog_algebra(name), points=3)
        assert outcome.passed, outcome.failures
