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

"""Tests for the Koszul-type differential."""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from canonical_complex.catalog import build_catalog_algebra
from canonical_complex.differential import (
    ComplexElement,
    DomainError,
    apply_differential,
    assemble_block,
    d_squared_failures,
    flip_sign,
    lambda_table,
    random_element,
)
from canonical_complex.exact_linalg import DimensionMismatchError, rank_exact
from canonical_complex.fingerprint import algebra_fingerprint, table_fingerprint
from canonical_complex.graded_basis import BasisIndex, component_basis

ZERO3 = (0, 0, 0)


def generator(dim, k):
    """The exterior generator e_k in bidegree (1, 1)."""
    zero = (0,) * dim
    return ComplexElement.basis_element(dim, BasisIndex(zero, zero, (k,)))


class TestLambdaTable:
    """Tests for the quadratics m^k[a][b]."""

    def test_sl2_entries(self, sl2):
        """Test m^h[e][f] = <h, [e, f]> = 8 and its antisymmetric partner."""
        table = lambda_table(sl2)
        assert table.value(1, 0, 2) == 8
        assert table.value(1, 2, 0) == -8
        assert table.value(1, 1, 1) == 0

    def test_abelian_table_is_zero(self, abelian2):
        """Test abelian algebras have a zero differential."""
        assert lambda_table(abelian2).is_zero()

    def test_dense_round_trip(self, sl3):
        """Test from_dense of the dense matrices reproduces the table."""
        table = lambda_table(sl3)
        assert type(table).from_dense([table.matrix(k) for k in range(8)]) == table

    def test_flip_sign_changes_one_entry(self, sl2):
        """Test flip_sign negates exactly the requested entry."""
        table = lambda_table(sl2)
        flipped = flip_sign(table, 1, 0, 2)
        assert flipped.value(1, 0, 2) == -8
        assert flipped.value(1, 2, 0) == -8
        assert table_fingerprint(flipped) != table_fingerprint(table)

    def test_flip_sign_on_zero_entry(self, sl2):
        """Test flipping a zero entry is refused."""
        with pytest.raises(ValueError):
            flip_sign(lambda_table(sl2), 1, 1, 1)


class TestComplexElement:
    """Tests for ComplexElement arithmetic."""

    def test_from_terms_merges_and_drops_zeros(self):
        """Test repeated terms add and cancelling terms vanish."""
        b = BasisIndex(ZERO3, ZERO3, (0,))
        c = ComplexElement.from_terms(3, 1, [(b, 1), (b, -1)])
        assert c.is_zero()

    def test_rejects_wrong_degree(self):
        """Test terms of the wrong exterior degree raise."""
        with pytest.raises(DimensionMismatchError):
            ComplexElement(3, 2, {BasisIndex(ZERO3, ZERO3, (0,)): Fraction(1)})

    def test_linear_combination(self):
        """Test 2a - a == a."""
        a = generator(3, 1)
        assert 2 * a - a == a
        assert (a * 0).is_zero()

    def test_vector_round_trip(self, sl2):
        """Test to_vector and from_vector are inverse on a component."""
        basis = component_basis(sl2, 1, 2, 2)
        c = random_element(sl2, 1, 2, 2, random.Random(3))
        assert ComplexElement.from_vector(basis, c.to_vector(basis)) == c

    def test_bidegrees(self):
        """Test bidegrees of a mixed element are sorted and distinct."""
        a = ComplexElement.basis_element(3, BasisIndex((1, 0, 0), ZERO3, (0,)))
        c = a + generator(3, 2)
        assert c.bidegrees == [(1, 1), (2, 1)]
        assert c.component(2, 1) == a


class TestApplyDifferential:
    """Tests for apply_differential and assemble_block."""

    def test_generator_maps_to_quadratic(self, sl2):
        """Test d(e_h) = 8 x_e y_f - 8 x_f y_e."""
        image = apply_differential(sl2, generator(3, 1))
        assert image.degree == 0
        assert image.terms == {
            BasisIndex((1, 0, 0), (0, 0, 1), ()): Fraction(8),
            BasisIndex((0, 0, 1), (1, 0, 0), ()): Fraction(-8),
        }

    def test_degree_zero_rejected(self, sl2):
        """Test d is undefined in exterior degree 0."""
        with pytest.raises(DomainError):
            apply_differential(sl2, ComplexElement.zero(3, 0))

    def test_dimension_mismatch(self, sl2):
        """Test elements over another dimension are rejected."""
        with pytest.raises(DimensionMismatchError):
            apply_differential(sl2, generator(4, 0))

    def test_sl2_first_block(self, sl2):
        """Test the (1, 1, 1) block is 9x3 of full column rank."""
        block = assemble_block(sl2, 1, 1, 1)
        assert block.shape == (9, 3)
        assert rank_exact(block) == 3

    def test_block_matches_apply(self, sl2):
        """Test every block column equals d of the basis element."""
        source = component_basis(sl2, 2, 3, 2)
        target = component_basis(sl2, 1, 3, 2)
        block = assemble_block(sl2, 2, 3, 2)
        columns = block.columns()
        for n, b in enumerate(source):
            image = apply_differential(sl2, ComplexElement.basis_element(3, b))
            assert image.to_vector(target) == columns[n]

    def test_block_below_one_rejected(self, sl2):
        """Test no block leaves degree 0."""
        with pytest.raises(DomainError):
            assemble_block(sl2, 0, 1, 1)

    def test_d_squared_vanishes_on_elements(self, gl2):
        """Test d(d(c)) = 0 on random elements."""
        rng = random.Random(11)
        for _ in range(5):
            c = random_element(gl2, 2, 3, 2, rng)
            assert apply_differential(gl2, apply_differential(gl2, c)).is_zero()

    @pytest.mark.parametrize(
        "name,cutoff",
        [
            ("abelian1", 8),
            ("abelian2", 8),
            ("abelian3", 8),
            ("abelian4", 6),
            ("sl2", 8),
            ("so3", 8),
            ("gl2", 6),
            ("sl2xsl2", 6),
            ("sl3", 5),
        ],
    )
    def test_d_squared_blocks(self, name, cutoff):
        """Test block(i-1) @ block(i) vanishes on every catalog algebra well past total degree 4."""
        assert d_squared_failures(build_catalog_algebra(name), cutoff) == []

    def test_d_squared_holds_for_any_quadratics(self, sl2):
        """Test d^2 = 0 survives a flipped sign, so it cannot detect one."""
        table = flip_sign(lambda_table(sl2), 1, 0, 2)
        assert d_squared_failures(sl2, 4, table=table) == []


class TestFingerprints:
    """Tests for table and algebra fingerprints."""

    def test_scaling_changes_table_fingerprint(self, sl2):
        """Test rescaled quadratics hash differently."""
        table = lambda_table(sl2)
        assert table_fingerprint(table.scaled(2)) != table_fingerprint(table)
        assert table_fingerprint(table.scaled(1)) == table_fingerprint(table)

    def test_algebra_fingerprint_ignores_catalog_extras(self, sl2):
        """Test dropping the Cartan data does not change the fingerprint."""
        assert algebra_fingerprint(replace(sl2, cartan=())) == algebra_fingerprint(sl2)
        assert len(algebra_fingerprint(sl2)) == 64
