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

"""Tests for graded component bases."""

import pytest

from canonical_complex.graded_basis import (
    BasisIndex,
    BasisLookupError,
    component_basis,
    component_dimension,
    euler_characteristic,
    exterior_subsets,
    monomials,
    sym_dimension,
)


class TestSymDimension:
    """Tests for sym_dimension."""

    @pytest.mark.parametrize("dim,a,expected", [(3, 2, 6), (8, 0, 1), (3, 5, 21), (1, 7, 1), (3, -1, 0)])
    def test_values(self, dim, a, expected):
        """Test binom(a + dim - 1, dim - 1) on known values."""
        assert sym_dimension(dim, a) == expected

    def test_zero_dimension_rejected(self):
        """Test dimension 0 is rejected."""
        with pytest.raises(ValueError):
            sym_dimension(0, 2)


class TestMonomials:
    """Tests for monomials and exterior_subsets."""

    def test_descending_lex_order(self):
        """Test degree-2 monomials in 2 variables are x0^2, x0 x1, x1^2."""
        assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))

    def test_count_matches_sym_dimension(self):
        """Test the monomial count equals the closed form."""
        assert len(monomials(4, 3)) == sym_dimension(4, 3)

    def test_negative_degree_empty(self):
        """Test a negative degree yields nothing."""
        assert monomials(3, -1) == ()

    def test_subsets_are_increasing(self):
        """Test subsets are sorted tuples in lexicographic order."""
        assert exterior_subsets(3, 2) == ((0, 1), (0, 2), (1, 2))
        assert exterior_subsets(3, 4) == ()


class TestComponentBasis:
    """Tests for ComponentBasis."""

    def test_sl2_component_sizes(self, sl2):
        """Test sl2 dimensions at (2, 2) and (2, 1)."""
        assert [component_basis(sl2, i, 2, 2).dimension for i in range(4)] == [36, 27, 3, 0]
        assert [component_basis(sl2, i, 2, 1).dimension for i in range(4)] == [18, 9, 0, 0]

    def test_matches_closed_form(self, sl3):
        """Test enumerated sizes equal the closed form."""
        for i in range(4):
            assert component_basis(sl3, i, 3, 2).dimension == component_dimension(8, i, 3, 2)

    def test_rank_unrank_inverse(self, sl2):
        """Test rank_index and unrank_index are inverse on the whole component."""
        basis = component_basis(sl2, 1, 3, 2)
        for n, b in enumerate(basis):
            assert basis.rank_index(b) == n
            assert basis.unrank_index(n) == b

    def test_order_is_alpha_major(self, sl2):
        """Test the first two elements differ only in the exterior subset."""
        basis = list(component_basis(sl2, 1, 1, 1))
        assert basis[0] == BasisIndex((0, 0, 0), (0, 0, 0), (0,))
        assert basis[1] == BasisIndex((0, 0, 0), (0, 0, 0), (1,))

    def test_out_of_range(self, sl2):
        """Test lookups outside the component raise BasisLookupError."""
        basis = component_basis(sl2, 1, 2, 2)
        with pytest.raises(BasisLookupError):
            basis.unrank_index(basis.dimension)
        with pytest.raises(BasisLookupError):
            basis.rank_index(BasisIndex((2, 0, 0), (0, 0, 0), (0,)))
        assert BasisIndex((1, 0, 0), (0, 0, 1), (2,)) in basis

    def test_degenerate_component_is_empty(self, sl2):
        """Test i > min(p, q) gives an empty basis."""
        assert component_basis(sl2, 2, 1, 5).dimension == 0
        assert list(component_basis(sl2, 4, 5, 5)) == []

    def test_bidegree_of_index(self):
        """Test bidegree adds the exterior degree to both polynomial degrees."""
        b = BasisIndex((1, 1, 0), (0, 0, 0), (0, 2))
        assert b.degree == 2
        assert b.bidegree == (4, 2)


class TestEulerCharacteristic:
    """Tests for the closed-form Euler characteristic."""

    def test_sl2_values(self):
        """Test 36 - 27 + 3 = 12 at (2, 2) for dimension 3."""
        assert euler_characteristic(3, 2, 2) == 12
        assert euler_characteristic(3, 2, 1) == 9

    def test_sl3_value(self):
        """Test the alternating sum at (3, 3) for dimension 8."""
        assert euler_characteristic(8, 3, 3) == 5768
