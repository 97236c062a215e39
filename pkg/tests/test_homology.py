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

"""Tests for bigraded homology tables and the vanishing check."""

import csv
import io
import json
from functools import partial
from unittest.mock import patch

import jsonschema
import pytest

from canonical_complex.catalog import build_catalog_algebra
from canonical_complex.differential import flip_sign, lambda_table
from canonical_complex.exact_linalg import RankResult, certified_rank, load_matrix
from canonical_complex.homology import (
    REPORT_SCHEMA,
    bidegrees,
    block_rank,
    compute_report,
    euler_check,
    homology_dims,
    squeeze_ranks,
    verify_vanishing,
)
from canonical_complex.lie_algebra import permute_basis, scale_form


class TestBidegrees:
    """Tests for the bidegree enumeration order."""

    def test_order(self):
        """Test bidegrees come by total degree then p."""
        assert bidegrees(2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]

    def test_count(self):
        """Test (N + 1)(N + 2) / 2 bidegrees up to N."""
        assert len(bidegrees(6)) == 28


class TestHomologyDims:
    """Tests for homology_dims and block_rank."""

    def test_sl2_degree_one_one(self, sl2):
        """Test h_0 = 6 and h_1 = 0 at (1, 1) for sl2."""
        entries = homology_dims(sl2, 1, 1)
        assert [(e.n, e.r, e.h) for e in entries[:2]] == [(9, 0, 6), (3, 3, 0)]
        assert all(e.certified for e in entries)

    def test_sl2_sizes(self, sl2):
        """Test component sizes at (2, 2) and (2, 1)."""
        assert [e.n for e in homology_dims(sl2, 2, 2)] == [36, 27, 3, 0]
        assert [e.n for e in homology_dims(sl2, 2, 1)] == [18, 9, 0, 0]

    def test_homology_nonnegative(self, gl2):
        """Test every h_i is nonnegative through total degree 4."""
        for p, q in bidegrees(4):
            assert all(e.h >= 0 for e in homology_dims(gl2, p, q))

    def test_abelian_homology_is_everything(self, abelian2):
        """Test a zero differential leaves all chains as homology."""
        entries = homology_dims(abelian2, 2, 2)
        assert [e.h for e in entries] == [e.n for e in entries]
        assert [e.r for e in entries] == [0, 0, 0]

    def test_negative_bidegree_rejected(self, sl2):
        """Test negative bidegrees raise."""
        with pytest.raises(ValueError):
            homology_dims(sl2, -1, 2)

    def test_trivial_ranks(self, sl2):
        """Test r_0 and ranks of empty blocks are certified zeros."""
        assert block_rank(sl2, 0, 2, 2).method == "trivial"
        assert block_rank(sl2, 2, 1, 3).value == 0

    def test_rank_is_cached(self, sl2, memory_cache):
        """Test a certified rank is stored under a fingerprinted key."""
        block_rank(sl2, 1, 2, 2)
        keys = list(memory_cache._data)
        assert len(keys) == 1
        assert keys[0].startswith("rank:") and keys[0].endswith(":modular:1:2:2")

    def test_exact_only_matches_modular(self, sl2):
        """Test both certification modes agree."""
        modular = [e.r for e in homology_dims(sl2, 3, 2)]
        exact = [e.r for e in homology_dims(sl2, 3, 2, exact_only=True)]
        assert modular == exact

    def test_dump_blocks(self, sl2, tmp_path):
        """Test block dumps are written and load back with the block shape."""
        block_rank(sl2, 1, 1, 1, dump_dir=str(tmp_path))
        path = tmp_path / "sl2_d1_1_1.mtx"
        assert path.exists()
        assert load_matrix(path.read_text().splitlines()).shape == (9, 3)


class TestEulerCheck:
    """Tests for euler_check."""

    @pytest.mark.parametrize("p,q", [(2, 2), (2, 1), (3, 1)])
    def test_sl2(self, sl2, p, q):
        """Test the alternating sums agree at small bidegrees."""
        assert euler_check(sl2, p, q)

    def test_sl3_degree_three(self, sl3):
        """Test the n-side of sl3 at (3, 3) equals 5768."""
        entries = homology_dims(sl3, 3, 3)
        assert sum((-1) ** e.i * e.n for e in entries) == 5768
        assert euler_check(sl3, 3, 3, entries)


class TestComputeReport:
    """Tests for compute_report and its serializations."""

    def test_json_matches_schema(self, sl2):
        """Test the JSON report validates against the published schema."""
        report = compute_report(sl2, 3)
        jsonschema.validate(json.loads(report.to_json()), REPORT_SCHEMA)
        assert report.euler_ok
        assert report.certified

    def test_millis_only_with_timings(self, sl2):
        """Test wall-times appear only on request."""
        assert all(b.millis is None for b in compute_report(sl2, 2).blocks)
        assert all(isinstance(b.millis, int) for b in compute_report(sl2, 2, timings=True).blocks)

    def test_csv_rows(self, sl2):
        """Test the CSV has one row per (p, q, i) and the fixed columns."""
        rows = list(csv.DictReader(io.StringIO(compute_report(sl2, 2).to_csv())))
        assert len(rows) == len(bidegrees(2)) * 4
        assert set(rows[0]) == {"algebra", "p", "q", "i", "n", "r", "h", "certified"}

    def test_workers_do_not_change_output(self, sl2):
        """Test parallel and serial runs serialize identically."""
        assert compute_report(sl2, 4, workers=2).to_json() == compute_report(sl2, 4).to_json()

    def test_invalid_arguments(self, sl2):
        """Test negative cutoffs and zero workers raise."""
        with pytest.raises(ValueError):
            compute_report(sl2, -1)
        with pytest.raises(ValueError):
            compute_report(sl2, 2, workers=0)

    def test_permuted_basis_same_table(self, sl2):
        """Test homology does not depend on the basis order."""
        plain = compute_report(sl2, 4).dimension_table()
        permuted = compute_report(permute_basis(sl2, (2, 0, 1)), 4).dimension_table()
        assert plain == permuted

    def test_scaled_form_same_table(self, sl2):
        """Test rescaling the form rescales d and leaves homology unchanged."""
        plain = compute_report(sl2, 4).dimension_table()
        scaled = compute_report(scale_form(sl2, 3), 4).dimension_table()
        assert plain == scaled


class TestVanishing:
    """Tests for verify_vanishing."""

    @pytest.mark.parametrize(
        "name,cutoff", [("sl2", 8), ("so3", 5), ("gl2", 4), ("sl2xsl2", 6), ("abelian2", 4)]
    )
    def test_catalog_vanishes(self, name, cutoff):
        """Test h_i = 0 above the rank for small catalog algebras."""
        result = verify_vanishing(build_catalog_algebra(name), cutoff)
        assert result.passed, result.witnesses

    def test_cutoff_too_small(self, sl2):
        """Test cutoffs below 2 are rejected."""
        with pytest.raises(ValueError):
            verify_vanishing(sl2, 1)

    def test_corrupted_differential_loses_degree_one_class(self, sl2):
        """Test a flipped sign kills the degree-one class at (2, 1)."""
        table = flip_sign(lambda_table(sl2), 1, 0, 2)
        plain = compute_report(sl2, 3).dimension_table()
        corrupted = compute_report(sl2, 3, table=table)
        assert plain[(1, 2, 1)] == 1
        assert corrupted.dimension_table()[(1, 2, 1)] == 0



class TestSqueezedCertification:
    """Tests for certifying modular ranks through r_i + r_{i+1} <= n_i."""

    def test_exact_fit_is_certified(self, sl2):
        """Test n_1 = r_1 + r_2 at (1, 1) pins an unconfirmed modular r_1 = 3."""
        trivial = RankResult(0, True, "trivial")
        ranks = [trivial, RankResult(3, False, "modular", (7,)), trivial, trivial, trivial]
        squeezed = squeeze_ranks(sl2, 1, 1, ranks)
        assert (squeezed[1].value, squeezed[1].certified, squeezed[1].method) == (3, True, "squeezed")
        assert squeezed[1].primes == (7,)

    def test_slack_stays_uncertified(self, sl2):
        """Test a rank with room above it is left probabilistic."""
        trivial = RankResult(0, True, "trivial")
        ranks = [trivial, RankResult(2, False, "modular"), trivial, trivial, trivial]
        assert not squeeze_ranks(sl2, 1, 1, ranks)[1].certified

    def test_entries_above_rank_certified_without_exact_work(self, sl2):
        """Test every h_i above the rank is certified even when no block may be re-ranked exactly."""
        with patch("canonical_complex.homology.certified_rank", partial(certified_rank, certify_limit=0)):
            report = compute_report(sl2, 6)
        above = [e for b in report.blocks for e in b.table if e.i > sl2.rank]
        assert above and all(e.certified and e.h == 0 for e in above)

    def test_sl3_cutoff_six_certified_above_rank(self, sl3):
        """Test sl3 vanishes above the rank through p + q <= 6 with certified entries."""
        report = compute_report(sl3, 6, workers=2)
        assert verify_vanishing(sl3, 6, report=report).passed
        assert all(e.certified for b in report.blocks for e in b.table if e.i > sl3.rank)

    def test_negative_homology_raises(self, sl2):
        """Test impossible ranks stop the computation instead of reaching the report."""
        with patch("canonical_complex.homology.block_rank", return_value=RankResult(100, True, "exact")):
            with pytest.raises(ArithmeticError):
                homology_dims(sl2, 2, 2)
