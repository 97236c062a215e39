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

"""Shared fixtures."""

import os

import pytest

# Keep tests off any configured Redis before modules read the environment
os.environ["REDIS_URL"] = ""

from canonical_complex import rank_cache  # noqa: E402
from canonical_complex.catalog import build_catalog_algebra  # noqa: E402


@pytest.fixture(autouse=True)
def memory_cache():
    """Fresh in-memory rank cache per test."""
    storage = rank_cache.MemoryStorage()
    rank_cache._storage_instance = storage
    yield storage
    rank_cache.reset_storage()


@pytest.fixture
def sl2():
    return build_catalog_algebra("sl2")


@pytest.fixture
def sl3():
    return build_catalog_algebra("sl3")


@pytest.fixture
def gl2():
    return build_catalog_algebra("gl2")


@pytest.fixture
def so3():
    return build_catalog_algebra("so3")


@pytest.fixture
def sl2xsl2():
    return build_catalog_algebra("sl2xsl2")


@pytest.fixture
def abelian2():
    return build_catalog_algebra("abelian2")
