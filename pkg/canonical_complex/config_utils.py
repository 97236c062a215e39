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

import os
import logging

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_SEED = int(os.getenv("CANONICAL_COMPLEX_SEED", "0"))
# Blocks with rows * cols at or below this are re-ranked exactly to certify the modular value
RANK_CERTIFY_LIMIT = int(os.getenv("RANK_CERTIFY_LIMIT", "40000"))
# Hard limit for fraction-free elimination, not configurable
EXACT_SIZE_GUARD = 10**6
REDIS_URL = os.getenv("REDIS_URL", "")
RANK_CACHE_TTL = int(os.getenv("RANK_CACHE_TTL", "86400"))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
# Integer sampling box used by every random point generator
SAMPLE_BOUND = 10


def get_worker_count() -> int:
    """
    Get the worker count for bidegree jobs from the environment.
    """
    # 1. Try Environment Variable
    env_workers = os.getenv("WORKERS")
    if env_workers:
        try:
            return int(env_workers)
        except ValueError:
            logger.warning(f"Ignoring non-integer WORKERS value: {env_workers!r}")

    # 2. Fallback
    return 1
