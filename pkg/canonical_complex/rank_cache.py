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
Block Rank Cache

Ranks of differential blocks are expensive and fully determined by the
differential's data, so they are cached under content-derived keys. Redis is
used when REDIS_URL is set and reachable (shared between runs and machines);
otherwise an in-process dictionary with TTL.

Usage:
    from canonical_complex.rank_cache import cached_rank
    result = cached_rank(f"rank:{fingerprint}:modular:2:3:3", lambda: certified_rank(block))
"""

import json
import logging
import threading
import time
from typing import Any, Callable, Dict, Optional, Tuple

from canonical_complex.config_utils import RANK_CACHE_TTL, REDIS_URL
from canonical_complex.exact_linalg import RankResult

logger = logging.getLogger(__name__)


class MemoryStorage:
    """In-process storage, private to one worker"""

    def __init__(self):
        self._data: Dict[str, Tuple[Any, Optional[float]]] = {}  # key -> (value, expires_at)
        self._lock = threading.Lock()
        self._is_redis = False
        logger.debug("Using in-memory rank cache")

    def _expired(self, expires_at: Optional[float]) -> bool:
        return bool(expires_at) and expires_at < time.time()

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        expires_at = time.time() + ttl if ttl else None
        with self._lock:
            self._data[key] = (value, expires_at)
        return True

    def get(self, key: str) -> Optional[Any]:
        with self._lock:
            if key not in self._data:
                return None
            value, expires_at = self._data[key]
            if self._expired(expires_at):
                del self._data[key]
                return None
            return value

    def delete(self, key: str) -> bool:
        with self._lock:
            return self._data.pop(key, None) is not None

    def set_json(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        return self.set(key, json.dumps(value), ttl)

    def get_json(self, key: str) -> Optional[Any]:
        value = self.get(key)
        if value is None:
            return None
        try:
            return json.loads(value)
        except (json.JSONDecodeError, TypeError):
            return None


class RedisStorage:
    """Redis-backed storage shared across runs"""

    def __init__(self, redis_url: str):
        import redis

        self._client = redis.from_url(redis_url, decode_responses=True)
        self._is_redis = True
        # Test connection
        self._client.ping()
        logger.info("Redis rank cache initialized")

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        try:
            if ttl:
                self._client.setex(key, ttl, str(value))
            else:
                self._client.set(key, str(value))
            return True
        except Exception as e:
            logger.error(f"Redis SET error: {e}")
            return False

    def get(self, key: str) -> Optional[str]:
        try:
            return self._client.get(key)
        except Exception as e:
            logger.error(f"Redis GET error: {e}")
            return None

    def delete(self, key: str) -> bool:
        try:
            return self._client.delete(key) > 0
        except Exception as e:
            logger.error(f"Redis DELETE error: {e}")
            return False

    def set_json(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        return self.set(key, json.dumps(value), ttl)

    def get_json(self, key: str) -> Optional[Any]:
        value = self.get(key)
        if value is None:
            return None
        try:
            return json.loads(value)
        except (json.JSONDecodeError, TypeError):
            return None


# Singleton storage instance
_storage_instance = None
_storage_lock = threading.Lock()


def get_storage():
    """Get the rank cache storage (Redis if configured and reachable, memory otherwise)"""
    global _storage_instance

    if _storage_instance is not None:
        return _storage_instance

    with _storage_lock:
        if _storage_instance is not None:
            return _storage_instance

        if REDIS_URL:
            try:
                _storage_instance = RedisStorage(REDIS_URL)
                return _storage_instance
            except Exception as e:
                logger.error(f"Failed to connect to Redis: {e}")
                logger.warning("Falling back to in-memory rank cache")

        _storage_instance = MemoryStorage()
        return _storage_instance


def reset_storage() -> None:
    """Drop the singleton so the next get_storage() call re-reads the configuration."""
    global _storage_instance
    with _storage_lock:
        _storage_instance = None


def is_redis_available() -> bool:
    return getattr(get_storage(), "_is_redis", False)


def cached_rank(key: str, compute: Callable[[], RankResult]) -> RankResult:
    """
    Return the cached RankResult under `key`, computing and storing it on a miss.

    Only certified results are stored, so a later run with a larger
    certification budget is never shadowed by a probabilistic value.
    """
    storage = get_storage()
    document = storage.get_json(key)
    if document is not None:
        try:
            return RankResult.from_dict(document)
        except (KeyError, TypeError, ValueError) as e:
            logger.warning("Discarding malformed cache entry %s: %s", key, e)
            storage.delete(key)

    result = compute()
    if result.certified:
        storage.set_json(key, result.to_dict(), ttl=RANK_CACHE_TTL)
    return result
