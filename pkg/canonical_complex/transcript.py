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
Check Transcripts

JSON-lines records of individual checks. Keys are sorted and records carry
no timestamps, so two runs with the same seed write identical transcripts.

Usage:
    transcript = Transcript.open("run.jsonl")

    @transcript.track("euler")
    def run_euler():
        ...

    transcript.record("boundary", chain=3, pair=7, passed=True)
"""

import json
import logging
import threading
from fractions import Fraction
from functools import wraps
from typing import Any, Optional, TextIO

logger = logging.getLogger(__name__)


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    raise TypeError(f"Cannot serialize {type(value).__name__} in a transcript")


class Transcript:
    """Writes one JSON object per line; a transcript without a stream drops records."""

    def __init__(self, stream: Optional[TextIO] = None, owns_stream: bool = False):
        self._stream = stream
        self._owns_stream = owns_stream
        self._lock = threading.Lock()
        self.count = 0

    @classmethod
    def open(cls, path: Optional[str]) -> "Transcript":
        if not path:
            return cls()
        return cls(open(path, "w", encoding="utf-8"), owns_stream=True)

    @property
    def enabled(self) -> bool:
        return self._stream is not None

    def record(self, event_type: str, **fields: Any) -> None:
        if self._stream is None:
            return
        line = json.dumps({"event": event_type, **fields}, sort_keys=True, default=_default)
        with self._lock:
            self._stream.write(line + "\n")
            self.count += 1

    def track(self, event_type: str):
        """Decorator recording the verdict a check returns (its `passed` attribute, or its truth value)."""

        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                result = func(*args, **kwargs)
                passed = getattr(result, "passed", result)
                try:
                    self.record(event_type, passed=bool(passed))
                except Exception as e:
                    # A broken transcript must not change a verdict
                    logger.error("Transcript error for event '%s': %s", event_type, e)
                return result

            return wrapper

        return decorator

    def close(self) -> None:
        with self._lock:
            if self._stream is not None and self._owns_stream:
                self._stream.close()
            self._stream = None

    def __enter__(self) -> "Transcript":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


# Shared no-op instance
null_transcript = Transcript()
