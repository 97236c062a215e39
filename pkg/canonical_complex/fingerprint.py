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

import hashlib
import json

from canonical_complex.differential import LambdaTable
from canonical_complex.lie_algebra import LieAlgebra, algebra_to_dict


def table_fingerprint(table: LambdaTable) -> str:
    """SHA-256 of the canonical text form of a differential's quadratics."""
    return hashlib.sha256(table.to_text().encode("utf-8")).hexdigest()


def algebra_fingerprint(L: LieAlgebra) -> str:
    """SHA-256 of the algebra's JSON document with sorted keys."""
    # Realization and Cartan data do not change the complex
    document = {k: v for k, v in algebra_to_dict(L).items() if k not in ("cartan", "realization")}
    raw = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()
