"""Enumeration budgets and size caps.

All verification in this package is enumeration at desk scale.  The
budgets below bound those enumerations so a bad parameter choice fails
fast instead of running for hours.  The environment variable
``MRLRC_BUDGET`` overrides both enumeration budgets; explicit ``budget=``
arguments override everything.
"""

from __future__ import annotations

import os

# Largest number of subsets / erasure patterns an exhaustive check will walk.
SUBSET_BUDGET = 10**7

# Largest codebook (q^k) an exhaustive codeword enumeration will walk.
CODEBOOK_BUDGET = 2**20

# Hard cap on tower size p^(a*m); everything in scope fits well below it.
SIZE_CAP = 2**24

# Fields up to this size get log/exp tables; larger ones fall back to
# polynomial arithmetic.
TABLE_CAP = 2**20

_ENV = "MRLRC_BUDGET"


def _env_budget() -> int | None:
    raw = os.environ.get(_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    return value if value > 0 else None


def subset_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_budget() or SUBSET_BUDGET


def codebook_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_budget() or CODEBOOK_BUDGET
