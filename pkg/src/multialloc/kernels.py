"""Backend selection for the two hot kernels.

The compiled ``_ccore`` is used when it imports; otherwise, or when the
environment variable ``MULTIALLOC_PURE`` is set, the pure-Python ``_pycore``
is used.  Both return identical results (including tie-breaking); the test
suite checks this on every run where both are available.

Tables whose scaled values do not fit in 63 bits are always routed to the
Python kernels, whose integers are unbounded.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pycore
from .errors import ResourceLimitError

INT64_SAFE = 1 << 62

# Game tables hold one entry per (held, remaining) state.
DEFAULT_STATE_BUDGET = 1 << 23


def _load_compiled() -> ModuleType | None:
    if os.environ.get("MULTIALLOC_PURE"):
        return None
    try:
        from . import _ccore
    except ImportError:
        return None
    return _ccore


_compiled = _load_compiled()
BACKEND = _compiled.BACKEND if _compiled is not None else _pycore.BACKEND


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def _module(backend: str | None, values) -> ModuleType:
    if backend == "python":
        return _pycore
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled core is not available")
        return _compiled
    if backend is not None:
        raise ValueError(f"unknown backend {backend!r}")
    if _compiled is not None and max(values) < INT64_SAFE:
        return _compiled
    return _pycore


def count_states(turns) -> int:
    return _pycore.count_states(turns)


def solve_game(values, turns, *, backend: str | None = None,
               state_budget: int = DEFAULT_STATE_BUDGET):
    states = count_states(turns)
    if states > state_budget:
        raise ResourceLimitError(
            f"picking game over {len(turns)} items needs {states} states "
            f"(budget {state_budget})"
        )
    return _module(backend, values).solve_game(values, turns)


def max_min_partition(values, m: int, n: int, *, backend: str | None = None):
    return _module(backend, values).max_min_partition(values, m, n)
