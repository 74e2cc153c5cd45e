"""Clean MAX-USW leximin allocation for binary submodular oracles.

The procedure repeatedly lets the active agent with the smallest bundle
(ties to the lower index) hunt for a shortest exchange-graph path from its
desired items to the pool.  A found path is augmented, handing the agent its
first item; otherwise the agent retires.  The result is simultaneously
leximin and welfare-maximal for the supplied oracles, and every bundle is
clean (its oracle count equals its size).
"""

from __future__ import annotations

from typing import Sequence

from .core import Allocation
from .errors import OracleViolation
from .exchange import shift_along_path, shortest_path_to_pool
from .threshold import is_clean


class _CheckedOracle:
    """Wraps a binary oracle, rejecting out-of-range marginals."""

    def __init__(self, oracle, agent: int):
        self._oracle = oracle
        self._agent = agent

    def value(self, items):
        return self._oracle.value(items)

    def marginal(self, items, item):
        d = self._oracle.marginal(items, item)
        if d not in (0, 1):
            raise OracleViolation(
                f"agent {self._agent}: binary oracle returned marginal {d}"
            )
        return d


def yankee_swap(num_items: int, betas: Sequence) -> Allocation:
    """Compute a clean MAX-USW leximin allocation for ``betas``.

    ``betas[i-1]`` is agent i's binary submodular oracle exposing
    ``value(bundle)`` and ``marginal(bundle, item)``.
    """
    n = len(betas)
    oracles = [_CheckedOracle(b, i + 1) for i, b in enumerate(betas)]
    allocation = Allocation.empty(n, num_items)
    active = set(range(1, n + 1))
    while active:
        agent = min(active, key=lambda i: (len(allocation.bundle(i)), i))
        oracle = oracles[agent - 1]
        bundle = allocation.bundle(agent)
        desired = frozenset(
            o
            for o in range(num_items)
            if o not in bundle and oracle.marginal(bundle, o) == 1
        )
        path = shortest_path_to_pool(allocation, oracles, desired)
        if path is None:
            active.discard(agent)
            continue
        allocation = shift_along_path(allocation, path, agent)
        if not is_clean(oracle, allocation.bundle(agent)):
            raise OracleViolation(
                f"agent {agent}: bundle not clean after augmentation; "
                "the supplied oracle is not binary submodular"
            )
    for i in range(1, n + 1):
        if not is_clean(oracles[i - 1], allocation.bundle(i)):
            raise OracleViolation(f"agent {i}: final bundle not clean")
    return allocation
