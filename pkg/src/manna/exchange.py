"""Exchange graphs, weighted path search, and path augmentation.

The exchange graph of a clean allocation has an edge ``o -> o'`` whenever the
agent holding ``o`` could swap it for ``o'`` without losing count under their
binary oracle.  Augmenting along a path shifts every item one step toward the
path's start, freeing the first item for the requesting agent.

The weighted variant grades edges in doubled units (so arithmetic stays in
exact integers): an edge from an agent's counted bundle into the same agent's
zero-valued bundle costs 1, every other edge costs 2.  Pool-terminated
("Pareto-improving") paths additionally pay a terminal pickup cost -- 1 when
the absorbing agent already holds the terminal item in its zero-valued
bundle, else 2.  The pickup rule extends the half-weight preference to
zero-edge singleton paths, where edge weights alone cannot discriminate; see
the regression test on the two-item cap fixture for why that matters.

Searches are deterministic: minimum doubled cost, then fewest edges, then
lexicographically smallest item sequence.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import Allocation, Instance
from .errors import CleannessViolation, ContractViolation
from .threshold import beta

PARETO = "pareto_improving"
EXCHANGE = "exchange"


def f_set(inst: Instance, allocation: Allocation, agent: int, tau: int) -> frozenset[int]:
    """Items outside the agent's bundle whose threshold marginal is 1."""
    spec = inst.valuation(agent)
    bundle = allocation.bundle(agent)
    return frozenset(
        o
        for o in inst.items
        if o not in bundle and spec.marginal(bundle, o) >= tau
    )


def unweighted_adjacency(
    allocation: Allocation, oracles: Sequence
) -> dict[int, list[int]]:
    """Edge lists of the exchange graph of a clean allocation.

    ``oracles[i-1]`` must expose ``marginal(bundle, item)`` with values in
    {0, 1}.  Items in the pool have no outgoing edges.
    """
    adj: dict[int, list[int]] = {}
    for j in range(1, allocation.num_agents + 1):
        bundle = allocation.bundle(j)
        oracle = oracles[j - 1]
        for o in sorted(bundle):
            rest = bundle - {o}
            out = [
                op
                for op in range(allocation.num_items)
                if op not in bundle and oracle.marginal(rest, op) == 1
            ]
            if out:
                adj[o] = out
    return adj


@dataclass(frozen=True)
class WeightedExchangeGraph:
    """Exchange graph of ``xc`` under the c-threshold oracles, with doubled
    integer edge weights derived from ``x0`` membership."""

    inst: Instance
    xc: Allocation
    x0: Allocation
    owner: tuple[int, ...]
    adjacency: dict[int, tuple[tuple[int, int], ...]]

    def edges(self):
        for u in sorted(self.adjacency):
            for v, w in self.adjacency[u]:
                yield u, v, w

    def dump(self) -> str:
        return "\n".join(f"o{u} -> o{v} w={w}" for u, v, w in self.edges())


def build_weighted_graph(
    inst: Instance, xc: Allocation, x0: Allocation, check: bool = True
) -> WeightedExchangeGraph:
    """Materialize the weighted exchange graph for the state ``(xc, x0)``.

    Preconditions (asserted unless ``check`` is False):
    ``xc`` clean at threshold c, ``xc ∪ x0`` clean at threshold 0, and the
    per-agent parts disjoint.
    """
    if check:
        violations = clean_state_violations(inst, xc, x0)
        if violations:
            raise ContractViolation("; ".join(violations))
    owner = tuple(xc.owner_map())
    adj: dict[int, tuple[tuple[int, int], ...]] = {}
    for j in inst.agents:
        bundle = xc.bundle(j)
        spec = inst.valuation(j)
        x0_j = x0.bundle(j)
        for o in sorted(bundle):
            rest = bundle - {o}
            out = []
            for op in range(inst.num_items):
                if op in bundle:
                    continue
                if spec.marginal(rest, op) >= inst.c:
                    out.append((op, 1 if op in x0_j else 2))
            if out:
                adj[o] = tuple(out)
    return WeightedExchangeGraph(inst, xc, x0, owner, adj)


@dataclass(frozen=True)
class AugmentingPath:
    """A path selected for augmentation.

    ``target`` is the agent whose counted bundle shrinks; 0 means the path
    ends in the pool (Pareto-improving).  ``doubled_weight`` includes the
    terminal pickup cost for pool-terminated paths.
    """

    items: tuple[int, ...]
    kind: str
    source_agent: int
    target: int
    doubled_weight: int


def _run_dijkstra(starts, neighbors):
    """Deterministic least-key search; key = (cost, edge count, item path)."""
    best = dict(starts)
    heap = [(key, node) for node, key in sorted(starts.items())]
    heapq.heapify(heap)
    while heap:
        key, u = heapq.heappop(heap)
        if key > best[u]:
            continue
        cost, nedges, path = key
        for v, add in neighbors(u):
            cand = (cost + add, nedges + 1, path + (v,))
            if v not in best or cand < best[v]:
                best[v] = cand
                heapq.heappush(heap, (cand, v))
    return best


def min_weight_path(
    graph: WeightedExchangeGraph,
    sources: Iterable[int],
    kind: str,
    agent: int,
    target_agent: Optional[int] = None,
) -> Optional[AugmentingPath]:
    """Least-cost augmenting path from ``sources`` (the requesting agent's
    desired items) to the pool (``pareto_improving``) or to ``target_agent``'s
    counted bundle (``exchange``).  Returns None when no path exists."""
    xc, x0 = graph.xc, graph.x0
    if kind == PARETO:
        targets = xc.unallocated
    elif kind == EXCHANGE:
        if target_agent is None or target_agent == agent:
            raise ContractViolation("exchange paths need a distinct target agent")
        targets = xc.bundle(target_agent)
    else:
        raise ContractViolation(f"unknown path kind {kind!r}")

    def pickup(absorber: int, item: int) -> int:
        return 1 if item in x0.bundle(absorber) else 2

    starts = {}
    for o in sorted(sources):
        cost = pickup(agent, o) if (kind == PARETO and o in targets) else 0
        starts[o] = (cost, 0, (o,))
    if not starts:
        return None

    if kind == PARETO:
        def neighbors(u):
            for v, w in graph.adjacency.get(u, ()):
                yield v, w + (pickup(graph.owner[u], v) if v in targets else 0)
    else:
        def neighbors(u):
            yield from graph.adjacency.get(u, ())

    best = _run_dijkstra(starts, neighbors)
    reached = [(best[t], t) for t in sorted(targets) if t in best]
    if not reached:
        return None
    key, _ = min(reached)
    items = key[2]
    target = 0 if kind == PARETO else target_agent
    return AugmentingPath(items, kind, agent, target, key[0])


def shift_along_path(allocation: Allocation, items: Sequence[int], gainer: int) -> Allocation:
    """Apply the path-augmentation shift: every path item moves one step back
    toward the start, the last item leaves its bundle, and the first item
    joins ``gainer``'s bundle."""
    path_set = set(items)
    if len(path_set) != len(items):
        raise ContractViolation("augmenting path repeats an item")
    arrivals: dict[int, set[int]] = {}
    for j in range(len(items) - 1):
        holder = allocation.owner_of(items[j])
        if holder == 0:
            raise ContractViolation("interior path item is unallocated")
        arrivals.setdefault(holder, set()).add(items[j + 1])
    new_bundles = []
    for k in range(1, allocation.num_agents + 1):
        b = (set(allocation.bundle(k)) - path_set) | arrivals.get(k, set())
        if k == gainer:
            b.add(items[0])
        new_bundles.append(b)
    return Allocation.from_bundles(new_bundles, allocation.num_items)


def clean_state_violations(inst: Instance, xc: Allocation, x0: Allocation) -> list[str]:
    """All broken state invariants: c-cleanness of xc, 0-cleanness of the
    per-agent unions, and per-agent disjointness.  Empty list when sound."""
    problems = []
    for i in inst.agents:
        spec = inst.valuation(i)
        xc_i, x0_i = xc.bundle(i), x0.bundle(i)
        if xc_i & x0_i:
            problems.append(f"agent {i}: xc and x0 overlap on {sorted(xc_i & x0_i)}")
        if beta(spec, inst.c, xc_i) != len(xc_i):
            problems.append(f"agent {i}: xc bundle not clean at threshold c")
        union = xc_i | x0_i
        if beta(spec, 0, union) != len(union):
            problems.append(f"agent {i}: xc ∪ x0 not clean at threshold 0")
    return problems


def augment(
    inst: Instance,
    xc: Allocation,
    x0: Allocation,
    path: AugmentingPath,
    check: bool = True,
) -> tuple[Allocation, Allocation]:
    """Augment the state along ``path`` and return the new ``(xc, x0)``.

    Pool-terminated paths also retire the terminal item from whichever x0
    bundle held it.  With ``check`` on, the postconditions (cleanness,
    disjointness, bundle-size deltas) are asserted and any failure raises
    ``CleannessViolation`` -- which must never happen for valid inputs.
    """
    items = path.items
    old_sizes = xc.sizes()
    new_xc = shift_along_path(xc, items, path.source_agent)
    if path.kind == PARETO:
        terminal = items[-1]
        new_x0 = Allocation.from_bundles(
            [x0.bundle(k) - {terminal} for k in inst.agents], inst.num_items
        )
    else:
        new_x0 = x0
    if check:
        expected = list(old_sizes)
        expected[path.source_agent - 1] += 1
        if path.kind == EXCHANGE:
            expected[path.target - 1] -= 1
        if list(new_xc.sizes()) != expected:
            raise CleannessViolation(
                f"bundle sizes {new_xc.sizes()} after augmentation, expected {tuple(expected)}"
            )
        problems = clean_state_violations(inst, new_xc, new_x0)
        if problems:
            raise CleannessViolation("; ".join(problems))
    return new_xc, new_x0


def shortest_path_to_pool(
    allocation: Allocation, oracles: Sequence, sources: Iterable[int]
) -> Optional[tuple[int, ...]]:
    """Shortest (unweighted) path from ``sources`` to the unallocated pool,
    ties broken by lexicographically smallest item sequence."""
    starts = {o: (0, 0, (o,)) for o in sorted(sources)}
    if not starts:
        return None
    adj = unweighted_adjacency(allocation, oracles)

    def neighbors(u):
        for v in adj.get(u, ()):
            yield v, 1

    best = _run_dijkstra(starts, neighbors)
    reached = [(best[t], t) for t in sorted(allocation.unallocated) if t in best]
    if not reached:
        return None
    key, _ = min(reached)
    return key[2]
