"""Shared helpers for the test suite: the canonical randomized suite and a
constructive source of two-valued submodular tables."""

from __future__ import annotations

from manna.core import Allocation, Instance
from manna.instgen import SplitMix64, gen_capped_groups, gen_random_additive
from manna.valuations import Additive, Explicit

ADDITIVE_SEED_BASE = 1000
CAPPED_SEED_BASE = 2000
SUITE_SIZE = 200


def suite_params(family: str):
    """Parameters of the 200-instance randomized suite for one family:
    n in {2, 3}, m in {4..8}, c in {1, 2, 3}, fixed seeds."""
    base = ADDITIVE_SEED_BASE if family == "additive" else CAPPED_SEED_BASE
    for k in range(SUITE_SIZE):
        yield 2 + k % 2, 4 + k % 5, 1 + k % 3, base + k


def make_suite_instance(family: str, n: int, m: int, c: int, seed: int) -> Instance:
    if family == "additive":
        return gen_random_additive(n, m, c, (1, 1, 2), seed)
    return gen_capped_groups(n, m, c, (1, 3), (1, 3), seed)


def suite_instances():
    for family in ("additive", "capped_groups"):
        for n, m, c, seed in suite_params(family):
            yield family, make_suite_instance(family, n, m, c, seed)


def gf2_rank_table(m: int, vectors: list[int]) -> list[int]:
    """Rank of every subset of ``vectors`` over GF(2), indexed by bitmask."""

    def rank(items: list[int]) -> int:
        basis: list[int] = []
        for o in items:
            v = vectors[o]
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
                basis.sort(reverse=True)
        return len(basis)

    return [rank([o for o in range(m) if mask >> o & 1]) for mask in range(1 << m)]


def random_two_valued_table(m: int, a: int, b: int, seed: int) -> Explicit:
    """A random {a, b}-valued submodular table, a < b: a modular shift of a
    random binary-matroid rank function, v(S) = a|S| + (b-a) rank(S)."""
    assert a < b
    rng = SplitMix64(seed)
    dim = 1 + rng.below(m)
    vectors = [rng.below(1 << dim) for _ in range(m)]
    ranks = gf2_rank_table(m, vectors)
    table = []
    for mask in range(1 << m):
        size = bin(mask).count("1")
        table.append(a * size + (b - a) * ranks[mask])
    return Explicit(m, tuple(table))


def permute_additive(inst: Instance, item_perm: list[int]) -> Instance:
    """Relabel the items of an additive instance: new item ``item_perm[o]``
    is the old item ``o``."""
    specs = []
    for spec in inst.valuations:
        assert isinstance(spec, Additive)
        values = [0] * inst.num_items
        for o, v in enumerate(spec.values):
            values[item_perm[o]] = v
        specs.append(Additive(tuple(values)))
    return Instance(inst.num_agents, inst.num_items, inst.c, tuple(specs))


def permute_allocation(allocation: Allocation, item_perm: list[int]) -> Allocation:
    return Allocation(
        tuple(frozenset(item_perm[o] for o in b) for b in allocation.bundles),
        frozenset(item_perm[o] for o in allocation.unallocated),
    )
