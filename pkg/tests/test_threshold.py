import pytest

from manna.core import Allocation
from manna.errors import ContractViolation
from manna.instgen import gen_capped_groups
from manna.threshold import (
    ThresholdBeta,
    TriDecomposition,
    beta,
    beta_marginal,
    decompose3,
    decompose_threshold,
    verify_tridecomposition,
)
from manna.valuations import Explicit, items_of, validate_submodular


def test_beta_examples(named_fixtures):
    ex2 = named_fixtures["ex2"]
    v1, v2 = ex2.valuation(1), ex2.valuation(2)
    assert beta(v1, ex2.c, {0, 1}) == 1
    assert beta(v2, 0, {2, 3}) == 0
    assert beta(v1, 0, {0, 1}) == 2


def test_beta_marginal_examples(named_fixtures):
    ex2 = named_fixtures["ex2"]
    v1 = ex2.valuation(1)
    assert beta_marginal(v1, ex2.c, frozenset(), 0) == 1
    assert beta_marginal(v1, ex2.c, {0}, 1) == 0
    classic = named_fixtures["ex_classic"].valuation(1)
    assert beta_marginal(classic, 2, {0}, 1) == 0
    with pytest.raises(ContractViolation):
        beta_marginal(v1, 0, {0}, 0)


def test_decompose_threshold_examples(named_fixtures):
    ex2 = named_fixtures["ex2"]
    X = Allocation((frozenset({0, 1}), frozenset({2, 3})), frozenset())
    clean, supp = decompose_threshold(ex2, X, ex2.c)
    assert clean.bundle(1) == frozenset({0})
    assert supp.bundle(1) == frozenset({1})
    clean0, supp0 = decompose_threshold(ex2, X, 0)
    assert clean0.bundle(2) == frozenset()
    assert supp0.bundle(2) == frozenset({2, 3})
    low, rest = decompose_threshold(ex2, X, -2)
    assert all(low.bundle(i) == X.bundle(i) for i in ex2.agents)
    assert all(not rest.bundle(i) for i in ex2.agents)


def test_decompose3_example(named_fixtures):
    ex2 = named_fixtures["ex2"]
    X = Allocation((frozenset({0, 1}), frozenset({2, 3})), frozenset())
    dec = decompose3(ex2, X)
    assert dec.xc.bundle(1) == frozenset({0})
    assert dec.x0.bundle(1) == frozenset({1})
    assert dec.xm1.bundle(2) == frozenset({2, 3})
    assert dec.xc.bundle(2) == dec.x0.bundle(2) == dec.xm1.bundle(1) == frozenset()


def test_decompose3_empty_allocation(named_fixtures):
    ex2 = named_fixtures["ex2"]
    dec = decompose3(ex2, Allocation.empty(2, 4))
    for part in (dec.xc, dec.x0, dec.xm1):
        assert all(not part.bundle(i) for i in ex2.agents)


def test_decompose3_mms_fixture_counts(named_fixtures):
    ex_mms = named_fixtures["ex_mms"]
    X = Allocation.from_bundles([{0, 1, 2, 3, 6, 7}, set()], 10)
    dec = decompose3(ex_mms, X)
    assert len(dec.xc.bundle(1)) == 2
    assert len(dec.x0.bundle(1)) == 2
    assert len(dec.xm1.bundle(1)) == 2
    assert ex_mms.value(1, X.bundle(1)) == 0 == 1 * 2 - 2


def test_verify_tridecomposition(named_fixtures):
    ex2 = named_fixtures["ex2"]
    X = Allocation((frozenset({0, 1}), frozenset({2, 3})), frozenset())
    dec = decompose3(ex2, X)
    assert verify_tridecomposition(ex2, X, dec) == (True, None)
    # decompositions are not unique: swapping the two items in the c-pair is also valid
    swapped = TriDecomposition(
        Allocation.from_bundles([{1}, set()], 4),
        Allocation.from_bundles([{0}, set()], 4),
        dec.xm1,
    )
    assert verify_tridecomposition(ex2, X, swapped) == (True, None)
    # moving a chore into the zero part breaks clause (c)
    broken = TriDecomposition(
        dec.xc,
        Allocation.from_bundles([{1}, {2}], 4),
        Allocation.from_bundles([set(), {3}], 4),
    )
    assert verify_tridecomposition(ex2, X, broken) == (False, "c")


@pytest.mark.parametrize("seed", range(6))
def test_decompose3_verifies_on_random_capped(seed):
    inst = gen_capped_groups(2, 7, 1 + seed % 3, (1, 3), (1, 3), 700 + seed)
    rngmask = (seed * 2654435761) % (1 << 7)
    X = Allocation.from_bundles(
        [
            {o for o in range(7) if rngmask >> o & 1},
            {o for o in range(7) if not rngmask >> o & 1},
        ],
        7,
    )
    dec = decompose3(inst, X)
    assert verify_tridecomposition(inst, X, dec) == (True, None)


@pytest.mark.parametrize("tau_kind", ["zero", "c"])
def test_materialized_beta_is_binary_submodular(named_fixtures, tau_kind):
    for name in ("ex2", "ex_classic", "fig1"):
        inst = named_fixtures[name]
        tau = 0 if tau_kind == "zero" else inst.c
        for i in inst.agents:
            spec = inst.valuation(i)
            m = inst.num_items
            table = Explicit(
                m, tuple(beta(spec, tau, items_of(mask)) for mask in range(1 << m))
            )
            assert validate_submodular(table).ok
            for mask in range(1 << m):
                for o in range(m):
                    if not mask >> o & 1:
                        d = table.table[mask | 1 << o] - table.table[mask]
                        assert d in (0, 1)


def test_beta_monotone_in_threshold(named_fixtures):
    inst = named_fixtures["ex_mms"]
    spec = inst.valuation(1)
    for mask in range(0, 1 << 10, 37):
        S = items_of(mask)
        assert beta(spec, inst.c, S) <= beta(spec, 0, S) <= len(S)


def test_threshold_beta_oracle_wrapper(named_fixtures):
    ex2 = named_fixtures["ex2"]
    oracle = ThresholdBeta(ex2.valuation(1), ex2.c)
    assert oracle.value({0, 1}) == 1
    assert oracle.marginal(frozenset(), 1) == 1
    assert oracle.marginal({1}, 0) == 0
