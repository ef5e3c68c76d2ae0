import itertools
import os

import pytest
from hypothesis import given, settings

from queuetion import (
    MechanismKind,
    Ordering,
    enumerate_equilibria,
    is_nash,
    near_sorted_check,
    oracle_optimal_ordering,
    oracle_revenue_extremes,
    smith_order,
    total_weighted_waiting,
    validate_instance,
)
from queuetion.errors import SizeLimitExceeded
from queuetion.oracle import LIMIT_ENV

from conftest import exact_instances, float_instances

VCG, GSP = MechanismKind.VCG, MechanismKind.GSP


def test_optimal_ordering_examples(I1, I3):
    order, cost = oracle_optimal_ordering(I3)
    assert order.labels(I3) == ["A", "B", "C"] and cost == 7
    order, cost = oracle_optimal_ordering(I1)
    assert order.labels(I1) == ["A"] and cost == 0
    sym = validate_instance([("A", 1, 1), ("B", 1, 1)])
    order, cost = oracle_optimal_ordering(sym)
    assert order.labels(sym) == ["A", "B"] and cost == 1


def test_enumeration_examples(I1, I2, I3):
    eq = enumerate_equilibria(I2, VCG, 1)
    bids = {e.profile.bids for e in eq.entries if e.ordering.sigma == (0, 1)}
    assert (3, 2) in bids
    assert any(b[1] == 3 for b in bids)
    eq = enumerate_equilibria(I1, GSP)
    assert len(eq.entries) == 1 and eq.entries[0].revenue == 0
    assert max(enumerate_equilibria(I3, VCG).revenues()) == 12


def test_extremes_examples(I1, I2, I3):
    assert oracle_revenue_extremes(I2, VCG) == (0, 6)
    assert oracle_revenue_extremes(I2, GSP)[1] == 6
    assert oracle_revenue_extremes(I1, VCG) == (0, 0)
    assert oracle_revenue_extremes(I3, VCG) == (2, 12)
    assert oracle_revenue_extremes(I3, GSP) == (6, 12)


def test_size_limits(monkeypatch):
    big = validate_instance([(f"P{i}", 1, i + 1) for i in range(9)])
    with pytest.raises(SizeLimitExceeded):
        oracle_optimal_ordering(big)
    six = validate_instance([(f"P{i}", 1, i + 1) for i in range(6)])
    with pytest.raises(SizeLimitExceeded):
        enumerate_equilibria(six, VCG)
    monkeypatch.setenv(LIMIT_ENV, "2")
    with pytest.raises(SizeLimitExceeded):
        oracle_optimal_ordering(validate_instance([("A", 1, 1), ("B", 1, 2), ("C", 1, 3)]))


@settings(max_examples=60, deadline=None)
@given(exact_instances(max_n=6))
def test_optimal_ordering_matches_smith_cost(inst):
    _, cost = oracle_optimal_ordering(inst)
    assert cost == total_weighted_waiting(inst, smith_order(inst))
    brute = min(total_weighted_waiting(inst, Ordering(p)) for p in itertools.permutations(range(inst.n)))
    assert cost == brute


@settings(max_examples=40, deadline=None)
@given(float_instances(max_n=6))
def test_optimal_ordering_float(inst):
    _, cost = oracle_optimal_ordering(inst)
    best = total_weighted_waiting(inst, smith_order(inst))
    assert cost == pytest.approx(best, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(exact_instances(max_n=4))
def test_entries_are_equilibria_and_near_sorted(inst):
    for kind in (VCG, GSP):
        eq = enumerate_equilibria(inst, kind)
        assert eq.entries
        for e in eq.entries:
            assert is_nash(inst, e.profile, ordering=e.ordering).equilibrium
            if kind is VCG:
                assert near_sorted_check(inst, e.ordering)


@settings(max_examples=15, deadline=None)
@given(exact_instances(max_n=3))
def test_refinement_only_grows(inst):
    for kind in (VCG, GSP):
        coarse = enumerate_equilibria(inst, kind, 1)
        fine = enumerate_equilibria(inst, kind, 2)
        keys = {(e.ordering.sigma, e.profile.bids) for e in fine.entries}
        assert {(e.ordering.sigma, e.profile.bids) for e in coarse.entries} <= keys
        assert min(fine.revenues()) <= min(coarse.revenues())
        assert max(fine.revenues()) >= max(coarse.revenues())


def test_enumeration_order_does_not_matter(I3):
    orders = [Ordering(p) for p in itertools.permutations(range(3))]
    a = enumerate_equilibria(I3, GSP, orderings=orders)
    b = enumerate_equilibria(I3, GSP, orderings=orders[::-1])
    assert a.jsonl(I3) == b.jsonl(I3)
