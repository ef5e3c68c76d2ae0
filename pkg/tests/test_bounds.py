from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from queuetion import (
    BidProfile,
    MechanismKind,
    gsp_revenue_upper,
    is_nash,
    revenue_bounds,
    run_mechanism,
    validate_instance,
    vcg_outcome,
    vcg_revenue_lower_dp,
    vcg_pairwise_follower_rate_sum,
    vcg_revenue_upper,
    vcg_revenue_upper_efficient,
)
from queuetion.errors import OracleLimitExceeded

from conftest import exact_instances, float_instances

VCG, GSP = MechanismKind.VCG, MechanismKind.GSP


def test_vcg_upper_examples(I1, I2, I3):
    assert vcg_revenue_upper(I3).value == 12
    assert vcg_revenue_upper(I2).value == 6
    assert vcg_revenue_upper(I1).value == 0


def test_vcg_lower_examples(I1, I2, I3):
    assert vcg_revenue_lower_dp(I2).value == 0
    assert vcg_revenue_lower_dp(I3).value == 2
    assert vcg_revenue_lower_dp(I1).value == 0


def test_gsp_upper_examples(I1, I2, I3):
    assert gsp_revenue_upper(I3).value == 12
    assert gsp_revenue_upper(I2).value == 6
    assert gsp_revenue_upper(I1).value == 0


def test_follower_rate_sum_differs_on_I3(I3):
    assert vcg_pairwise_follower_rate_sum(I3) == 7
    assert vcg_revenue_upper_efficient(I3).value == 12


def test_revenue_bounds_examples(I1, I2, I3):
    rb = revenue_bounds(I2, VCG)
    assert (rb.lower, rb.upper) == (0, 6)
    rb = revenue_bounds(I1, "vcg")
    assert (rb.lower, rb.upper) == (0, 0)
    rb = revenue_bounds(I3, GSP)
    assert (rb.lower, rb.upper) == (6, 12)
    d = rb.as_dict(I3)
    assert d["upper_efficient_order"] == 12 and "pairwise_follower_rate_sum" not in d
    d = revenue_bounds(I3, VCG).as_dict(I3)
    assert d["pairwise_follower_rate_sum"] == 7


def test_gsp_bounds_size_limit(monkeypatch):
    inst = validate_instance([(f"P{i}", 1, i + 1) for i in range(6)])
    with pytest.raises(OracleLimitExceeded):
        revenue_bounds(inst, GSP)


def test_efficient_order_can_lose_to_a_swapped_equilibrium():
    # swapping the two slow/fast participants at the back lifts VCG revenue
    inst = validate_instance([("A", 1, 10), ("B", 1, 1), ("C", 100, 50)])
    assert vcg_revenue_upper(inst).value == Fraction(2101, 2)
    assert vcg_revenue_upper_efficient(inst).value == 210


def _check_witness(inst, bound, kind):
    prof = bound.profile
    assert prof.kind is kind
    assert is_nash(inst, prof, ordering=bound.ordering).equilibrium
    assert run_mechanism(inst, prof, bound.ordering).revenue == bound.value


@settings(max_examples=150, deadline=None)
@given(exact_instances(max_n=7))
def test_vcg_witnesses(inst):
    for b in (vcg_revenue_upper(inst), vcg_revenue_lower_dp(inst), vcg_revenue_upper_efficient(inst)):
        _check_witness(inst, b, VCG)
    _check_witness(inst, gsp_revenue_upper(inst), GSP)


@settings(max_examples=150, deadline=None)
@given(exact_instances(max_n=7, distinct=True))
def test_truthful_revenue_inside_bounds(inst):
    truthful = vcg_outcome(inst, BidProfile(VCG, inst.v)).revenue
    assert vcg_revenue_lower_dp(inst).value <= truthful <= vcg_revenue_upper(inst).value


@settings(max_examples=150, deadline=None)
@given(exact_instances(max_n=7))
def test_gsp_efficient_max_equals_vcg_efficient_max(inst):
    assert gsp_revenue_upper(inst).value == vcg_revenue_upper_efficient(inst).value


@settings(max_examples=150, deadline=None)
@given(
    exact_instances(max_n=7),
    st.builds(Fraction, st.integers(1, 9), st.integers(1, 5)),
    st.sampled_from(["t", "w"]),
)
def test_bounds_scale_linearly(inst, c, which):
    scaled = inst.scaled(t_factor=c) if which == "t" else inst.scaled(w_factor=c)
    for fn in (vcg_revenue_upper, vcg_revenue_lower_dp, gsp_revenue_upper):
        assert fn(scaled).value == c * fn(inst).value


@settings(max_examples=50, deadline=None)
@given(float_instances(max_n=6))
def test_float_witnesses(inst):
    for b in (vcg_revenue_upper(inst), vcg_revenue_lower_dp(inst)):
        assert is_nash(inst, b.profile, ordering=b.ordering).equilibrium
        got = run_mechanism(inst, b.profile, b.ordering).revenue
        assert got == pytest.approx(b.value, rel=1e-9, abs=1e-12)


def test_tied_value_rates_flagged():
    inst = validate_instance([("A", 1, 2), ("B", 2, 4), ("C", 1, 1)])
    assert not vcg_revenue_upper(inst).exact
    assert not revenue_bounds(inst, VCG).exact


@settings(max_examples=25, deadline=None)
@given(exact_instances(max_n=4, distinct=True))
def test_gsp_upper_is_oracle_max_within_efficient_order(inst):
    from queuetion import oracle_revenue_extremes, smith_order

    top = oracle_revenue_extremes(inst, GSP, orderings=[smith_order(inst)])[1]
    assert gsp_revenue_upper(inst).value == top


def test_swapped_equilibrium_beats_efficient_maximum():
    from queuetion import oracle_revenue_extremes

    inst = validate_instance([("A", 2, 1), ("B", 4, 1), ("C", 1, 2)])
    assert gsp_revenue_upper(inst).value == 10
    assert vcg_revenue_upper_efficient(inst).value == 10
    assert oracle_revenue_extremes(inst, GSP)[1] == Fraction(21, 2)
    assert vcg_revenue_upper(inst).value == Fraction(21, 2)
