"""Organizer revenue bounds over the set of equilibria.

VCG
---
In any VCG equilibrium with allocation order tau, only adjacent pairs may
be out of value-rate order, and the bid at position p may be anything in

    [max(v[p+1], v[p+2]), min(v[p-1], v[p-2])]     (v beyond the ends: 0 / +inf)

subject to bids being non-increasing. Revenue ``sum_p t[p] * T(<p) * b[p]``
is increasing in every bid but the first, so per order the extremes take
every bid at an end of its interval. With pairwise distinct value rates the
admissible orders are exactly the efficient order with a set of disjoint
adjacent swaps, and a left-to-right dynamic program over swap decisions
finds both extremes in linear time. The state is the last four slot
offsets, which is enough to price each position once its two neighbours on
either side are placed.

With tied value rates more orders qualify (any arrangement inside a tie
group), which the program does not explore; results then carry
``exact=False``.

GSP
---
Only the maximum over equilibria that keep the efficient order has a
closed form. Global extremes come from the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Instance, Ordering, smith_order
from .equilibrium import (
    max_equilibrium_bids_gsp,
    max_equilibrium_bids_vcg,
)
from .errors import OracleLimitExceeded, SizeLimitExceeded
from .mechanisms import BidProfile, MechanismKind, gsp_outcome, vcg_outcome
from .numeric import Number, format_number
from .oracle import enumerate_equilibria


@dataclass(frozen=True)
class Bound:
    value: Number
    ordering: Ordering
    profile: BidProfile
    exact: bool = True

    def witness_dict(self, inst: Instance) -> dict:
        return {
            "ordering": self.ordering.labels(inst),
            "bids": self.profile.as_dict(inst)["bids"],
            "revenue": format_number(self.value),
        }


@dataclass(frozen=True)
class RevenueBounds:
    mechanism: MechanismKind
    lower: Number
    upper: Number
    witness_lower: tuple[Ordering, BidProfile]
    witness_upper: tuple[Ordering, BidProfile]
    upper_efficient_order: Number
    pairwise_follower_rate_sum: Number | None
    exact: bool = True
    method: str = ""

    def as_dict(self, inst: Instance) -> dict:
        def witness(w, value):
            return Bound(value, w[0], w[1]).witness_dict(inst)

        out = {
            "mechanism": self.mechanism.value,
            "lower": format_number(self.lower),
            "upper": format_number(self.upper),
            "upper_efficient_order": format_number(self.upper_efficient_order),
        }
        if self.pairwise_follower_rate_sum is not None:
            out["pairwise_follower_rate_sum"] = format_number(self.pairwise_follower_rate_sum)
        out.update(
            {
                "exact": self.exact,
                "method": self.method,
                "witness_lower": witness(self.witness_lower, self.lower),
                "witness_upper": witness(self.witness_upper, self.upper),
            }
        )
        return out


# offsets: slot p holds sorted[p + off]; +1 must be followed by -1
_SWAP_START, _SWAP_END, _STAY = 1, -1, 0


def _vcg_dp(inst: Instance, maximize: bool):
    """Extreme VCG equilibrium revenue over efficient-order-with-swaps orders.

    Returns ``(value, order)`` where order lists participant indices.
    """
    base = smith_order(inst).sigma
    n = len(base)
    zero = 0 * inst.t[0]
    if n == 1:
        return zero, base
    t = [inst.t[p] for p in base]
    v = [inst.v[p] for p in base]
    prefix = [zero]
    for x in t:
        prefix.append(prefix[-1] + x)

    def term(p, offs):
        """Revenue from slot p; ``offs[d]`` is the offset of slot p - 2 + d."""
        if p == 0:
            return zero
        cur = p + offs[2]
        # time served ahead of slot p
        ahead = prefix[p - 1] + t[p] if offs[1] == _SWAP_START else prefix[p]
        if maximize:
            cands = [v[p - 1 + offs[1]]]
            if p >= 2:
                cands.append(v[p - 2 + offs[0]])
            bid = min(cands)
        else:
            cands = [zero]
            if p + 1 < n:
                cands.append(v[p + 1 + offs[3]])
            if p + 2 < n:
                cands.append(v[p + 2 + offs[4]])
            bid = max(cands)
        return t[cur] * ahead * bid

    better = (lambda a, b: a > b) if maximize else (lambda a, b: a < b)
    # state key: offsets of the last (up to) five slots
    states = {(): zero}
    back = []  # back[q][key] = (previous key, offset chosen for slot q)
    for q in range(n + 2):
        nxt, ptr = {}, {}
        for hist, val in states.items():
            if q >= n:
                choices = [None]  # padding past the end
            elif hist and hist[-1] == _SWAP_START:
                choices = [_SWAP_END]
            else:
                choices = [_STAY, _SWAP_START] if q + 1 < n else [_STAY]
            for c in choices:
                key = (hist + (c,))[-5:]
                new_val = val
                if q >= 2:
                    offs = [0 if x is None else x for x in ((None,) * 5 + key)[-5:]]
                    new_val = val + term(q - 2, offs)
                if key not in nxt or better(new_val, nxt[key]):
                    nxt[key] = new_val
                    ptr[key] = (hist, c)
        states = nxt
        back.append(ptr)
    pick = max if maximize else min
    key = pick(states, key=lambda k: states[k])
    val = states[key]
    offsets = []
    for q in range(n + 1, -1, -1):
        key, c = back[q][key]
        if c is not None:
            offsets.append(c)
    offsets.reverse()
    order = tuple(base[i + off] for i, off in enumerate(offsets))
    return val, order


def _extreme_vcg_bids(inst: Instance, order, maximize: bool) -> BidProfile:
    """End-of-window bids for ``order`` (participant indices, first served first)."""
    n = len(order)
    zero = 0 * inst.t[0]
    v = [inst.v[p] for p in order]
    bids = [zero] * inst.n
    if maximize:
        running = None
        for pos in range(1, n):
            running = v[pos - 1] if running is None else min(running, v[pos - 1])
            bids[order[pos]] = running
        bids[order[0]] = max(v) + 1
    else:
        running = zero
        for pos in range(n - 1, 0, -1):
            bids[order[pos]] = running
            running = max(running, v[pos])
        bids[order[0]] = max(running, bids[order[1]]) if n > 1 else zero
    return BidProfile(MechanismKind.VCG, tuple(bids))


def _vcg_bound(inst: Instance, maximize: bool) -> Bound:
    value, order = _vcg_dp(inst, maximize)
    ordering = Ordering(order)
    profile = _extreme_vcg_bids(inst, order, maximize)
    return Bound(value, ordering, profile, inst.distinct_value_rates())


def vcg_revenue_upper(inst: Instance) -> Bound:
    """Largest organizer revenue over all VCG equilibria (linear time)."""
    return _vcg_bound(inst, maximize=True)


def vcg_revenue_lower_dp(inst: Instance) -> Bound:
    """Smallest organizer revenue over all VCG equilibria (linear time)."""
    return _vcg_bound(inst, maximize=False)


def vcg_revenue_upper_efficient(inst: Instance) -> Bound:
    """Largest VCG equilibrium revenue when the efficient order is kept.

    Each participant bids the value rate of the one ahead, giving
    ``sum_{i<j} t_i t_j v_{j-1}`` along the efficient order.
    """
    ordering = smith_order(inst)
    profile = max_equilibrium_bids_vcg(inst)
    return Bound(vcg_outcome(inst, profile, ordering).revenue, ordering, profile)


def vcg_pairwise_follower_rate_sum(inst: Instance) -> Number:
    """``sum_{i<j} t_i t_j v_j`` along the efficient order.

    Kept only for side-by-side reporting; it is not a revenue bound.
    """
    sigma = smith_order(inst).sigma
    total = 0 * inst.t[0]
    ahead = 0 * inst.t[0]
    for p in sigma:
        total += ahead * inst.t[p] * inst.v[p]
        ahead += inst.t[p]
    return total


def gsp_revenue_upper(inst: Instance) -> Bound:
    """Largest GSP equilibrium revenue when the efficient order is kept.

    Equals :func:`vcg_revenue_upper_efficient`. Equilibria with other
    orders can raise more; see :func:`revenue_bounds`.
    """
    ordering = smith_order(inst)
    profile = max_equilibrium_bids_gsp(inst)
    return Bound(gsp_outcome(inst, profile, ordering).revenue, ordering, profile)


def gsp_revenue_extremes_oracle(inst: Instance) -> tuple[Bound, Bound]:
    try:
        eq = enumerate_equilibria(inst, MechanismKind.GSP)
    except SizeLimitExceeded as exc:
        raise OracleLimitExceeded(
            f"GSP revenue bounds need the brute-force oracle: {exc}"
        ) from exc
    lo, hi = eq.min_entry(), eq.max_entry()
    return (
        Bound(lo.revenue, lo.ordering, lo.profile),
        Bound(hi.revenue, hi.ordering, hi.profile),
    )


def revenue_bounds(inst: Instance, kind) -> RevenueBounds:
    """Lower and upper organizer revenue over all equilibria, with witnesses.

    VCG uses the linear-time dynamic program. GSP has no known efficient
    algorithm, so both ends come from the oracle and large instances raise
    :class:`OracleLimitExceeded`.
    """
    kind = MechanismKind.parse(kind)
    if kind is MechanismKind.VCG:
        lo, hi = vcg_revenue_lower_dp(inst), vcg_revenue_upper(inst)
        efficient = vcg_revenue_upper_efficient(inst).value
        rate_sum = vcg_pairwise_follower_rate_sum(inst)
        exact = lo.exact and hi.exact
        method = "dynamic program" + ("" if exact else " (tied value rates: not exhaustive)")
    else:
        lo, hi = gsp_revenue_extremes_oracle(inst)
        efficient = gsp_revenue_upper(inst).value
        rate_sum = None
        exact = True
        method = "oracle"
    return RevenueBounds(
        kind,
        lo.value,
        hi.value,
        (lo.ordering, lo.profile),
        (hi.ordering, hi.profile),
        efficient,
        rate_sum,
        exact,
        method,
    )
