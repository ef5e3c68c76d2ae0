"""Pure-strategy Nash equilibrium checks for the queue auctions.

Two independent routes decide whether a bid profile is an equilibrium:

* deviation enumeration (:func:`is_nash_vcg`, :func:`is_nash_gsp`): every
  participant is moved to every other position, with the rest keeping their
  relative order, and its loss there is evaluated from the payment rule;
* window conditions (:func:`vcg_window_check`, :func:`gsp_window_check`):
  closed-form inequalities between bids and value rates along the ranking.

Equilibrium is weak: a deviation that exactly breaks even is not a
violation. A participant may reach any position by rebidding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import _pykernels, kernels
from .core import Instance, Ordering, smith_order
from .errors import PositionOutOfRange, ValidationError
from .mechanisms import (
    BidProfile,
    MechanismKind,
    _check_profile,
    payments_for_ordering,
    resolve_ordering,
)
from .numeric import Number, format_number, leq


@dataclass(frozen=True)
class Violation:
    participant: int
    position: int
    target: int
    gain: Number


@dataclass
class DeviationReport:
    equilibrium: bool
    violations: list[Violation] = field(default_factory=list)

    def as_dict(self, inst: Instance) -> dict:
        return {
            "equilibrium": self.equilibrium,
            "violations": [
                {
                    "participant": inst.ids[v.participant],
                    "position": v.position,
                    "target": v.target,
                    "gain": format_number(v.gain),
                }
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class WindowConstraint:
    """``lhs <= rhs`` was required at ``position`` and failed.

    For VCG, ``side`` is ``"lower"`` (next bid below the own value rate) or
    ``"upper"`` (own value rate below the previous bid). For GSP it is
    ``"up"`` or ``"down"`` and ``target`` names the slot of the deviation.
    """

    position: int
    side: str
    lhs: Number
    rhs: Number
    target: int | None = None
    text: str = ""


@dataclass
class WindowReport:
    satisfied: bool
    failed_constraints: list[WindowConstraint] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "failed_constraints": [
                {
                    "position": c.position,
                    "side": c.side,
                    "target": c.target,
                    "lhs": format_number(c.lhs),
                    "rhs": format_number(c.rhs),
                    "constraint": c.text,
                }
                for c in self.failed_constraints
            ],
        }


def _true_w(inst: Instance, true_values: Sequence | None) -> Sequence:
    if true_values is None:
        return inst.w
    if len(true_values) != inst.n:
        raise ValidationError(f"{len(true_values)} value rates for {inst.n} participants")
    return [v * t for v, t in zip(true_values, inst.t)]


def _true_v(inst: Instance, true_values: Sequence | None) -> Sequence:
    return inst.v if true_values is None else true_values


def _check_position(n: int, *positions: int) -> None:
    for p in positions:
        if not 1 <= p <= n:
            raise PositionOutOfRange(f"position {p} outside 1..{n}")


def deviation_gain(
    inst: Instance,
    profile: BidProfile,
    k: int,
    j: int,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> Number:
    """Loss reduction for the participant at position ``k`` moving to ``j``.

    Positive means the move pays off. ``j == k`` gives zero.
    """
    _check_profile(inst, profile, None)
    _check_position(inst.n, k, j)
    sigma = list(resolve_ordering(profile, ordering).sigma)
    losses = _pykernels.participant_losses(
        inst.t, _true_w(inst, true_values), profile.bids, sigma, k - 1, profile.kind.code
    )
    return losses[k - 1] - losses[j - 1]


def deviated_loss(
    inst: Instance,
    profile: BidProfile,
    k: int,
    j: int,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> Number:
    """Loss of the participant at ``k`` after rebidding into slot ``j``.

    Builds the deviated queue explicitly and prices it with the mechanism's
    payment rule; used to cross-check the kernel.
    """
    _check_position(inst.n, k, j)
    sigma = list(resolve_ordering(profile, ordering).sigma)
    p = sigma.pop(k - 1)
    sigma.insert(j - 1, p)
    pay = payments_for_ordering(inst, profile.kind, profile.bids, Ordering(tuple(sigma)))[p]
    w = _true_w(inst, true_values)[p]
    ahead = sum((inst.t[q] for q in sigma[: j - 1]), 0 * inst.t[0])
    return w * ahead + pay


def vcg_deviation_gain(inst, profile, k, j, true_values=None, ordering=None) -> Number:
    _check_profile(inst, profile, MechanismKind.VCG)
    return deviation_gain(inst, profile, k, j, true_values, ordering)


def gsp_deviation_gain(inst, profile, k, j, true_values=None, ordering=None) -> Number:
    _check_profile(inst, profile, MechanismKind.GSP)
    return deviation_gain(inst, profile, k, j, true_values, ordering)


def is_nash(
    inst: Instance,
    profile: BidProfile,
    tolerance: float | None = None,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> DeviationReport:
    """Enumerate every unilateral move and report the profitable ones.

    ``tolerance`` is an absolute slack on gains. By default it is 0 in exact
    mode and ``eps * max(1, largest current loss)`` in float mode.
    """
    _check_profile(inst, profile, None)
    sigma = resolve_ordering(profile, ordering).sigma
    w = _true_w(inst, true_values)
    gains = kernels.deviation_gains(inst.t, w, profile.bids, sigma, profile.kind.code, inst.exact)
    if tolerance is None:
        if inst.exact:
            tolerance = 0
        else:
            pay = payments_for_ordering(inst, profile.kind, profile.bids, Ordering(sigma))
            elapsed, scale = 0.0, 1.0
            for p in sigma:
                scale = max(scale, abs(w[p] * elapsed + pay[p]))
                elapsed += inst.t[p]
            tolerance = inst.eps * scale
    violations = []
    n = len(sigma)
    for k in range(n):
        for j in range(n):
            if j != k and gains[k][j] > tolerance:
                violations.append(Violation(sigma[k], k + 1, j + 1, gains[k][j]))
    return DeviationReport(not violations, violations)


def is_nash_vcg(inst, profile, tolerance=None, true_values=None, ordering=None) -> DeviationReport:
    _check_profile(inst, profile, MechanismKind.VCG)
    return is_nash(inst, profile, tolerance, true_values, ordering)


def is_nash_gsp(inst, profile, tolerance=None, true_values=None, ordering=None) -> DeviationReport:
    _check_profile(inst, profile, MechanismKind.GSP)
    return is_nash(inst, profile, tolerance, true_values, ordering)


def vcg_window_check(
    inst: Instance,
    profile: BidProfile,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> WindowReport:
    """Adjacent-bid windows: ``b[k+1] <= v[k] <= b[k-1]`` at every position.

    Indices are positions in the bid ranking; ``b[0] = +inf`` and
    ``b[N+1] = 0``.
    """
    _check_profile(inst, profile, MechanismKind.VCG)
    sigma = resolve_ordering(profile, ordering).sigma
    v = _true_v(inst, true_values)
    b = profile.bids
    eps = inst.tol
    n = len(sigma)
    failed = []
    for k in range(1, n + 1):
        vk = v[sigma[k - 1]]
        if k < n:
            below = b[sigma[k]]
            if not leq(below, vk, eps):
                failed.append(
                    WindowConstraint(k, "lower", below, vk, text=f"b[sigma({k + 1})] <= v[sigma({k})]")
                )
        if k > 1:
            above = b[sigma[k - 2]]
            if not leq(vk, above, eps):
                failed.append(
                    WindowConstraint(k, "upper", vk, above, text=f"v[sigma({k})] <= b[sigma({k - 1})]")
                )
    return WindowReport(not failed, failed)


def gsp_window_check(
    inst: Instance,
    profile: BidProfile,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> WindowReport:
    """Pairwise bid-gap conditions for GSP, with ``B[N+1] = 0``.

    For the participant at position k and every other slot j:

    * j < k: ``B[j] - B[k+1] >= v[k] * (t[j] + ... + t[k-1])``
    * j > k: ``B[k+1] - B[j+1] <= v[k] * (t[k+1] + ... + t[j])``
    """
    _check_profile(inst, profile, MechanismKind.GSP)
    sigma = resolve_ordering(profile, ordering).sigma
    v = _true_v(inst, true_values)
    zero = 0 * inst.t[0]
    B = [profile.bids[p] for p in sigma] + [zero]  # B[i] = bid at position i+1
    ts = [inst.t[p] for p in sigma]
    prefix = [zero]
    for x in ts:
        prefix.append(prefix[-1] + x)
    eps = inst.tol
    n = len(sigma)
    failed = []
    for k in range(1, n + 1):
        vk = v[sigma[k - 1]]
        for j in range(1, n + 1):
            if j < k:
                gap = B[j - 1] - B[k]
                need = vk * (prefix[k - 1] - prefix[j - 1])
                if not leq(need, gap, eps):
                    failed.append(
                        WindowConstraint(
                            k, "up", need, gap, j,
                            f"v[sigma({k})]*T({j}..{k - 1}) <= B[sigma({j})] - B[sigma({k + 1})]",
                        )
                    )
            elif j > k:
                gap = B[k] - B[j]
                allow = vk * (prefix[j] - prefix[k])
                if not leq(gap, allow, eps):
                    failed.append(
                        WindowConstraint(
                            k, "down", gap, allow, j,
                            f"B[sigma({k + 1})] - B[sigma({j + 1})] <= v[sigma({k})]*T({k + 1}..{j})",
                        )
                    )
    return WindowReport(not failed, failed)


def window_check(inst, profile, true_values=None, ordering=None) -> WindowReport:
    if profile.kind is MechanismKind.VCG:
        return vcg_window_check(inst, profile, true_values, ordering)
    return gsp_window_check(inst, profile, true_values, ordering)


def near_sorted_check(inst: Instance, ordering: Ordering) -> bool:
    """True iff ``v[i] >= v[j]`` whenever position j is at least two behind i.

    Only adjacent pairs may be out of value-rate order.
    """
    v = [inst.v[p] for p in ordering.sigma]
    eps = inst.tol
    running_min = None
    for j in range(2, len(v)):
        running_min = v[j - 2] if running_min is None else min(running_min, v[j - 2])
        if not leq(v[j], running_min, eps):
            return False
    return True


def _top_bid(values: Sequence, rest: Sequence) -> Number:
    return max(list(values) + list(rest)) + 1


def max_equilibrium_bids_vcg(inst: Instance) -> BidProfile:
    """Largest bids that keep the efficient order an equilibrium.

    Each participant after the first bids the value rate of the one ahead.
    The first bid is free; it is set one unit above every value rate.
    With tied value rates, pair the result with ``ordering=smith_order(inst)``.
    """
    sigma = smith_order(inst).sigma
    bids = [None] * inst.n
    for k in range(1, inst.n):
        bids[sigma[k]] = inst.v[sigma[k - 1]]
    bids[sigma[0]] = _top_bid(inst.v, [])
    return BidProfile(MechanismKind.VCG, tuple(bids))


def min_equilibrium_bids_vcg(inst: Instance) -> BidProfile:
    """Smallest bids that keep the efficient order an equilibrium.

    Each participant bids the value rate of the one behind; the last bids 0.
    Neighbouring bids can tie exactly, so the profile is an equilibrium
    together with ``ordering=smith_order(inst)``, not necessarily under the
    default index tie-break.
    """
    sigma = smith_order(inst).sigma
    zero = 0 * inst.t[0]
    bids = [zero] * inst.n
    for k in range(inst.n - 1):
        bids[sigma[k]] = inst.v[sigma[k + 1]]
    return BidProfile(MechanismKind.VCG, tuple(bids))


def max_equilibrium_bids_gsp(inst: Instance) -> BidProfile:
    """Largest GSP bids that keep the efficient order an equilibrium.

    Positions p >= 2 bid ``sum_{i=p}^{N} v[i-1] * t[i]`` (every adjacent
    move-down constraint tight). The first bid is the smallest value that
    removes every incentive to jump to the front, plus one, so the ranking
    stays strict.
    """
    sigma = smith_order(inst).sigma
    n = inst.n
    zero = 0 * inst.t[0]
    level = [zero] * (n + 1)  # level[i]: bid at position i+1; level[n] = 0
    for i in range(n - 1, 0, -1):
        level[i] = level[i + 1] + inst.v[sigma[i - 1]] * inst.t[sigma[i]]
    top = level[1] if n > 1 else zero
    ahead = zero
    for k in range(1, n):  # participant at position k+1 jumping to position 1
        ahead += inst.t[sigma[k - 1]]
        top = max(top, level[k + 1] + inst.v[sigma[k]] * ahead)
    level[0] = top + 1
    bids = [None] * n
    for i, p in enumerate(sigma):
        bids[p] = level[i]
    return BidProfile(MechanismKind.GSP, tuple(bids))
