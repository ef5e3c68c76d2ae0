"""Best-response dynamics.

One participant at a time moves to the slot that lowers its loss the most,
given everyone else's bids. Nothing guarantees convergence; a trace that
hits ``max_steps`` is a valid result.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .core import Instance
from .equilibrium import _true_w, is_nash
from .mechanisms import BidProfile, rank_by_bids, run_mechanism
from .numeric import Number, format_number

PLACEMENTS = ("midpoint", "minimal")


def _slot_interval(profile: BidProfile, others: Sequence[int], slot: int):
    """Open bid interval ``(lo, hi)`` that lands a mover in ``slot`` (1-based).

    ``hi`` is None when the slot is the front of the queue.
    """
    b = profile.bids
    zero = 0 * b[0]
    hi = b[others[slot - 2]] if slot >= 2 else None
    lo = b[others[slot - 1]] if slot - 1 < len(others) else zero
    return lo, hi


def _place(lo, hi, placement: str):
    if placement == "minimal":
        return lo
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _loss(inst, profile, index, true_values):
    out = run_mechanism(inst, profile)
    if true_values is None:
        return out.total_losses[index]
    w = _true_w(inst, true_values)
    sigma = out.ordering.sigma
    ahead = sum((inst.t[q] for q in sigma[: sigma.index(index)]), 0 * inst.t[0])
    return w[index] * ahead + out.payments[index]


def best_response(
    inst: Instance,
    profile: BidProfile,
    participant,
    true_values: Sequence | None = None,
    placement: str = "midpoint",
) -> Number:
    """A loss-minimizing bid for ``participant`` with the other bids fixed.

    The target slot maximizes the deviation gain (ties go to the earliest
    slot). The bid is then placed inside the interval that reaches that slot:
    at its midpoint, or at its lower end with ``placement="minimal"``. If no
    move gains, or the placed bid does not actually lower the loss (exact
    ties with other bids), the current bid is returned.
    """
    if placement not in PLACEMENTS:
        raise ValueError(f"placement must be one of {PLACEMENTS}")
    i = inst.index_of(participant)
    current = profile.bids[i]
    if inst.n == 1:
        return current
    sigma = list(rank_by_bids(profile).sigma)
    k = sigma.index(i)
    w = _true_w(inst, true_values)
    gains = kernels.deviation_gains(inst.t, w, profile.bids, sigma, profile.kind.code, inst.exact)[k]
    best_j, best_gain = k, gains[k]
    for j, g in enumerate(gains):
        if g > best_gain:
            best_j, best_gain = j, g
    old_loss = _loss(inst, profile, i, true_values)
    threshold = 0 if inst.exact else inst.eps * max(1.0, abs(old_loss))
    if best_j == k or best_gain <= threshold:
        return current
    others = sigma[:k] + sigma[k + 1:]
    lo, hi = _slot_interval(profile, others, best_j + 1)
    bid = _place(lo, hi, placement)
    new_loss = _loss(inst, profile.with_bid(i, bid), i, true_values)
    if new_loss < old_loss - threshold:
        return bid
    return current


@dataclass(frozen=True)
class Step:
    step: int
    mover: int
    old_bid: Number
    new_bid: Number
    revenue: Number


@dataclass
class Trace:
    steps: list[Step] = field(default_factory=list)
    converged: bool = False
    final: BidProfile | None = None
    iterations: int = 0

    def jsonl(self, inst: Instance) -> str:
        lines = [
            json.dumps(
                {
                    "step": s.step,
                    "mover": inst.ids[s.mover],
                    "old_bid": format_number(s.old_bid),
                    "new_bid": format_number(s.new_bid),
                    "revenue": format_number(s.revenue),
                }
            )
            for s in self.steps
        ]
        lines.append(json.dumps(self.summary(inst)))
        return "\n".join(lines) + "\n"

    def summary(self, inst: Instance) -> dict:
        return {
            "summary": True,
            "converged": self.converged,
            "moves": len(self.steps),
            "iterations": self.iterations,
            "final": self.final.as_dict(inst) if self.final else None,
            "final_revenue": format_number(run_mechanism(inst, self.final).revenue) if self.final else None,
        }


def run_dynamics(
    inst: Instance,
    profile: BidProfile,
    max_steps: int = 1000,
    rotation: str = "round-robin",
    seed: int | None = None,
    true_values: Sequence | None = None,
    placement: str = "midpoint",
) -> Trace:
    """Apply best responses until the profile is an equilibrium or ``max_steps`` movers were tried.

    ``rotation`` is ``"round-robin"`` (participants in index order) or
    ``"random"`` (uniform draws from ``random.Random(seed)``).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if rotation not in ("round-robin", "random"):
        raise ValueError("rotation must be 'round-robin' or 'random'")
    rng = random.Random(seed)
    trace = Trace(final=profile)
    if is_nash(inst, profile, true_values=true_values).equilibrium:
        trace.converged = True
        return trace
    for it in range(max_steps):
        mover = it % inst.n if rotation == "round-robin" else rng.randrange(inst.n)
        old = profile.bids[mover]
        new = best_response(inst, profile, mover, true_values, placement)
        trace.iterations = it + 1
        if new == old:
            continue
        profile = profile.with_bid(mover, new)
        trace.steps.append(Step(it + 1, mover, old, new, run_mechanism(inst, profile).revenue))
        if is_nash(inst, profile, true_values=true_values).equilibrium:
            trace.converged = True
            break
    trace.final = profile
    return trace
