"""VCG and GSP auctions for queue positions.

Both mechanisms rank participants by bid, highest first, and charge a
payment that depends only on the bids of participants served later:

* VCG: the participant at position i pays ``t_i * sum_{j > i} t_j * b_j``,
  the bid-valued delay it imposes on everyone behind it.
* GSP: the participant at position i pays ``t_i * B_{i+1}``, its own
  service time times the next bid (zero for the last position).

Every function accepts an optional explicit ``ordering``. It must list bids
in non-increasing order; this lets callers pick how exact bid ties are
broken. Without it, ties go to the lower participant index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Instance, Ordering, waiting_costs
from .errors import BidCountMismatch, InconsistentOrdering, InvalidBid, ValidationError
from .numeric import Number, format_number, parse_number


class MechanismKind(enum.Enum):
    VCG = "vcg"
    GSP = "gsp"

    @classmethod
    def parse(cls, raw) -> "MechanismKind":
        if isinstance(raw, cls):
            return raw
        try:
            return cls(str(raw).lower())
        except ValueError:
            raise ValidationError(f"unknown mechanism {raw!r}; expected 'vcg' or 'gsp'") from None

    @property
    def code(self) -> int:
        """Kernel code: 0 for VCG, 1 for GSP."""
        return 0 if self is MechanismKind.VCG else 1


@dataclass(frozen=True)
class BidProfile:
    """One bid per participant, indexed canonically.

    VCG bids are rates (money per unit of time, comparable to ``w / t``);
    GSP bids are levels (money per unit of the bidder's own service time).
    """

    kind: MechanismKind
    bids: tuple[Number, ...]

    def __len__(self) -> int:
        return len(self.bids)

    def with_bid(self, index: int, bid) -> "BidProfile":
        bids = list(self.bids)
        bids[index] = bid
        return BidProfile(self.kind, tuple(bids))

    def as_dict(self, inst: Instance) -> dict:
        return {
            "kind": self.kind.value,
            "bids": {pid: format_number(b) for pid, b in zip(inst.ids, self.bids)},
        }


def make_profile(inst: Instance, kind, bids) -> BidProfile:
    """Validate bids (a sequence by index or a mapping by id) for ``inst``.

    Bids are converted to the instance's arithmetic mode.
    """
    kind = MechanismKind.parse(kind)
    if isinstance(bids, Mapping):
        if len(bids) != inst.n:
            raise BidCountMismatch(f"{len(bids)} bids for {inst.n} participants")
        try:
            values = [bids[pid] for pid in inst.ids]
        except KeyError as exc:
            raise BidCountMismatch(f"no bid for participant {exc.args[0]!r}") from None
    else:
        values = list(bids)
        if len(values) != inst.n:
            raise BidCountMismatch(f"{len(values)} bids for {inst.n} participants")
    out = []
    for pid, raw in zip(inst.ids, values):
        try:
            b = parse_number(raw, inst.exact)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidBid(f"bad bid {raw!r} for {pid!r}") from exc
        if isinstance(b, float) and not math.isfinite(b):
            raise InvalidBid(f"bid for {pid!r} must be finite")
        if b < 0:
            raise InvalidBid(f"bid for {pid!r} must be >= 0, got {raw!r}")
        out.append(b)
    return BidProfile(kind, tuple(out))


def rank_by_bids(profile: BidProfile) -> Ordering:
    """Highest bid first; equal bids ordered by ascending participant index."""
    b = profile.bids
    return Ordering(tuple(sorted(range(len(b)), key=lambda i: (-b[i], i))))


def resolve_ordering(profile: BidProfile, ordering: Ordering | None = None) -> Ordering:
    """The allocation for ``profile``: ``ordering`` if given and consistent."""
    if ordering is None:
        return rank_by_bids(profile)
    if len(ordering) != len(profile):
        raise InconsistentOrdering("ordering and profile sizes differ")
    b = profile.bids
    for a, c in zip(ordering.sigma, ordering.sigma[1:]):
        if b[a] < b[c]:
            raise InconsistentOrdering(
                f"participant {c} bids {b[c]} above participant {a} ({b[a]}) but is served later"
            )
    return ordering


def _check_profile(inst: Instance, profile: BidProfile, kind: MechanismKind | None) -> None:
    if len(profile) != inst.n:
        raise BidCountMismatch(f"{len(profile)} bids for {inst.n} participants")
    if kind is not None and profile.kind is not kind:
        raise ValidationError(f"expected a {kind.value} profile, got {profile.kind.value}")


def payments_for_ordering(inst: Instance, kind: MechanismKind, bids: Sequence, ordering: Ordering) -> list:
    """Payment per participant index when ``ordering`` is the allocation."""
    zero = 0 * inst.t[0]
    pay = [zero] * inst.n
    sigma = ordering.sigma
    if kind is MechanismKind.VCG:
        behind = zero
        for p in reversed(sigma):
            pay[p] = inst.t[p] * behind
            behind += inst.t[p] * bids[p]
    else:
        for pos, p in enumerate(sigma):
            nxt = bids[sigma[pos + 1]] if pos + 1 < len(sigma) else zero
            pay[p] = inst.t[p] * nxt
    return pay


@dataclass(frozen=True)
class Outcome:
    ordering: Ordering
    payments: tuple[Number, ...]
    waiting_costs: tuple[Number, ...]
    total_losses: tuple[Number, ...]
    revenue: Number

    def as_dict(self, inst: Instance) -> dict:
        rows = []
        for pos, p in enumerate(self.ordering.sigma, start=1):
            rows.append(
                {
                    "position": pos,
                    "participant": inst.ids[p],
                    "waiting_cost": format_number(self.waiting_costs[p]),
                    "payment": format_number(self.payments[p]),
                    "total_loss": format_number(self.total_losses[p]),
                }
            )
        return {
            "ordering": self.ordering.labels(inst),
            "positions": rows,
            "revenue": format_number(self.revenue),
        }


def _outcome(inst: Instance, kind: MechanismKind, profile: BidProfile, ordering: Ordering | None) -> Outcome:
    _check_profile(inst, profile, kind)
    order = resolve_ordering(profile, ordering)
    pay = payments_for_ordering(inst, kind, profile.bids, order)
    wait = waiting_costs(inst, order)
    losses = tuple(a + b for a, b in zip(wait, pay))
    revenue = sum(pay, 0 * inst.t[0])
    return Outcome(order, tuple(pay), tuple(wait), losses, revenue)


def vcg_outcome(inst: Instance, profile: BidProfile, ordering: Ordering | None = None) -> Outcome:
    return _outcome(inst, MechanismKind.VCG, profile, ordering)


def gsp_outcome(inst: Instance, profile: BidProfile, ordering: Ordering | None = None) -> Outcome:
    return _outcome(inst, MechanismKind.GSP, profile, ordering)


def run_mechanism(inst: Instance, profile: BidProfile, ordering: Ordering | None = None) -> Outcome:
    return _outcome(inst, profile.kind, profile, ordering)


def vcg_revenue_pairwise(inst: Instance, profile: BidProfile, ordering: Ordering | None = None) -> Number:
    """Organizer revenue as the double sum over served-before pairs.

    Independent of :func:`vcg_outcome`'s per-participant accumulation; the
    two must agree exactly.
    """
    sigma = resolve_ordering(profile, ordering).sigma
    t, b = inst.t, profile.bids
    total = 0 * t[0]
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            total += t[sigma[i]] * t[sigma[j]] * b[sigma[j]]
    return total


@dataclass(frozen=True)
class GameDescription:
    """The normal-form game a mechanism induces on an instance.

    Types are the participants' value rates, actions are non-negative bids,
    alternatives are queue orderings. A participant's valuation of an
    alternative is minus its waiting cost, and utility is valuation minus
    payment.
    """

    instance: Instance
    kind: MechanismKind

    @property
    def type_spaces(self) -> tuple[str, ...]:
        return ("value rate w/t > 0",) * self.instance.n

    @property
    def action_spaces(self) -> tuple[str, ...]:
        return ("bid >= 0",) * self.instance.n

    @property
    def alternative_set(self) -> str:
        return f"orderings of {self.instance.n} participants"

    def valuation(self, participant: int, value_rate, alternative: Ordering) -> Number:
        sigma = alternative.sigma
        pos = sigma.index(participant)
        ahead = sum((self.instance.t[q] for q in sigma[:pos]), 0 * self.instance.t[0])
        return -(value_rate * self.instance.t[participant] * ahead)

    def outcome(self, profile: BidProfile, ordering: Ordering | None = None) -> Ordering:
        return resolve_ordering(profile, ordering)

    def payment(self, participant: int, profile: BidProfile, ordering: Ordering | None = None) -> Number:
        order = self.outcome(profile, ordering)
        return payments_for_ordering(self.instance, self.kind, profile.bids, order)[participant]


def induced_utility(
    game: GameDescription,
    profile: BidProfile,
    participant,
    true_values: Sequence | None = None,
    ordering: Ordering | None = None,
) -> Number:
    """Valuation minus payment; equals minus the participant's total loss."""
    inst = game.instance
    _check_profile(inst, profile, game.kind)
    i = inst.index_of(participant)
    v = inst.v[i] if true_values is None else true_values[i]
    alternative = game.outcome(profile, ordering)
    return game.valuation(i, v, alternative) - game.payment(i, profile, alternative)
