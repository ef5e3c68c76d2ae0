"""Participants, instances, orderings and waiting-cost accounting.

A queue position is 1-based (position 1 is served first). Participants are
addressed by their canonical index, which is their 0-based position in the
input list, or by their string id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .errors import (
    DuplicateId,
    EmptyInstance,
    NonFiniteParameter,
    NonPositiveParameter,
    PositionOutOfRange,
    UnknownParticipant,
    ValidationError,
)
from .numeric import DEFAULT_EPS, Number, all_exact, parse_number, tolerance_for


@dataclass(frozen=True)
class Participant:
    id: str
    t: Number  # service time
    w: Number  # value of one unit of waiting time

    @property
    def v(self) -> Number:
        return value_rate(self)


def value_rate(p: Participant) -> Number:
    """Value of time per unit of own service time, ``w / t``."""
    return p.w / p.t


@dataclass(frozen=True)
class Instance:
    participants: tuple[Participant, ...]
    eps: float = DEFAULT_EPS

    def __len__(self) -> int:
        return len(self.participants)

    @property
    def n(self) -> int:
        return len(self.participants)

    @cached_property
    def exact(self) -> bool:
        return all_exact(x for p in self.participants for x in (p.t, p.w))

    @property
    def tol(self) -> float:
        """Relative comparison tolerance: 0 in exact mode."""
        return tolerance_for(self.exact, self.eps)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.participants)

    @cached_property
    def t(self) -> tuple[Number, ...]:
        return tuple(p.t for p in self.participants)

    @cached_property
    def w(self) -> tuple[Number, ...]:
        return tuple(p.w for p in self.participants)

    @cached_property
    def v(self) -> tuple[Number, ...]:
        return tuple(value_rate(p) for p in self.participants)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {pid: i for i, pid in enumerate(self.ids)}

    def index_of(self, participant) -> int:
        """Canonical index of a participant given by id or index."""
        if isinstance(participant, str):
            try:
                return self._index[participant]
            except KeyError:
                raise UnknownParticipant(f"unknown participant {participant!r}") from None
        if isinstance(participant, int) and 0 <= participant < self.n:
            return participant
        raise UnknownParticipant(f"unknown participant {participant!r}")

    def distinct_value_rates(self) -> bool:
        vs = sorted(self.v)
        if self.exact:
            return all(a != b for a, b in zip(vs, vs[1:]))
        return all(b - a > self.eps * max(1.0, abs(b)) for a, b in zip(vs, vs[1:]))

    def scaled(self, t_factor=1, w_factor=1) -> "Instance":
        return Instance(
            tuple(Participant(p.id, p.t * t_factor, p.w * w_factor) for p in self.participants),
            self.eps,
        )


def _check_param(pid: str, name: str, raw, exact: bool | None) -> Number:
    try:
        value = parse_number(raw, exact)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"participant {pid!r}: bad {name} {raw!r}") from exc
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteParameter(f"participant {pid!r}: {name} must be finite, got {raw!r}")
    if value <= 0:
        raise NonPositiveParameter(f"participant {pid!r}: {name} must be > 0, got {raw!r}")
    return value


def validate_instance(raw: Iterable, exact: bool | None = None, eps: float = DEFAULT_EPS) -> Instance:
    """Build an :class:`Instance` from ``(id, t, w)`` triples or Participants.

    ``exact`` selects the arithmetic mode; by default the instance is exact
    iff every literal is exact. Mixed input falls back to float mode.
    """
    rows = [(p.id, p.t, p.w) if isinstance(p, Participant) else tuple(p) for p in raw]
    if not rows:
        raise EmptyInstance("instance has no participants")
    if exact is None:
        exact = all(
            not isinstance(x, float) and not isinstance(x, bool) for _, t, w in rows for x in (t, w)
        )
    seen: set[str] = set()
    participants = []
    for row in rows:
        if len(row) != 3:
            raise ValidationError(f"expected (id, t, w), got {row!r}")
        pid, t, w = row
        pid = str(pid)
        if pid in seen:
            raise DuplicateId(f"duplicate participant id {pid!r}")
        seen.add(pid)
        participants.append(
            Participant(pid, _check_param(pid, "t", t, exact), _check_param(pid, "w", w, exact))
        )
    return Instance(tuple(participants), eps)


@dataclass(frozen=True)
class Ordering:
    """Queue order: ``sigma[pos - 1]`` is the participant index at ``pos``."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(i) for i in self.sigma))
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValidationError(f"not a permutation: {self.sigma}")

    def __len__(self) -> int:
        return len(self.sigma)

    def __iter__(self):
        return iter(self.sigma)

    def at(self, position: int) -> int:
        if not 1 <= position <= len(self.sigma):
            raise PositionOutOfRange(f"position {position} outside 1..{len(self.sigma)}")
        return self.sigma[position - 1]

    def position_of(self, index: int) -> int:
        return self.sigma.index(index) + 1

    def labels(self, inst: Instance) -> list[str]:
        return [inst.ids[i] for i in self.sigma]

    @classmethod
    def from_ids(cls, inst: Instance, ids: Sequence[str]) -> "Ordering":
        return cls(tuple(inst.index_of(pid) for pid in ids))


def _check_ordering(inst: Instance, ordering: Ordering) -> None:
    if len(ordering) != inst.n:
        raise ValidationError(f"ordering has {len(ordering)} positions, instance has {inst.n}")


def waiting_cost(inst: Instance, ordering: Ordering, position: int) -> Number:
    """Loss of the participant at ``position`` from waiting for everyone ahead.

    Their own service time is not counted.
    """
    _check_ordering(inst, ordering)
    p = ordering.at(position)
    ahead = sum((inst.t[q] for q in ordering.sigma[: position - 1]), 0 * inst.t[p])
    return inst.w[p] * ahead


def waiting_costs(inst: Instance, ordering: Ordering) -> list[Number]:
    """Waiting cost per participant index."""
    _check_ordering(inst, ordering)
    out = [0 * inst.t[0]] * inst.n
    elapsed = 0 * inst.t[0]
    for p in ordering.sigma:
        out[p] = inst.w[p] * elapsed
        elapsed += inst.t[p]
    return out


def total_weighted_waiting(inst: Instance, ordering: Ordering) -> Number:
    _check_ordering(inst, ordering)
    return kernels.total_waiting(inst.t, inst.w, ordering.sigma, exact=inst.exact)


def smith_order(inst: Instance) -> Ordering:
    """Efficient order: non-increasing ``w / t``, ties by ascending index."""
    return Ordering(tuple(sorted(range(inst.n), key=lambda i: (-inst.v[i], i))))
