"""Brute-force ground truth for small instances.

Nothing here relies on the window conditions or on the value-rate sorting
rule. Orders are enumerated exhaustively, bid vectors come from a finite
candidate grid, and every kept profile is certified by deviation
enumeration.

Grid choice. For a fixed allocation order each participant's equilibrium
conditions are linear in the bids, so revenue (linear, non-decreasing in
every bid except the first) is extremal at vertices of a polytope.

* VCG: the vertices have every bid in ``{0} | {v_i}``; that set is the grid.
* GSP: the conditions only involve differences of two bids, so the
  component-wise largest and smallest feasible bids are found by
  shortest paths over the constraint graph. The constraints are read off by
  probing the deviation-loss function, not from a closed form. The grid at
  each position is ``{0, lowest, highest}``.

``grid_refinement = r`` splits every gap between consecutive grid values
into ``2 ** (r - 1)`` equal parts, so finer grids contain coarser ones.
Those interior points only exist to catch mistakes in the vertex argument.

The top bid never affects revenue. For each choice of the remaining bids
the smallest top bid that deters every jump to the front is computed
exactly; VCG additionally keeps every larger grid value.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

from . import _pykernels, kernels
from .core import Instance, Ordering
from .equilibrium import is_nash
from .errors import SizeLimitExceeded
from .mechanisms import BidProfile, MechanismKind, payments_for_ordering
from .numeric import format_number

ORDERING_LIMIT = 8
EQUILIBRIUM_LIMIT = 5
LIMIT_ENV = "QUEUECTION_ORACLE_LIMIT"


def oracle_limit(default: int) -> int:
    raw = os.environ.get(LIMIT_ENV)
    return int(raw) if raw else default


def _require_size(inst: Instance, default: int, what: str) -> None:
    limit = oracle_limit(default)
    if inst.n > limit:
        raise SizeLimitExceeded(
            f"{what} is capped at N <= {limit} (got N = {inst.n}); set {LIMIT_ENV} to override"
        )


def oracle_optimal_ordering(inst: Instance) -> tuple[Ordering, object]:
    """Exhaustive minimum of total weighted waiting over all N! orders.

    Ties go to the lexicographically smallest order of participant indices.
    """
    _require_size(inst, ORDERING_LIMIT, "ordering search")
    cost, order = kernels.exhaustive_min_waiting(inst.t, inst.w, inst.exact, inst.tol)
    return Ordering(order), cost


@dataclass(frozen=True)
class Entry:
    ordering: Ordering
    profile: BidProfile
    revenue: object

    def as_dict(self, inst: Instance) -> dict:
        return {
            "ordering": self.ordering.labels(inst),
            "bids": self.profile.as_dict(inst)["bids"],
            "revenue": format_number(self.revenue),
        }


@dataclass
class EquilibriumSet:
    kind: MechanismKind
    entries: list[Entry] = field(default_factory=list)
    search_meta: dict = field(default_factory=dict)

    def revenues(self) -> list:
        return [e.revenue for e in self.entries]

    def min_entry(self) -> Entry:
        return min(self.entries, key=lambda e: e.revenue)

    def max_entry(self) -> Entry:
        return max(self.entries, key=lambda e: e.revenue)

    def jsonl(self, inst: Instance) -> str:
        return "".join(json.dumps(e.as_dict(inst)) + "\n" for e in self.entries)


def _refine(values, refinement: int) -> list:
    values = sorted(set(values))
    parts = 2 ** (refinement - 1)
    if parts == 1:
        return values
    out = []
    for lo, hi in zip(values, values[1:]):
        step = (hi - lo) / parts
        out.extend(lo + step * i for i in range(parts))
    out.append(values[-1])
    return out


def _affine_gain(inst, w, bids, sigma, k, j, kind, var):
    """``(c, a)`` with gain(k -> j) = c + a * bids[var], other bids fixed."""
    zero = 0 * inst.t[0]
    b0 = list(bids)
    b0[var] = zero
    l0 = _pykernels.participant_losses(inst.t, w, b0, sigma, k, kind)
    b0[var] = zero + 1
    l1 = _pykernels.participant_losses(inst.t, w, b0, sigma, k, kind)
    c = l0[k] - l0[j]
    return c, (l1[k] - l1[j]) - c


def _min_top_bid(inst, w, bids, sigma, kind):
    """Smallest first-position bid that makes every jump to the front unprofitable."""
    zero = 0 * inst.t[0]
    top = sigma[0]
    need = bids[sigma[1]] if len(sigma) > 1 else zero
    for k in range(1, len(sigma)):
        c, a = _affine_gain(inst, w, bids, sigma, k, 0, kind, top)
        if a < 0:
            need = max(need, c / -a)
        elif c > 0:
            return None  # no top bid deters this jump
    return need


class _Prefilter:
    """Cheap float screen; a profile it rejects has a clearly positive gain."""

    def __init__(self, inst: Instance, kind: MechanismKind):
        self.t = [float(x) for x in inst.t]
        self.w = [float(x) for x in inst.w]
        self.kind = kind.code
        self.scale = 1e-7 * max(1.0, max(self.w) * sum(self.t))

    def rejects(self, bids, sigma) -> bool:
        fb = [float(b) for b in bids]
        scale = self.scale * max(1.0, max(fb))
        g = kernels.max_deviation_gain(self.t, self.w, fb, sigma, self.kind, False, scale)
        return g > scale


def _vcg_candidates(inst, sigma, grid, prefilter):
    n = len(sigma)
    zero = 0 * inst.t[0]
    # a top bid this large deters every jump to the front
    ratio = sum(inst.t) / min(inst.t)
    big = (max(grid) + 1) * (1 + ratio) + max(inst.v) * ratio
    for rest in itertools.combinations_with_replacement(sorted(grid, reverse=True), n - 1):
        bids = [zero] * n
        for pos, b in enumerate(rest, start=1):
            bids[sigma[pos]] = b
        bids[sigma[0]] = big
        if prefilter.rejects(bids, sigma):
            continue
        top = _min_top_bid(inst, inst.w, bids, sigma, MechanismKind.VCG.code)
        if top is None:
            continue
        tops = [top] + [g for g in grid if g > top]
        for b_top in tops:
            cand = list(bids)
            cand[sigma[0]] = b_top
            yield cand


def _bellman_ford(n_nodes, edges, source):
    """Shortest distances (None = unreachable); raises ValueError on a negative cycle."""
    dist = [None] * n_nodes
    dist[source] = 0
    for _ in range(n_nodes):
        changed = False
        for a, b, c in edges:
            if dist[a] is not None and (dist[b] is None or dist[a] + c < dist[b]):
                dist[b] = dist[a] + c
                changed = True
        if not changed:
            return dist
    raise ValueError("negative cycle")


def _gsp_box(inst, sigma):
    """Per-position (lowest, highest) feasible bids for positions 2..N, or None.

    Constraints ``x[a] - x[b] <= c`` are read off the deviation-loss
    function by probing: each gain is affine in the bids and for GSP
    involves at most two of them with opposite unit-scaled coefficients.
    """
    n = len(sigma)
    zero = 0 * inst.t[0]
    kind = MechanismKind.GSP.code
    node = {p: i for i, p in enumerate(sigma)}  # participant -> node
    ZERO = n
    cons = []  # (a, b, c): x_a - x_b <= c
    for pos in range(n - 1):
        cons.append((node[sigma[pos + 1]], node[sigma[pos]], zero))
    cons.append((ZERO, node[sigma[n - 1]], zero))  # bids >= 0
    base = [zero] * inst.n
    order = list(sigma)
    for k in range(n):
        l0 = _pykernels.participant_losses(inst.t, inst.w, base, order, k, kind)
        probes = {}
        for q in sigma:
            probe = list(base)
            probe[q] = zero + 1
            probes[q] = _pykernels.participant_losses(inst.t, inst.w, probe, order, k, kind)
        for j in range(n):
            if j == k:
                continue
            c = l0[k] - l0[j]
            coeffs = {}
            for q, l1 in probes.items():
                a = (l1[k] - l1[j]) - c
                if a != 0:
                    coeffs[q] = a
            # gain = c + sum a_q x_q <= 0
            if not coeffs:
                if c > 0:
                    return None
                continue
            pos = [q for q, a in coeffs.items() if a > 0]
            neg = [q for q, a in coeffs.items() if a < 0]
            if len(pos) == 1 and len(neg) == 1 and coeffs[pos[0]] == -coeffs[neg[0]]:
                s = coeffs[pos[0]]
                cons.append((node[pos[0]], node[neg[0]], -c / s))
            elif len(coeffs) == 1:
                (q, a), = coeffs.items()
                if a > 0:
                    cons.append((node[q], ZERO, -c / a))
                else:
                    cons.append((ZERO, node[q], c / -a))
            else:
                raise AssertionError(f"non-difference GSP constraint: {coeffs}")
    try:
        # x_a - x_b <= c is an edge b -> a of weight c
        upper = _bellman_ford(n + 1, [(b, a, c) for a, b, c in cons], ZERO)
        lower = _bellman_ford(n + 1, cons, ZERO)
    except ValueError:
        return None
    box = []
    for pos in range(1, n):
        hi = upper[pos]
        lo = -lower[pos] if lower[pos] is not None else zero
        if hi is None or lo > hi:
            return None
        box.append((max(lo, zero), hi))
    return box


def _gsp_candidates(inst, sigma, refinement, prefilter):
    n = len(sigma)
    zero = 0 * inst.t[0]
    box = _gsp_box(inst, sigma) if n > 1 else []
    if box is None:
        return
    grids = [_refine([zero, lo, hi], refinement) for lo, hi in box]
    for rest in itertools.product(*grids):
        if any(a < b for a, b in zip(rest, rest[1:])):
            continue
        bids = [zero] * n
        for pos, b in enumerate(rest, start=1):
            bids[sigma[pos]] = b
        top = _min_top_bid(inst, inst.w, bids, sigma, MechanismKind.GSP.code)
        if top is None:
            continue
        bids[sigma[0]] = top
        if prefilter.rejects(bids, sigma):
            continue
        yield bids


def enumerate_equilibria(
    inst: Instance, kind, grid_refinement: int = 1, orderings=None
) -> EquilibriumSet:
    """All grid profiles, over all allocation orders, that pass deviation enumeration.

    ``orderings`` restricts the search to the given orders (default: all N!).
    """
    kind = MechanismKind.parse(kind)
    _require_size(inst, EQUILIBRIUM_LIMIT, "equilibrium enumeration")
    if grid_refinement < 1:
        raise ValueError("grid_refinement must be >= 1")
    zero = 0 * inst.t[0]
    n = inst.n
    prefilter = _Prefilter(inst, kind)
    if orderings is None:
        orderings = [Ordering(s) for s in itertools.permutations(range(n))]
    vcg_grid = _refine([zero, *inst.v], grid_refinement)
    seen = set()
    entries = []
    candidates = 0
    for order in orderings:
        sigma = list(order.sigma)
        if n == 1:
            gen = iter([[zero]])
        elif kind is MechanismKind.VCG:
            gen = _vcg_candidates(inst, sigma, vcg_grid, prefilter)
        else:
            gen = _gsp_candidates(inst, sigma, grid_refinement, prefilter)
        for bids in gen:
            candidates += 1
            key = (order.sigma, tuple(bids))
            if key in seen:
                continue
            profile = BidProfile(kind, tuple(bids))
            if not is_nash(inst, profile, ordering=order).equilibrium:
                continue
            seen.add(key)
            revenue = sum(payments_for_ordering(inst, kind, bids, order), zero)
            entries.append(Entry(order, profile, revenue))
    entries.sort(key=lambda e: (e.ordering.sigma, e.profile.bids))
    meta = {
        "kind": kind.value,
        "grid_refinement": grid_refinement,
        "orderings": len(orderings),
        "candidates": candidates,
        "equilibria": len(entries),
    }
    return EquilibriumSet(kind, entries, meta)


def oracle_revenue_extremes(inst: Instance, kind, grid_refinement: int = 1, orderings=None):
    """``(min, max)`` organizer revenue over the enumerated equilibria."""
    eq = enumerate_equilibria(inst, kind, grid_refinement, orderings)
    revenues = eq.revenues()
    return min(revenues), max(revenues)
