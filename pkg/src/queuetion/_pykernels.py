"""Reference kernels in plain Python.

These accept any numeric type that supports ``+``, ``-``, ``*`` and ordering,
so the same code serves exact (Fraction / int) and float inputs. The
compiled module ``_ckernels`` mirrors them for float64.

``kind`` is 0 for VCG and 1 for GSP. Positions are 0-based here.
"""

VCG = 0
GSP = 1


def total_waiting(t, w, order):
    elapsed = 0
    total = 0
    for p in order:
        total += w[p] * elapsed
        elapsed += t[p]
    return total


def exhaustive_min_waiting(t, w, eps=0.0):
    """Minimum total waiting over all orders, by depth-first enumeration.

    Leaves are visited in lexicographic order and only a strict improvement
    replaces the incumbent, so ties resolve to the lexicographically first
    order. Returns ``(cost, order)``.
    """
    n = len(t)
    used = [False] * n
    stack = [0] * n
    best = [None, None]

    def dfs(depth, elapsed, cost):
        if depth == n:
            inc = best[0]
            if inc is None:
                better = True
            elif eps:
                better = cost < inc - eps * max(1.0, abs(inc))
            else:
                better = cost < inc
            if better:
                best[0] = cost
                best[1] = tuple(stack)
            return
        for p in range(n):
            if not used[p]:
                used[p] = True
                stack[depth] = p
                dfs(depth + 1, elapsed + t[p], cost + w[p] * elapsed)
                used[p] = False

    dfs(0, 0, 0)
    return best[0], best[1]


def participant_losses(t, w, bids, order, k, kind):
    """Loss of the participant at position ``k`` for every target position.

    The other participants keep their relative order; the mover is inserted
    at each target and its waiting plus payment is evaluated there.
    """
    n = len(order)
    p = order[k]
    others = order[:k] + order[k + 1:]
    ahead = [0] * n  # ahead[j]: service time of others in front of slot j
    for j in range(1, n):
        ahead[j] = ahead[j - 1] + t[others[j - 1]]
    losses = [0] * n
    if kind == VCG:
        behind = 0  # sum of t*b over others at slots >= j
        for j in range(n - 1, -1, -1):
            if j < n - 1:
                q = others[j]
                behind += t[q] * bids[q]
            losses[j] = w[p] * ahead[j] + t[p] * behind
    else:
        for j in range(n):
            nxt = bids[others[j]] if j < n - 1 else 0
            losses[j] = w[p] * ahead[j] + t[p] * nxt
    return losses


def deviation_gains(t, w, bids, order, kind):
    """``gains[k][j]``: loss reduction if the participant at k moves to j."""
    order = list(order)
    n = len(order)
    out = []
    for k in range(n):
        losses = participant_losses(t, w, bids, order, k, kind)
        out.append([losses[k] - losses[j] for j in range(n)])
    return out


def max_deviation_gain(t, w, bids, order, kind, stop_above=None):
    """Largest deviation gain; returns early once it exceeds ``stop_above``."""
    order = list(order)
    n = len(order)
    best = 0
    for k in range(n):
        losses = participant_losses(t, w, bids, order, k, kind)
        cur = losses[k]
        for j in range(n):
            g = cur - losses[j]
            if g > best:
                best = g
                if stop_above is not None and best > stop_above:
                    return best
    return best
