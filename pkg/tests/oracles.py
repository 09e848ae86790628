"""Independent reference enumerator used to validate the fast engine.

Deliberately naive: walks are grown through geometry.step_candidates
(the public, allocating API), self-avoidance is re-checked against a
list of visited mid-edges, and weight/length/occupancy are recomputed
from scratch at every node by replaying the whole step list.  No state
tables, no incremental bookkeeping -- the point is to share as little
code as possible with skewsaw.walks.
"""

from __future__ import annotations

from skewsaw.geometry import MidEdge, Step, step_candidates
from skewsaw.weights import WeightSet

_OPPOSITE_ARCS = {frozenset(("sw", "ne")): "w1", frozenset(("se", "nw")): "w2"}
_ARC_WEIGHT = {"sw": "u1", "ne": "u1", "se": "u2", "nw": "u2",
               "bt": "v", "lr": "v"}


def replay(steps: list[Step]):
    """Recompute per-rhombus component lists; None if inadmissible."""
    comps: dict = {}
    for s in steps:
        comps.setdefault(s.rhombus, []).append(s.component)
    for clist in comps.values():
        if len(clist) > 2:
            return None
        if len(clist) == 2:
            if frozenset(clist) not in _OPPOSITE_ARCS:
                return None
    return comps


def naive_weight(steps: list[Step], w: WeightSet) -> float:
    comps = replay(steps)
    out = 1.0
    for clist in comps.values():
        if len(clist) == 1:
            out *= getattr(w, _ARC_WEIGHT[clist[0]])
        else:
            out *= getattr(w, _OPPOSITE_ARCS[frozenset(clist)])
    return out


def naive_profile(steps: list[Step]):
    """(singles u1, singles u2, straights, doubles w1, doubles w2)."""
    comps = replay(steps)
    counts = [0, 0, 0, 0, 0]
    slot = {"u1": 0, "u2": 1, "v": 2, "w1": 3, "w2": 4}
    for clist in comps.values():
        if len(clist) == 1:
            counts[slot[_ARC_WEIGHT[clist[0]]]] += 1
        else:
            counts[slot[_OPPOSITE_ARCS[frozenset(clist)]]] += 1
    return tuple(counts)


def naive_length(steps: list[Step], rule=(1, 1, 1)) -> int:
    lt, lp, ls = rule
    total = 0
    for s in steps:
        k = s.kind
        total += lt if k == "arc_theta" else lp if k == "arc_pi_minus_theta" else ls
    return total


def naive_enumerate(start: MidEdge, max_length: int, rule=(1, 1, 1)):
    """Yield every self-avoiding walk (as a step list) of length <= budget."""
    results: list[list[Step]] = []

    def grow(steps: list[Step], visited: list[MidEdge]):
        results.append(list(steps))
        if steps:
            cur = steps[-1].dst
            sign = steps[-1].exit_sign
            candidates = step_candidates(cur, sign=sign)
        else:
            cur = start
            candidates = step_candidates(cur)
        for cand in candidates:
            if cand.dst in visited:
                continue
            trial = steps + [cand]
            if naive_length(trial, rule) > max_length:
                continue
            if replay(trial) is None:
                continue
            grow(trial, visited + [cand.dst])

    grow([], [start])
    return results
