"""Adaptive sub-pool windows over the sorted pool.

Cycle i of I gets a contiguous window of sorted positions whose width scales
with the balancing factor beta: beta > 1 makes adjacent windows overlap,
beta < 1 leaves gaps, beta = 1 partitions the pool uniformly. Windows use
0-based half-open position ranges with round-half-up endpoints.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cdd import SortedPool
from .featio import SelectionManifest


class SubPoolError(ValueError):
    pass


@dataclass
class LabelState:
    """Accumulated labeled rows plus the per-cycle manifests that produced them."""

    labeled: set = field(default_factory=set)
    per_cycle: list = field(default_factory=list)

    def commit(self, manifest: SelectionManifest):
        dup = self.labeled.intersection(manifest.selected)
        if dup:
            raise SubPoolError(f"rows selected twice: {sorted(dup)[:5]}")
        self.labeled.update(int(i) for i in manifest.selected)
        self.per_cycle.append(manifest)


@dataclass(frozen=True)
class SubPool:
    cycle: int
    start_pos: int
    end_pos: int           # half-open: positions [start_pos, end_pos)
    members: np.ndarray    # row indices in window order, labeled rows removed
    beta: float


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def window_bounds(n: int, cycle: int, cycles: int, beta: float):
    """Position window for one cycle, clamped to [0, n].

    Endpoints are computed in exact rational arithmetic so round-half-up is
    unambiguous regardless of float evaluation order.
    """
    if not 1 <= cycle <= cycles:
        raise SubPoolError(f"cycle {cycle} out of range 1..{cycles}")
    if n < cycles:
        raise SubPoolError(f"pool of {n} rows cannot support {cycles} cycles")
    seg = Fraction(n, cycles)
    b = Fraction(beta)
    if cycle == 1:
        start, end = 0, _round_half_up(b * seg)
    elif cycle == cycles:
        start, end = n - _round_half_up(b * seg), n
    else:
        center = cycle - 1  # 1-based cycles over 0-based positions
        start = _round_half_up((center + (1 - b) / 2) * seg)
        end = _round_half_up((center + (1 + b) / 2) * seg)
    start = max(0, min(n, start))
    end = max(start, min(n, end))
    return start, end


def make_subpool(sp: SortedPool, cycle: int, cycles: int, beta: float,
                 labeled=None, min_members: int = 1) -> SubPool:
    """Window rows for one cycle minus already-labeled rows.

    If fewer than min_members unlabeled rows remain, the window is widened
    symmetrically by n/cycles positions at a time until enough remain or the
    window spans the whole pool.
    """
    n = sp.n
    labeled_set = set() if labeled is None else (
        labeled.labeled if isinstance(labeled, LabelState) else set(labeled))
    start, end = window_bounds(n, cycle, cycles, beta)

    def members_of(s, e):
        window = sp.order[s:e]
        keep = [int(r) for r in window if int(r) not in labeled_set]
        return np.asarray(keep, dtype=np.int64)

    members = members_of(start, end)
    step = max(1, n // cycles)
    while len(members) < min_members and (start > 0 or end < n):
        start = max(0, start - step)
        end = min(n, end + step)
        members = members_of(start, end)
    if len(members) < 1:
        raise SubPoolError(f"cycle {cycle}: no unlabeled rows remain in the pool")
    return SubPool(cycle=cycle, start_pos=start, end_pos=end,
                   members=members, beta=beta)


def subpool_coverage(cycles: int, beta: float, n: int) -> dict:
    """Overlap/gap structure of the full window sequence.

    Reports per-adjacent-pair overlap lengths (beta > 1), gap lengths
    (beta < 1), and whether the windows tile [0, n) exactly (beta = 1).
    """
    windows = [window_bounds(n, i, cycles, beta) for i in range(1, cycles + 1)]
    overlaps, gaps = [], []
    for (s0, e0), (s1, e1) in zip(windows, windows[1:]):
        overlaps.append(max(0, e0 - s1))
        gaps.append(max(0, s1 - e0))
    covered = np.zeros(n, dtype=bool)
    for s, e in windows:
        covered[s:e] = True
    return {
        "windows": windows,
        "overlaps": overlaps,
        "gaps": gaps,
        "uncovered_positions": int(n - covered.sum()),
        "exact_tiling": bool(covered.all() and all(o == 0 for o in overlaps)),
    }
