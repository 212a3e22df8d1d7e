import numpy as np
import pytest

from bal.cdd import Direction, Metric, SortedPool
from bal.featio import SelectionManifest
from bal.pool import (LabelState, SubPoolError, make_subpool, subpool_coverage,
                      window_bounds)


def identity_pool(n):
    return SortedPool(order=np.arange(n), scores=np.arange(n, dtype=float),
                      metric=Metric.CDD, direction=Direction.ASCENDING)


def test_uniform_split_anchor():
    assert window_bounds(100, 4, 10, 1.0) == (30, 40)


def test_first_cycle_wide():
    assert window_bounds(100, 1, 10, 1.3) == (0, 13)


def test_interior_overlap_window():
    # beta=2 widens the beta=1 window [40, 50) by 5 on each side
    assert window_bounds(100, 5, 10, 2.0) == (35, 55)


def test_final_cycle_tail():
    assert window_bounds(100, 10, 10, 1.5) == (85, 100)


def test_cycle_out_of_range():
    with pytest.raises(SubPoolError):
        window_bounds(100, 0, 10, 1.0)
    with pytest.raises(SubPoolError):
        window_bounds(100, 11, 10, 1.0)


def test_middle_branch_enumeration_oracle():
    # independent evaluation of the center/width form of the middle branch
    def oracle(n, i, cycles, beta):
        from fractions import Fraction
        from math import floor
        seg = Fraction(n, cycles)
        center = (i - 1 + Fraction(1, 2)) * seg  # center of the beta=1 window
        half = Fraction(beta) * seg / 2
        lo = floor(center - half + Fraction(1, 2))
        hi = floor(center + half + Fraction(1, 2))
        return max(0, lo), min(n, hi)

    for n in (100, 1000, 97):
        for cycles in (5, 10):
            for beta in (0.5, 0.8, 1.0, 1.3, 2.0):
                for i in range(2, cycles):
                    assert window_bounds(n, i, cycles, beta) == \
                        oracle(n, i, cycles, beta), (n, cycles, beta, i)


def test_window_width_monotone_in_beta():
    for i in (1, 3, 10):
        widths = []
        for beta in (0.5, 0.8, 1.0, 1.5, 2.0, 3.0):
            s, e = window_bounds(100, i, 10, beta)
            widths.append(e - s)
        assert widths == sorted(widths)


def test_window_length_tracks_beta_fraction():
    for n in (100, 1000, 123):
        for cycles in (5, 10):
            for beta in (0.5, 0.75, 1.0, 1.3, 2.0):
                for i in range(1, cycles + 1):
                    s, e = window_bounds(n, i, cycles, beta)
                    if s > 0 and e < n:  # ignore clamped windows
                        assert abs((e - s) - int(beta * n / cycles)) <= 1


def test_members_exclude_labeled():
    sp = identity_pool(100)
    state = LabelState()
    state.commit(SelectionManifest(cycle=1, beta=0, subpool_start=0, subpool_end=5,
                                   selected=[30, 31, 32], scores=[0, 0, 0]))
    sub = make_subpool(sp, 4, 10, 1.0, labeled=state)
    assert sub.start_pos == 30 and sub.end_pos == 40
    assert set(sub.members) == set(range(33, 40))


def test_subpool_widens_when_starved():
    sp = identity_pool(100)
    labeled = set(range(30, 40))  # entire beta=1 window for cycle 4
    sub = make_subpool(sp, 4, 10, 1.0, labeled=labeled, min_members=5)
    assert len(sub.members) >= 5
    assert not set(sub.members) & labeled


def test_subpool_error_when_pool_exhausted():
    sp = identity_pool(20)
    with pytest.raises(SubPoolError):
        make_subpool(sp, 2, 4, 1.0, labeled=set(range(20)))


def test_coverage_beta_1_tiles():
    for n in (100, 1000):
        for cycles in (5, 10):
            rep = subpool_coverage(cycles, 1.0, n)
            assert all(o == 0 for o in rep["overlaps"])
            assert all(g == 0 for g in rep["gaps"])
            assert rep["uncovered_positions"] <= cycles
            if n % cycles == 0:
                assert rep["exact_tiling"]


def test_coverage_overlap_beta_2():
    rep = subpool_coverage(10, 2.0, 100)
    # interior adjacent pairs overlap by (beta-1) * N / I = 10
    for o in rep["overlaps"][1:-1]:
        assert abs(o - 10) <= 1


def test_coverage_gap_beta_half():
    rep = subpool_coverage(10, 0.5, 100)
    for g in rep["gaps"][1:-1]:
        assert abs(g - 5) <= 1


def test_coverage_by_set_intersection():
    # cross-check reported overlaps against literal window set intersections
    for beta in (0.5, 1.0, 2.0):
        rep = subpool_coverage(10, beta, 100)
        wins = [set(range(s, e)) for s, e in rep["windows"]]
        for idx, (a, b) in enumerate(zip(wins, wins[1:])):
            assert rep["overlaps"][idx] == len(a & b)


def test_label_state_rejects_duplicates():
    state = LabelState()
    state.commit(SelectionManifest(cycle=1, beta=0, subpool_start=0, subpool_end=2,
                                   selected=[1, 2], scores=[0, 0]))
    with pytest.raises(SubPoolError):
        state.commit(SelectionManifest(cycle=2, beta=1, subpool_start=0,
                                       subpool_end=4, selected=[2, 3],
                                       scores=[0, 0]))
