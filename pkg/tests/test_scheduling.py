import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sinrsched import Instance, InputError, InstanceParams, MetricSpace
from sinrsched.model import check_feasible
from sinrsched.scheduling import (MultiHopRequest, delay_range, dilation, schedule_multi_hop,
                                  schedule_single_hop, slot_bound)
from sinrsched.weights import WeightGraph, tau

from conftest import line_instances


class TestSingleHop:
    def test_empty(self):
        inst = Instance.build(MetricSpace.euclidean([(0, 0)]), InstanceParams(), [])
        assert schedule_single_hop(inst).length == 0

    def test_pairwise_conflicts_need_three_slots(self):
        inst = Instance.on_line([(0, 1), (2, 4), (6, 10)])
        g = WeightGraph(inst)
        t = tau(inst.params)
        # every pair violates the greedy condition
        assert g.weight(0, 1) == pytest.approx(1 / 4**3 + 1 / 1**3 * 1 / 8, rel=1e-12) or g.weight(0, 1) > t
        assert all(g.weight(a, b) > t for a, b in [(0, 1), (0, 2), (1, 2)])
        sched = schedule_single_hop(inst)
        assert sched.slots == [[0], [1], [2]]

    def test_far_links_share_one_slot(self):
        inst = Instance.on_line([(1e6 * i, 1e6 * i + 1) for i in range(10)])
        sched = schedule_single_hop(inst)
        assert sched.length == 1 and sched.reports[0].feasible

    @pytest.mark.parametrize("w, t, n, expected", [
        (0.0, 0.5, 1, 1), (0.0, 0.5, 0, 0), (1.0, 0.5, 2, math.floor(3 * math.log(2)) + 1),
        (2.0, 1 / 324, 30, math.floor((648 + 1) * math.log(30)) + 1),
    ])
    def test_slot_bound(self, w, t, n, expected):
        assert slot_bound(w, t, n) == expected

    @given(line_instances(1, 8))
    @settings(max_examples=80, deadline=None)
    def test_partition_feasible_and_bounded(self, inst):
        sched = schedule_single_hop(inst)
        assert sorted(l for s in sched.slots for l in s) == list(range(len(inst)))
        for s, p in zip(sched.slots, sched.powers):
            assert check_feasible(inst, s, p).feasible
        w = WeightGraph(inst).max_weight(range(len(inst)))
        assert sched.length <= slot_bound(w, tau(inst.params), len(inst))


class TestMultiHopRequest:
    def test_dilation(self):
        assert dilation(MultiHopRequest(((0, 1, 2),))) == 2
        assert dilation(MultiHopRequest(((0, 1), (0, 1, 2, 3, 4), (0, 1, 2)))) == 4
        assert dilation(MultiHopRequest(())) == 0

    @pytest.mark.parametrize("paths", [((0,),), ((0, 0, 1),)])
    def test_invalid(self, paths):
        with pytest.raises(InputError):
            MultiHopRequest(paths)

    def test_hop_order(self):
        req = MultiHopRequest(((0, 1, 2), (3, 4)))
        assert req.hops() == [(0, 0), (0, 1), (1, 0)]

    @pytest.mark.parametrize("w, n, k", [(0.0, 1, 1), (0.5, 10, 1), (30.0, 10, math.ceil(30 / (3 * math.log(10))))])
    def test_delay_range(self, w, n, k):
        assert delay_range(w, n) == k


def _line_metric(xs):
    return Instance.build(MetricSpace.euclidean(np.array(xs, dtype=float)[:, None]), InstanceParams(), [])


class TestMultiHop:
    def test_single_path(self):
        base = _line_metric([0, 1, 2])
        sched = schedule_multi_hop(base, MultiHopRequest(((0, 1, 2),)), seed=3)
        assert sched.slots == [[0], [1]]
        assert sched.hop_slot == {(0, 0): 0, (0, 1): 1}

    def test_far_paths_pair_up(self):
        base = _line_metric([0, 1, 2, 1e6, 1e6 + 1, 1e6 + 2])
        req = MultiHopRequest(((0, 1, 2), (3, 4, 5)))
        sched = schedule_multi_hop(base, req, seed=11)
        assert sched.delay_bound == 1 and sched.delays == [1, 1]
        assert sched.length == 2
        assert sorted(map(sorted, sched.slots)) == [[0, 2], [1, 3]]

    def test_seed_determinism(self):
        base = _line_metric(np.arange(12) * 1.5)
        req = MultiHopRequest(((0, 1, 2, 3), (4, 5, 6), (7, 8, 9, 10, 11), (3, 2, 1)))
        a = schedule_multi_hop(base, req, seed=5)
        b = schedule_multi_hop(base, req, seed=5)
        assert a.slots == b.slots and a.delays == b.delays and a.powers == b.powers

    @given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 4))
    @settings(max_examples=40, deadline=None)
    def test_precedence_and_feasibility(self, seed, packets, hops):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(0, 20, size=(packets * (hops + 1), 2))
        base = Instance.build(MetricSpace.euclidean(pts), InstanceParams(), [])
        paths = tuple(tuple(range(i * (hops + 1), (i + 1) * (hops + 1))) for i in range(packets))
        req = MultiHopRequest(paths)
        sched = schedule_multi_hop(base, req, seed)
        for i, p in enumerate(paths):
            for j in range(len(p) - 2):
                assert sched.hop_slot[(i, j)] < sched.hop_slot[(i, j + 1)]
        for s, pw in zip(sched.slots, sched.powers):
            assert check_feasible(sched.hop_links, s, pw).feasible
        assert len(sched.super_slots) <= sched.delay_bound + dilation(req)
        assert sched.length == sum(sched.super_slots)
