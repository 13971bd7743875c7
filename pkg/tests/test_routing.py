import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sinrsched import Instance, InputError, InstanceParams, MetricSpace
from sinrsched.generators import grid
from sinrsched.routing import (FLOW_TOL, FractionalFlow, RoutingProblem, WeightedPath, build_routing_lp,
                               decompose_flow, prune_paths, round_paths, solve_clm)
from sinrsched.scheduling import MultiHopRequest, schedule_multi_hop
from sinrsched.simplex import solve_lp


def base(points):
    return Instance.build(MetricSpace.euclidean(points), InstanceParams(), [])


def solve(inst, problem):
    rlp = build_routing_lp(inst, problem)
    sol = solve_lp(rlp.lp)
    return rlp, sol, FractionalFlow.from_solution(rlp, sol)


def simple_paths(problem, s, t, limit=6):
    succ = {}
    for e, (a, b) in enumerate(problem.edges):
        succ.setdefault(a, []).append((b, e))
    out = []

    def extend(v, nodes, used):
        if v == t:
            out.append(tuple(used))
            return
        if len(used) >= limit:
            return
        for w, e in succ.get(v, ()):
            if w not in nodes:
                extend(w, nodes | {w}, used + [e])
    extend(s, {s}, [])
    return out


def integral_optimum(rlp):
    """Best ``max(dilation, load)`` over every choice of one simple path per commodity."""
    prob = rlp.problem
    choices = [simple_paths(prob, s, t) for s, t in prob.commodities]
    best = np.inf
    for combo in itertools.product(*choices):
        use = np.zeros(len(prob.edges))
        for path in combo:
            use[list(path)] += 1
        load = (rlp.weights @ use).max() if len(use) else 0.0
        best = min(best, max(max(len(p) for p in combo), load))
    return best


class TestProblem:
    def test_unreachable(self):
        with pytest.raises(InputError, match="no path"):
            RoutingProblem(((0, 1),), ((1, 0),))

    def test_same_endpoints(self):
        with pytest.raises(InputError):
            RoutingProblem(((0, 1),), ((0, 0),))


class TestLP:
    def test_single_edge(self):
        inst = base([(0, 0), (1, 0)])
        _, sol, flow = solve(inst, RoutingProblem(((0, 1),), ((0, 1),)))
        assert sol.objective == pytest.approx(1.0, abs=1e-12)
        assert flow.y[0, 0] == pytest.approx(1.0)

    def test_no_commodities(self):
        inst = base([(0, 0), (1, 0)])
        rlp, sol, _ = solve(inst, RoutingProblem(((0, 1),), ()))
        assert rlp.lp.num_vars == 1 and sol.objective == 0.0

    def test_shared_edge_without_self_weight(self):
        inst = base([(0, 0), (1, 0)])
        rlp, sol, _ = solve(inst, RoutingProblem(((0, 1),), ((0, 1), (0, 1))))
        assert rlp.weights[0, 0] == 0.0
        assert sol.objective == pytest.approx(1.0, abs=1e-12)

    def test_grid_invariants_and_integral_gap(self):
        metric, edges = grid(3, 3)
        inst = Instance.build(metric, InstanceParams(), [])
        problem = RoutingProblem(tuple(edges), ((0, 8), (2, 6), (3, 5)))
        rlp, sol, flow = solve(inst, problem)
        assert max(rlp.lp.residuals(sol.x).values()) <= 1e-9
        for i in range(3):
            assert flow.conservation_residual(i) <= 1e-9
            assert flow.y[i].sum() <= flow.z + 1e-9
        load = rlp.weights @ flow.y.sum(axis=0)
        assert load.max() <= flow.z + 1e-9
        assert flow.z <= integral_optimum(rlp) + 1e-9


class TestDecompose:
    def problem(self):
        # nodes: s=0, a=1, t=2
        return RoutingProblem(((0, 1), (1, 2), (0, 2)), ((0, 2),))

    def test_unit_path(self):
        flow = FractionalFlow(self.problem(), np.array([[1.0, 1.0, 0.0]]), 2.0)
        dec = decompose_flow(flow, 0)
        assert [(p.nodes, p.weight) for p in dec.paths] == [((0, 1, 2), 1.0)]

    def test_split(self):
        flow = FractionalFlow(self.problem(), np.array([[0.5, 0.5, 0.5]]), 2.0)
        dec = decompose_flow(flow, 0)
        assert sorted((p.nodes, p.weight) for p in dec.paths) == [((0, 1, 2), 0.5), ((0, 2), 0.5)]

    def test_zero_flow(self):
        flow = FractionalFlow(self.problem(), np.zeros((1, 3)), 0.0)
        dec = decompose_flow(flow, 0)
        assert dec.paths == [] and dec.cycles == []

    def test_cycle_recorded(self):
        problem = RoutingProblem(((0, 1), (1, 2), (1, 3), (3, 1)), ((0, 2),))
        flow = FractionalFlow(problem, np.array([[1.0, 1.0, 0.25, 0.25]]), 3.0)
        dec = decompose_flow(flow, 0)
        assert [(p.nodes, p.weight) for p in dec.paths] == [((0, 1, 2), 1.0)]
        assert len(dec.cycles) == 1 and dec.cycles[0].weight == pytest.approx(0.25)

    def test_conservation_violation(self):
        flow = FractionalFlow(self.problem(), np.array([[1.0, 0.5, 0.0]]), 2.0)
        with pytest.raises(InputError, match="conservation"):
            decompose_flow(flow, 0)

    @given(st.integers(0, 2**32))
    @settings(max_examples=20, deadline=None)
    def test_reconstructs_lp_flow(self, seed):
        rng = np.random.default_rng(seed)
        metric, edges = grid(3, 3, spacing=1.0 + rng.random())
        inst = Instance.build(metric, InstanceParams(), [])
        comms = []
        while len(comms) < 3:
            s, t = (int(v) for v in rng.choice(9, 2, replace=False))
            comms.append((s, t))
        _, _, flow = solve(inst, RoutingProblem(tuple(edges), tuple(comms)))
        for i in range(len(comms)):
            dec = decompose_flow(flow, i)
            rebuilt = np.zeros(len(edges))
            for p in dec.paths + dec.cycles:
                rebuilt[list(p.edges)] += p.weight
            np.testing.assert_allclose(rebuilt, np.where(flow.y[i] > 1e-12, flow.y[i], 0.0), atol=1e-9)
            assert sum(p.weight for p in dec.paths) == pytest.approx(1.0, abs=1e-9)
            assert len(dec.paths) <= len(edges)


def wpath(hops, weight):
    return WeightedPath(tuple(range(hops + 1)), tuple(range(hops)), weight)


class TestPruneAndRound:
    def test_drop_long(self):
        kept = prune_paths([wpath(2, 0.5), wpath(5, 0.5)], 2.0)
        assert [(p.hops, p.weight) for p in kept] == [(2, 1.0)]

    def test_single_unchanged(self):
        assert prune_paths([wpath(4, 1.0)], 2.0) == [wpath(4, 1.0)]

    def test_all_short_unchanged(self):
        paths = [wpath(1, 0.25), wpath(3, 0.75)]
        assert prune_paths(paths, 2.0) == paths

    def test_all_pruned(self):
        with pytest.raises(RuntimeError):
            prune_paths([wpath(9, 1.0)], 1.0)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(InputError):
            prune_paths([wpath(1, 0.4)], 1.0)

    def test_single_choice(self):
        assert round_paths([[wpath(2, 1.0)]], 0) == [wpath(2, 1.0)]

    def test_even_split(self):
        a, b = wpath(1, 0.5), wpath(2, 0.5)
        picks = round_paths([[a, b]] * 10_000, 12345)
        share = sum(p is a for p in picks) / len(picks)
        assert abs(share - 0.5) <= 0.02

    def test_seeded(self):
        sets = [[wpath(1, 0.3), wpath(2, 0.7)]] * 20
        assert round_paths(sets, 9) == round_paths(sets, 9)


class TestPipeline:
    def test_unique_path(self):
        inst = base([(0, 0), (1, 0), (2, 0)])
        problem = RoutingProblem(((0, 1), (1, 2)), ((0, 2),))
        res = solve_clm(inst, problem, seed=4)
        assert res.paths[0].nodes == (0, 1, 2)
        delay_seed = np.random.SeedSequence(4).spawn(2)[1]
        direct = schedule_multi_hop(inst, MultiHopRequest(((0, 1, 2),)), delay_seed)
        assert res.schedule.slots == direct.slots

    def test_far_commodities_one_slot(self):
        inst = base([(0, 0), (1, 0), (1e6, 0), (1e6 + 1, 0)])
        res = solve_clm(inst, RoutingProblem(((0, 1), (2, 3)), ((0, 1), (2, 3))), seed=0)
        assert res.z_star == pytest.approx(1.0, abs=1e-12)
        assert res.length == 1

    def test_detour_dilation_bound(self):
        # a 2x6 ladder: the short rungs are congested, the long way round is free
        metric, edges = grid(6, 2)
        inst = Instance.build(metric, InstanceParams(), [])
        comms = ((0, 6), (1, 7), (2, 8), (0, 11))
        res = solve_clm(inst, RoutingProblem(tuple(edges), comms), seed=1)
        assert res.dilation <= 2 * res.z_star + 1e-9
        for i, p in enumerate(res.paths):
            assert (p.nodes[0], p.nodes[-1]) == comms[i]
