"""Doubled projection graph, family split, projection spectra."""

import numpy as np
import pytest

from conftest import edge, random_system
from lqcarpet import (build_doubled_graph, partition_families,
                      projection_tau, tau_pair, validate_gifs)
from lqcarpet.digraph import strongly_connected_components


def scalar_root(fn, lo=-80.0, hi=80.0, it=200):
    """Independent bisection oracle for strictly decreasing fn."""
    for _ in range(it):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def s_of(q, a=0.75, b=0.25):
    return scalar_root(lambda s: 0.5 ** q * (a ** s + b ** s) - 1.0)


class TestDoubledGraph:
    def test_diagonal_system_splits_axes(self, sys1):
        doubled = build_doubled_graph(sys1)
        assert doubled.nodes == (("v", "x"), ("v", "y"))
        assert len(doubled.arcs) == 4
        comps = strongly_connected_components(2, doubled.successors())
        assert len(comps) == 2
        split = partition_families(doubled)
        assert split.mode == "split"
        assert split.role_in_a == {"v": "x"}
        # the x family carries the a-ratios as self-loops
        x_arcs = [a for a in doubled.arcs if a.src == 0]
        assert sorted(a.ratio for a in x_arcs) == [0.25, 0.75]
        assert all(a.dst == 0 for a in x_arcs)

    def test_rotated_twin_is_irreducible(self, sys1p):
        doubled = build_doubled_graph(sys1p)
        assert len(doubled.arcs) == 4
        split = partition_families(doubled)
        assert split.mode == "irreducible"
        assert split.role_in_a == {"v": "both"}

    def test_arc_count_two_vertices_five_edges(self):
        raw = {"vertices": ["u", "w"], "edges": [
            edge("e1", "u", "w", "diagonal", 0.4, 0.3, 0.5),
            edge("e2", "u", "u", "anti-diagonal", 0.4, 0.3, 0.5, ty=0.4),
            edge("e3", "w", "u", "diagonal", 0.4, 0.25, 0.3),
            edge("e4", "w", "w", "diagonal", 0.4, 0.25, 0.3, ty=0.3),
            edge("e5", "w", "w", "anti-diagonal", 0.4, 0.25, 0.4, ty=0.6)]}
        doubled = build_doubled_graph(validate_gifs(raw))
        assert len(doubled.arcs) == 10

    def test_all_diagonal_two_vertex_roles(self):
        raw = {"vertices": ["v1", "v2"], "edges": [
            edge("e1", "v1", "v2", "diagonal", 0.4, 0.4, 1.0),
            edge("e2", "v2", "v1", "diagonal", 0.4, 0.3, 0.5),
            edge("e3", "v2", "v2", "diagonal", 0.4, 0.3, 0.5, ty=0.5)]}
        split = partition_families(build_doubled_graph(validate_gifs(raw)))
        assert split.mode == "split"
        assert split.role_in_a == {"v1": "x", "v2": "x"}

    def test_mixed_kinds_can_still_split(self, mixed_split):
        split = partition_families(build_doubled_graph(mixed_split))
        assert split.mode == "split"
        # anti-diagonal edges pair the axes across the two vertices
        assert split.role_in_a["v1"] != split.role_in_a["v2"]


class TestProjectionTau:
    def test_q0_and_q1_anchors(self, sys1):
        tau0 = tau_pair(sys1, 0.0)
        assert tau0.tau_a == pytest.approx(1.0, abs=1e-11)
        assert tau0.tau_b == pytest.approx(1.0, abs=1e-11)
        tau1 = tau_pair(sys1, 1.0)
        assert tau1.tau_a == pytest.approx(0.0, abs=1e-10)
        assert tau1.tau_b == pytest.approx(0.0, abs=1e-10)

    def test_q2_matches_scalar_oracle(self, sys1):
        tau = tau_pair(sys1, 2.0)
        expected = s_of(2.0)
        assert tau.tau_a == pytest.approx(expected, abs=1e-10)
        assert tau.tau_b == pytest.approx(expected, abs=1e-10)
        assert expected == pytest.approx(-0.7336444489, abs=1e-9)

    def test_rotated_twin_same_tau(self, sys1p):
        for q in (0.0, 0.5, 2.0, 3.0):
            tau = tau_pair(sys1p, q)
            assert tau.tau_a == pytest.approx(s_of(q), abs=1e-10)
            assert tau.tau_a == tau.tau_b

    def test_negative_q_rejected(self, sys1):
        doubled = build_doubled_graph(sys1)
        split = partition_families(doubled)
        with pytest.raises(ValueError):
            projection_tau(doubled, split, -0.5)

    def test_tau_x_tau_y_sum_to_t(self, mixed_split):
        for q in (0.0, 1.5, 3.0):
            tau = tau_pair(mixed_split, q)
            for v in mixed_split.vertices:
                assert tau.tau_x[v] + tau.tau_y[v] == pytest.approx(
                    tau.t, abs=1e-12)

    def test_decreasing_in_q_and_zero_at_one(self):
        rng = np.random.default_rng(23)
        for _ in range(8):
            model = random_system(rng)
            taus = [tau_pair(model, q) for q in (0.0, 0.5, 1.0, 2.0, 3.0)]
            for t0, t1 in zip(taus, taus[1:]):
                assert t1.tau_a < t0.tau_a + 1e-10
                assert t1.tau_b < t0.tau_b + 1e-10
            tau1 = taus[2]
            assert tau1.tau_a == pytest.approx(0.0, abs=1e-10)
            assert tau1.tau_b == pytest.approx(0.0, abs=1e-10)

    def test_axis_reflection_swaps_families(self):
        # conjugating every map by the axis swap exchanges the two
        # projection families, so {tau_a, tau_b} is preserved as a set
        rng = np.random.default_rng(31)
        for _ in range(8):
            model = random_system(rng)
            raw = {"vertices": list(model.vertices), "edges": [
                edge(e.id, e.src, e.dst, e.kind, e.b, e.a, e.p,
                     tx=e.ty, ty=e.tx) for e in model.edges]}
            swapped = validate_gifs(raw)
            for q in (0.0, 2.0):
                tau = tau_pair(model, q)
                tau_sw = tau_pair(swapped, q)
                assert (sorted([tau.tau_a, tau.tau_b])
                        == pytest.approx(sorted([tau_sw.tau_a, tau_sw.tau_b]),
                                         abs=1e-10))
