#!/usr/bin/env python3
"""
测试影子顶点主元引擎
"""
import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, str(Path(__file__).parent / "src"))

from linalg import solve_right
from lp_model import fold_bounds, normalize_rows, random_lp
from models.errors import InfeasibleStart, NumericalBreakdown, UnboundedDirection
from models.lp_models import FoldedLP
from models.solver_models import PerturbationParams
from oracle import exhaustive_shadow_path, solve_by_enumeration
from sampling import RngState, sample_perturbed_bounds, sample_sphere_uniform
from shadow import (
    Basis,
    ShadowState,
    StopReason,
    follow_shadow_path,
    multipliers,
    pivot_step,
    ratio_test,
    trace_to_frame,
    write_trace_csv,
)

# 单位正方形: 0: x1<=1, 1: x2<=1, 2: -x1<=0, 3: -x2<=0
SQUARE = FoldedLP.from_box(np.zeros(2), np.ones(2))
Z = np.array([0.6, 0.8])


def _top_right() -> Basis:
    return Basis.from_indices(SQUARE, [0, 1])


def _assert_monotone(state: ShadowState) -> None:
    values = [r.objective_value for r in state.trace]
    aux = [r.aux_value for r in state.trace]
    for a, b in zip(values, values[1:]):
        assert b >= a - 1e-9
    for a, b in zip(aux, aux[1:]):
        assert b <= a + 1e-9


class TestSquarePaths:
    def test_target_in_start_cone(self):
        state, reason = follow_shadow_path(SQUARE, _top_right(), Z, np.array([1.0, 2.0]), t_stop=10.0)
        assert reason == StopReason.OPTIMAL_FOR_TARGET
        assert state.pivot_count == 0
        assert state.visited == [(0, 1)]

    def test_three_vertex_path(self):
        state, reason = follow_shadow_path(SQUARE, _top_right(), Z, np.array([-1.0, -2.0]), t_stop=1e3)
        assert reason == StopReason.OPTIMAL_FOR_TARGET
        assert state.visited == [(0, 1), (0, 3), (2, 3)]
        np.testing.assert_allclose(state.basis.vertex, [0.0, 0.0], atol=1e-12)
        assert [r.t for r in state.trace] == pytest.approx([0.4, 0.6])
        assert [(r.leaving, r.entering) for r in state.trace] == [(1, 3), (0, 2)]

    def test_truncation_between_switches(self):
        state, reason = follow_shadow_path(SQUARE, _top_right(), Z, np.array([-1.0, -2.0]), t_stop=0.5)
        assert reason == StopReason.TRUNCATED_AT_T
        assert state.t == 0.5
        assert state.basis.indices == (0, 3)

    def test_zero_t_stop(self):
        state, reason = follow_shadow_path(SQUARE, _top_right(), Z, np.array([-1.0, -2.0]), t_stop=0.0)
        assert reason == StopReason.TRUNCATED_AT_T
        assert state.visited == [(0, 1)]

    def test_pivot_budget(self):
        state, reason = follow_shadow_path(
            SQUARE, _top_right(), Z, np.array([-1.0, -2.0]), max_pivots=1
        )
        assert reason == StopReason.PIVOT_BUDGET
        assert state.pivot_count == 1

    def test_matches_oracle(self):
        c = np.array([-1.0, -2.0])
        state, _ = follow_shadow_path(SQUARE, _top_right(), Z, c, t_stop=1e3)
        assert exhaustive_shadow_path(SQUARE, Z, c, 1e3) == state.visited


class TestRatioTest:
    def test_tie_breaks_to_least_row(self):
        state = ShadowState(basis=_top_right(), z=np.array([1.0, 1.0]), c=np.array([-1.0, -1.0]))
        step = ratio_test(state)
        assert step.leaving == 0
        assert step.lam == pytest.approx(1.0)

    def test_optimal_returns_none(self):
        state = ShadowState(basis=_top_right(), z=Z, c=np.array([2.0, 0.5]))
        assert ratio_test(state) is None

    def test_flat_denominator_with_negative_multiplier(self):
        # 行 0 的乘子 -0.6, c 方向分量为 0
        state = ShadowState(basis=_top_right(), z=np.array([-0.6, 0.8]), c=np.array([0.0, 1.0]))
        with pytest.raises(NumericalBreakdown):
            ratio_test(state)

    def test_negative_multiplier_with_direction_leaves_at_once(self):
        state = ShadowState(basis=_top_right(), z=np.array([-0.6, 0.8]), c=np.array([-1.0, 0.0]))
        step = ratio_test(state)
        assert step.leaving == 0
        assert step.lam == 0.0

    def test_tiny_negative_multiplier_tolerated(self):
        state = ShadowState(basis=_top_right(), z=np.array([-1e-8, 1.0]), c=np.array([1.0, 1.0]))
        assert ratio_test(state) is None

    def test_drifted_multiplier_raises(self):
        state = ShadowState(basis=_top_right(), z=np.array([-0.6, 0.8]), c=np.array([1.0, 0.0]))
        with pytest.raises(NumericalBreakdown):
            ratio_test(state)


class TestPivotStep:
    def test_multipliers_follow_basis_order(self):
        state = ShadowState(basis=Basis.from_indices(SQUARE, [2, 3]), z=Z, c=np.zeros(2))
        np.testing.assert_allclose(multipliers(state, np.array([1.0, 2.0])), [-1.0, -2.0])

    def test_edge_from_top_right(self):
        state = ShadowState(basis=_top_right(), z=Z, c=np.array([-1.0, -2.0]))
        pivot_step(state, 0.4, 1, SQUARE)
        assert state.basis.indices == (0, 3)
        np.testing.assert_allclose(state.basis.vertex, [1.0, 0.0], atol=1e-12)
        assert state.t == pytest.approx(0.4)
        assert state.pivot_count == 1
        assert state.trace[0].entering == 3
        assert state.visited == [(0, 1), (0, 3)]


class TestErrors:
    def test_infeasible_start(self):
        cut = np.array([1.0, 1.0]) / math.sqrt(2.0)
        folded = FoldedLP.from_box(np.zeros(2), np.ones(2), A=cut[None, :], b=np.array([1.0 / math.sqrt(2.0)]))
        start = Basis.from_indices(folded, [1, 2])
        with pytest.raises(InfeasibleStart):
            follow_shadow_path(folded, start, Z, np.array([-1.0, 0.0]))

    def test_auxiliary_outside_start_cone(self):
        with pytest.raises(NumericalBreakdown):
            follow_shadow_path(SQUARE, _top_right(), np.array([-0.6, 0.8]), np.array([1.0, 0.0]))

    def test_unbounded_edge(self):
        active = np.array([True, True, False, False])
        with pytest.raises(UnboundedDirection):
            follow_shadow_path(SQUARE, _top_right(), Z, np.array([-1.0, -2.0]), active=active)


class TestTrace:
    def test_frame_and_csv(self, tmp_path):
        state, _ = follow_shadow_path(SQUARE, _top_right(), Z, np.array([-1.0, -2.0]))
        frame = trace_to_frame(state)
        assert list(frame.columns) == ["pivot", "leaving", "entering", "lam", "t", "objective", "aux_objective"]
        assert len(frame) == 2
        path = tmp_path / "trace.csv"
        write_trace_csv(state, str(path))
        back = pd.read_csv(path)
        np.testing.assert_array_equal(back["entering"].to_numpy(), [3, 2])
        np.testing.assert_allclose(back["t"].to_numpy(), frame["t"].to_numpy(), rtol=0, atol=0)


def _random_instance(seed: int):
    rng = RngState(seed)
    n = 2 + seed % 5
    lp = normalize_rows(random_lp(n, 2, rng.generator))
    params = PerturbationParams.from_tolerances(n + 4)
    bounds = sample_perturbed_bounds(lp, params, rng)
    folded = fold_bounds(lp, bounds.lower, bounds.upper, bounds.rhs)
    z = sample_sphere_uniform(2, rng)
    c = rng.generator.uniform(-1.0, 1.0, size=2)
    _, _, indices = solve_by_enumeration(folded, z)
    return folded, Basis.from_indices(folded, indices), z, c


def test_engine_matches_oracle_on_random_instances():
    agree = 0
    for seed in range(100):
        folded, start, z, c = _random_instance(seed)
        state, reason = follow_shadow_path(folded, start, z, c)
        assert reason == StopReason.OPTIMAL_FOR_TARGET
        _assert_monotone(state)
        if exhaustive_shadow_path(folded, z, c, math.inf) == state.visited:
            agree += 1
    assert agree >= 99


def test_monotone_objectives_along_path():
    for seed in range(100, 130):
        folded, start, z, c = _random_instance(seed)
        state, _ = follow_shadow_path(folded, start, z, c)
        values = [float(c @ start.vertex)] + [r.objective_value for r in state.trace]
        aux = [float(z @ start.vertex)] + [r.aux_value for r in state.trace]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        assert all(b <= a + 1e-9 for a, b in zip(aux, aux[1:]))


def test_blocking_row_is_unique_under_perturbation():
    checked = 0
    for seed in range(200, 1200):
        folded, start, z, c = _random_instance(seed)
        state = ShadowState(basis=start, z=z, c=c)
        step = ratio_test(state)
        if step is None:
            continue
        e = np.zeros(folded.d)
        e[step.position] = -1.0
        w = solve_right(start.factors, e)
        rows = np.setdiff1d(np.arange(folded.num_rows), start.indices)
        aw = folded.matrix[rows] @ w
        blocking = aw > 1e-12 * max(1.0, float(np.linalg.norm(w)))
        steps = np.sort((folded.rhs[rows] - folded.matrix[rows] @ start.vertex)[blocking] / aw[blocking])
        if steps.size >= 2:
            assert steps[1] - steps[0] > 1e-9, seed
        checked += 1
        if checked == 100:
            break
    assert checked == 100
