#!/usr/bin/env python3
"""
测试两阶段求解器与证书核验
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent / "src"))

from analysis import phase_bounds
from core import (
    ReportWriter,
    check_certificate,
    epsilon_threshold,
    extract_certificate,
    phase1_initial_vertex,
    phase1_sequential,
    phase2,
    sample_theta,
    solve,
    solve_folded,
)
from lp_model import fold_bounds, normalize_rows, random_lp, read_mps_file
from models.errors import (
    EnumerationTooLarge,
    PhaseOneInfeasible,
    PivotBudgetExceeded,
    StationarityViolation,
    ZeroComponent,
)
from models.lp_models import FoldedLP, InputLP
from models.solver_models import Certificate, SolverConfig, SolveStatus
from oracle import solve_by_enumeration
from sampling import RngState, sample_perturbed_bounds
from shadow import Basis, ShadowState

INSTANCES = Path(__file__).parent / "instances"
THETA = np.array([0.6, 0.8])
CUT = np.array([[1.0, 1.0]]) / math.sqrt(2.0)


def _cut_square(rhs: float) -> FoldedLP:
    """单位正方形加一条 (x1+x2)/√2 <= rhs"""
    return FoldedLP.from_box(np.zeros(2), np.ones(2), A=CUT, b=np.array([rhs]))


def _cut_lp() -> InputLP:
    # max x1 + 2x2, x1 + x2 <= 1.5, 盒 [0,1]^2; 最优 (0.5, 1)
    return InputLP(
        A=np.array([[1.0, 1.0]]),
        b=np.array([1.5]),
        lower=np.zeros(2),
        upper=np.ones(2),
        c=np.array([1.0, 2.0]),
    )


class TestEpsilon:
    def test_exact_on_square(self):
        cfg = SolverConfig.build(0, 2, epsilon_mode="exact")
        assert epsilon_threshold(FoldedLP.from_box(np.zeros(2), np.ones(2)), cfg) == pytest.approx(0.25)

    def test_exact_on_interval(self):
        cfg = SolverConfig.build(0, 1, epsilon_mode="exact")
        assert epsilon_threshold(FoldedLP.from_box(np.zeros(1), np.ones(1)), cfg) == pytest.approx(1.0)

    def test_kappa_mode(self):
        cfg = SolverConfig.build(0, 10, kappa=1e12)
        folded = FoldedLP.from_box(np.zeros(10), np.ones(10))
        assert epsilon_threshold(folded, cfg) == pytest.approx(1e-14)

    def test_exact_budget(self):
        cfg = SolverConfig.build(0, 2, epsilon_mode="exact", max_subsets=3)
        with pytest.raises(EnumerationTooLarge):
            epsilon_threshold(FoldedLP.from_box(np.zeros(2), np.ones(2)), cfg)


class TestInitialVertex:
    def test_signs_choose_bounds(self):
        basis = phase1_initial_vertex(np.array([0.6, -0.8]), np.zeros(2), np.ones(2))
        assert basis.indices == (0, 3)
        np.testing.assert_array_equal(basis.vertex, [1.0, 0.0])

    def test_offset_by_constraint_rows(self):
        basis = phase1_initial_vertex(np.array([-0.6, 0.8]), np.array([-1.0, -2.0]), np.ones(2), n=2)
        assert basis.indices == (3, 4)
        np.testing.assert_array_equal(basis.vertex, [-1.0, 1.0])

    def test_zero_component(self):
        with pytest.raises(ZeroComponent):
            phase1_initial_vertex(np.array([0.0, 1.0]), np.zeros(2), np.ones(2))

    def test_sampled_theta_has_no_small_component(self):
        rng = RngState(4)
        for _ in range(50):
            assert np.all(np.abs(sample_theta(3, rng)) >= 1e-12)


class TestPhaseOne:
    cfg = SolverConfig.build(1, 2)

    def test_satisfied_row_needs_no_pivot(self):
        basis, counts = phase1_sequential(_cut_square(10.0), THETA, 0.25, self.cfg)
        assert counts == [0]
        assert basis.indices == (1, 2)

    def test_violated_row_becomes_facet(self):
        folded = _cut_square(1.5 / math.sqrt(2.0))
        basis, counts = phase1_sequential(folded, THETA, 0.25, self.cfg)
        assert counts == [1]
        assert basis.indices == (0, 2)
        np.testing.assert_allclose(basis.vertex, [0.5, 1.0], atol=1e-12)
        _, _, best = solve_by_enumeration(folded, THETA)
        assert basis.indices == best

    def test_degenerate_facet_reaches_theta_optimum(self):
        folded = _cut_square(1.0 / math.sqrt(2.0))
        basis, counts = phase1_sequential(folded, THETA, 0.25, self.cfg)
        assert 0 in basis.indices
        np.testing.assert_allclose(basis.vertex, [0.0, 1.0], atol=1e-12)
        _, point, _ = solve_by_enumeration(folded, THETA)
        np.testing.assert_allclose(basis.vertex, point, atol=1e-12)
        assert counts[0] >= 1

    def test_infeasible_row(self):
        with pytest.raises(PhaseOneInfeasible) as info:
            phase1_sequential(_cut_square(-5.0), THETA, 0.25, self.cfg)
        assert info.value.k == 0
        assert info.value.slack == pytest.approx(5.0)


class TestPhaseTwo:
    def test_square_path(self):
        cfg = SolverConfig.build(0, 2)
        square = FoldedLP.from_box(np.zeros(2), np.ones(2))
        start = Basis.from_indices(square, [0, 1])
        state = phase2(square, start, THETA, np.array([-1.0, -2.0]), cfg)
        assert state.pivot_count == 2
        assert state.basis.indices == (2, 3)

    def test_already_optimal(self):
        cfg = SolverConfig.build(0, 2)
        square = FoldedLP.from_box(np.zeros(2), np.ones(2))
        state = phase2(square, Basis.from_indices(square, [0, 1]), THETA, np.array([1.0, 2.0]), cfg)
        assert state.pivot_count == 0

    def test_budget_on_two_pivot_path(self):
        cfg = SolverConfig.build(0, 2, max_pivots=1)
        square = FoldedLP.from_box(np.zeros(2), np.ones(2))
        with pytest.raises(PivotBudgetExceeded):
            phase2(square, Basis.from_indices(square, [0, 1]), THETA, np.array([-1.0, -2.0]), cfg)


class TestCertificate:
    def _setup(self):
        norm = normalize_rows(_cut_lp())
        folded = fold_bounds(norm, norm.lower, norm.upper, norm.b)
        cfg = SolverConfig.build(1, 2)
        return norm, folded, cfg

    def test_extract_at_optimum(self):
        norm, folded, cfg = self._setup()
        state = ShadowState(basis=Basis.from_indices(folded, [0, 2]), z=THETA, c=norm.c)
        cert = extract_certificate(state, norm, THETA, cfg)
        np.testing.assert_allclose(cert.x, [0.5, 1.0], atol=1e-12)
        assert cert.y[0] == pytest.approx(math.sqrt(2.0) * (1 + 0.6e-6))
        np.testing.assert_allclose(cert.s, [0.0, 1 + 0.2e-6])
        np.testing.assert_array_equal(cert.t, [0.0, 0.0])
        report = check_certificate(cert, norm)
        assert report["status"] == "PASS"
        assert report["violations"] == []

    def test_stationarity_violation(self):
        norm, folded, cfg = self._setup()
        state = ShadowState(basis=Basis.from_indices(folded, [3, 4]), z=THETA, c=norm.c)
        with pytest.raises(StationarityViolation):
            extract_certificate(state, norm, THETA, cfg)

    def _cert(self, x, y):
        return Certificate(
            x=np.array(x), y=np.array(y), s=np.zeros(2), t=np.zeros(2), feas_tol=1e-6, opt_tol=1e-6
        )

    def test_within_tolerance_passes(self):
        norm, _, _ = self._setup()
        cert = self._cert([0.5 + 5e-7, 1.0 + 5e-7], [math.sqrt(2.0)])
        assert check_certificate(cert, norm)["status"] == "PASS"

    def test_row_and_slackness_violations(self):
        norm, _, _ = self._setup()
        report = check_certificate(self._cert([0.9, 1.0], [0.0]), norm)
        assert report["status"] == "FAIL"
        found = {(v["condition"], v["index"]) for v in report["violations"]}
        assert found == {("primal_row", 0), ("slackness_upper", 0)}

    def test_lower_bound_violation(self):
        norm, _, _ = self._setup()
        report = check_certificate(self._cert([-0.1, 0.5], [0.0]), norm)
        lower = [v for v in report["violations"] if v["condition"] == "lower_bound"]
        assert [v["index"] for v in lower] == [0]
        assert lower[0]["magnitude"] == pytest.approx(0.1 - 1e-6)

    def test_slack_row_with_positive_multiplier(self):
        norm, _, _ = self._setup()
        report = check_certificate(self._cert([0.0, 0.0], [1.0]), norm)
        rows = [v for v in report["violations"] if v["condition"] == "slackness_row"]
        assert rows[0]["magnitude"] == pytest.approx(1.5 / math.sqrt(2.0))


class TestSolve:
    def test_tiny_instance(self):
        lp = read_mps_file(str(INSTANCES / "tiny.mps"))
        report = solve(lp, SolverConfig.build(lp.num_rows, lp.num_cols, seed=7))
        assert report.status == SolveStatus.OPTIMAL
        np.testing.assert_allclose(report.certificate.x, [0.5, 1.0], atol=1e-5)
        assert report.objective_value == pytest.approx(2.5, abs=1e-4)
        assert report.certificate_check["status"] == "PASS"
        assert len(report.phase1_pivots) == 2
        assert report.total_pivots == sum(report.phase1_pivots) + report.phase2_pivots

    def test_infeasible_instance(self):
        lp = read_mps_file(str(INSTANCES / "infeasible.mps"))
        report = solve(lp, SolverConfig.build(lp.num_rows, lp.num_cols, seed=1))
        assert report.status == SolveStatus.INFEASIBLE
        assert report.certificate is None
        assert "PhaseOneInfeasible" in report.message

    def test_pivot_budget(self):
        # 同一种子下路径确定, 预算只截断; 任一条路径需要 2 次以上主元时必然耗尽预算
        exhausted = 0
        for seed in range(20):
            lp = normalize_rows(random_lp(8, 3, np.random.default_rng(seed)))
            lp = InputLP(A=lp.A, b=lp.b, lower=lp.lower, upper=lp.upper, c=-np.ones(3))
            full = solve(lp, SolverConfig.build(8, 3, seed=seed))
            assert full.status == SolveStatus.OPTIMAL
            capped = solve(lp, SolverConfig.build(8, 3, seed=seed, max_pivots=1))
            if max(list(full.phase1_pivots) + [full.phase2_pivots]) >= 2:
                assert capped.status == SolveStatus.PIVOT_BUDGET
                assert "PivotBudgetExceeded" in capped.message
                exhausted += 1
            else:
                assert capped.status == SolveStatus.OPTIMAL
        assert exhausted > 0

    def test_same_seed_same_result(self):
        lp = random_lp(6, 3, np.random.default_rng(5))
        cfg = SolverConfig.build(6, 3, seed=11)
        first, second = solve(lp, cfg), solve(lp, cfg)
        assert first.phase1_pivots == second.phase1_pivots
        assert first.phase2_pivots == second.phase2_pivots
        np.testing.assert_array_equal(first.certificate.x, second.certificate.x)
        np.testing.assert_array_equal(first.theta, second.theta)


def _random_case(seed: int):
    gen = np.random.default_rng(seed)
    d = 2 + seed % 2
    n = 2 + seed % 4
    lp = normalize_rows(random_lp(n, d, gen))
    cfg = SolverConfig.build(n, d, seed=seed)
    rng = RngState(seed)
    bounds = sample_perturbed_bounds(lp, cfg.tolerances, rng)
    folded = fold_bounds(lp, bounds.lower, bounds.upper, bounds.rhs)
    return lp, folded, cfg, rng


def _solve_case(seed: int):
    """d ∈ {2,3,4}, n ∈ {2..10} 轮流覆盖"""
    d = 2 + seed % 3
    n = 2 + (seed // 3) % 9
    lp = random_lp(n, d, np.random.default_rng(seed))
    return lp, solve(lp, SolverConfig.build(n, d, seed=seed))


def _perturbed_region(lp: InputLP, report) -> FoldedLP:
    p = report.perturbed
    return fold_bounds(normalize_rows(lp), p.lower, p.upper, p.rhs)


def test_solve_matches_enumeration_on_random_instances():
    for seed in range(200):
        lp, report = _solve_case(seed)
        assert report.status == SolveStatus.OPTIMAL, (seed, report.message)
        assert report.certificate_check["status"] == "PASS"

        value, _, _ = solve_by_enumeration(_perturbed_region(lp, report), lp.c)
        assert abs(report.objective_value - value) <= 1e-7 * (1.0 + abs(value)), seed

        values = [r.objective_value for r in report.trace]
        aux = [r.aux_value for r in report.trace]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:])), seed
        assert all(b <= a + 1e-9 for a, b in zip(aux, aux[1:])), seed


def test_phase_one_prefix_is_theta_optimal():
    for seed in range(30):
        lp, folded, cfg, rng = _random_case(seed)
        eps = epsilon_threshold(folded, cfg)
        theta = sample_theta(folded.d, rng)
        for k in range(folded.n):
            prefix = FoldedLP.from_box(
                folded.lower, folded.upper, A=folded.matrix[:k + 1], b=folded.rhs[:k + 1]
            )
            basis, _ = phase1_sequential(prefix, theta, eps, cfg)
            slack = prefix.slacks(basis.vertex)
            assert slack.min() >= -1e-9 * (1.0 + np.abs(prefix.rhs).max())
            value, _, _ = solve_by_enumeration(prefix, theta)
            assert float(theta @ basis.vertex) == pytest.approx(value, abs=1e-9 * (1.0 + abs(value)))


def test_reports_are_byte_identical_on_rerun():
    writer = ReportWriter()
    for seed in range(0, 200, 20):
        _, first = _solve_case(seed)
        _, second = _solve_case(seed)
        assert writer.to_json(first) == writer.to_json(second)


def test_pivots_stay_below_phase_bounds():
    for seed in range(10):
        lp, folded, cfg, rng = _random_case(seed)
        result = solve_folded(folded, lp.c, cfg, rng)
        bound = phase_bounds(
            lp.num_rows, lp.num_cols, cfg.tolerances.feas_tol, cfg.tolerances.opt_tol, 1.0, 1.0, result.epsilon
        )
        assert sum(result.phase1_pivots) + result.state.pivot_count <= bound["total"]
