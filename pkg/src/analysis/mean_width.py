"""
半平均宽度与目标值量级的蒙特卡洛估计

每次试验取高斯方向 z, 在可行域上最大化 z, 记录 zᵀx/‖z‖; 500 次试验为默认值。
"""
import logging
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from core.two_phase_solver import solve_folded
from lp_model.transforms import fold_bounds, normalize_rows
from models.errors import AllTrialsFailed, ShadowSimplexError
from models.lp_models import FoldedLP, InputLP
from models.solver_models import MeanWidthEstimate, PerturbationParams, SolverConfig
from oracle.enumeration import VertexCatalog, enumerate_vertices, solve_by_enumeration
from sampling.distributions import sample_perturbed_bounds
from sampling.rng import RngState

from .bounds import omega

logger = logging.getLogger(__name__)


class InnerSolver(str, Enum):
    """区域上最大化线性目标的方式"""
    ORACLE = "oracle"
    TWO_PHASE = "two_phase"


class _Maximizer:
    """在固定的折叠系统上反复最大化不同目标; oracle 模式复用顶点表"""

    def __init__(self, folded: FoldedLP, inner: InnerSolver, cfg: Optional[SolverConfig] = None):
        self.folded = folded
        self.inner = InnerSolver(inner)
        self.cfg = cfg
        self._catalog: Optional[VertexCatalog] = None
        if self.inner == InnerSolver.ORACLE:
            max_subsets = cfg.max_subsets if cfg is not None else 1_000_000
            self._catalog = enumerate_vertices(folded, max_subsets=max_subsets)
        elif self.cfg is None:
            self.cfg = SolverConfig.build(folded.n, folded.d)

    def maximize(self, obj: np.ndarray, rng: RngState) -> Tuple[float, int]:
        """返回 (最大值, 主元数)"""
        if self.inner == InnerSolver.ORACLE:
            value, _, _ = solve_by_enumeration(self.folded, obj, self._catalog)
            return value, 0
        result = solve_folded(self.folded, obj, self.cfg, rng)
        x = result.state.basis.vertex
        return float(np.asarray(obj) @ x), sum(result.phase1_pivots) + result.state.pivot_count


def _finish(samples, streams, pivots, failures: int, trials: int) -> MeanWidthEstimate:
    if not samples:
        raise AllTrialsFailed(f"{trials} 次试验全部失败")
    if failures:
        logger.warning("平均宽度估计: %d/%d 次试验失败已剔除", failures, trials)
    return MeanWidthEstimate(
        samples=np.asarray(samples, dtype=float),
        failures=failures,
        streams=streams,
        pivots=pivots,
    )


def estimate_mean_width(
    folded: FoldedLP,
    trials: int,
    rng: RngState,
    inner_solver: InnerSolver = InnerSolver.ORACLE,
    cfg: Optional[SolverConfig] = None,
) -> MeanWidthEstimate:
    """在固定区域上估计 E[zᵀx_max / ‖z‖]"""
    if trials < 1:
        raise ValueError(f"试验次数至少为1: {trials}")
    maximizer = _Maximizer(folded, inner_solver, cfg)
    samples, streams, pivots = [], [], []
    failures = 0
    for i in range(trials):
        trial_rng = rng.child(i)
        z = trial_rng.generator.standard_normal(folded.d)
        norm = float(np.linalg.norm(z))
        if norm == 0.0:
            failures += 1
            continue
        try:
            value, count = maximizer.maximize(z, trial_rng)
        except ShadowSimplexError as err:
            logger.warning("试验 %d 失败: %s", i, err)
            failures += 1
            continue
        samples.append(value / norm)
        streams.append(trial_rng.stream)
        pivots.append(count)
    return _finish(samples, streams, pivots, failures, trials)


def _perturbed_region(lp: InputLP, params: PerturbationParams, rng: RngState) -> FoldedLP:
    normalized = normalize_rows(lp)
    bounds = sample_perturbed_bounds(normalized, params, rng)
    return fold_bounds(normalized, bounds.lower, bounds.upper, bounds.rhs)


def estimate_mean_width_perturbed(
    lp: InputLP,
    params: PerturbationParams,
    trials: int,
    rng: RngState,
    inner_solver: InnerSolver = InnerSolver.ORACLE,
    cfg: Optional[SolverConfig] = None,
) -> MeanWidthEstimate:
    """每次试验同时重采样扰动与方向, 估计联合期望"""
    if trials < 1:
        raise ValueError(f"试验次数至少为1: {trials}")
    samples, streams, pivots = [], [], []
    failures = 0
    for i in range(trials):
        trial_rng = rng.child(i)
        try:
            folded = _perturbed_region(lp, params, trial_rng)
            z = trial_rng.generator.standard_normal(folded.d)
            value, count = _Maximizer(folded, inner_solver, cfg).maximize(z, trial_rng)
        except ShadowSimplexError as err:
            logger.warning("试验 %d 失败: %s", i, err)
            failures += 1
            continue
        samples.append(value / float(np.linalg.norm(z)))
        streams.append(trial_rng.stream)
        pivots.append(count)
    return _finish(samples, streams, pivots, failures, trials)


def estimate_N(
    folded: FoldedLP,
    c: np.ndarray,
    inner_solver: InnerSolver = InnerSolver.ORACLE,
    cfg: Optional[SolverConfig] = None,
    rng: Optional[RngState] = None,
) -> float:
    """max |cᵀx| 的确定性替代: max(|max cᵀx|, |max -cᵀx|)"""
    c = np.asarray(c, dtype=float)
    if not np.any(c):
        return 0.0
    rng = rng or RngState(0)
    maximizer = _Maximizer(folded, inner_solver, cfg)
    upper, _ = maximizer.maximize(c, rng.child(0))
    lower, _ = maximizer.maximize(-c, rng.child(1))
    return max(abs(upper), abs(lower))


def good_slack_fraction(
    lp: InputLP,
    params: PerturbationParams,
    trials: int,
    rng: RngState,
    max_subsets: int = 1_000_000,
) -> float:
    """
    扰动后可行基中, 最小非紧松弛 < ω(η, n+2d, d) 的比例（对全部试验汇总）
    """
    normalized = normalize_rows(lp)
    num_rows = lp.num_rows + 2 * lp.num_cols
    threshold = omega(params.eta, num_rows, lp.num_cols)
    bad = total = 0
    for i in range(trials):
        trial_rng = rng.child(i)
        bounds = sample_perturbed_bounds(normalized, params, trial_rng)
        folded = fold_bounds(normalized, bounds.lower, bounds.upper, bounds.rhs)
        for entry in enumerate_vertices(folded, max_subsets=max_subsets).feasible:
            slack = folded.slacks(entry.point)
            slack[list(entry.indices)] = math.inf
            total += 1
            if float(slack.min()) < threshold:
                bad += 1
    if total == 0:
        raise AllTrialsFailed("扰动区域均无可行基")
    fraction = bad / total
    logger.info("良好松弛统计: ω=%.3e, %d/%d 个可行基松弛不足", threshold, bad, total)
    return fraction


def mean_width_frame(estimate: MeanWidthEstimate) -> pd.DataFrame:
    """每次成功试验一行: stream, support_value, pivots"""
    return pd.DataFrame({
        "stream": estimate.streams,
        "support_value": estimate.samples,
        "pivots": estimate.pivots,
    })
