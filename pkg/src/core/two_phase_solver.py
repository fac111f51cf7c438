"""
两阶段影子顶点单纯形法

扰动边界 → 折叠 → 采样辅助方向 θ → Phase I 逐条插入约束 → Phase II 追踪到
c + optTol·θ → 提取并核验证书。
"""
import logging
import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from linalg.lu import inverse_norm_estimate, lu_factorize, solve_left
from lp_model.transforms import fold_bounds, normalize_rows
from models.errors import (
    EnumerationTooLarge,
    NumericalBreakdown,
    PhaseOneInfeasible,
    PivotBudgetExceeded,
    ShadowSimplexError,
    SingularBasis,
    ZeroComponent,
)
from models.lp_models import FoldedLP, InputLP
from models.solver_models import EpsilonMode, SolveReport, SolverConfig, SolveStatus
from sampling.distributions import sample_perturbed_bounds, sample_sphere_uniform
from sampling.rng import RngState
from shadow.engine import (
    MULTIPLIER_TOL,
    Basis,
    ShadowState,
    StopReason,
    follow_shadow_path,
)
from .certificate import check_certificate, extract_certificate

logger = logging.getLogger(__name__)

ZERO_COMPONENT_TOL = 1e-12
FACET_TOL = 1e-9
MAX_THETA_RESAMPLES = 100


@dataclass
class TwoPhaseResult:
    """solve_folded 的结果"""
    state: ShadowState
    theta: np.ndarray
    epsilon: float
    phase1_pivots: List[int] = field(default_factory=list)


def epsilon_threshold(folded: FoldedLP, cfg: SolverConfig) -> float:
    """
    Phase I 截断阈值 ε = 1/(d²·max_B ‖Ā_B⁻¹‖)

    kappa 模式用 κ 代替逆范数的最大值; exact 模式枚举全部非奇异 d 行子矩阵
    """
    d = folded.d
    if cfg.epsilon_mode == EpsilonMode.KAPPA:
        return 1.0 / (d * d * cfg.kappa)

    total = math.comb(folded.num_rows, d)
    if total > cfg.max_subsets:
        raise EnumerationTooLarge(f"C({folded.num_rows}, {d}) = {total} 超过预算 {cfg.max_subsets}")
    worst = 0.0
    for subset in combinations(range(folded.num_rows), d):
        try:
            factors = lu_factorize(folded.matrix[list(subset)], cfg.singular_tol)
        except SingularBasis:
            continue
        worst = max(worst, inverse_norm_estimate(factors))
    if worst == 0.0:
        raise NumericalBreakdown("折叠系统没有非奇异的 d 行子矩阵")
    return 1.0 / (d * d * worst)


def phase1_initial_vertex(
    theta: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    n: int = 0,
    singular_tol: float = 1e-10,
) -> Basis:
    """
    x⁰_i = û_i (θ_i >= 0) 或 ô_i (θ_i < 0), 基由对应的边界行组成

    n 为折叠系统中约束行的数目, 决定边界行的下标偏移
    """
    theta = np.asarray(theta, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    small = np.flatnonzero(np.abs(theta) < ZERO_COMPONENT_TOL)
    if small.size:
        raise ZeroComponent(f"θ_{int(small[0])} = {theta[small[0]]:.3e}")
    d = theta.shape[0]
    box = FoldedLP.from_box(lower, upper, A=np.zeros((n, d)), b=np.zeros(n))
    indices = [n + j if theta[j] >= 0 else n + d + j for j in range(d)]
    return Basis.from_indices(box, indices, singular_tol)


def sample_theta(d: int, rng: RngState) -> np.ndarray:
    """球面均匀方向, 任一分量过小则重采样"""
    for _ in range(MAX_THETA_RESAMPLES):
        theta = sample_sphere_uniform(d, rng)
        if np.all(np.abs(theta) >= ZERO_COMPONENT_TOL):
            return theta
    raise ZeroComponent(f"连续 {MAX_THETA_RESAMPLES} 次采样的 θ 含零分量")


def _check_theta_optimal(basis: Basis, theta: np.ndarray, k: int) -> None:
    m = solve_left(basis.factors, theta)
    if np.any(m < -MULTIPLIER_TOL * max(1.0, float(np.linalg.norm(theta)))):
        raise NumericalBreakdown(f"插入约束 {k} 后基对 θ 不再最优: 最小乘子 {float(m.min()):.3e}")


def phase1_sequential(
    folded: FoldedLP,
    theta: np.ndarray,
    eps: float,
    cfg: SolverConfig,
    start: Optional[Basis] = None,
) -> Tuple[Basis, List[int]]:
    """
    依次插入约束 0..n-1; 对被违反的约束 k, 以 -A_k 为目标、θ 为辅助目标
    追踪影子路径, 在 t = 1/ε 处截断

    追踪时加入反向行 -A_k x <= -b̂_k (下标 n+2d); 它入基时换成行 k。
    截断时反向行仍未入基且残差 A_k x - b̂_k > 1e-9 则约束组不可行。
    """
    theta = np.asarray(theta, dtype=float)
    n, d = folded.n, folded.d
    basis = start if start is not None else phase1_initial_vertex(
        theta, folded.lower, folded.upper, n, cfg.singular_tol
    )
    budget = cfg.pivot_budget(folded.num_rows)
    t_stop = 1.0 / eps
    counts: List[int] = []

    for k in range(n):
        a_k, b_k = folded.matrix[k], float(folded.rhs[k])
        if float(a_k @ basis.vertex) <= b_k + 1e-12 * (1.0 + abs(b_k)):
            counts.append(0)
            continue

        work = folded.append_row(-a_k, -b_k)
        reversed_row = folded.num_rows
        active = np.zeros(work.num_rows, dtype=bool)
        active[:k] = True
        active[n:n + 2 * d] = True
        active[reversed_row] = True

        state, reason = follow_shadow_path(
            work, basis, theta, -a_k, t_stop, budget, active, cfg.singular_tol
        )
        counts.append(state.pivot_count)
        if reason == StopReason.PIVOT_BUDGET:
            raise PivotBudgetExceeded(f"Phase I 插入约束 {k} 时主元预算 {budget} 耗尽")

        if reversed_row in state.basis.indices:
            swapped = [k if i == reversed_row else i for i in state.basis.indices]
            basis = Basis.from_indices(folded, swapped, cfg.singular_tol)
        else:
            residual = float(a_k @ state.basis.vertex) - b_k
            if residual > FACET_TOL:
                raise PhaseOneInfeasible(k, residual)
            raise NumericalBreakdown(f"约束 {k} 在截断点紧但未入基 (残差 {residual:.3e})")

        _check_theta_optimal(basis, theta, k)
        logger.debug("约束 %d 插入完成, 主元 %d", k, state.pivot_count)

    return basis, counts


def phase2(
    folded: FoldedLP,
    start: Basis,
    theta: np.ndarray,
    c: np.ndarray,
    cfg: SolverConfig,
) -> ShadowState:
    """从 θ 最优基出发, 追踪到 c + optTol·θ 的最优基"""
    target = np.asarray(c, dtype=float) + cfg.tolerances.opt_tol * np.asarray(theta, dtype=float)
    budget = cfg.pivot_budget(folded.num_rows)
    state, reason = follow_shadow_path(
        folded, start, theta, target, math.inf, budget, None, cfg.singular_tol
    )
    if reason == StopReason.PIVOT_BUDGET:
        raise PivotBudgetExceeded(f"Phase II 主元预算 {budget} 耗尽")
    return state


def solve_folded(
    folded: FoldedLP,
    c: np.ndarray,
    cfg: SolverConfig,
    rng: RngState,
    eps: Optional[float] = None,
) -> TwoPhaseResult:
    """在已扰动的折叠系统上运行两个阶段"""
    if eps is None:
        eps = epsilon_threshold(folded, cfg)
    theta = sample_theta(folded.d, rng)
    basis, counts = phase1_sequential(folded, theta, eps, cfg)
    state = phase2(folded, basis, theta, c, cfg)
    return TwoPhaseResult(state=state, theta=theta, epsilon=eps, phase1_pivots=counts)


def _status_for(err: ShadowSimplexError) -> SolveStatus:
    if isinstance(err, PhaseOneInfeasible):
        return SolveStatus.INFEASIBLE
    if isinstance(err, PivotBudgetExceeded):
        return SolveStatus.PIVOT_BUDGET
    return SolveStatus.NUMERICAL_FAILURE


def solve(lp: InputLP, cfg: SolverConfig) -> SolveReport:
    """
    完整求解流程; 算法层面的结果（不可行、预算耗尽、数值失败）写入
    SolveReport.status, 不抛出异常
    """
    rng = RngState(cfg.seed)
    report = SolveReport(
        status=SolveStatus.NUMERICAL_FAILURE,
        seed=cfg.seed,
        config=cfg.echo(),
        boxed_columns=list(lp.boxed_columns),
    )
    started = time.perf_counter()
    try:
        normalized = normalize_rows(lp)
        bounds = sample_perturbed_bounds(normalized, cfg.tolerances, rng)
        report.perturbed = bounds
        report.rejections = bounds.rejections
        folded = fold_bounds(normalized, bounds.lower, bounds.upper, bounds.rhs)
        report.timings["perturb"] = time.perf_counter() - started

        eps = epsilon_threshold(folded, cfg)
        report.epsilon = eps
        theta = sample_theta(folded.d, rng)
        report.theta = theta

        mark = time.perf_counter()
        basis, counts = phase1_sequential(folded, theta, eps, cfg)
        report.phase1_pivots = counts
        report.timings["phase1"] = time.perf_counter() - mark
        logger.info("Phase I 完成: %d 条约束, 共 %d 次主元", folded.n, sum(counts))

        mark = time.perf_counter()
        state = phase2(folded, basis, theta, lp.c, cfg)
        report.phase2_pivots = state.pivot_count
        report.trace = list(state.trace)
        report.timings["phase2"] = time.perf_counter() - mark
        logger.info("Phase II 完成: %d 次主元", state.pivot_count)

        cert = extract_certificate(state, normalized, theta, cfg)
        check = check_certificate(cert, normalized)
        report.certificate = cert
        report.certificate_check = check
        report.objective_value = float(lp.c @ cert.x)
        if check["status"] == "PASS":
            report.status = SolveStatus.OPTIMAL
        else:
            report.status = SolveStatus.NUMERICAL_FAILURE
            report.message = f"证书核验失败: {len(check['violations'])} 处违反"
            logger.warning(report.message)
    except ShadowSimplexError as err:
        report.status = _status_for(err)
        report.message = f"{type(err).__name__}: {err}"
        if report.status == SolveStatus.INFEASIBLE:
            logger.info("问题不可行: %s", err)
        else:
            logger.warning("求解未完成 (%s): %s", report.status.value, err)
    report.timings["total"] = time.perf_counter() - started
    return report
