"""
证书提取与核验

提取: 把最终基上的乘子放回所属行, 拆成 y*(约束行)、s*(上界行)、t*(下界行)。
核验: 对未扰动数据逐项检查近似可行性与近似互补松弛, 返回报告而不抛异常。
"""
import logging
from typing import Dict, List

import numpy as np

from models.errors import StationarityViolation
from models.lp_models import NormalizedLP
from models.solver_models import Certificate, SolverConfig
from shadow.engine import ShadowState, multipliers

logger = logging.getLogger(__name__)

STATIONARITY_TOL = 1e-6
# 与比较量同量级的数值余量
CHECK_ATOL = 1e-9


def extract_certificate(
    final: ShadowState,
    lp: NormalizedLP,
    theta: np.ndarray,
    cfg: SolverConfig,
) -> Certificate:
    """由 Phase II 的终止基构造 (x*, y*, s*, t*)"""
    n, d = lp.num_rows, lp.num_cols
    target = lp.c + cfg.tolerances.opt_tol * np.asarray(theta, dtype=float)
    m = np.maximum(multipliers(final, target), 0.0)

    y, s, t = np.zeros(n), np.zeros(d), np.zeros(d)
    for row, value in zip(final.basis.indices, m):
        if row < n:
            y[row] = value
        elif row < n + d:
            s[row - n] = value
        else:
            t[row - n - d] = value

    residual = float(np.max(np.abs(lp.A.T @ y + s - t - target)))
    if residual > STATIONARITY_TOL:
        raise StationarityViolation(f"平稳性残差 {residual:.3e} 超过 {STATIONARITY_TOL:g}")
    if residual > 1e-8:
        logger.warning("平稳性残差 %.3e 偏大", residual)

    return Certificate(
        x=np.array(final.basis.vertex, dtype=float),
        y=y,
        s=s,
        t=t,
        feas_tol=cfg.tolerances.feas_tol,
        opt_tol=cfg.tolerances.opt_tol,
    )


def _atol(value: np.ndarray) -> np.ndarray:
    return CHECK_ATOL * (1.0 + np.abs(value))


def _collect(violations: List[Dict], condition: str, mask: np.ndarray, magnitude: np.ndarray) -> None:
    for i in np.flatnonzero(mask):
        violations.append({
            "condition": condition,
            "index": int(i),
            "magnitude": float(magnitude[i]),
        })


def check_certificate(cert: Certificate, lp: NormalizedLP) -> Dict:
    """
    核验五类条件（对未扰动的 A, b, o, u, c）:
    1. Ax* <= b + feasTol
    2. o - feasTol <= x* <= u + feasTol
    3. y*_i > 0  =>  (Ax*)_i >= b_i
    4. c_j > (Aᵀy*)_j + optTol  =>  x*_j >= u_j
    5. c_j < (Aᵀy*)_j - optTol  =>  x*_j <= o_j

    Returns:
        {'status': 'PASS'/'FAIL', 'violations': [...], 'statistics': {...}}
    """
    x, y = cert.x, cert.y
    ax = lp.A @ x
    aty = lp.A.T @ y
    violations: List[Dict] = []

    row_excess = ax - lp.b - cert.feas_tol
    _collect(violations, "primal_row", row_excess > _atol(lp.b), row_excess)

    upper_excess = x - lp.upper - cert.feas_tol
    _collect(violations, "upper_bound", upper_excess > _atol(lp.upper), upper_excess)
    lower_excess = lp.lower - cert.feas_tol - x
    _collect(violations, "lower_bound", lower_excess > _atol(lp.lower), lower_excess)

    row_slack = lp.b - ax
    _collect(violations, "slackness_row", (y > 0) & (row_slack > _atol(lp.b)), row_slack)

    gap = lp.c - aty
    upper_gap = lp.upper - x
    _collect(
        violations, "slackness_upper",
        (gap > cert.opt_tol + _atol(aty)) & (upper_gap > _atol(lp.upper)), upper_gap,
    )
    lower_gap = x - lp.lower
    _collect(
        violations, "slackness_lower",
        (gap < -cert.opt_tol - _atol(aty)) & (lower_gap > _atol(lp.lower)), lower_gap,
    )

    return {
        "status": "FAIL" if violations else "PASS",
        "violations": violations,
        "statistics": {
            "max_row_violation": float(max(0.0, np.max(ax - lp.b, initial=0.0))),
            "max_bound_violation": float(max(
                np.max(x - lp.upper, initial=0.0), np.max(lp.lower - x, initial=0.0)
            )),
            "dual_objective": float(lp.b @ y + lp.upper @ cert.s - lp.lower @ cert.t),
        },
    }
