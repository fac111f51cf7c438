"""
影子顶点主元引擎

沿射线 z + t·c (t >= 0) 追踪法锥: 比值检验给出下一个法锥切换点与出基行,
沿放松出基约束的边做原始比值检验确定入基行。每步重新分解基矩阵。
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from linalg.lu import DEFAULT_SINGULAR_TOL, LUFactors, lu_factorize, solve_left, solve_right
from models.errors import InfeasibleStart, NumericalBreakdown, UnboundedDirection
from models.lp_models import FoldedLP

logger = logging.getLogger(__name__)

MULTIPLIER_TOL = 1e-9
BREAKDOWN_TOL = 1e-7
DIRECTION_TOL = 1e-12
TIE_TOL = 1e-9
FEASIBILITY_TOL = 1e-9


class StopReason(str, Enum):
    OPTIMAL_FOR_TARGET = "OptimalForTarget"
    TRUNCATED_AT_T = "TruncatedAtT"
    PIVOT_BUDGET = "PivotBudget"


@dataclass(frozen=True, eq=False)
class Basis:
    """d 个行下标（升序）、其子矩阵的 LU 分解与基本解"""
    indices: Tuple[int, ...]
    factors: LUFactors
    vertex: np.ndarray

    @classmethod
    def from_indices(
        cls,
        folded: FoldedLP,
        indices: Sequence[int],
        singular_tol: float = DEFAULT_SINGULAR_TOL,
    ) -> "Basis":
        idx = tuple(sorted(int(i) for i in indices))
        if len(idx) != folded.d or len(set(idx)) != folded.d:
            raise ValueError(f"基必须由 {folded.d} 个不同行组成: {idx}")
        rows = list(idx)
        factors = lu_factorize(folded.matrix[rows], singular_tol)
        vertex = solve_right(factors, folded.rhs[rows])
        vertex.setflags(write=False)
        return cls(indices=idx, factors=factors, vertex=vertex)

    def position(self, row: int) -> int:
        return self.indices.index(row)


@dataclass(frozen=True)
class PivotRecord:
    leaving: int
    entering: int
    lam: float
    t: float
    objective_value: float
    aux_value: float


@dataclass
class ShadowState:
    """一次影子路径追踪的状态; 当前中间目标为 z + t·c"""
    basis: Basis
    z: np.ndarray
    c: np.ndarray
    t: float = 0.0
    pivot_count: int = 0
    trace: List[PivotRecord] = field(default_factory=list)
    visited: List[Tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if not self.visited:
            self.visited.append(self.basis.indices)

    @property
    def objective(self) -> np.ndarray:
        return self.z + self.t * self.c

    @property
    def scale(self) -> float:
        """乘子容差的量级"""
        return max(1.0, float(np.linalg.norm(self.z) + self.t * np.linalg.norm(self.c)))


@dataclass(frozen=True)
class RatioStep:
    lam: float
    leaving: int
    position: int


def multipliers(state: ShadowState, obj: np.ndarray) -> np.ndarray:
    """objᵀ Ā_B⁻¹, 顺序与 B 的升序下标一致"""
    return solve_left(state.basis.factors, np.asarray(obj, dtype=float))


def ratio_test(state: ShadowState) -> Optional[RatioStep]:
    """
    返回下一个切换步长 λ 与出基行; 若 c 方向乘子全部非负（当前基对 c 最优）返回 None
    """
    mz = multipliers(state, state.z)
    mc = multipliers(state, state.c)
    current = mz + state.t * mc
    scale = state.scale
    c_scale = max(1.0, float(np.linalg.norm(state.c)))
    c_tol = MULTIPLIER_TOL * c_scale

    # 分母近零而分子为负: 无法通过增大 t 恢复
    flat = np.abs(mc) < DIRECTION_TOL * c_scale
    stalled = flat & (current < -MULTIPLIER_TOL * scale)
    # 分母为正而乘子已明显为负: 当前基不在法锥内
    drifted = (mc > 0) & ~flat & (current < -BREAKDOWN_TOL * scale)
    broken = np.flatnonzero(stalled | drifted)
    if broken.size:
        i = int(broken[0])
        raise NumericalBreakdown(
            f"行 {state.basis.indices[i]} 的乘子 {current[i]:.3e} 为负, "
            f"c 方向分量 {mc[i]:.3e} (t={state.t:.6g})"
        )

    candidates = np.flatnonzero(mc < -c_tol)
    if candidates.size == 0:
        return None

    lams = np.maximum(-current[candidates] / mc[candidates], 0.0)
    best = float(lams.min())
    ties = candidates[lams <= best + TIE_TOL * max(1.0, best)]
    position = min(ties, key=lambda i: state.basis.indices[i])
    lam = float(max(-current[position] / mc[position], 0.0))
    return RatioStep(lam=lam, leaving=state.basis.indices[position], position=int(position))


def _active_mask(folded: FoldedLP, active: Optional[np.ndarray]) -> np.ndarray:
    if active is None:
        return np.ones(folded.num_rows, dtype=bool)
    mask = np.asarray(active, dtype=bool)
    if mask.shape != (folded.num_rows,):
        raise ValueError("active 掩码长度与行数不一致")
    return mask


def pivot_step(
    state: ShadowState,
    lam: float,
    p: int,
    folded: FoldedLP,
    active: Optional[np.ndarray] = None,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> ShadowState:
    """出基行 p, 沿 Ā_B w = -e_p 的边做原始比值检验选入基行 q; 原地更新并返回 state"""
    basis = state.basis
    pos = basis.position(p)
    e = np.zeros(folded.d)
    e[pos] = -1.0
    w = solve_right(basis.factors, e)
    x = basis.vertex

    mask = _active_mask(folded, active).copy()
    mask[list(basis.indices)] = False
    rows = np.flatnonzero(mask)
    aw = folded.matrix[rows] @ w
    blocking = aw > DIRECTION_TOL * max(1.0, float(np.linalg.norm(w)))
    if not np.any(blocking):
        raise UnboundedDirection(f"放松行 {p} 后沿边方向无阻挡约束")
    rows, aw = rows[blocking], aw[blocking]
    steps = np.maximum(folded.rhs[rows] - folded.matrix[rows] @ x, 0.0) / aw
    best = float(steps.min())
    q = int(rows[steps <= best + TIE_TOL * max(1.0, best)].min())

    new_indices = [i for i in basis.indices if i != p] + [q]
    state.basis = Basis.from_indices(folded, new_indices, singular_tol)
    state.t += lam
    state.pivot_count += 1
    record = PivotRecord(
        leaving=p,
        entering=q,
        lam=lam,
        t=state.t,
        objective_value=float(state.c @ state.basis.vertex),
        aux_value=float(state.z @ state.basis.vertex),
    )
    state.trace.append(record)
    state.visited.append(state.basis.indices)
    logger.debug("主元 %d: 出基 %d, 入基 %d, λ=%.6g, t=%.6g", state.pivot_count, p, q, lam, state.t)
    return state


def follow_shadow_path(
    folded: FoldedLP,
    start: Basis,
    z: np.ndarray,
    c: np.ndarray,
    t_stop: float = math.inf,
    max_pivots: Optional[int] = None,
    active: Optional[np.ndarray] = None,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> Tuple[ShadowState, StopReason]:
    """从 start 出发沿 z + t·c 追踪, 直到对 c 最优、t 超过 t_stop 或主元预算耗尽"""
    mask = _active_mask(folded, active)
    slack = folded.slacks(start.vertex)[mask]
    limit = FEASIBILITY_TOL * (1.0 + np.abs(folded.rhs[mask]))
    if np.any(slack < -limit):
        raise InfeasibleStart(f"起始顶点最大违反量 {float(-slack.min()):.3e}")

    state = ShadowState(basis=start, z=z, c=c)
    mz = multipliers(state, state.z)
    if np.any(mz <= MULTIPLIER_TOL * max(1.0, float(np.linalg.norm(state.z)))):
        raise NumericalBreakdown(f"辅助目标在起始基上的乘子非严格正: {mz}")

    if t_stop <= 0:
        return state, StopReason.TRUNCATED_AT_T
    budget = max_pivots if max_pivots is not None else 50 * folded.num_rows

    while True:
        step = ratio_test(state)
        if step is None:
            return state, StopReason.OPTIMAL_FOR_TARGET
        if state.t + step.lam > t_stop:
            state.t = float(t_stop)
            return state, StopReason.TRUNCATED_AT_T
        if state.pivot_count >= budget:
            logger.warning("主元预算 %d 耗尽 (t=%.6g)", budget, state.t)
            return state, StopReason.PIVOT_BUDGET
        pivot_step(state, step.lam, step.leaving, folded, active, singular_tol)


def records_to_frame(records: Sequence[PivotRecord]) -> pd.DataFrame:
    """主元轨迹表: pivot, leaving, entering, lam, t, objective, aux_objective"""
    rows = [
        {
            "pivot": k + 1,
            "leaving": r.leaving,
            "entering": r.entering,
            "lam": r.lam,
            "t": r.t,
            "objective": r.objective_value,
            "aux_objective": r.aux_value,
        }
        for k, r in enumerate(records)
    ]
    columns = ["pivot", "leaving", "entering", "lam", "t", "objective", "aux_objective"]
    return pd.DataFrame(rows, columns=columns)


def trace_to_frame(state: ShadowState) -> pd.DataFrame:
    return records_to_frame(state.trace)


def write_trace_csv(state: ShadowState, path: str) -> None:
    trace_to_frame(state).to_csv(path, index=False, float_format="%.17g")
