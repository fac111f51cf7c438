"""
求解器配置与结果数据模型
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .errors import ConfigError, DomainError

# 求解器文档中常见的容差可调范围
TOL_RANGE = (1e-9, 1e-2)


class EpsilonMode(str, Enum):
    """ε 阈值的计算方式"""
    EXACT = "exact"
    KAPPA = "kappa"


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    PIVOT_BUDGET = "PivotBudget"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class PerturbationParams:
    """(v, η, γ) 指数扰动参数与容差"""
    eta: float
    gamma: float
    feas_tol: float = 1e-6
    opt_tol: float = 1e-6
    max_rejections: int = 64

    def __post_init__(self):
        if not self.eta > 0 or not self.gamma > 0:
            raise ConfigError(f"η、γ 必须为正: η={self.eta}, γ={self.gamma}")
        for name in ("feas_tol", "opt_tol"):
            value = getattr(self, name)
            if not TOL_RANGE[0] <= value <= TOL_RANGE[1]:
                raise ConfigError(f"{name}={value} 超出范围 {TOL_RANGE}")
        if self.max_rejections < 1:
            raise ConfigError("max_rejections 至少为1")

    @classmethod
    def from_tolerances(
        cls,
        num_folded_rows: int,
        feas_tol: float = 1e-6,
        opt_tol: float = 1e-6,
        max_rejections: int = 64,
    ) -> "PerturbationParams":
        """η = feasTol / (4 ln(n+2d)), γ = 2 ln(n+2d)"""
        if num_folded_rows < 2:
            raise ConfigError(f"折叠系统行数过少: {num_folded_rows}")
        log_k = math.log(num_folded_rows)
        return cls(
            eta=feas_tol / (4.0 * log_k),
            gamma=2.0 * log_k,
            feas_tol=feas_tol,
            opt_tol=opt_tol,
            max_rejections=max_rejections,
        )


@dataclass(frozen=True)
class SolverConfig:
    """两阶段求解器配置"""
    tolerances: PerturbationParams
    kappa: float = 1e12
    epsilon_mode: EpsilonMode = EpsilonMode.KAPPA
    seed: int = 0
    max_pivots: Optional[int] = None
    singular_tol: float = 1e-10
    max_subsets: int = 1_000_000

    def __post_init__(self):
        if self.kappa < 1:
            raise ConfigError(f"κ 必须 >= 1: {self.kappa}")
        object.__setattr__(self, "epsilon_mode", EpsilonMode(self.epsilon_mode))
        if self.max_pivots is not None and self.max_pivots < 1:
            raise ConfigError("max_pivots 至少为1")

    @classmethod
    def build(
        cls,
        n: int,
        d: int,
        feas_tol: float = 1e-6,
        opt_tol: float = 1e-6,
        max_rejections: int = 64,
        **kwargs,
    ) -> "SolverConfig":
        params = PerturbationParams.from_tolerances(n + 2 * d, feas_tol, opt_tol, max_rejections)
        return cls(tolerances=params, **kwargs)

    @classmethod
    def from_config(cls, cfg: Dict, n: int, d: int, **overrides) -> "SolverConfig":
        """由 config.yaml 的字典构造, overrides 中非 None 的值优先"""
        solver = dict(cfg.get("solver", {}))
        solver.update({k: v for k, v in overrides.items() if v is not None})
        factor = int(solver.get("max_pivots_factor", 50))
        max_pivots = solver.get("max_pivots") or factor * (n + 2 * d)
        return cls.build(
            n,
            d,
            feas_tol=float(solver.get("feas_tol", 1e-6)),
            opt_tol=float(solver.get("opt_tol", 1e-6)),
            max_rejections=int(solver.get("max_rejections", 64)),
            kappa=float(solver.get("kappa", 1e12)),
            epsilon_mode=EpsilonMode(solver.get("epsilon_mode", "kappa")),
            seed=int(solver.get("seed", 0)),
            max_pivots=int(max_pivots),
            singular_tol=float(cfg.get("linalg", {}).get("singular_tol", 1e-10)),
            max_subsets=int(float(cfg.get("oracle", {}).get("max_subsets", 1e6))),
        )

    def pivot_budget(self, num_folded_rows: int) -> int:
        return self.max_pivots if self.max_pivots is not None else 50 * num_folded_rows

    def echo(self) -> Dict:
        """完整配置回显, 写入每份报告"""
        return {
            "eta": self.tolerances.eta,
            "gamma": self.tolerances.gamma,
            "feas_tol": self.tolerances.feas_tol,
            "opt_tol": self.tolerances.opt_tol,
            "max_rejections": self.tolerances.max_rejections,
            "kappa": self.kappa,
            "epsilon_mode": self.epsilon_mode.value,
            "seed": self.seed,
            "max_pivots": self.max_pivots,
            "singular_tol": self.singular_tol,
        }


@dataclass(frozen=True, eq=False)
class PerturbedBounds:
    """扰动后的 (ô, û, b̂)"""
    lower: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray
    rejections: int = 0


@dataclass(eq=False)
class Certificate:
    """原始-对偶证书 (x*, y*, s*, t*)"""
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    t: np.ndarray
    feas_tol: float
    opt_tol: float


@dataclass(eq=False)
class SolveReport:
    """一次求解的实验记录"""
    status: SolveStatus
    seed: int
    config: Dict = field(default_factory=dict)
    phase1_pivots: List[int] = field(default_factory=list)
    phase2_pivots: int = 0
    rejections: int = 0
    certificate: Optional[Certificate] = None
    certificate_check: Optional[Dict] = None
    objective_value: Optional[float] = None
    epsilon: Optional[float] = None
    theta: Optional[np.ndarray] = None
    perturbed: Optional[PerturbedBounds] = None
    boxed_columns: List[int] = field(default_factory=list)
    message: str = ""
    timings: Dict[str, float] = field(default_factory=dict)
    # Phase II 的主元记录, 不写入 JSON
    trace: List = field(default_factory=list)

    @property
    def total_pivots(self) -> int:
        return int(sum(self.phase1_pivots)) + int(self.phase2_pivots)


@dataclass(eq=False)
class MeanWidthEstimate:
    """半平均宽度的蒙特卡洛估计"""
    samples: np.ndarray
    failures: int = 0
    # 与 samples 对齐: 每次试验的随机流编号与主元数（oracle 模式主元数为 0）
    streams: List[int] = field(default_factory=list)
    pivots: List[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))

    @property
    def std_error(self) -> float:
        if self.count < 2:
            return 0.0
        return float(np.std(self.samples, ddof=1) / math.sqrt(self.count))

    def summary(self) -> Dict:
        return {
            "count": self.count,
            "failures": self.failures,
            "mean": self.mean,
            "std_error": self.std_error,
            "min": float(np.min(self.samples)),
            "max": float(np.max(self.samples)),
        }


@dataclass(frozen=True)
class BoundInputs:
    """理论主元数上界的输入参数"""
    n: int
    d: int
    eta: float
    eps: float
    M: float
    N: float
    L: float = 1.0

    def __post_init__(self):
        values = {"n": self.n, "d": self.d, "eta": self.eta, "eps": self.eps,
                  "M": self.M, "N": self.N, "L": self.L}
        bad = [k for k, v in values.items() if not v > 0]
        if bad:
            raise DomainError(f"参数必须为正: {bad}")
        if self.n < self.d:
            raise DomainError(f"要求 n >= d: n={self.n}, d={self.d}")
