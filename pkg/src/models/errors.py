"""
求解器异常体系
"""
from typing import Optional


class ShadowSimplexError(Exception):
    """所有求解器异常的基类"""


class ConfigError(ShadowSimplexError, ValueError):
    """配置非法"""


# ---- LP 模型 ----

class MPSSyntaxError(ShadowSimplexError, ValueError):
    """MPS 文件格式错误"""

    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(f"MPS 第{line}行格式错误: {message}")


class UnsupportedEquality(ShadowSimplexError, ValueError):
    """不支持等式约束（E 行 / FX 边界）"""

    def __init__(self, row: str):
        self.row = row
        super().__init__(f"不支持等式约束: {row}")


class UnsupportedSection(ShadowSimplexError, ValueError):
    """不支持的 MPS 段或边界类型"""


class EmptyProblem(ShadowSimplexError, ValueError):
    """问题没有变量或没有约束"""


class ZeroRow(ShadowSimplexError, ValueError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"约束矩阵第{row}行为零向量")


class DimensionMismatch(ShadowSimplexError, ValueError):
    """向量/矩阵维度不一致"""


class CrossedBounds(ShadowSimplexError, ValueError):
    def __init__(self, col: int):
        self.col = col
        super().__init__(f"变量{col}的下界不小于上界")


# ---- 线性代数 ----

class SingularBasis(ShadowSimplexError):
    def __init__(self, step: int, pivot: Optional[float] = None):
        self.step = step
        self.pivot = pivot
        super().__init__(f"基矩阵奇异: 第{step}步主元 {pivot}")


# ---- 随机采样 ----

class RejectionBudgetExceeded(ShadowSimplexError):
    """扰动拒绝采样超过预算"""


class DegenerateDraw(ShadowSimplexError):
    """高斯向量范数过小"""


class DomainError(ShadowSimplexError, ValueError):
    """公式参数不在定义域内"""


# ---- 影子顶点 ----

class NumericalBreakdown(ShadowSimplexError):
    """乘子出现无法修复的负值"""


class UnboundedDirection(ShadowSimplexError):
    """沿边方向没有阻挡约束"""


class InfeasibleStart(ShadowSimplexError):
    """起始顶点不可行"""


# ---- 两阶段求解 ----

class EnumerationTooLarge(ShadowSimplexError):
    """精确 ε 枚举超出预算"""


class ZeroComponent(ShadowSimplexError):
    """θ 含接近零的分量"""


class PhaseOneInfeasible(ShadowSimplexError):
    """第一阶段插入约束 k 时发现不可行"""

    def __init__(self, k: int, slack: float):
        self.k = k
        self.slack = slack
        super().__init__(f"约束{k}插入后不可行, 残余松弛 {slack:.3e}")


class StationarityViolation(ShadowSimplexError):
    """对偶平稳性残差过大"""


# ---- 枚举 oracle ----

class TooLarge(ShadowSimplexError):
    """枚举子集数超出预算"""


class AmbiguousCone(ShadowSimplexError):
    """两个基同时声明同一目标点（退化）"""


class OracleInfeasible(ShadowSimplexError):
    """没有可行顶点"""


# ---- 分析 ----

class AllTrialsFailed(ShadowSimplexError):
    """全部试验均失败"""


class PivotBudgetExceeded(ShadowSimplexError):
    """影子路径在主元预算内未终止"""
