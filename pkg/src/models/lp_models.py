"""
线性规划数据模型

    maximize    c·x
    subject to  A x <= b
                o <= x <= u
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, EmptyProblem


def _frozen(arr, ndim: int, name: str) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    if out.ndim != ndim:
        raise DimensionMismatch(f"{name} 应为{ndim}维, 实际为{out.ndim}维")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class InputLP:
    """盒约束不等式形式的 LP"""
    A: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    c: np.ndarray
    row_names: Tuple[str, ...] = ()
    col_names: Tuple[str, ...] = ()
    name: str = "LP"
    # 原始无界、被大边界替换的列
    boxed_columns: Tuple[int, ...] = ()

    def __post_init__(self):
        A = _frozen(self.A, 2, "A")
        object.__setattr__(self, "A", A)
        n, d = A.shape
        if n < 1 or d < 1:
            raise EmptyProblem(f"问题规模非法: n={n}, d={d}")
        for attr, size in (("b", n), ("lower", d), ("upper", d), ("c", d)):
            vec = _frozen(getattr(self, attr), 1, attr)
            if vec.shape[0] != size:
                raise DimensionMismatch(f"{attr} 长度应为{size}, 实际为{vec.shape[0]}")
            object.__setattr__(self, attr, vec)
        for arr_name in ("A", "b", "lower", "upper", "c"):
            if not np.all(np.isfinite(getattr(self, arr_name))):
                raise ValueError(f"{arr_name} 含非有限数值")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise ValueError(f"变量{j}下界大于上界")
        if not self.row_names:
            object.__setattr__(self, "row_names", tuple(f"R{i + 1}" for i in range(n)))
        if not self.col_names:
            object.__setattr__(self, "col_names", tuple(f"X{j + 1}" for j in range(d)))
        if len(self.row_names) != n or len(self.col_names) != d:
            raise DimensionMismatch("行名/列名数量与矩阵维度不一致")
        object.__setattr__(self, "row_names", tuple(self.row_names))
        object.__setattr__(self, "col_names", tuple(self.col_names))
        object.__setattr__(self, "boxed_columns", tuple(int(j) for j in self.boxed_columns))

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    def is_feasible(self, x: np.ndarray, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(
            np.all(self.A @ x <= self.b + tol)
            and np.all(x <= self.upper + tol)
            and np.all(x >= self.lower - tol)
        )


@dataclass(frozen=True, eq=False)
class NormalizedLP(InputLP):
    """行单位化后的 LP, row_scales 记录原始行范数"""
    row_scales: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        super().__post_init__()
        scales = _frozen(self.row_scales, 1, "row_scales")
        if scales.shape[0] != self.num_rows:
            raise DimensionMismatch("row_scales 长度与行数不一致")
        object.__setattr__(self, "row_scales", scales)


@dataclass(frozen=True, eq=False)
class FoldedLP:
    """
    边界折叠进约束矩阵后的系统 Ā x <= b̄

    行 [0, n) 为 A, [n, n+d) 为 I（上界）, [n+d, n+2d) 为 -I（下界）;
    第一阶段可能在末尾追加反向行。
    """
    matrix: np.ndarray
    rhs: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        M = _frozen(self.matrix, 2, "matrix")
        r = _frozen(self.rhs, 1, "rhs")
        if M.shape[0] != r.shape[0]:
            raise DimensionMismatch("matrix 与 rhs 行数不一致")
        if M.shape[1] != self.d or M.shape[0] < self.n + 2 * self.d:
            raise DimensionMismatch(f"折叠系统维度错误: {M.shape}, n={self.n}, d={self.d}")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "rhs", r)

    @classmethod
    def from_box(cls, lower, upper, A: Optional[np.ndarray] = None,
                 b: Optional[np.ndarray] = None) -> "FoldedLP":
        """直接由（已扰动的）边界和约束构造"""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        d = lower.shape[0]
        if A is None:
            A = np.zeros((0, d))
            b = np.zeros(0)
        A = np.asarray(A, dtype=float).reshape(-1, d)
        b = np.asarray(b, dtype=float)
        eye = np.eye(d)
        matrix = np.vstack([A, eye, -eye])
        rhs = np.concatenate([b, upper, -lower])
        return cls(matrix=matrix, rhs=rhs, n=A.shape[0], d=d)

    @property
    def num_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return -self.rhs[self.n + self.d:self.n + 2 * self.d]

    @property
    def upper(self) -> np.ndarray:
        return self.rhs[self.n:self.n + self.d]

    def slacks(self, x: np.ndarray) -> np.ndarray:
        return self.rhs - self.matrix @ np.asarray(x, dtype=float)

    def is_feasible(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.all(self.slacks(x) >= -tol))

    def append_row(self, row: np.ndarray, value: float) -> "FoldedLP":
        """追加一行, 返回新系统（原系统不变）"""
        matrix = np.vstack([self.matrix, np.asarray(row, dtype=float).reshape(1, -1)])
        rhs = np.append(self.rhs, float(value))
        return FoldedLP(matrix=matrix, rhs=rhs, n=self.n, d=self.d)
