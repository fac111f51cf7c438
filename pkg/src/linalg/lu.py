"""
稠密 LU 分解（部分选主元）与基矩阵求解
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from models.errors import DimensionMismatch, SingularBasis

DEFAULT_SINGULAR_TOL = 1e-10
POWER_ITERATIONS = 50


@dataclass(frozen=True, eq=False)
class LUFactors:
    """P·M = L·U, lu 为 LAPACK 紧凑存储, piv 为逐步行交换序列"""
    d: int
    lu: np.ndarray
    piv: np.ndarray

    @property
    def row_permutation(self) -> np.ndarray:
        """perm 使 M[perm] = L @ U"""
        perm = np.arange(self.d)
        for i, p in enumerate(self.piv):
            perm[i], perm[p] = perm[p], perm[i]
        return perm

    @property
    def lower(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.d)

    @property
    def upper(self) -> np.ndarray:
        return np.triu(self.lu)


def lu_factorize(M: np.ndarray, singular_tol: float = DEFAULT_SINGULAR_TOL) -> LUFactors:
    """主元绝对值低于 singular_tol × 最大行范数时视为奇异"""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"需要非空方阵, 实际形状 {M.shape}")
    d = M.shape[0]
    scale = float(np.max(np.linalg.norm(M, axis=1)))
    threshold = singular_tol * scale
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(M, check_finite=True)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero((pivots < threshold) | (pivots == 0.0))
    if bad.size:
        step = int(bad[0])
        raise SingularBasis(step, float(lu[step, step]))
    lu.setflags(write=False)
    piv.setflags(write=False)
    return LUFactors(d=d, lu=lu, piv=piv)


def solve_right(f: LUFactors, rhs: np.ndarray) -> np.ndarray:
    """解 M x = rhs"""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (f.d,):
        raise DimensionMismatch(f"右端长度应为 {f.d}")
    return lu_solve((f.lu, f.piv), rhs, trans=0, check_finite=False)


def solve_left(f: LUFactors, y: np.ndarray) -> np.ndarray:
    """解 mᵀ M = yᵀ, 即 Mᵀ m = y"""
    y = np.asarray(y, dtype=float)
    if y.shape != (f.d,):
        raise DimensionMismatch(f"向量长度应为 {f.d}")
    return lu_solve((f.lu, f.piv), y, trans=1, check_finite=False)


def inverse_norm_estimate(f: LUFactors, iterations: int = POWER_ITERATIONS) -> float:
    """对 (M⁻¹)ᵀM⁻¹ 做幂迭代估计 ‖M⁻¹‖₂"""
    v = np.random.default_rng(0).standard_normal(f.d)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iterations):
        w = solve_right(f, v)
        estimate = max(estimate, float(np.linalg.norm(w)))
        v = solve_left(f, w)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            break
        v /= norm
    return estimate
