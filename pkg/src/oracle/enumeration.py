"""
暴力枚举 oracle: 顶点枚举求解与法锥影子路径重建（仅用于小规模验证）
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from linalg.lu import DEFAULT_SINGULAR_TOL, lu_factorize, solve_left, solve_right
from models.errors import AmbiguousCone, OracleInfeasible, SingularBasis, TooLarge
from models.lp_models import FoldedLP

MAX_SUBSETS = 1_000_000
FEASIBILITY_TOL = 1e-9
TIE_TOL = 1e-12
OVERLAP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    indices: Tuple[int, ...]
    point: np.ndarray
    feasible: bool


@dataclass(eq=False)
class VertexCatalog:
    """全部非奇异 d 元行子集的基本解及可行标记"""
    n_rows: int
    d: int
    entries: List[CatalogEntry] = field(default_factory=list)
    singular: int = 0

    @property
    def feasible(self) -> List[CatalogEntry]:
        return [e for e in self.entries if e.feasible]


def enumerate_vertices(
    folded: FoldedLP,
    max_subsets: int = MAX_SUBSETS,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> VertexCatalog:
    total = math.comb(folded.num_rows, folded.d)
    if total > max_subsets:
        raise TooLarge(f"子集数 {total} 超过预算 {max_subsets}")
    catalog = VertexCatalog(n_rows=folded.num_rows, d=folded.d)
    limit = FEASIBILITY_TOL * (1.0 + np.abs(folded.rhs))
    for subset in itertools.combinations(range(folded.num_rows), folded.d):
        rows = list(subset)
        try:
            factors = lu_factorize(folded.matrix[rows], singular_tol)
        except SingularBasis:
            catalog.singular += 1
            continue
        point = solve_right(factors, folded.rhs[rows])
        feasible = bool(np.all(folded.slacks(point) >= -limit))
        catalog.entries.append(CatalogEntry(indices=subset, point=point, feasible=feasible))
    return catalog


def solve_by_enumeration(
    folded: FoldedLP,
    obj: np.ndarray,
    catalog: Optional[VertexCatalog] = None,
) -> Tuple[float, np.ndarray, Tuple[int, ...]]:
    """在可行顶点上取 obj 的最大值; 并列时取字典序最小的基"""
    catalog = catalog or enumerate_vertices(folded)
    obj = np.asarray(obj, dtype=float)
    best: Optional[CatalogEntry] = None
    best_value = -math.inf
    for entry in catalog.feasible:
        value = float(obj @ entry.point)
        if best is None or value > best_value + TIE_TOL * max(1.0, abs(best_value)):
            best, best_value = entry, value
    if best is None:
        raise OracleInfeasible("没有可行顶点")
    return best_value, best.point, best.indices


def _cone_interval(
    folded: FoldedLP, indices: Tuple[int, ...], z: np.ndarray, c: np.ndarray,
    t_stop: float, singular_tol: float,
) -> Tuple[float, float]:
    """{t in [0, t_stop] : (z + t c)ᵀ Ā_B⁻¹ >= 0} 的端点"""
    factors = lu_factorize(folded.matrix[list(indices)], singular_tol)
    mz = solve_left(factors, z)
    mc = solve_left(factors, c)
    lo, hi = 0.0, t_stop
    c_tol = 1e-12 * max(1.0, float(np.linalg.norm(c)))
    for a, b in zip(mz, mc):
        if b > c_tol:
            lo = max(lo, -a / b)
        elif b < -c_tol:
            hi = min(hi, -a / b)
        elif a < 0:
            return 1.0, 0.0
    return lo, hi


def exhaustive_shadow_path(
    folded: FoldedLP,
    z: np.ndarray,
    c: np.ndarray,
    t_stop: float,
    catalog: Optional[VertexCatalog] = None,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> List[Tuple[int, ...]]:
    """
    按 t 递增列出法锥与射线段 {z + t c : 0 <= t <= t_stop} 相交的可行基;
    每个可行基的相交区间由乘子的线性不等式直接求出
    """
    catalog = catalog or enumerate_vertices(folded, singular_tol=singular_tol)
    z = np.asarray(z, dtype=float)
    c = np.asarray(c, dtype=float)

    intervals = []
    for entry in catalog.feasible:
        lo, hi = _cone_interval(folded, entry.indices, z, c, t_stop, singular_tol)
        if lo > hi:
            continue
        if t_stop > 0 and hi - lo <= TIE_TOL * max(1.0, abs(lo)):
            # 只在一点接触射线
            continue
        intervals.append((lo, hi, entry.indices))
    intervals.sort(key=lambda item: (item[0], item[2]))

    for (lo_a, hi_a, a), (lo_b, hi_b, b) in zip(intervals, intervals[1:]):
        overlap = min(hi_a, hi_b) - lo_b
        if overlap > OVERLAP_TOL * max(1.0, abs(lo_b)):
            raise AmbiguousCone(f"基 {a} 与 {b} 在 t∈[{lo_b:.6g}, {min(hi_a, hi_b):.6g}] 同时最优")

    path: List[Tuple[int, ...]] = []
    for _, _, indices in intervals:
        if not path or path[-1] != indices:
            path.append(indices)
    return path
