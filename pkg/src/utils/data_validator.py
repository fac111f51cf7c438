"""
LP 数据质量验证
"""
from typing import Dict

import numpy as np

from models.lp_models import InputLP

# 超过该量级的系数/边界视为数值风险（Gurobi 对 1e10 以上的边界给出警告）
LARGE_COEFFICIENT = 1e10
TINY_COEFFICIENT = 1e-13


class LPQualityValidator:
    """LP 数据质量验证"""

    @staticmethod
    def validate_lp(lp: InputLP, big_bound: float = 1e4) -> Dict:
        """
        验证 LP 数据质量
        返回质量报告
        """
        report = {
            "status": "PASS",
            "issues": [],
            "statistics": {},
        }

        row_norms = np.linalg.norm(lp.A, axis=1)
        zero_rows = np.flatnonzero(row_norms < 1e-300)
        if zero_rows.size:
            report["status"] = "FAIL"
            report["issues"].append(f"零行: {zero_rows.tolist()}")

        abs_a = np.abs(lp.A[lp.A != 0])
        if abs_a.size and abs_a.max() >= LARGE_COEFFICIENT:
            report["issues"].append(f"约束系数过大: {abs_a.max():.3e}")
        if abs_a.size and abs_a.min() < TINY_COEFFICIENT:
            report["issues"].append(f"存在小于 {TINY_COEFFICIENT} 的系数, 求解器通常视为零")

        bound_mag = np.max(np.abs(np.concatenate([lp.lower, lp.upper])))
        if bound_mag > big_bound:
            report["issues"].append(f"边界绝对值 {bound_mag:.3e} 超过 {big_bound:.0e}")
        if np.abs(lp.c).max() >= LARGE_COEFFICIENT:
            report["issues"].append(f"目标系数过大: {np.abs(lp.c).max():.3e}")

        if lp.boxed_columns:
            report["issues"].append(
                f"{len(lp.boxed_columns)} 个无界变量已替换为 ±{big_bound:.0e} 的盒约束"
            )

        if report["status"] == "PASS" and report["issues"]:
            report["status"] = "WARNING"

        report["statistics"] = {
            "num_rows": lp.num_rows,
            "num_cols": lp.num_cols,
            "density": float(np.count_nonzero(lp.A) / lp.A.size),
            "row_norm_min": float(row_norms.min()),
            "row_norm_max": float(row_norms.max()),
            "box_width_max": float(np.max(lp.upper - lp.lower)),
        }
        return report
