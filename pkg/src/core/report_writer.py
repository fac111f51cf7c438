"""
报告输出 - SolveReport 的 JSON / 人类可读格式
"""
import json
from typing import Dict, List, Optional

import numpy as np

from models.solver_models import SolveReport


def _vector(values: Optional[np.ndarray]) -> Optional[List[float]]:
    if values is None:
        return None
    return [float(v) for v in np.asarray(values, dtype=float)]


class ReportWriter:
    """求解报告输出器"""

    def __init__(self, include_timings: bool = False, significant_digits: int = 6):
        """
        Args:
            include_timings: JSON 中是否包含耗时（包含后重复运行的输出不再逐字节一致）
            significant_digits: human 格式的有效数字位数
        """
        self.include_timings = include_timings
        self.significant_digits = significant_digits

    def to_dict(self, report: SolveReport) -> Dict:
        data: Dict = {
            "status": report.status.value,
            "seed": report.seed,
            "config": report.config,
            "message": report.message,
            "pivots": {
                "phase1": [int(p) for p in report.phase1_pivots],
                "phase2": int(report.phase2_pivots),
                "total": report.total_pivots,
            },
            "rejections": int(report.rejections),
            "epsilon": report.epsilon,
            "theta": _vector(report.theta),
            "objective_value": report.objective_value,
            "boxed_columns": list(report.boxed_columns),
        }
        if report.perturbed is not None:
            data["perturbed"] = {
                "lower": _vector(report.perturbed.lower),
                "upper": _vector(report.perturbed.upper),
                "rhs": _vector(report.perturbed.rhs),
            }
        if report.certificate is not None:
            cert = report.certificate
            data["certificate"] = {
                "x": _vector(cert.x),
                "y": _vector(cert.y),
                "s": _vector(cert.s),
                "t": _vector(cert.t),
                "feas_tol": cert.feas_tol,
                "opt_tol": cert.opt_tol,
            }
        if report.certificate_check is not None:
            data["certificate_check"] = report.certificate_check
        if self.include_timings:
            data["timings"] = dict(report.timings)
        return data

    def to_json(self, report: SolveReport) -> str:
        return json.dumps(self.to_dict(report), sort_keys=True, indent=2, ensure_ascii=False)

    def _fmt(self, value) -> str:
        if value is None:
            return "-"
        return f"{float(value):.{self.significant_digits}g}"

    def _fmt_config(self, config: Dict) -> str:
        if not config:
            return "-"
        return ", ".join(f"{key}={config[key]}" for key in sorted(config))

    def _fmt_vector(self, values) -> str:
        if values is None:
            return "-"
        return "[" + ", ".join(self._fmt(v) for v in values) + "]"

    def to_human(self, report: SolveReport) -> str:
        lines = [
            f"状态: {report.status.value}",
            f"种子: {report.seed}",
            f"配置: {self._fmt_config(report.config)}",
            f"目标值: {self._fmt(report.objective_value)}",
            f"Phase I 主元: {sum(report.phase1_pivots)} (逐约束 {list(report.phase1_pivots)})",
            f"Phase II 主元: {report.phase2_pivots}",
            f"扰动重采样: {report.rejections}",
            f"ε: {self._fmt(report.epsilon)}",
        ]
        if report.certificate is not None:
            lines.append(f"x*: {self._fmt_vector(report.certificate.x)}")
            lines.append(f"y*: {self._fmt_vector(report.certificate.y)}")
        if report.certificate_check is not None:
            lines.append(f"证书核验: {report.certificate_check['status']}")
        if report.boxed_columns:
            lines.append(f"以大界替换的无穷边界列: {report.boxed_columns}")
        if report.message:
            lines.append(f"说明: {report.message}")
        return "\n".join(lines)
