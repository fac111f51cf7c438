"""
理论主元数上界计算

pivot_bound 为简化形式的上界; theorem_bound 为带 ω 与 L 的一般形式;
phase_bounds 给出两阶段方法各阶段的期望主元数上界。这些常数很大, 只作诊断对照。
"""
import logging
import math
from typing import Dict

from models.errors import DomainError
from models.solver_models import BoundInputs

logger = logging.getLogger(__name__)

OMEGA_CONSTANT = 1240.0
PIVOT_BOUND_LOG_CONSTANT = 2480.0
PHASE_LOG_CONSTANT = 9920.0


def _log(value: float, what: str) -> float:
    if not value > 0:
        raise DomainError(f"{what} 的对数参数非正: {value}")
    return math.log(value)


def _sqrt(value: float, what: str) -> float:
    if value < 0:
        raise DomainError(f"{what} 的根号参数为负: {value}")
    return math.sqrt(value)


def omega(eta: float, n: int, d: int) -> float:
    """良好松弛阈值 ω = η / (1240·d·ln n)"""
    if n < 3:
        raise DomainError(f"要求 n >= 3: {n}")
    if d < 1 or not eta > 0:
        raise DomainError(f"要求 d >= 1, η > 0: d={d}, η={eta}")
    return eta / (OMEGA_CONSTANT * d * math.log(n))


def pivot_bound(bi: BoundInputs) -> float:
    """121 + 141·d·√((d·ln(n)·M/η)·ln(2480·e·d³·N·ln²(n)/(η·ε)))"""
    n, d = bi.n, bi.d
    ln_n = _log(n, "n")
    inner = _log(
        PIVOT_BOUND_LOG_CONSTANT * math.e * d ** 3 * bi.N * ln_n ** 2 / (bi.eta * bi.eps),
        "简化上界",
    )
    return 121.0 + 141.0 * d * _sqrt(d * ln_n * bi.M / bi.eta * inner, "简化上界")


def theorem_bound(bi: BoundInputs) -> float:
    """120 + 4·d·√((M/ω)·ln(d·L·N/(ω·ε)))"""
    w = omega(bi.eta, bi.n, bi.d)
    inner = _log(bi.d * bi.L * bi.N / (w * bi.eps), "一般形式上界")
    return 120.0 + 4.0 * bi.d * _sqrt(bi.M / w * inner, "一般形式上界")


def phase_bounds(
    n: int,
    d: int,
    feas_tol: float,
    opt_tol: float,
    M: float,
    N: float,
    eps: float,
) -> Dict[str, float]:
    """
    两阶段方法的期望主元数上界

    Phase I 对每条约束使用同一平均宽度 M; 对数项常数 9920 与简化上界中的 2480 不同,
    两者并列输出而不做统一
    """
    if n < 1 or d < 1:
        raise DomainError(f"要求 n, d >= 1: n={n}, d={d}")
    for name, value in (("feas_tol", feas_tol), ("opt_tol", opt_tol), ("M", M), ("N", N), ("eps", eps)):
        if not value > 0:
            raise DomainError(f"{name} 必须为正: {value}")
    k = n + 2 * d
    ln_k = math.log(k)
    resample = k / (k - 1)
    log_head = PHASE_LOG_CONSTANT * math.e * d ** 3 * N * ln_k ** 3

    phase1_log = _log(log_head / (opt_tol * eps), "Phase I 上界")
    per_constraint = 81.0 + 141.0 * d ** 1.5 * math.sqrt(4.0 * ln_k ** 2 * M / feas_tol * phase1_log)
    phase2_log = _log(log_head / opt_tol ** 2, "Phase II 上界")
    phase2 = 81.0 + 282.0 * d ** 1.5 * ln_k * math.sqrt(M / feas_tol * phase2_log)

    result = {
        "phase1": n * resample * per_constraint,
        "phase2": resample * phase2,
    }
    result["total"] = result["phase1"] + result["phase2"]
    logger.debug("阶段上界 (n=%d, d=%d): %s", n, d, result)
    return result


def evaluate(bi: BoundInputs) -> Dict[str, float]:
    """简化上界、一般形式上界与 ω 一并输出"""
    out = {"pivot_bound": pivot_bound(bi)}
    try:
        out["omega"] = omega(bi.eta, bi.n, bi.d)
        out["theorem_bound"] = theorem_bound(bi)
    except DomainError as err:
        logger.warning("一般形式上界不可用: %s", err)
    return out
