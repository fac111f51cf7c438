"""
随机原语: 平移 Laplace 扰动、球面均匀方向、L-指数分布
"""
import logging
import math

import numpy as np
from scipy import integrate

from models.errors import DegenerateDraw, DomainError, RejectionBudgetExceeded
from models.lp_models import NormalizedLP
from models.solver_models import PerturbationParams, PerturbedBounds
from .rng import RngState

logger = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-12
MAX_SPHERE_RESAMPLES = 100


def sample_shifted_laplace(v: float, eta: float, gamma: float, rng: RngState) -> float:
    """密度 (1/2η)·exp(-|t - v - γη| / η) 的一次抽样"""
    if not eta > 0 or gamma < 0:
        raise DomainError(f"要求 η > 0, γ >= 0: η={eta}, γ={gamma}")
    return float(rng.generator.laplace(loc=v + gamma * eta, scale=eta))


def exponential_vector(v: np.ndarray, eta: float, gamma: float, rng: RngState) -> np.ndarray:
    """(v, η, γ)-指数分布向量: 各分量独立"""
    if not eta > 0 or gamma < 0:
        raise DomainError(f"要求 η > 0, γ >= 0: η={eta}, γ={gamma}")
    v = np.asarray(v, dtype=float)
    return rng.generator.laplace(loc=v + gamma * eta, scale=eta, size=v.shape)


def perturbation_band_ok(lp: NormalizedLP, bounds: PerturbedBounds, feas_tol: float) -> bool:
    """o - feasTol <= ô <= o, u <= û <= u + feasTol, b <= b̂ <= b + feasTol"""
    return bool(
        np.all(bounds.lower <= lp.lower) and np.all(bounds.lower >= lp.lower - feas_tol)
        and np.all(bounds.upper >= lp.upper) and np.all(bounds.upper <= lp.upper + feas_tol)
        and np.all(bounds.rhs >= lp.b) and np.all(bounds.rhs <= lp.b + feas_tol)
    )


def sample_perturbed_bounds(
    lp: NormalizedLP, params: PerturbationParams, rng: RngState
) -> PerturbedBounds:
    """
    (-ô, û, b̂) 服从 ((-o, u, b), η, γ)-指数分布, 使可行域只扩大;
    落在容差带外则整体重采样
    """
    for attempt in range(params.max_rejections + 1):
        neg_lower = exponential_vector(-lp.lower, params.eta, params.gamma, rng)
        candidate = PerturbedBounds(
            lower=-neg_lower,
            upper=exponential_vector(lp.upper, params.eta, params.gamma, rng),
            rhs=exponential_vector(lp.b, params.eta, params.gamma, rng),
            rejections=attempt,
        )
        if perturbation_band_ok(lp, candidate, params.feas_tol):
            if attempt:
                logger.debug("扰动重采样 %d 次后接受", attempt)
            return candidate
    raise RejectionBudgetExceeded(f"扰动连续 {params.max_rejections} 次重采样仍落在容差带外")


def sample_sphere_uniform(d: int, rng: RngState) -> np.ndarray:
    """标准高斯向量归一化, 服从 S^{d-1} 上的均匀分布"""
    if d < 1:
        raise DomainError(f"维度必须 >= 1: {d}")
    for _ in range(MAX_SPHERE_RESAMPLES):
        g = rng.generator.standard_normal(d)
        norm = np.linalg.norm(g)
        if norm >= DEGENERATE_NORM:
            return g / norm
    raise DegenerateDraw(f"连续 {MAX_SPHERE_RESAMPLES} 次高斯向量范数过小")


def sample_l_exponential(d: int, L: float, rng: RngState) -> np.ndarray:
    """密度 ∝ exp(-L‖x‖): 均匀方向 × Gamma(形状 d, 速率 L) 半径"""
    if not L > 0:
        raise DomainError(f"L 必须为正: {L}")
    direction = sample_sphere_uniform(d, rng)
    radius = rng.generator.gamma(shape=d, scale=1.0 / L)
    return radius * direction


def l_exponential_moment(k: int, d: int, L: float) -> float:
    """E‖X‖^k = L^{-k} (k+d-1)! / (d-1)!"""
    if not L > 0 or d < 1 or k < 0:
        raise DomainError(f"参数非法: k={k}, d={d}, L={L}")
    return math.exp(math.lgamma(k + d) - math.lgamma(d)) / L ** k


def l_exponential_moment_numeric(k: int, d: int, L: float) -> float:
    """对半径密度 r^{d-1} e^{-Lr} 数值积分求 E‖X‖^k"""
    numerator, _ = integrate.quad(lambda r: r ** (k + d - 1) * math.exp(-L * r), 0, np.inf)
    denominator, _ = integrate.quad(lambda r: r ** (d - 1) * math.exp(-L * r), 0, np.inf)
    return numerator / denominator


def l_exponential_tail_radius(d: int, L: float, n: int) -> float:
    """Pr[‖X‖ >= 2e·d·ln(n)/L] <= n^{-d}"""
    if n < 2:
        raise DomainError(f"要求 n >= 2: {n}")
    return 2.0 * math.e * d * math.log(n) / L
