# 随机采样
from .distributions import (
    exponential_vector,
    l_exponential_moment,
    l_exponential_moment_numeric,
    l_exponential_tail_radius,
    perturbation_band_ok,
    sample_l_exponential,
    sample_perturbed_bounds,
    sample_shifted_laplace,
    sample_sphere_uniform,
)
from .rng import RngState

__all__ = [
    "RngState",
    "sample_shifted_laplace",
    "exponential_vector",
    "sample_perturbed_bounds",
    "perturbation_band_ok",
    "sample_sphere_uniform",
    "sample_l_exponential",
    "l_exponential_moment",
    "l_exponential_moment_numeric",
    "l_exponential_tail_radius",
]
