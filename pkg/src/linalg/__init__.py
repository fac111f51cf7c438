# 线性代数
from .lu import LUFactors, inverse_norm_estimate, lu_factorize, solve_left, solve_right

__all__ = ["LUFactors", "lu_factorize", "solve_right", "solve_left", "inverse_norm_estimate"]
