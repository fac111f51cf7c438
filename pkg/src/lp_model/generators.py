"""
随机测试实例
"""
import numpy as np

from models.lp_models import InputLP


def random_lp(n: int, d: int, rng: np.random.Generator, margin: float = 0.1) -> InputLP:
    """
    随机盒约束 LP: A、c 各元素 ~ U[-1, 1], 盒 [0,1]^d,
    b 使盒中心严格可行（松弛 ~ U[margin, 1]）
    """
    A = rng.uniform(-1.0, 1.0, size=(n, d))
    center = np.full(d, 0.5)
    b = A @ center + rng.uniform(margin, 1.0, size=n)
    c = rng.uniform(-1.0, 1.0, size=d)
    return InputLP(A=A, b=b, lower=np.zeros(d), upper=np.ones(d), c=c, name=f"random_{n}x{d}")
