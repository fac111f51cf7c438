"""
LP 规范化: 行单位化与边界折叠
"""
import numpy as np

from models.errors import CrossedBounds, DimensionMismatch, ZeroRow
from models.lp_models import FoldedLP, InputLP, NormalizedLP

ZERO_ROW_TOL = 1e-300


def normalize_rows(lp: InputLP) -> NormalizedLP:
    """A 的每一行除以其欧氏范数, b 同比缩放; c、o、u 不变"""
    norms = np.linalg.norm(lp.A, axis=1)
    small = np.flatnonzero(norms < ZERO_ROW_TOL)
    if small.size:
        raise ZeroRow(int(small[0]))
    return NormalizedLP(
        A=lp.A / norms[:, None],
        b=lp.b / norms,
        lower=lp.lower,
        upper=lp.upper,
        c=lp.c,
        row_names=lp.row_names,
        col_names=lp.col_names,
        name=lp.name,
        boxed_columns=lp.boxed_columns,
        row_scales=norms,
    )


def fold_bounds(
    lp: NormalizedLP,
    perturbed_o: np.ndarray,
    perturbed_u: np.ndarray,
    perturbed_b: np.ndarray,
) -> FoldedLP:
    """Ā = (A; I; -I), b̄ = (b̂; û; -ô)"""
    n, d = lp.num_rows, lp.num_cols
    o = np.asarray(perturbed_o, dtype=float)
    u = np.asarray(perturbed_u, dtype=float)
    b = np.asarray(perturbed_b, dtype=float)
    if o.shape != (d,) or u.shape != (d,) or b.shape != (n,):
        raise DimensionMismatch(
            f"扰动向量长度应为 ({d}, {d}, {n}), 实际为 ({o.shape}, {u.shape}, {b.shape})"
        )
    crossed = np.flatnonzero(o >= u)
    if crossed.size:
        raise CrossedBounds(int(crossed[0]))
    return FoldedLP.from_box(o, u, A=lp.A, b=b)
