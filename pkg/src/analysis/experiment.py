"""
随机实例集合实验: 每个试验生成一个盒约束随机 LP, 求解并与理论上界对照
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from core.two_phase_solver import solve
from lp_model.generators import random_lp
from lp_model.transforms import fold_bounds, normalize_rows
from models.errors import ShadowSimplexError
from models.lp_models import InputLP
from models.solver_models import BoundInputs, SolveReport, SolverConfig, SolveStatus
from sampling.rng import RngState

from .bounds import pivot_bound
from .mean_width import InnerSolver, estimate_N, estimate_mean_width

logger = logging.getLogger(__name__)

ENSEMBLE_COLUMNS = [
    "trial", "n", "d", "seed", "status",
    "phase1_pivots", "phase2_pivots", "total_pivots", "rejections",
    "certificate_pass", "objective", "mean_width", "N", "bound",
    # 配置回显
    "eta", "gamma", "feas_tol", "opt_tol", "max_rejections",
    "kappa", "epsilon_mode", "max_pivots", "singular_tol",
]
# 下界为 0 的量代入上界公式时的下限
POSITIVE_FLOOR = 1e-12


def trial_seed(base_seed: int, trial: int) -> int:
    """由 (基础种子, 试验编号) 派生该试验的种子"""
    return int(np.random.SeedSequence([int(base_seed), int(trial)]).generate_state(1)[0])


def bound_for_report(
    lp: InputLP,
    report: SolveReport,
    cfg: SolverConfig,
    mean_width_trials: int = 50,
) -> Tuple[float, float, float]:
    """
    用本试验的扰动区域估计 (M̂, N) 并代入简化上界 pivot_bound, n 取折叠系统行数 n+2d

    Returns:
        (M̂, N, bound); 无法计算时为 NaN
    """
    if report.perturbed is None or report.epsilon is None:
        return math.nan, math.nan, math.nan
    normalized = normalize_rows(lp)
    p = report.perturbed
    folded = fold_bounds(normalized, p.lower, p.upper, p.rhs)
    inner = (
        InnerSolver.ORACLE
        if math.comb(folded.num_rows, folded.d) <= cfg.max_subsets
        else InnerSolver.TWO_PHASE
    )
    rng = RngState(cfg.seed, stream=7)
    try:
        m_hat = estimate_mean_width(folded, mean_width_trials, rng, inner, cfg).mean
        big_n = estimate_N(folded, lp.c, inner, cfg, rng)
    except ShadowSimplexError as err:
        logger.warning("上界输入估计失败: %s", err)
        return math.nan, math.nan, math.nan
    bi = BoundInputs(
        n=folded.num_rows,
        d=folded.d,
        eta=cfg.tolerances.eta,
        eps=report.epsilon,
        M=max(m_hat, POSITIVE_FLOOR),
        N=max(big_n, POSITIVE_FLOOR),
    )
    return m_hat, big_n, pivot_bound(bi)


def run_trial(
    trial: int,
    n: int,
    d: int,
    base_seed: int,
    solver_overrides: Optional[Dict] = None,
    config: Optional[Dict] = None,
    with_bound: bool = True,
    mean_width_trials: int = 50,
) -> Dict:
    seed = trial_seed(base_seed, trial)
    lp = random_lp(n, d, RngState(seed, stream=1).generator)
    overrides = dict(solver_overrides or {})
    overrides["seed"] = seed
    cfg = SolverConfig.from_config(config or {}, n, d, **overrides)
    report = solve(lp, cfg)

    row = {
        "trial": trial,
        "n": n,
        "d": d,
        "seed": seed,
        "status": report.status.value,
        "phase1_pivots": int(sum(report.phase1_pivots)),
        "phase2_pivots": int(report.phase2_pivots),
        "total_pivots": report.total_pivots,
        "rejections": int(report.rejections),
        "certificate_pass": bool(
            report.certificate_check is not None and report.certificate_check["status"] == "PASS"
        ),
        "objective": report.objective_value if report.objective_value is not None else math.nan,
        "mean_width": math.nan,
        "N": math.nan,
        "bound": math.nan,
        **{key: value for key, value in cfg.echo().items() if key != "seed"},
    }
    if with_bound and report.status == SolveStatus.OPTIMAL:
        row["mean_width"], row["N"], row["bound"] = bound_for_report(lp, report, cfg, mean_width_trials)
    return row


def run_ensemble(
    shapes: Sequence[Tuple[int, int]],
    trials: int,
    base_seed: int = 0,
    solver_overrides: Optional[Dict] = None,
    config: Optional[Dict] = None,
    workers: int = 1,
    with_bound: bool = True,
    mean_width_trials: int = 50,
) -> pd.DataFrame:
    """
    对 shapes 中每个 (n, d) 运行 trials 次试验; 行按试验编号排序, 与完成顺序无关
    """
    jobs: List[Tuple[int, int, int]] = []
    for n, d in shapes:
        for _ in range(trials):
            jobs.append((len(jobs), n, d))

    def _run(job):
        trial, n, d = job
        return run_trial(trial, n, d, base_seed, solver_overrides, config, with_bound, mean_width_trials)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run, jobs))
    else:
        rows = [_run(job) for job in jobs]

    frame = pd.DataFrame(rows, columns=ENSEMBLE_COLUMNS).sort_values("trial").reset_index(drop=True)
    optimal = int((frame["status"] == SolveStatus.OPTIMAL.value).sum())
    logger.info("集合实验完成: %d 个试验, %d 个最优", len(frame), optimal)
    return frame


def read_ensemble_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path)


def write_ensemble_csv(frame: pd.DataFrame, path: Optional[str] = None) -> str:
    """写出完整精度的 CSV; path 为 None 时返回文本"""
    text = frame.to_csv(index=False, float_format="%.17g")
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text
