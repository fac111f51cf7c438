# 平均宽度估计、理论上界与集合实验
from .bounds import evaluate, omega, phase_bounds, pivot_bound, theorem_bound
from .experiment import (
    ENSEMBLE_COLUMNS,
    read_ensemble_csv,
    run_ensemble,
    run_trial,
    trial_seed,
    write_ensemble_csv,
)
from .mean_width import (
    InnerSolver,
    estimate_N,
    estimate_mean_width,
    estimate_mean_width_perturbed,
    good_slack_fraction,
    mean_width_frame,
)

__all__ = [
    "omega",
    "pivot_bound",
    "theorem_bound",
    "phase_bounds",
    "evaluate",
    "InnerSolver",
    "estimate_mean_width",
    "estimate_mean_width_perturbed",
    "estimate_N",
    "good_slack_fraction",
    "mean_width_frame",
    "run_ensemble",
    "run_trial",
    "trial_seed",
    "ENSEMBLE_COLUMNS",
    "read_ensemble_csv",
    "write_ensemble_csv",
]
