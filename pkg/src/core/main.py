"""
系统主入口与编排
"""
import logging
from typing import Dict, Optional

from config import load_config
from lp_model.mps_parser import read_mps_file
from models.lp_models import InputLP
from models.solver_models import SolveReport, SolverConfig
from utils.data_validator import LPQualityValidator
from .two_phase_solver import solve

logger = logging.getLogger(__name__)


class ShadowSimplexSystem:
    """读入 MPS、组装配置、求解（主入口）"""

    def __init__(self, config: Optional[Dict] = None):
        self.config = config if config is not None else load_config()

    def load(self, path: str) -> InputLP:
        big_bound = float(self.config["lp_model"]["big_bound"])
        lp = read_mps_file(path, big_bound=big_bound)
        quality = LPQualityValidator.validate_lp(lp, big_bound=big_bound)
        for issue in quality["issues"]:
            logger.warning("%s: %s", lp.name or path, issue)
        return lp

    def solver_config(self, lp: InputLP, **overrides) -> SolverConfig:
        return SolverConfig.from_config(self.config, lp.num_rows, lp.num_cols, **overrides)

    def solve_lp(self, lp: InputLP, **overrides) -> SolveReport:
        cfg = self.solver_config(lp, **overrides)
        logger.info("求解 %s: n=%d, d=%d, seed=%d", lp.name or "<lp>", lp.num_rows, lp.num_cols, cfg.seed)
        return solve(lp, cfg)
