"""
配置加载
"""
import copy
from pathlib import Path
from typing import Dict, Optional

import yaml

CONFIG_DIR = Path(__file__).resolve().parent
DEFAULT_CONFIG_PATH = CONFIG_DIR / "config.yaml"
SEED_ENV_VAR = "SHADOW_SIMPLEX_SEED"

DEFAULTS: Dict = {
    "solver": {
        "feas_tol": 1e-6,
        "opt_tol": 1e-6,
        "kappa": 1e12,
        "epsilon_mode": "kappa",
        "max_rejections": 64,
        "max_pivots_factor": 50,
        "seed": 0,
    },
    "linalg": {"singular_tol": 1e-10},
    "lp_model": {"big_bound": 1e4},
    "oracle": {"max_subsets": 1_000_000},
    "analysis": {"trials": 500, "workers": 1},
    "log": {"level": "INFO", "file": ""},
}


def _merge(base: Dict, override: Dict) -> Dict:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: Optional[str] = None) -> Dict:
    """读取 YAML 配置并覆盖内置默认值; 文件缺失时返回默认值"""
    cfg_path = Path(path) if path else DEFAULT_CONFIG_PATH
    loaded: Dict = {}
    if cfg_path.exists():
        with open(cfg_path, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
    return _merge(DEFAULTS, loaded)
