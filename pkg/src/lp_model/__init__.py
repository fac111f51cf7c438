# LP 模型: 读入、规范化、折叠
from .generators import random_lp
from .mps_parser import parse_mps, read_mps_file, to_json, write_mps
from .transforms import fold_bounds, normalize_rows

__all__ = [
    "parse_mps",
    "read_mps_file",
    "write_mps",
    "to_json",
    "normalize_rows",
    "fold_bounds",
    "random_lp",
]
