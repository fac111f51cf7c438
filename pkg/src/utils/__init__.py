# 工具模块
from .data_validator import LPQualityValidator
from .log_setup import setup_logging

__all__ = ["LPQualityValidator", "setup_logging"]
