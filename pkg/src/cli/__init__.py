# 命令行入口
from .commands import build_parser, main, run

__all__ = ["build_parser", "run", "main"]
