#!/usr/bin/env python3
# main.py - 影子顶点单纯形求解器主入口

import sys
from pathlib import Path

_ROOT = Path(__file__).resolve().parent
_SRC = _ROOT / "src"
if str(_SRC) not in sys.path:
    sys.path.insert(0, str(_SRC))
if str(_ROOT) not in sys.path:
    sys.path.insert(1, str(_ROOT))

from cli.commands import run


def main():
    """主函数"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
