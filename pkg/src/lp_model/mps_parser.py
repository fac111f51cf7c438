"""
MPS 文件读写

支持固定格式（名称不含空格）与自由格式的 ROWS / COLUMNS / RHS / BOUNDS 段,
OBJSENSE 段可选。目标默认最小化, 读入时取负转为最大化形式;
G 行取负转为 <= 行; E 行、RANGES、SOS 以及 FX / BV 边界一律拒绝。
"""
import json
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.errors import (
    EmptyProblem,
    MPSSyntaxError,
    UnsupportedEquality,
    UnsupportedSection,
)
from models.lp_models import InputLP

logger = logging.getLogger(__name__)

SECTIONS = ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "OBJSENSE", "ENDATA")
REJECTED_SECTIONS = ("RANGES", "SOS")
VALUE_BOUNDS = ("UP", "LO")
FLAG_BOUNDS = ("MI", "PL", "FR")


def _to_float(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MPSSyntaxError(lineno, f"无法解析数值 {token!r}")
    if not np.isfinite(value):
        raise MPSSyntaxError(lineno, f"数值非有限: {token!r}")
    return value


def _pairs(fields: List[str], lineno: int) -> List[Tuple[str, float]]:
    """[row, value, row, value] -> [(row, value), ...]"""
    if len(fields) not in (2, 4):
        raise MPSSyntaxError(lineno, f"字段数量错误: {fields}")
    return [(fields[i], _to_float(fields[i + 1], lineno)) for i in range(0, len(fields), 2)]


def parse_mps(text: str, big_bound: float = 1e4) -> InputLP:
    """解析 MPS 文本, 返回 InputLP（max c·x, A x <= b, o <= x <= u）"""
    name = "LP"
    section: Optional[str] = None
    sense = "MIN"
    objective: Optional[str] = None
    row_types: Dict[str, str] = {}
    row_order: List[str] = []
    columns: Dict[str, Dict[str, float]] = {}
    col_order: List[str] = []
    rhs: Dict[str, float] = {}
    lower: Dict[str, float] = {}
    upper: Dict[str, float] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        fields = line.split()
        head = fields[0].upper()

        # 段首行在第一列开始
        if not raw[0].isspace():
            if head in REJECTED_SECTIONS:
                raise UnsupportedSection(f"第{lineno}行: 不支持 {head} 段")
            if head not in SECTIONS:
                raise MPSSyntaxError(lineno, f"未知段 {fields[0]}")
            section = head
            if head == "NAME":
                name = fields[1] if len(fields) > 1 else name
            elif head == "OBJSENSE" and len(fields) > 1:
                sense = fields[1].upper()
            elif head == "ENDATA":
                break
            continue

        if section is None:
            raise MPSSyntaxError(lineno, "数据行出现在任何段之前")

        if section == "OBJSENSE":
            sense = head
        elif section == "ROWS":
            if len(fields) != 2:
                raise MPSSyntaxError(lineno, f"ROWS 行字段数量错误: {fields}")
            kind, row = head, fields[1]
            if kind == "E":
                raise UnsupportedEquality(row)
            if kind not in ("N", "L", "G"):
                raise MPSSyntaxError(lineno, f"未知行类型 {kind}")
            if row in row_types:
                raise MPSSyntaxError(lineno, f"重复的行名 {row}")
            if kind == "N":
                if objective is None:
                    objective = row
                else:
                    logger.debug("忽略多余的目标行 %s", row)
            else:
                row_order.append(row)
            row_types[row] = kind
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1].strip("'").upper() == "MARKER":
                # 整数标记: 只取 LP 松弛
                continue
            if len(fields) not in (3, 5):
                raise MPSSyntaxError(lineno, f"COLUMNS 行字段数量错误: {fields}")
            col = fields[0]
            if col not in columns:
                columns[col] = {}
                col_order.append(col)
            for row, value in _pairs(fields[1:], lineno):
                if row not in row_types:
                    raise MPSSyntaxError(lineno, f"未声明的行 {row}")
                columns[col][row] = value
        elif section == "RHS":
            # 自由格式可省略 RHS 集合名
            body = fields[1:] if len(fields) % 2 == 1 else fields
            for row, value in _pairs(body, lineno):
                if row not in row_types:
                    raise MPSSyntaxError(lineno, f"未声明的行 {row}")
                if row_types[row] == "N":
                    logger.debug("忽略目标常数项 %s", value)
                    continue
                rhs[row] = value
        elif section == "BOUNDS":
            kind = head
            if kind == "FX":
                raise UnsupportedEquality(fields[-2] if len(fields) >= 3 else line)
            if kind in VALUE_BOUNDS:
                if len(fields) not in (3, 4):
                    raise MPSSyntaxError(lineno, f"BOUNDS 行字段数量错误: {fields}")
                col, value = fields[-2], _to_float(fields[-1], lineno)
            elif kind in FLAG_BOUNDS:
                if len(fields) not in (2, 3):
                    raise MPSSyntaxError(lineno, f"BOUNDS 行字段数量错误: {fields}")
                col, value = fields[-1], 0.0
            else:
                raise UnsupportedSection(f"第{lineno}行: 不支持边界类型 {kind}")
            if col not in columns:
                raise MPSSyntaxError(lineno, f"未声明的列 {col}")
            if kind == "UP":
                upper[col] = value
                if value < 0 and col not in lower:
                    logger.warning("列 %s 上界为负且无下界, 按 MPS 约定下界取 -inf", col)
                    lower[col] = -np.inf
            elif kind == "LO":
                lower[col] = value
            elif kind == "MI":
                lower[col] = -np.inf
            elif kind == "PL":
                upper[col] = np.inf
            else:
                lower[col] = -np.inf
                upper[col] = np.inf

    if objective is None and not row_order:
        raise MPSSyntaxError(0, "缺少 ROWS 段")
    if not col_order:
        raise EmptyProblem("MPS 文件没有任何列")
    if not row_order:
        raise EmptyProblem("MPS 文件没有约束行")
    if sense not in ("MIN", "MAX", "MINIMIZE", "MAXIMIZE"):
        raise MPSSyntaxError(0, f"未知目标方向 {sense}")

    n, d = len(row_order), len(col_order)
    row_index = {row: i for i, row in enumerate(row_order)}
    A = np.zeros((n, d))
    c = np.zeros(d)
    for j, col in enumerate(col_order):
        for row, value in columns[col].items():
            if row == objective:
                c[j] = value
            elif row in row_index:
                A[row_index[row], j] = value
    b = np.array([rhs.get(row, 0.0) for row in row_order])

    # G 行取负
    sign = np.array([-1.0 if row_types[row] == "G" else 1.0 for row in row_order])
    A *= sign[:, None]
    b *= sign
    if sense.startswith("MIN"):
        c = -c

    lo = np.array([lower.get(col, 0.0) for col in col_order])
    up = np.array([upper.get(col, np.inf) for col in col_order])
    boxed = [j for j in range(d) if not (np.isfinite(lo[j]) and np.isfinite(up[j]))]
    if boxed:
        logger.warning("%d 个变量的无穷边界被替换为 ±%g", len(boxed), big_bound)
    lo = np.where(np.isfinite(lo), lo, -big_bound)
    up = np.where(np.isfinite(up), up, big_bound)
    # -0.0 统一成 0.0, 保证回写再读入逐位一致
    A = A + 0.0
    b = b + 0.0
    c = c + 0.0

    return InputLP(
        A=A, b=b, lower=lo, upper=up, c=c,
        row_names=tuple(row_order), col_names=tuple(col_order),
        name=name, boxed_columns=tuple(boxed),
    )


def read_mps_file(path: str, big_bound: float = 1e4) -> InputLP:
    with open(path, "r", encoding="utf-8") as f:
        return parse_mps(f.read(), big_bound=big_bound)


def write_mps(lp: InputLP, big_bound: float = 1e4) -> str:
    """按自由格式写出（最大化方向, 全部 <= 行）; 封箱列写成 MI/PL/FR, 其余写显式 LO/UP"""
    fmt = repr
    obj = "OBJ"
    while obj in lp.row_names:
        obj += "_"
    lines = [f"NAME {lp.name}", "OBJSENSE", "    MAX", "ROWS", f" N  {obj}"]
    lines += [f" L  {row}" for row in lp.row_names]
    lines.append("COLUMNS")
    for j, col in enumerate(lp.col_names):
        if lp.c[j] != 0 or not np.any(lp.A[:, j]):
            lines.append(f"    {col}  {obj}  {fmt(float(lp.c[j]))}")
        for i in np.flatnonzero(lp.A[:, j]):
            lines.append(f"    {col}  {lp.row_names[i]}  {fmt(float(lp.A[i, j]))}")
    lines.append("RHS")
    for i, row in enumerate(lp.row_names):
        if lp.b[i] != 0:
            lines.append(f"    RHS  {row}  {fmt(float(lp.b[i]))}")
    lines.append("BOUNDS")
    boxed = set(lp.boxed_columns)
    for j, col in enumerate(lp.col_names):
        lo, up = float(lp.lower[j]), float(lp.upper[j])
        # 封箱列按原来的无穷边界写回, 重新读入时恢复 boxed_columns
        free_lo = j in boxed and lo <= -big_bound
        free_up = j in boxed and up >= big_bound
        if free_lo and free_up:
            lines.append(f" FR BND  {col}")
            continue
        if free_lo:
            lines.append(f" MI BND  {col}")
        else:
            lines.append(f" LO BND  {col}  {fmt(lo)}")
        if free_up:
            lines.append(f" PL BND  {col}")
        else:
            lines.append(f" UP BND  {col}  {fmt(up)}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def to_json(lp: InputLP) -> str:
    """调试用 JSON 输出"""
    payload = {
        "name": lp.name,
        "num_rows": lp.num_rows,
        "num_cols": lp.num_cols,
        "A": lp.A.tolist(),
        "b": lp.b.tolist(),
        "lower": lp.lower.tolist(),
        "upper": lp.upper.tolist(),
        "c": lp.c.tolist(),
        "row_names": list(lp.row_names),
        "col_names": list(lp.col_names),
        "boxed_columns": list(lp.boxed_columns),
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)
