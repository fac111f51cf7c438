# 影子顶点主元引擎
from .engine import (
    Basis,
    PivotRecord,
    RatioStep,
    ShadowState,
    StopReason,
    follow_shadow_path,
    multipliers,
    pivot_step,
    ratio_test,
    records_to_frame,
    trace_to_frame,
    write_trace_csv,
)

__all__ = [
    "Basis",
    "PivotRecord",
    "RatioStep",
    "ShadowState",
    "StopReason",
    "multipliers",
    "ratio_test",
    "pivot_step",
    "follow_shadow_path",
    "records_to_frame",
    "trace_to_frame",
    "write_trace_csv",
]
