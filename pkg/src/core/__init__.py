"""
核心模块: 两阶段求解器、证书、报告
"""
from .certificate import check_certificate, extract_certificate
from .main import ShadowSimplexSystem
from .report_writer import ReportWriter
from .two_phase_solver import (
    TwoPhaseResult,
    epsilon_threshold,
    phase1_initial_vertex,
    phase1_sequential,
    phase2,
    sample_theta,
    solve,
    solve_folded,
)

__all__ = [
    'epsilon_threshold',
    'phase1_initial_vertex',
    'phase1_sequential',
    'phase2',
    'sample_theta',
    'solve_folded',
    'solve',
    'TwoPhaseResult',
    'extract_certificate',
    'check_certificate',
    'ReportWriter',
    'ShadowSimplexSystem',
]
