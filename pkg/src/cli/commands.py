"""
命令行入口: solve / experiment / meanwidth / bound

退出码: 0 成功, 1 不可行, 2 用法或输入错误, 3 数值失败或主元预算耗尽
"""
import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

import pandas as pd

from config import SEED_ENV_VAR, load_config
from analysis.bounds import evaluate, phase_bounds
from analysis.experiment import run_ensemble, write_ensemble_csv
from analysis.mean_width import (
    InnerSolver,
    estimate_mean_width,
    estimate_mean_width_perturbed,
    mean_width_frame,
)
from core.main import ShadowSimplexSystem
from core.report_writer import ReportWriter
from lp_model.transforms import normalize_rows
from models.errors import ShadowSimplexError
from models.lp_models import FoldedLP
from models.solver_models import BoundInputs, SolverConfig, SolveStatus
from sampling.rng import RngState
from shadow.engine import records_to_frame
from utils.log_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

STATUS_EXIT = {
    SolveStatus.OPTIMAL: EXIT_OK,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
    SolveStatus.PIVOT_BUDGET: EXIT_NUMERICAL,
    SolveStatus.NUMERICAL_FAILURE: EXIT_NUMERICAL,
}


class UsageError(Exception):
    """参数在计算开始前校验失败"""


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("求解器参数（默认值取自 config/config.yaml）")
    group.add_argument("--feastol", type=float, default=None,
                       help="主可行性容差, 默认 1e-6（Gurobi 与 Glop 的默认值）")
    group.add_argument("--opttol", type=float, default=None,
                       help="最优性容差, 默认 1e-6（Gurobi 与 Glop 的默认值）")
    group.add_argument("--kappa", type=float, default=None,
                       help="基逆范数上界 κ, 默认 1e12（Gurobi 视条件数 1e12 为很大）")
    group.add_argument("--epsilon-mode", choices=["kappa", "exact"], default=None,
                       help="ε 计算方式, 默认 kappa; exact 枚举全部基（仅限小规模）")
    group.add_argument("--seed", type=int, default=None,
                       help=f"随机种子; 未给出时读取环境变量 {SEED_ENV_VAR}, 再退回配置文件")
    group.add_argument("--max-pivots", type=int, default=None,
                       help="每次影子路径的主元预算, 默认 50·(n+2d)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadow-simplex",
        description="带指数边界扰动与容差证书的两阶段影子顶点单纯形法",
    )
    parser.add_argument("--config", default=None, help="配置文件路径（默认 config/config.yaml）")
    parser.add_argument("--log-level", default=None, help="日志级别, 默认取配置文件 log.level")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="求解一个 MPS 文件")
    p_solve.add_argument("path", help="MPS 文件路径")
    _add_solver_flags(p_solve)
    p_solve.add_argument("--format", choices=["json", "csv", "human"], default="json")
    p_solve.add_argument("--trace-csv", default=None, help="把 Phase II 的主元轨迹写入 CSV")
    p_solve.add_argument("--timings", action="store_true", help="JSON 中包含耗时（输出不再可逐字节复现）")

    p_exp = sub.add_parser("experiment", help="随机实例集合实验, 每个试验输出一行")
    p_exp.add_argument("--n", type=int, default=6, help="约束行数, 默认 6")
    p_exp.add_argument("--d", type=int, default=3, help="变量数, 默认 3")
    p_exp.add_argument("--trials", type=int, default=20, help="试验次数, 默认 20")
    p_exp.add_argument("--workers", type=int, default=None, help="并行线程数, 默认取配置 analysis.workers")
    p_exp.add_argument("--no-bound", action="store_true", help="不估计平均宽度与理论上界")
    p_exp.add_argument("--output", default=None, help="CSV 输出路径（默认写到标准输出）")
    p_exp.add_argument("--format", choices=["csv", "json", "human"], default="csv")
    _add_solver_flags(p_exp)

    p_mw = sub.add_parser("meanwidth", help="估计 MPS 可行域的半平均宽度")
    p_mw.add_argument("path", help="MPS 文件路径")
    p_mw.add_argument("--trials", type=int, default=None, help="方向采样次数, 默认 500")
    p_mw.add_argument("--inner", choices=[s.value for s in InnerSolver], default="oracle",
                      help="区域上的最大化方式, 默认 oracle（顶点枚举）")
    p_mw.add_argument("--perturbed", action="store_true", help="每次试验同时重采样边界扰动")
    p_mw.add_argument("--format", choices=["json", "csv", "human"], default="json")
    _add_solver_flags(p_mw)

    p_bound = sub.add_parser("bound", help="计算理论主元数上界")
    p_bound.add_argument("--n", type=float, required=True, help="约束数（折叠系统行数）")
    p_bound.add_argument("--d", type=float, required=True, help="变量数")
    p_bound.add_argument("--m", type=float, required=True, help="半平均宽度 M")
    p_bound.add_argument("--eta", type=float, required=True, help="扰动尺度 η")
    p_bound.add_argument("--eps", type=float, required=True, help="目标扰动 ε")
    p_bound.add_argument("--bigN", type=float, required=True, help="最大目标绝对值 N")
    p_bound.add_argument("--l", type=float, default=1.0, help="L-指数分布参数, 默认 1")
    p_bound.add_argument("--phases", action="store_true", help="同时输出两阶段各自的上界")
    p_bound.add_argument("--feastol", type=float, default=1e-6, help="阶段上界使用的可行性容差, 默认 1e-6")
    p_bound.add_argument("--opttol", type=float, default=1e-6, help="阶段上界使用的最优性容差, 默认 1e-6")
    p_bound.add_argument("--format", choices=["json", "human"], default="json")
    return parser


def _resolve_seed(args) -> Optional[int]:
    if getattr(args, "seed", None) is not None:
        return args.seed
    raw = os.environ.get(SEED_ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"环境变量 {SEED_ENV_VAR} 不是整数: {raw!r}")
    return None


def _solver_overrides(args) -> Dict:
    return {
        "feas_tol": args.feastol,
        "opt_tol": args.opttol,
        "kappa": args.kappa,
        "epsilon_mode": args.epsilon_mode,
        "seed": _resolve_seed(args),
        "max_pivots": args.max_pivots,
    }


def _print_json(data: Dict) -> None:
    print(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False))


def _cmd_solve(args, config: Dict) -> int:
    system = ShadowSimplexSystem(config)
    lp = system.load(args.path)
    report = system.solve_lp(lp, **_solver_overrides(args))
    writer = ReportWriter(include_timings=args.timings)

    if args.format == "json":
        print(writer.to_json(report))
    elif args.format == "human":
        print(writer.to_human(report))
    else:
        summary = {
            "status": report.status.value,
            "seed": report.seed,
            "objective": report.objective_value,
            "phase1_pivots": sum(report.phase1_pivots),
            "phase2_pivots": report.phase2_pivots,
            "total_pivots": report.total_pivots,
            "rejections": report.rejections,
            "certificate_pass": bool(
                report.certificate_check and report.certificate_check["status"] == "PASS"
            ),
        }
        summary.update(report.config)
        sys.stdout.write(pd.DataFrame([summary]).to_csv(index=False, float_format="%.17g"))

    if args.trace_csv:
        records_to_frame(report.trace).to_csv(args.trace_csv, index=False, float_format="%.17g")
        logger.info("主元轨迹已写入 %s", args.trace_csv)
    return STATUS_EXIT[report.status]


def _cmd_experiment(args, config: Dict) -> int:
    if args.n < 1 or args.d < 1 or args.trials < 1:
        raise UsageError("--n, --d, --trials 必须为正")
    overrides = {k: v for k, v in _solver_overrides(args).items() if v is not None}
    base_seed = overrides.pop("seed", int(config["solver"]["seed"]))
    # 提前校验容差等参数
    SolverConfig.from_config(config, args.n, args.d, **overrides)
    workers = args.workers if args.workers is not None else int(config["analysis"]["workers"])

    frame = run_ensemble(
        [(args.n, args.d)],
        args.trials,
        base_seed=base_seed,
        solver_overrides=overrides,
        config=config,
        workers=max(1, workers),
        with_bound=not args.no_bound,
    )
    if args.format == "csv":
        text = write_ensemble_csv(frame, args.output)
        if not args.output:
            sys.stdout.write(text)
    elif args.format == "json":
        print(frame.to_json(orient="records", double_precision=15))
    else:
        print(frame.to_string(index=False, float_format=lambda v: f"{v:.6g}"))
    return EXIT_OK


def _cmd_meanwidth(args, config: Dict) -> int:
    system = ShadowSimplexSystem(config)
    lp = system.load(args.path)
    cfg = system.solver_config(lp, **_solver_overrides(args))
    trials = args.trials if args.trials is not None else int(config["analysis"]["trials"])
    if trials < 1:
        raise UsageError("--trials 必须为正")
    rng = RngState(cfg.seed)
    inner = InnerSolver(args.inner)

    if args.perturbed:
        estimate = estimate_mean_width_perturbed(lp, cfg.tolerances, trials, rng, inner, cfg)
    else:
        normalized = normalize_rows(lp)
        folded = FoldedLP.from_box(lp.lower, lp.upper, A=normalized.A, b=normalized.b)
        estimate = estimate_mean_width(folded, trials, rng, inner, cfg)

    summary = dict(
        estimate.summary(), seed=cfg.seed, inner=inner.value, perturbed=args.perturbed, config=cfg.echo()
    )
    if args.format == "json":
        _print_json(summary)
    elif args.format == "csv":
        frame = mean_width_frame(estimate).assign(**cfg.echo())
        sys.stdout.write(frame.to_csv(index=False, float_format="%.17g"))
    else:
        print(f"M̂ = {estimate.mean:.6g} ± {estimate.std_error:.6g} "
              f"({estimate.count} 次成功, {estimate.failures} 次失败)")
    return EXIT_OK


def _cmd_bound(args, config: Dict) -> int:
    if args.n != int(args.n) or args.d != int(args.d):
        raise UsageError("--n 与 --d 必须为整数")
    bi = BoundInputs(n=int(args.n), d=int(args.d), eta=args.eta, eps=args.eps,
                     M=args.m, N=args.bigN, L=args.l)
    result = evaluate(bi)
    if args.phases:
        result["phases"] = phase_bounds(bi.n, bi.d, args.feastol, args.opttol, bi.M, bi.N, bi.eps)
    if args.format == "json":
        result["inputs"] = {"n": bi.n, "d": bi.d, "eta": bi.eta, "eps": bi.eps,
                            "M": bi.M, "N": bi.N, "L": bi.L}
        _print_json(result)
    else:
        for key in ("pivot_bound", "theorem_bound", "omega"):
            if key in result:
                print(f"{key}: {result[key]:.6g}")
        for key, value in result.get("phases", {}).items():
            print(f"phase_bound.{key}: {value:.6g}")
    return EXIT_OK


COMMANDS = {
    "solve": _cmd_solve,
    "experiment": _cmd_experiment,
    "meanwidth": _cmd_meanwidth,
    "bound": _cmd_bound,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = load_config(args.config)
    except (OSError, ValueError) as err:
        print(f"配置文件读取失败: {err}", file=sys.stderr)
        return EXIT_USAGE
    log_file = config["log"].get("file") or None
    setup_logging(args.log_level or config["log"]["level"], log_file)

    try:
        return COMMANDS[args.command](args, config)
    except (UsageError, ValueError, FileNotFoundError) as err:
        print(f"错误: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ShadowSimplexError as err:
        print(f"计算失败: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
