"""
Command Line Interface for the prepotential toolkit.
"""

import asyncio
import functools
import math
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
import numpy as np
import yaml
from loguru import logger

from . import __version__
from .config.model_config import DEFAULT_CASES
from .config.settings import get_settings, load_config_file
from .core.bae import solve_model
from .core.exceptions import (
    BoundaryLeakError,
    OrthopolyError,
    ParameterValidationError,
    PrepotentialError,
)
from .core.framework import VerificationFramework
from .core.grid import Grid
from .core.models import (
    ModelKind,
    ModelParams,
    bound_state_count,
    eigenvalue,
    require_valid,
    susy_eigenvalue,
)
from .core.orthopoly import bae_roots_via_polynomials
from .core.wavefunction import (
    default_grid,
    node_count,
    normalize,
    sample,
    schrodinger_residual,
)
from .suites.properties import default_suites
from .utils.logging import configure_logging
from .utils.serialization import render_csv, render_json, write_output

MODEL_CHOICES = [kind.value for kind in ModelKind]
SUITE_CHOICES = [suite.name for suite in default_suites()]

MODEL_HELP = (
    "模型: coulomb (A(A-1)/x^2 - 2B/x), eckart (A(A-1)coth^2 x - 2B coth x), "
    "rm2 (A(A+1)tanh^2 x + 2B tanh x), rm1 (A(A-1)cot^2 x + 2B cot x)"
)

CONFIG_TEMPLATE = """\
# prepotential 命令行默认值 (key = value)
# 命令行参数优先于此文件

# 模型: coulomb, eckart, rm1, rm2
model = coulomb
A = 1.0
B = 1.0

# spectrum
levels = 4

# roots / wavefunction
N = 0
points = 16001

# 输出格式: json 或 csv
format = json

# verify
seed = 20080930
"""


def handle_errors(func):
    """Map library exceptions to the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except PrepotentialError as exc:
            click.echo(f"错误: {exc}", err=True)
            if isinstance(exc, ParameterValidationError):
                for violation in exc.violations:
                    click.echo(f"  违反条件: {violation}", err=True)
            if isinstance(exc, BoundaryLeakError):
                click.echo("提示: 请用 --xmin/--xmax 扩大网格", err=True)
            ctx.exit(exc.exit_code)
        except ValueError as exc:
            click.echo(f"错误: {exc}", err=True)
            ctx.exit(2)

    return wrapper


def model_options(func):
    """--model, --A and --B, shared by the per-model commands."""
    func = click.option(
        "--B", "coupling_b", type=float, required=True, help="耦合常数 B"
    )(func)
    func = click.option(
        "--A", "coupling_a", type=float, required=True, help="耦合常数 A (> 0)"
    )(func)
    func = click.option(
        "--model", type=click.Choice(MODEL_CHOICES), required=True, help=MODEL_HELP
    )(func)
    return func


def output_options(func):
    func = click.option(
        "--output",
        "-o",
        default=None,
        type=click.Path(dir_okay=False),
        help="输出文件路径",
    )(func)
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(["json", "csv"]),
        default=lambda: get_settings().default_format,
        help="输出格式",
    )(func)
    return func


def _model(
    model: str, coupling_a: float, coupling_b: float
) -> Tuple[ModelKind, ModelParams]:
    kind = ModelKind(model)
    params = ModelParams(A=coupling_a, B=coupling_b)
    require_valid(kind, params)
    return kind, params


def _params_dict(params: ModelParams) -> Dict[str, float]:
    return {"A": params.A, "B": params.B}


def _resolve_output(
    output: Optional[str], command: str, output_format: str
) -> Optional[Path]:
    if output:
        return Path(output)
    output_dir = get_settings().output_dir
    if output_dir:
        return Path(output_dir) / f"{command}.{output_format}"
    return None


def _emit(text: str, target: Optional[Path]) -> None:
    if write_output(text, target) is None:
        click.echo(text, nl=False)


def _config_defaults(
    ctx: click.Context, values: Dict[str, Any]
) -> Dict[str, Dict[str, Any]]:
    """Spread file values over the commands that take a parameter of that name."""
    defaults: Dict[str, Dict[str, Any]] = {}
    for name, command in ctx.command.commands.items():
        accepted = {param.name for param in command.params}
        defaults[name] = {
            key: value for key, value in values.items() if key in accepted
        }
    return defaults


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="配置文件 (key = value 或 .yaml)",
)
@click.option(
    "--log-level", default=None, help="日志级别 (DEBUG, INFO, WARNING, ERROR)"
)
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], log_level: Optional[str]):
    """prepotential - 形状不变势的谱、Bethe ansatz 根与波函数"""
    settings = get_settings()
    values: Dict[str, Any] = load_config_file(config_path) if config_path else {}
    level = log_level or values.pop("log_level", None) or settings.log_level
    configure_logging(str(level), settings.debug)
    if values:
        ctx.default_map = _config_defaults(ctx, values)
        logger.debug(f"defaults from {config_path}: {values}")


@main.command()
@model_options
@click.option(
    "--levels",
    default=1,
    type=click.IntRange(min=0),
    help="能级数目 (N = 0..levels-1)",
)
@output_options
@handle_errors
def spectrum(model, coupling_a, coupling_b, levels, output_format, output):
    """列出闭式本征值 E_N 与超对称能量 E^SUSY_N"""
    kind, params = _model(model, coupling_a, coupling_b)
    count = bound_state_count(kind, params)
    if count == 0:
        logger.warning(f"{kind.value} (A={params.A}, B={params.B}) has no bound states")

    rows = []
    for N in range(levels):
        if N >= count:
            if count > 0:
                logger.warning(
                    f"level N={N} omitted: beyond the bound-state count {count}"
                )
            break
        rows.append(
            {
                "N": N,
                "energy": eigenvalue(kind, params, N),
                "susy_energy": susy_eigenvalue(kind, params, N),
                "bound": True,
            }
        )

    target = _resolve_output(output, "spectrum", output_format)
    if output_format == "csv":
        text = render_csv(rows, ["N", "energy", "susy_energy", "bound"])
    else:
        text = render_json(
            kind.value, _params_dict(params), rows, {"bound_state_count": count}
        )
    _emit(text, target)


@main.command()
@model_options
@click.option("--N", "level", default=0, type=click.IntRange(min=0), help="量子数 N")
@output_options
@handle_errors
def roots(model, coupling_a, coupling_b, level, output_format, output):
    """求解 Bethe ansatz 方程并与正交多项式根交叉校验"""
    kind, params = _model(model, coupling_a, coupling_b)
    result = solve_model(kind, params, level)

    crosscheck: Optional[float] = 0.0
    if level > 0:
        try:
            reference = bae_roots_via_polynomials(kind, params, level).as_array()
            crosscheck = float(np.max(np.abs(result.as_array() - reference)))
        except OrthopolyError as exc:
            logger.warning(f"polynomial cross-check unavailable: {exc}")
            crosscheck = None

    target = _resolve_output(output, "roots", output_format)
    if output_format == "csv":
        rows = [{"k": k, "z": z} for k, z in enumerate(result.roots)]
        text = render_csv(rows, ["k", "z"])
    else:
        payload = {
            "N": level,
            "roots": result.roots,
            "residual_norm": result.residual_norm,
            "iterations": result.iterations,
            "crosscheck_diff": crosscheck,
        }
        text = render_json(kind.value, _params_dict(params), payload)
    if crosscheck is not None:
        logger.info(
            f"N={level}: {result.N} roots, "
            f"polynomial cross-check difference {crosscheck:.3e}"
        )
    _emit(text, target)


@main.command()
@model_options
@click.option("--N", "level", default=0, type=click.IntRange(min=0), help="量子数 N")
@click.option(
    "--points", default=16001, type=click.IntRange(min=5), help="网格点数"
)
@click.option("--xmin", default=None, type=float, help="网格左端 (默认自动)")
@click.option("--xmax", default=None, type=float, help="网格右端 (默认自动)")
@output_options
@handle_errors
def wavefunction(
    model, coupling_a, coupling_b, level, points, xmin, xmax, output_format, output
):
    """输出归一化波函数 phi_N 的采样值"""
    kind, params = _model(model, coupling_a, coupling_b)
    found = solve_model(kind, params, level)
    grid = default_grid(kind, params, level, points=points, roots=found)
    if xmin is not None or xmax is not None:
        grid = Grid(
            xmin=grid.xmin if xmin is None else xmin,
            xmax=grid.xmax if xmax is None else xmax,
            points=points,
        )

    wave = normalize(sample(kind, params, level, grid=grid, roots=found))
    report = schrodinger_residual(kind, params, level, found, grid)
    meta = {
        "N": level,
        "energy": eigenvalue(kind, params, level),
        "node_count": node_count(wave),
        "schrodinger_residual": report.residual,
        "residual_ratio": report.ratio,
        "norm_squared": wave.norm_squared,
        "grid": {"xmin": grid.xmin, "xmax": grid.xmax, "points": grid.points},
        "roots": found.roots,
    }

    target = _resolve_output(output, "wavefunction", output_format)
    if output_format == "csv":
        rows = [
            {"x": x, "phi": phi}
            for x, phi in zip(wave.x.tolist(), wave.values.tolist())
        ]
        _emit(render_csv(rows, ["x", "phi"]), target)
        if target is not None:
            sidecar = target.with_name(target.stem + ".meta.json")
            write_output(render_json(kind.value, _params_dict(params), meta), sidecar)
        else:
            logger.info(
                f"node count {meta['node_count']}, residual {report.residual:.3e}"
            )
    else:
        results = {**meta, "x": wave.x, "phi": wave.values}
        _emit(render_json(kind.value, _params_dict(params), results), target)


@main.command()
@click.option(
    "--suite",
    "suites",
    multiple=True,
    type=click.Choice(SUITE_CHOICES),
    help="只运行指定的检验 (可重复)",
)
@click.option(
    "--model",
    "models",
    multiple=True,
    type=click.Choice(MODEL_CHOICES),
    help="只检验指定模型 (可重复)",
)
@click.option("--seed", default=None, type=int, help="随机种子")
@click.option(
    "--draws", default=None, type=click.IntRange(min=1), help="每个模型的随机参数组数"
)
@click.option(
    "--max-level", default=None, type=click.IntRange(min=1), help="随机检验的最高量子数"
)
@click.option(
    "--perturb-roots",
    default=0.0,
    type=click.FloatRange(min=0.0),
    help="扰动根 (负对照)",
)
@click.option(
    "--output",
    "-o",
    default=None,
    type=click.Path(dir_okay=False),
    help="报告输出路径",
)
@handle_errors
def verify(suites, models, seed, draws, max_level, perturb_roots, output):
    """运行全部性质检验; 全部通过时退出码为 0"""

    async def run_verify():
        async with VerificationFramework() as framework:
            context = framework.default_context(
                seed=seed,
                draws=draws,
                max_level=max_level,
                perturb_roots=perturb_roots,
                models=[ModelKind(m) for m in models] or None,
            )
            report = await framework.run(context, names=list(suites) or None)
            return context, report

    context, report = asyncio.run(run_verify())
    meta = {"seed": context.seed, "perturb_roots": context.perturb_roots}
    text = render_json(",".join(models) or None, None, report.dict(), meta)
    _emit(text, _resolve_output(output, "verify", "json"))

    if not report.passed:
        click.echo(f"检验失败: {report.first_failure}", err=True)
        click.get_current_context().exit(1)


@main.command()
@click.option(
    "--format",
    "listing_format",
    type=click.Choice(["table", "json"]),
    default="table",
    help="输出格式",
)
def cases(listing_format):
    """列出内置的参数矩阵"""
    if listing_format == "json":
        records = [case.dict() for case in DEFAULT_CASES.values()]
        click.echo(render_json(None, None, records), nl=False)
        return

    click.echo("内置参数:")
    for case in DEFAULT_CASES.values():
        count = bound_state_count(case.kind, case.params)
        levels = "∞" if math.isinf(count) else str(count)
        click.echo(
            f"  - {case.name}: {case.kind.value} A={case.A:g} B={case.B:g} "
            f"N<={case.n_max} (束缚态 {levels})"
        )
        if case.description:
            click.echo(f"    {case.description}")


@main.command()
@click.option(
    "--config-file", default="prepotential.env", help="配置文件路径 (.env 或 .yaml)"
)
def init(config_file: str):
    """初始化命令行配置文件"""
    path = Path(config_file)
    if path.suffix.lower() in (".yaml", ".yml"):
        config = {
            "model": "coulomb",
            "A": 1.0,
            "B": 1.0,
            "levels": 4,
            "N": 0,
            "points": 16001,
            "format": "json",
            "seed": get_settings().random_seed,
        }
        with open(path, "w", encoding="utf-8") as f:
            yaml.dump(
                config, f, default_flow_style=False, allow_unicode=True, sort_keys=False
            )
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(CONFIG_TEMPLATE)

    click.echo(f"配置文件已创建: {config_file}")
    click.echo("使用 --config 指定该文件; 命令行参数优先。")


if __name__ == "__main__":
    main()
