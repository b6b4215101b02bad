"""
Command-line interface.

Commands: ``check``, ``convert``, ``dist``, ``oracle`` and ``zoo``. Reports go
to stdout (JSON by default, ``--text`` for a rich table); diagnostics go to
stderr through the package logger.

Exit codes: 0 consistent, 1 not rank-one convex (or oracle violation),
2 inconclusive, 64 usage errors, 65 input data errors.
"""

import csv
import logging
import math
import sys
from typing import Dict, List, Optional, Sequence

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from rankone.config import settings
from rankone.exceptions import (
    ParamOutOfRangeError,
    RankOneError,
    UnknownEnergyError,
)
from rankone.logging_config import configure_logging
from rankone.models.matrix import Mat2
from rankone.schemas.request import CheckConfig, EnergySelection, ReprName, SampleSpec
from rankone.schemas.response import (
    ConversionRow,
    DistResponse,
    OracleReport,
    OracleStatus,
    Report,
)
from rankone.services import zoo
from rankone.services.oracle import run_oracle
from rankone.services.report_service import (
    check_subject,
    conversion_rows,
    dist_values,
    exit_code,
)
from rankone.services.selection import resolve

logger = logging.getLogger(__name__)

EX_USAGE = 64
EX_DATAERR = 65

app = typer.Typer(
    name="rankone",
    help="Rank-one convexity and polyconvexity checks for planar isochoric energies.",
    add_completion=False,
    no_args_is_help=True,
)

ZooOption = typer.Option(None, "--zoo", help="Catalog energy name.")
ParamOption = typer.Option(
    None, "--param", help="Parameter as key=value; repeatable."
)
ExprOption = typer.Option(None, "--expr", help="Energy expression.")
ReprOption = typer.Option(None, "--repr", help="Representation of --expr.")


def _parse_params(raw: Optional[List[str]]) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for item in raw or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise typer.BadParameter(
                f"expected key=value, got {item!r}", param_hint="--param"
            )
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise typer.BadParameter(
                f"{key.strip()}: {value!r} is not a number", param_hint="--param"
            ) from None
    return params


def _selection(
    zoo_name: Optional[str],
    params: Optional[List[str]],
    expr: Optional[str],
    representation: Optional[ReprName],
) -> EnergySelection:
    try:
        return EnergySelection(
            zoo=zoo_name,
            params=_parse_params(params),
            expr=expr,
            representation=representation,
        )
    except ValidationError as exc:
        message = "; ".join(error["msg"] for error in exc.errors())
        raise click.UsageError(message) from None


def _floats(text: str, count: int, flag: str) -> List[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise typer.BadParameter(
            f"expected {count} comma-separated values", param_hint=flag
        )
    try:
        return [float(part) for part in parts]
    except ValueError:
        raise typer.BadParameter(f"not a number in {text!r}", param_hint=flag) from None


def _check_config(grid: Optional[str], tol_abs: Optional[float]) -> CheckConfig:
    updates: Dict[str, float] = {}
    if grid is not None:
        lo, hi, n = _floats(grid, 3, "--grid")
        if n != int(n):
            raise typer.BadParameter(
                "grid size must be an integer", param_hint="--grid"
            )
        updates.update(grid_min=lo, grid_max=hi, grid_n=int(n))
    if tol_abs is not None:
        updates["tol_abs"] = tol_abs
    base = CheckConfig.from_settings()
    if not updates:
        return base
    try:
        return CheckConfig(**{**base.model_dump(), **updates})
    except ValidationError as exc:
        message = "; ".join(error["msg"] for error in exc.errors())
        raise click.UsageError(message) from None


def _sample_spec(samples: Optional[int], seed: Optional[int]) -> Optional[SampleSpec]:
    if samples is None and seed is None:
        return None
    base = SampleSpec.from_settings()
    updates = {
        key: value
        for key, value in (("n_points", samples), ("seed", seed))
        if value is not None
    }
    try:
        return SampleSpec(**{**base.model_dump(), **updates})
    except ValidationError as exc:
        message = "; ".join(error["msg"] for error in exc.errors())
        raise click.UsageError(message) from None


def _console() -> Console:
    return Console(file=sys.stdout, highlight=False, soft_wrap=True)


def _render_report(report: Report) -> None:
    table = Table(title=f"{report.energy.name_or_src} ({report.representation})")
    table.add_column("criterion")
    table.add_column("status")
    table.add_column("min margin", justify="right")
    table.add_column("witness")
    for verdict in report.checks:
        witness = verdict.witness
        table.add_row(
            verdict.criterion_id,
            verdict.status.value,
            f"{verdict.min_margin:.3e}",
            "" if witness is None else f"{witness.variable}={witness.point:.6g}",
        )
    console = _console()
    console.print(table)
    if report.oracle is not None:
        _render_oracle(report.oracle, console)
    console.print(f"overall: [bold]{report.overall.value}[/bold]")


def _render_oracle(report: OracleReport, console: Optional[Console] = None) -> None:
    console = console or _console()
    line = (
        f"oracle: {report.status.value} after {report.points_tested} samples"
        f" ({report.points_skipped} skipped)"
    )
    console.print(line)
    if report.violation is not None:
        v = report.violation
        console.print(
            f"  sample {v.sample_index} ({v.test}): F={v.F} xi={v.xi} eta={v.eta}"
            f" second difference {v.second_difference:.6e}"
        )


@app.command()
def check(
    zoo_name: Optional[str] = ZooOption,
    param: Optional[List[str]] = ParamOption,
    expr: Optional[str] = ExprOption,
    representation: Optional[ReprName] = ReprOption,
    grid: Optional[str] = typer.Option(
        None, "--grid", help="t-grid as min,max,n with 1 < min < max."
    ),
    tol_abs: Optional[float] = typer.Option(None, "--tol-abs", help="Absolute slack."),
    oracle: Optional[int] = typer.Option(
        None, "--oracle", help="Also run the sampling oracle with N samples."
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Oracle seed."),
    as_json: bool = typer.Option(True, "--json/--text", help="Output format."),
) -> None:
    """Run every applicable criterion (and optionally the oracle)."""
    selection = _selection(zoo_name, param, expr, representation)
    cfg = _check_config(grid, tol_abs)
    spec = _sample_spec(oracle, seed)
    report = check_subject(resolve(selection), cfg, spec)
    if as_json:
        typer.echo(report.model_dump_json(indent=2))
    else:
        _render_report(report)
    raise typer.Exit(exit_code(report.overall))


@app.command()
def convert(
    zoo_name: Optional[str] = ZooOption,
    param: Optional[List[str]] = ParamOption,
    expr: Optional[str] = ExprOption,
    representation: Optional[ReprName] = ReprOption,
    points: int = typer.Option(16, "--points", min=2, max=10000, help="Rows."),
    grid_max: float = typer.Option(
        settings.grid_max, "--grid-max", help="Largest t of the table."
    ),
    as_csv: bool = typer.Option(True, "--csv/--json", help="Output format."),
) -> None:
    """Tabulate h, f, ftilde and z on matched grids."""
    if not (math.isfinite(grid_max) and grid_max > 1.0):
        raise typer.BadParameter("must be finite and > 1", param_hint="--grid-max")
    selection = _selection(zoo_name, param, expr, representation)
    rows = conversion_rows(resolve(selection), points, grid_max)
    if as_csv:
        _write_csv(rows)
    else:
        typer.echo("[" + ",\n".join(row.model_dump_json() for row in rows) + "]")


def _write_csv(rows: Sequence[ConversionRow]) -> None:
    fields = list(ConversionRow.model_fields)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([repr(getattr(row, name)) for name in fields])


@app.command()
def dist(
    matrix: str = typer.Option(..., "--matrix", help="a11,a12,a21,a22"),
    what: str = typer.Option(
        "dist", "--what", help="dist, hull, K or invariants."
    ),
    as_json: bool = typer.Option(True, "--json/--text", help="Output format."),
) -> None:
    """Distance to SO(2), its quasiconvex hull, distortion or invariants."""
    if what not in ("dist", "hull", "K", "invariants"):
        raise typer.BadParameter(
            "expected dist, hull, K or invariants", param_hint="--what"
        )
    F = Mat2.from_entries(_floats(matrix, 4, "--matrix"))
    values = dist_values(F, what)
    if as_json:
        typer.echo(DistResponse(what=what, values=values).model_dump_json(indent=2))
    else:
        for key, value in values.items():
            typer.echo(f"{key} {value!r}")


@app.command("oracle")
def oracle_command(
    zoo_name: Optional[str] = ZooOption,
    param: Optional[List[str]] = ParamOption,
    expr: Optional[str] = ExprOption,
    representation: Optional[ReprName] = ReprOption,
    samples: Optional[int] = typer.Option(None, "--samples", help="Sample count."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Base seed."),
    as_json: bool = typer.Option(True, "--json/--text", help="Output format."),
) -> None:
    """Search for rank-one convexity violations by seeded sampling."""
    selection = _selection(zoo_name, param, expr, representation)
    spec = _sample_spec(samples, seed) or SampleSpec.from_settings()
    subject = resolve(selection)
    if subject.matrix_energy is None:
        raise RankOneError(f"{subject.source.name_or_src} has no matrix energy")
    report = run_oracle(subject.matrix_energy, spec)
    if as_json:
        typer.echo(report.model_dump_json(indent=2))
    else:
        _render_oracle(report)
    raise typer.Exit(0 if report.status is OracleStatus.CONSISTENT_CONVEX else 1)


@app.command("zoo")
def zoo_command(
    as_json: bool = typer.Option(True, "--json/--text", help="Output format."),
) -> None:
    """List the energy catalog with known verdicts."""
    listings = zoo.catalog()
    if as_json:
        typer.echo("[" + ",\n".join(item.model_dump_json() for item in listings) + "]")
        return
    table = Table(title="energy catalog")
    for column in ("name", "params", "representation", "expected", "citation"):
        table.add_column(column)
    for item in listings:
        expected = item.expected.value
        if item.condition:
            expected = f"{expected} ({item.condition})"
        table.add_row(
            item.name,
            ", ".join(f"{k}={v:g}" for k, v in item.params.items()),
            item.representation,
            expected,
            item.citation,
        )
    _console().print(table)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return its exit code instead of exiting.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.
    """
    configure_logging()
    command = typer.main.get_command(app)
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        result = command.main(args=args, prog_name="rankone", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EX_USAGE
    except click.exceptions.Abort:
        return 1
    except (UnknownEnergyError, ParamOutOfRangeError) as exc:
        typer.echo(f"error: {exc}", err=True)
        return EX_USAGE
    except RankOneError as exc:
        logger.debug("input rejected", exc_info=True)
        typer.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EX_DATAERR
    return result if isinstance(result, int) else 0


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
