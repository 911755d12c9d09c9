"""
Command-line driver: ``cows-adapt parse|explore|check|scenario``.

Exit codes: 0 success, 1 a property fails, 2 an error, 3 the state space
was truncated. ``-`` stands for standard input or output.
"""

import logging
import time
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Iterator, List, Optional

import typer
from dotenv import load_dotenv

from ..config import CowsConfig
from ..errors import CowsError, CowsSyntaxError
from ..explorer import Lts, Truncation, explore, export_aut, import_aut
from ..logic import check, format_formula, parse_properties
from ..scenario import SCENARIOS, render_scenario
from ..syntax import dump_ast, parse_model
from ..utils.logging import configure_logging
from .report import Bounds, RunReport, VerdictEntry, peak_rss_bytes

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_ERROR = 2
EXIT_TRUNCATED = 3

STDIO = "-"

app = typer.Typer(
    name="cows-adapt",
    help="Parse, explore and model-check service orchestration models.",
    add_completion=False,
    no_args_is_help=True,
)


class ReportFormat(str, Enum):
    yaml = "yaml"
    text = "text"


@app.callback()
def _startup(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Diagnostics level (overrides COWS_ADAPT_LOG_LEVEL)"
    ),
) -> None:
    load_dotenv()
    if not CowsConfig.validate_config():
        typer.echo("Error: invalid configuration (see messages above)", err=True)
        raise typer.Exit(EXIT_ERROR)
    configure_logging(log_level)


# --- helpers ------------------------------------------------------------------


@contextmanager
def _errors(source: str) -> Iterator[None]:
    """Turn library and I/O errors into ``Error: ...`` and exit code 2."""
    try:
        yield
    except CowsSyntaxError as exc:
        typer.echo(f"Error: {source}:{exc}", err=True)
        raise typer.Exit(EXIT_ERROR)
    except CowsError as exc:
        typer.echo(f"Error: {source}: {exc}", err=True)
        raise typer.Exit(EXIT_ERROR)
    except OSError as exc:
        typer.echo(f"Error: {exc.filename or source}: {exc.strerror or exc}", err=True)
        raise typer.Exit(EXIT_ERROR)


def _decode(data: bytes) -> str:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        before = data[: exc.start]
        line = before.count(b"\n") + 1
        column = exc.start - (before.rfind(b"\n") + 1) + 1
        raise CowsSyntaxError("input is not UTF-8 text", line, column) from None
    return text.replace("\r\n", "\n")


def _read(path: str) -> str:
    if path == STDIO:
        return _decode(typer.get_binary_stream("stdin").read())
    return _decode(Path(path).read_bytes())


def _write(path: str, text: str) -> None:
    if path == STDIO:
        typer.echo(text, nl=False)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_report(path: Optional[str], report: RunReport, fmt: ReportFormat) -> None:
    if path is None:
        return
    _write(path, report.to_yaml() if fmt is ReportFormat.yaml else report.to_text())


def _bounds(
    max_states: Optional[int], max_depth: Optional[int], keep_tau: bool, workers: Optional[int]
) -> Bounds:
    return Bounds(
        max_states=max_states if max_states is not None else CowsConfig.Explorer.max_states(),
        max_depth=max_depth if max_depth is not None else CowsConfig.Explorer.max_depth(),
        keep_tau=keep_tau,
        workers=workers if workers is not None else CowsConfig.Explorer.workers(),
    )


def _explore_source(source: str, bounds: Bounds) -> Lts:
    model = parse_model(_read(source))
    return explore(
        model,
        max_states=bounds.max_states,
        max_depth=bounds.max_depth,
        keep_tau=bounds.keep_tau,
        workers=bounds.workers,
    )


# Shared exploration options
_MAX_STATES = typer.Option(None, "--max-states", min=1, help="State bound")
_MAX_DEPTH = typer.Option(None, "--max-depth", min=1, help="Depth bound (default unbounded)")
_KEEP_TAU = typer.Option(False, "--keep-tau", help="Keep definition unfolding as tau steps")
_WORKERS = typer.Option(None, "--workers", min=1, help="Threads expanding each BFS layer")
_REPORT = typer.Option(None, "--report", help="Write a run report to FILE ('-' for stdout)")
_REPORT_FORMAT = typer.Option(ReportFormat.yaml, "--report-format", help="Report format")


# --- commands -----------------------------------------------------------------


@app.command("parse")
def parse_command(
    path: str = typer.Argument(..., help="Model file ('-' for stdin)"),
    dump: bool = typer.Option(False, "--dump-ast", help="Print the abstract syntax tree"),
) -> None:
    """Parse a model and report errors with their position."""
    with _errors(path):
        model = parse_model(_read(path))
    if dump:
        typer.echo(dump_ast(model), nl=False)
    else:
        typer.echo(f"{path}: ok, {len(model.definitions)} definition(s)")


@app.command("explore")
def explore_command(
    path: str = typer.Argument(..., help="Model file ('-' for stdin)"),
    max_states: Optional[int] = _MAX_STATES,
    max_depth: Optional[int] = _MAX_DEPTH,
    keep_tau: bool = _KEEP_TAU,
    workers: Optional[int] = _WORKERS,
    out: Optional[str] = typer.Option(
        None, "--out", help="Write the LTS as .aut ('-' for stdout)"
    ),
    report: Optional[str] = _REPORT,
    report_format: ReportFormat = _REPORT_FORMAT,
) -> None:
    """Explore the state space of a model and optionally export it as Aldebaran text."""
    started = time.perf_counter()
    with _errors(path):
        bounds = _bounds(max_states, max_depth, keep_tau, workers)
        lts = _explore_source(path, bounds)
        if out is not None:
            _write(out, export_aut(lts))

    # counts go to stderr when stdout carries the .aut text
    to_stderr = out == STDIO
    typer.echo(f"states: {lts.num_states}", err=to_stderr)
    typer.echo(f"transitions: {lts.num_transitions}", err=to_stderr)
    typer.echo(f"truncated: {lts.truncated.value}", err=to_stderr)

    run = RunReport(
        command="explore",
        model=path,
        bounds=bounds,
        states=lts.num_states,
        transitions=lts.num_transitions,
        truncated=lts.truncated.value,
        diagnostics=lts.diagnostics,
        duration_seconds=round(time.perf_counter() - started, 6),
        peak_rss_bytes=peak_rss_bytes(),
    )
    with _errors(report or path):
        _write_report(report, run, report_format)

    if lts.truncated is not Truncation.NONE:
        raise typer.Exit(EXIT_TRUNCATED)


@app.command("check")
def check_command(
    path: str = typer.Argument(..., help="Model (.cows) or LTS (.aut) file ('-' for stdin)"),
    prop: str = typer.Option(..., "--prop", help="Property file"),
    trace: bool = typer.Option(False, "--trace", help="Print witnesses and counterexamples"),
    max_states: Optional[int] = _MAX_STATES,
    max_depth: Optional[int] = _MAX_DEPTH,
    keep_tau: bool = _KEEP_TAU,
    workers: Optional[int] = _WORKERS,
    report: Optional[str] = _REPORT,
    report_format: ReportFormat = _REPORT_FORMAT,
) -> None:
    """Check every property of a .prop file against a model or an exported LTS."""
    started = time.perf_counter()
    with _errors(prop):
        properties = parse_properties(_read(prop))
    with _errors(path):
        bounds = _bounds(max_states, max_depth, keep_tau, workers)
        if path.endswith(".aut"):
            lts = import_aut(_read(path))
        else:
            lts = _explore_source(path, bounds)

        entries: List[VerdictEntry] = []
        for item in properties:
            result = check(lts, item.formula)
            entries.append(
                VerdictEntry(
                    name=item.name,
                    formula=format_formula(item.formula),
                    verdict=result.verdict.value,
                    sound=result.sound,
                    evidence=result.trace_lines(),
                )
            )

    for entry in entries:
        flag = "" if entry.sound else " (unsound: state space truncated)"
        typer.echo(f"{entry.name}: {entry.verdict}{flag}")
        if trace:
            for line in entry.evidence:
                typer.echo(f"  {line}")

    run = RunReport(
        command="check",
        model=path,
        bounds=bounds,
        states=lts.num_states,
        transitions=lts.num_transitions,
        truncated=lts.truncated.value,
        diagnostics=lts.diagnostics,
        verdicts=entries,
        duration_seconds=round(time.perf_counter() - started, 6),
        peak_rss_bytes=peak_rss_bytes(),
    )
    with _errors(report or path):
        _write_report(report, run, report_format)

    if lts.truncated is not Truncation.NONE:
        raise typer.Exit(EXIT_TRUNCATED)
    if any(entry.verdict != "HOLDS" for entry in entries):
        raise typer.Exit(EXIT_FAILS)


@app.command("scenario")
def scenario_command(
    name: str = typer.Argument(..., help=f"Scenario name ({', '.join(sorted(SCENARIOS))})"),
    params: Optional[str] = typer.Option(
        None, "--params", help="Comma-separated parameters, e.g. 0,4,10,60"
    ),
    emit: str = typer.Option(STDIO, "--emit", help="Output file ('-' for stdout)"),
) -> None:
    """Emit the model text of a bundled scenario."""
    with _errors(name):
        text = render_scenario(name, params)
    with _errors(emit):
        _write(emit, text)


def main() -> None:
    """Entry point for the ``cows-adapt`` console script"""
    app()


if __name__ == "__main__":
    main()
