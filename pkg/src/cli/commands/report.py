"""Summaries of a results file."""

from pathlib import Path

import click
from rich.console import Console

from src.cli.commands.tables import frame_table
from src.cli.errors import handle_errors
from src.exporters.files import read_results
from src.services import gain_table, timing_report


@click.command()
@click.option("--results", "results_path", type=click.Path(path_type=Path), required=True)
def report(results_path: Path) -> None:
    """Print the AUC gain table and the timing per strategy."""
    with handle_errors():
        frame = read_results(results_path)
    console = Console()
    if frame.empty:
        click.echo("No rows in results file")
        return
    console.print(frame_table(gain_table(frame), title="Mean AUC gain (pp)", index_name="strategy"))
    console.print(frame_table(timing_report(frame), title="Seconds per iteration", index_name="strategy"))
