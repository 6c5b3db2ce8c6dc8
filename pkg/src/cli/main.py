"""Main CLI entry point"""

import click

from src.cli.commands import report, run, score, study


@click.group()
@click.version_option(version="1.0.0")
def cli():
    """ALPINE active link prediction CLI"""
    pass


cli.add_command(run.run)
cli.add_command(study.new_node)
cli.add_command(score.mask)
cli.add_command(score.score)
cli.add_command(score.auc)
cli.add_command(report.report)

if __name__ == "__main__":
    cli()
