"""Rich rendering of pandas tables."""

import math

import pandas as pd
from rich.table import Table


def _cell(value) -> str:
    if isinstance(value, float):
        return "-" if math.isnan(value) else f"{value:.4g}"
    return str(value)


def frame_table(frame: pd.DataFrame, title: str = "", index_name: str = "") -> Table:
    table = Table(title=title or None)
    table.add_column(index_name or str(frame.index.name or ""), style="bold")
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for index, row in frame.iterrows():
        table.add_row(str(index), *(_cell(value) for value in row.tolist()))
    return table
