"""Plain-text artifacts: masks, embeddings, score dumps and result tables."""

from __future__ import annotations

import csv
import threading
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.core.exceptions import DataError, GraphParseError
from src.core.network import Oracle, mask_pairs
from src.models.embedding import EmbeddingModel
from src.models.network import Pair, PartialNetwork
from src.models.scores import UtilityScores

PathLike = Union[str, Path]

RESULTS_VERSION_LINE = "# alpine-results v1"


def write_mask(net: PartialNetwork, path: PathLike) -> Path:
    """One ``i j`` line per unknown pair (dense indices)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with path.open("w", encoding="utf-8") as handle:
            for i, j in net.unknown_array():
                handle.write(f"{i} {j}\n")
    except OSError as exc:
        raise DataError(f"Cannot write mask file {path}: {exc}") from exc
    return path


def read_mask(truth: PartialNetwork, path: PathLike) -> Tuple[PartialNetwork, Oracle]:
    """Replay a mask file against the fully observed network it came from."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"Cannot read mask file {path}: {exc}") from exc
    pairs: List[Pair] = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise GraphParseError(f"{path}:{number}: expected 'i j', got {stripped!r}")
        try:
            pairs.append((int(tokens[0]), int(tokens[1])))
        except ValueError as exc:
            raise GraphParseError(f"{path}:{number}: non-integer node index") from exc
    return mask_pairs(truth, pairs)


def write_embedding(model: EmbeddingModel, path: PathLike) -> Path:
    """Header ``n d gamma beta`` followed by one row of d floats per node."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(f"{model.n} {model.d} {model.gamma:.17g} {model.beta:.17g}\n")
        for row in model.X:
            handle.write(" ".join(f"{value:.17g}" for value in row) + "\n")
    return path


def read_embedding(path: PathLike) -> EmbeddingModel:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"Cannot read embedding file {path}: {exc}") from exc
    if not lines:
        raise DataError(f"Empty embedding file {path}")
    try:
        n_text, d_text, gamma_text, beta_text = lines[0].split()
        n, d = int(n_text), int(d_text)
        X = np.array([[float(v) for v in line.split()] for line in lines[1 : n + 1]])
    except ValueError as exc:
        raise GraphParseError(f"{path}: malformed embedding file: {exc}") from exc
    if X.shape != (n, d):
        raise DataError(f"{path}: header says {n}x{d}, found {X.shape}")
    return EmbeddingModel(X=X, gamma=float(gamma_text), beta=float(beta_text))


def write_score_dump(scores: UtilityScores, path: PathLike) -> Path:
    """CSV ``i,j,score,strategy,iteration``, best first, ties by (i, j)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = scores.to_frame()
    try:
        frame.to_csv(path, index=False, float_format="%.17g")
    except OSError as exc:
        raise DataError(f"Cannot write score dump {path}: {exc}") from exc
    return path


def read_score_table(path: PathLike) -> pd.DataFrame:
    """Read a score CSV (comment lines starting with ``#`` are skipped)."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise DataError(f"Cannot read score file {path}: {exc}") from exc
    if "score" not in frame.columns:
        raise DataError(f"{path}: missing 'score' column")
    return frame


class ResultsWriter:
    """Writes result rows to a versioned CSV, one writer for many producers.

    A new writer starts the file over; ``append=True`` keeps the rows of an
    earlier run and only writes the header into an empty file.
    """

    def __init__(self, path: PathLike, fieldnames: Sequence[str], append: bool = False) -> None:
        self.path = Path(path)
        self.fieldnames = list(fieldnames)
        self._lock = threading.Lock()
        if append and self.path.exists() and self.path.stat().st_size > 0:
            return
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w", newline="", encoding="utf-8") as handle:
                handle.write(RESULTS_VERSION_LINE + "\n")
                csv.DictWriter(handle, fieldnames=self.fieldnames).writeheader()
        except OSError as exc:
            raise DataError(f"Cannot create results file {self.path}: {exc}") from exc

    def write_rows(self, rows: Iterable[Dict[str, object]]) -> None:
        with self._lock:
            try:
                with self.path.open("a", newline="", encoding="utf-8") as handle:
                    writer = csv.DictWriter(handle, fieldnames=self.fieldnames)
                    for row in rows:
                        writer.writerow(row)
            except OSError as exc:
                raise DataError(f"Cannot append results to {self.path}: {exc}") from exc


def read_results(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            first = handle.readline().strip()
    except OSError as exc:
        raise DataError(f"Cannot read results file {path}: {exc}") from exc
    if first != RESULTS_VERSION_LINE:
        raise DataError(f"{path}: expected header {RESULTS_VERSION_LINE!r}, got {first!r}")
    return pd.read_csv(path, comment="#")
