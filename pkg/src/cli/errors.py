"""Map ALPINE errors to CLI exit codes."""

from contextlib import contextmanager
from typing import Iterator

import click
from pydantic import ValidationError

from src.core.exceptions import (
    AlpineError,
    ConfigurationError,
    ContractViolation,
    DataError,
    NumericalError,
    UndefinedAucError,
)


class DataFailure(click.ClickException):
    """Unreadable input, malformed graph or mismatched checkpoint."""

    exit_code = 3


class NumericFailure(click.ClickException):
    exit_code = 4


@contextmanager
def handle_errors() -> Iterator[None]:
    """Usage problems exit 2, data problems 3, numeric problems 4."""
    try:
        yield
    except (ConfigurationError, ContractViolation) as exc:
        raise click.UsageError(str(exc)) from exc
    except ValidationError as exc:
        raise click.UsageError(str(exc)) from exc
    except DataError as exc:
        raise DataFailure(str(exc)) from exc
    except (NumericalError, UndefinedAucError) as exc:
        raise NumericFailure(str(exc)) from exc
    except AlpineError as exc:
        raise click.ClickException(str(exc)) from exc
