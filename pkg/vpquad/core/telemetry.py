"""CSV telemetry output."""

import logging
from pathlib import Path
from typing import Union

import pandas as pd

from vpquad import config
from vpquad.core.sim_engine import TELEMETRY_COLUMNS

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def write_telemetry(log: pd.DataFrame, path: PathLike) -> Path:
    """
    Write a telemetry frame as CSV with the unit-bearing header.

    Columns follow ``TELEMETRY_COLUMNS``; floats carry 9 significant digits.
    Parent directories are created.
    """
    path = Path(path)
    frame = log.reindex(columns=list(TELEMETRY_COLUMNS))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT)
    except OSError as e:
        raise OSError(e.errno, f"cannot write telemetry to {path}: {e.strerror or e}") from e
    logger.info("Wrote %d telemetry rows to %s", len(frame), path)
    return path


def read_telemetry(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    try:
        return pd.read_csv(path)
    except OSError as e:
        raise OSError(e.errno, f"cannot read telemetry from {path}: {e.strerror or e}") from e
