"""Load delimited three-phase recordings (simulator output or the public fault dataset)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, InsufficientDataError, ParseError, SchemaError
from .signal_sim import ThreePhaseSignal

LABEL_MODES = ("binary", "flags", "none")


@dataclass(frozen=True)
class DatasetSchema:
    """Column layout of an input CSV.

    ``label_mode`` is ``"binary"`` (one output column, nonzero means fault),
    ``"flags"`` (several fault-type flag columns, any nonzero means fault) or
    ``"none"``. Without a header row, column names are zero-based positions.
    """

    current_columns: tuple = ("Ia", "Ib", "Ic")
    voltage_columns: tuple = ("Va", "Vb", "Vc")
    label_mode: str = "binary"
    label_columns: tuple = ("fault",)
    has_header: bool = True

    def __post_init__(self):
        object.__setattr__(self, "current_columns", tuple(self.current_columns))
        object.__setattr__(self, "voltage_columns", tuple(self.voltage_columns))
        object.__setattr__(self, "label_columns", tuple(self.label_columns))
        if len(self.current_columns) != 3 or len(self.voltage_columns) != 3:
            raise ConfigError("schema needs exactly 3 current and 3 voltage columns")
        if self.label_mode not in LABEL_MODES:
            raise ConfigError(f"label_mode must be one of {LABEL_MODES}")
        if self.label_mode == "binary" and len(self.label_columns) != 1:
            raise ConfigError("binary label mode takes exactly one label column")
        if self.label_mode == "flags" and not self.label_columns:
            raise ConfigError("flags label mode needs at least one flag column")
        names = self.columns
        if len(set(names)) != len(names):
            raise ConfigError(f"schema column names must be distinct: {names}")
        if not self.has_header and not all(str(c).isdigit() for c in names):
            raise ConfigError("headerless schemas address columns by integer position")

    @property
    def columns(self) -> tuple:
        labels = self.label_columns if self.label_mode != "none" else ()
        return self.current_columns + self.voltage_columns + labels


# Layouts of the public electrical-fault dataset files.
DETECT_LAYOUT = DatasetSchema(label_mode="binary", label_columns=("Output (S)",))
CLASS_LAYOUT = DatasetSchema(label_mode="flags", label_columns=("G", "C", "B", "A"))


def infer_schema(path) -> DatasetSchema:
    """Pick a known schema from a file's header row."""
    with Path(path).open(newline="") as fh:
        header = [h.strip() for h in next(csv.reader(fh), [])]
    for schema in (DETECT_LAYOUT, CLASS_LAYOUT):
        if all(c in header for c in schema.columns):
            return schema
    if "fault" in header:
        return DatasetSchema()
    return DatasetSchema(label_mode="none", label_columns=())


def load_csv(path, schema: DatasetSchema | None = None, sample_interval: float = 1.0) -> ThreePhaseSignal:
    schema = schema or DatasetSchema()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        if schema.has_header:
            header = [h.strip() for h in next(reader, [])]
            positions = []
            for col in schema.columns:
                if col not in header:
                    raise SchemaError(f"column {col!r} not found in {path.name}")
                positions.append(header.index(col))
        else:
            positions = [int(c) for c in schema.columns]

        rows = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            values = []
            for col, pos in zip(schema.columns, positions):
                if pos >= len(row):
                    raise ParseError(f"row {row_no}: missing value for column {col!r}", row=row_no)
                try:
                    values.append(float(row[pos]))
                except ValueError:
                    raise ParseError(
                        f"row {row_no}: non-numeric value {row[pos]!r} in column {col!r}", row=row_no
                    ) from None
            rows.append(values)

    data = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(schema.columns))
    channels = data[:, :6].T.copy()
    if schema.label_mode == "none":
        mask = np.zeros(len(rows), np.uint8)
    else:
        mask = (data[:, 6:] != 0).any(axis=1).astype(np.uint8)
    return ThreePhaseSignal(sample_interval, channels, mask)


def zero_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of zeros as ``(start, stop)`` pairs."""
    clean = np.concatenate(([0], (np.asarray(mask) == 0).astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(clean))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def split_normal(signal: ThreePhaseSignal, window_len: int) -> tuple[ThreePhaseSignal, ThreePhaseSignal]:
    """Training part = longest fault-free run (earliest on ties); test part = everything."""
    runs = zero_runs(signal.fault_mask)
    if runs:
        start, stop = max(runs, key=lambda r: (r[1] - r[0], -r[0]))
    if not runs or stop - start < window_len:
        longest = (stop - start) if runs else 0
        raise InsufficientDataError(
            f"longest fault-free run has {longest} samples; window length {window_len} required"
        )
    return signal.slice(start, stop), signal
