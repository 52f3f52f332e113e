"""Event-record CSV: the on-disk trial format.

Schema (bit-exact): header ``trial,a,b,A1,A2,B1,B2``; one row per trial;
integer fields; `a`, `b` in {1,2}; observable columns in {-1,0,1};
comma-separated, ``\\n``-terminated rows, no quoting. Each row must satisfy
the trial structure: on each side exactly the selected observable is nonzero.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import CsvSchemaError, EmptyStreamError
from .montecarlo import Trials

CSV_HEADER = ("trial", "a", "b", "A1", "A2", "B1", "B2")


def write_event_csv(path: str | Path, trials: Trials) -> None:
    """Write trials in the schema above; output bytes depend only on the rows."""
    data = np.column_stack(
        [
            trials.trial,
            trials.a.astype(np.int64),
            trials.b.astype(np.int64),
            trials.A1.astype(np.int64),
            trials.A2.astype(np.int64),
            trials.B1.astype(np.int64),
            trials.B2.astype(np.int64),
        ]
    )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        np.savetxt(fh, data, fmt="%d", delimiter=",", newline="\n")


def _row_error(row_number: int, message: str) -> CsvSchemaError:
    return CsvSchemaError(f"row {row_number}: {message}")


def read_event_csv(path: str | Path) -> Trials:
    """Read and validate an event CSV.

    Raises :class:`CsvSchemaError` naming the first offending row (1-based,
    counting the header as row 1) and :class:`EmptyStreamError` for a file
    with no data rows.
    """
    columns: list[list[int]] = [[] for _ in CSV_HEADER]
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyStreamError(f"{path}: empty file") from None
        if tuple(header) != CSV_HEADER:
            raise CsvSchemaError(
                f"bad header {header!r}, expected {','.join(CSV_HEADER)}"
            )
        row_number = 1
        for row in reader:
            row_number += 1
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise _row_error(row_number, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
            try:
                values = [int(field) for field in row]
            except ValueError:
                raise _row_error(row_number, f"non-integer field in {row!r}") from None
            trial, a, b, a1, a2, b1, b2 = values
            if trial < 0:
                raise _row_error(row_number, f"trial index must be nonnegative, got {trial}")
            if a not in (1, 2) or b not in (1, 2):
                raise _row_error(row_number, f"settings must be 1 or 2, got a={a}, b={b}")
            for name, v in (("A1", a1), ("A2", a2), ("B1", b1), ("B2", b2)):
                if v not in (-1, 0, 1):
                    raise _row_error(row_number, f"{name} must be -1, 0 or 1, got {v}")
            selected_a, other_a = (a1, a2) if a == 1 else (a2, a1)
            selected_b, other_b = (b1, b2) if b == 1 else (b2, b1)
            if selected_a == 0 or other_a != 0:
                raise _row_error(
                    row_number,
                    f"A-side values ({a1},{a2}) inconsistent with a={a}: "
                    "the selected observable must be nonzero and the other zero",
                )
            if selected_b == 0 or other_b != 0:
                raise _row_error(
                    row_number,
                    f"B-side values ({b1},{b2}) inconsistent with b={b}",
                )
            for col, v in zip(columns, values):
                col.append(v)

    if not columns[0]:
        raise EmptyStreamError(f"{path}: no data rows")
    return Trials(
        trial=np.array(columns[0], dtype=np.int64),
        a=np.array(columns[1], dtype=np.int8),
        b=np.array(columns[2], dtype=np.int8),
        A1=np.array(columns[3], dtype=np.int8),
        A2=np.array(columns[4], dtype=np.int8),
        B1=np.array(columns[5], dtype=np.int8),
        B2=np.array(columns[6], dtype=np.int8),
    )


def csv_bytes(trials: Trials) -> bytes:
    """The exact bytes :func:`write_event_csv` would produce."""
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    data = np.column_stack([trials.trial] + [getattr(trials, c).astype(np.int64) for c in CSV_HEADER[1:]])
    np.savetxt(buf, data, fmt="%d", delimiter=",", newline="\n")
    return buf.getvalue().encode("ascii")
