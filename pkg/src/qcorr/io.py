"""Two-column CSV input and output for paired samples."""

import csv
from pathlib import Path

import numpy as np

from qcorr.marginals import PairedSample


class DataError(ValueError):
    """Input file could not be turned into a valid paired sample."""


def _parse_row(row, lineno):
    if len(row) != 2:
        raise DataError(f"line {lineno}: expected 2 fields, found {len(row)}")
    try:
        return float(row[0]), float(row[1])
    except ValueError:
        raise DataError(f"line {lineno}: non-numeric field in {','.join(row)!r}") from None


def read_paired_csv(path, has_header=None):
    """Read ``x,y`` rows from a comma-separated UTF-8 file.

    ``has_header=None`` treats a first line as a header only when it does
    not parse as two numbers. Blank lines are skipped.
    """
    xs, ys = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if lineno == 1 and has_header is not False:
                if has_header:
                    continue
                try:
                    _parse_row(row, lineno)
                except DataError:
                    if len(row) == 2:
                        continue
                    raise
            x, y = _parse_row(row, lineno)
            xs.append(x)
            ys.append(y)
    if len(xs) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(xs)}")
    try:
        return PairedSample(xs, ys, meta={"source": str(path)})
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_columns(path, columns, header):
    """Write equal-length columns as CSV with full float precision."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_paired_csv(path, sample):
    write_columns(path, [sample.xs, sample.ys], ["x", "y"])
