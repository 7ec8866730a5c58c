"""CSV dataset ingestion and emission.

Format: comma-separated, mandatory header, UTF-8, '.' decimal separator.
One column holds the class labels (arbitrary strings); every other column
must be numeric and finite.  Numbers are written with full round-trip
precision so write/read cycles are exact.
"""

import csv
from dataclasses import dataclass

import numpy as np


class CsvParseError(ValueError):
    """Parse failure with the offending row/column named."""


@dataclass
class Dataset:
    X: np.ndarray
    labels: np.ndarray          # dtype=object, original label strings
    feature_names: list
    label_name: str

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def read_csv(path, label_column: str | None = None) -> Dataset:
    """Read a dataset; the named column (default: the last) is the label."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: empty file, header row required")
        if label_column is None:
            label_idx = len(header) - 1
        else:
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise CsvParseError(
                    f"{path}: no column named {label_column!r} in header")
        feature_idx = [i for i in range(len(header)) if i != label_idx]
        rows, labels = [], []
        for rownum, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CsvParseError(
                    f"{path}: row {rownum} has {len(row)} fields, "
                    f"expected {len(header)}")
            lab = row[label_idx].strip()
            if lab == "":
                raise CsvParseError(
                    f"{path}: row {rownum} is missing a label")
            labels.append(lab)
            vals = []
            for i in feature_idx:
                try:
                    v = float(row[i])
                except ValueError:
                    raise CsvParseError(
                        f"{path}: row {rownum}, column {header[i]!r}: "
                        f"non-numeric value {row[i]!r}")
                if not np.isfinite(v):
                    raise CsvParseError(
                        f"{path}: row {rownum}, column {header[i]!r}: "
                        f"non-finite value {row[i]!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise CsvParseError(f"{path}: no data rows")
    return Dataset(X=np.asarray(rows, dtype=float),
                   labels=np.asarray(labels, dtype=object),
                   feature_names=[header[i] for i in feature_idx],
                   label_name=header[label_idx])


def fmt(value) -> str:
    """Round-trip text for a number; integers stay unpadded."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_dataset(path, X, labels, feature_names=None,
                  label_name: str = "label"):
    X = np.asarray(X, dtype=float)
    if feature_names is None:
        feature_names = [f"x{i + 1}" for i in range(X.shape[1])]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(feature_names) + [label_name])
        for row, lab in zip(X, labels):
            writer.writerow([fmt(v) for v in row] + [str(lab)])


def write_rows(path, header, rows):
    """Generic CSV emission with deterministic number formatting."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (int, float, np.number))
                             else str(v) for v in row])
