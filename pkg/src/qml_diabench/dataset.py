"""Loading, cleaning, standardizing and splitting the Pima diabetes table."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    AllMissingColumn,
    DegenerateColumn,
    MalformedRow,
    MissingFile,
    RatioOutOfRange,
    SchemaMismatch,
    SingleClass,
)

PIMA_COLUMNS = (
    "Pregnancies",
    "Glucose",
    "BloodPressure",
    "SkinThickness",
    "Insulin",
    "BMI",
    "DiabetesPedigreeFunction",
    "Age",
    "Outcome",
)
# zero is physiologically impossible in these columns, so it marks a missing value
IMPUTED_COLUMNS = ("Glucose", "BloodPressure", "SkinThickness", "Insulin", "BMI")

VARIANCE_FLOOR = 1e-12


def bundled_csv_path() -> Path:
    """Path of the Pima CSV shipped with the package."""
    return Path(str(resources.files("qml_diabench") / "data" / "diabetes.csv"))


@dataclass(frozen=True)
class RawTable:
    column_names: list[str]
    rows: np.ndarray  # shape (n_rows, n_columns)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float).reshape(-1, len(self.column_names))
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    std_devs: np.ndarray
    degenerate: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.degenerate is None:
            object.__setattr__(self, "degenerate", np.zeros(len(self.means), dtype=bool))


@dataclass(frozen=True)
class Split:
    train_X: np.ndarray
    test_X: np.ndarray
    train_y: np.ndarray
    test_y: np.ndarray
    train_idx: np.ndarray
    test_idx: np.ndarray
    seed: int
    ratio: float


def load_csv(path) -> RawTable:
    """Parse a headed, comma-delimited numeric CSV (LF or CRLF, optional BOM)."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRow(1, "missing header") from None
        header = [h.strip() for h in header]
        rows = []
        for record in reader:
            line_no = reader.line_num
            if not record or all(not v.strip() for v in record):
                continue
            if len(record) != len(header):
                raise MalformedRow(line_no, f"expected {len(header)} values, got {len(record)}")
            try:
                rows.append([float(v) for v in record])
            except ValueError as exc:
                raise MalformedRow(line_no, str(exc)) from None
    return RawTable(header, np.array(rows, dtype=float).reshape(-1, len(header)))


def clean_impute(table: RawTable) -> tuple[np.ndarray, np.ndarray]:
    """Replace impossible zeros with the column median of its non-zero values.

    Only Glucose, BloodPressure, SkinThickness, Insulin and BMI are imputed;
    Pregnancies and Age keep their zeros. Returns ``(X, y)`` with ``X`` of
    shape (N, 8) and integer labels ``y``.
    """
    if tuple(table.column_names) != PIMA_COLUMNS:
        raise SchemaMismatch(f"expected columns {PIMA_COLUMNS}, got {tuple(table.column_names)}")
    rows = table.rows
    labels = rows[:, -1]
    if not np.all((labels == 0) | (labels == 1)):
        raise SchemaMismatch("Outcome column must contain only 0 and 1")
    X = rows[:, :-1].copy()
    for name in IMPUTED_COLUMNS:
        j = PIMA_COLUMNS.index(name)
        col = X[:, j]
        missing = col == 0
        if not missing.any():
            continue
        if missing.all():
            raise AllMissingColumn(f"column {name} is entirely zero")
        col[missing] = np.median(col[~missing])
    if not np.all(np.isfinite(X)):
        raise SchemaMismatch("non-finite feature values")
    return X, labels.astype(int)


def fit_standardizer(X) -> Standardizer:
    """Per-column z-score using the sample (N-1) standard deviation.

    Columns whose variance falls under ``VARIANCE_FLOOR`` are flagged with a
    :class:`DegenerateColumn` warning and will only be centered.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need a 2-D matrix with at least two rows")
    means = X.mean(axis=0)
    var = X.var(axis=0, ddof=1)
    degenerate = var < VARIANCE_FLOOR
    std = np.where(degenerate, 1.0, np.sqrt(var))
    if degenerate.any():
        warnings.warn(
            f"degenerate columns {np.flatnonzero(degenerate).tolist()} are centered only",
            DegenerateColumn,
            stacklevel=2,
        )
    return Standardizer(means, std, degenerate)


def apply_standardizer(s: Standardizer, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return (X - s.means) / s.std_devs


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(X, y, ratio: float = 0.8, seed: int = 0) -> Split:
    """Seeded stratified train/test split; per-class train counts are round(ratio * size)."""
    if not 0.0 < ratio < 1.0:
        raise RatioOutOfRange(f"ratio must lie in (0, 1), got {ratio}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y have different lengths")
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClass("stratified split needs both classes")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in classes:
        idx = np.flatnonzero(y == c)
        if len(idx) < 2:
            raise SingleClass(f"class {c} has fewer than 2 members")
        idx = rng.permutation(idx)
        n_train = _round_half_up(ratio * len(idx))
        train.append(idx[:n_train])
        test.append(idx[n_train:])
    train_idx = np.sort(np.concatenate(train))
    test_idx = np.sort(np.concatenate(test))
    return Split(
        train_X=X[train_idx],
        test_X=X[test_idx],
        train_y=y[train_idx],
        test_y=y[test_idx],
        train_idx=train_idx,
        test_idx=test_idx,
        seed=seed,
        ratio=ratio,
    )
