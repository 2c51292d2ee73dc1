"""CSV ingestion, categorical encoding and train/cv/test splitting.

Every attribute value becomes a Boolean atom ``Column=value``.  Values are
mapped to integer codes per column in first-appearance order; missing
values become the category ``?``.  Continuous columns can be binned first
(fixed-width or quantile bins), and the resolved bin edges are stored with
the schema so that later files are binned identically.
"""

from __future__ import annotations

import csv
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MISSING = "?"
UNSEEN = -1


class DataError(ValueError):
    pass


class MissingColumn(DataError):
    pass


class MalformedRow(DataError):
    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


class EmptyDataset(DataError):
    pass


class DatasetTooSmall(DataError):
    pass


@dataclass
class Binning:
    """Maps a numeric value to ``labels[bisect_right(edges, value)]``."""

    edges: list[float]
    labels: list[str]

    def __post_init__(self):
        if len(self.labels) != len(self.edges) + 1:
            raise ValueError("need exactly one more label than edges")

    def apply(self, raw: str) -> str:
        try:
            v = float(raw)
        except ValueError:
            return raw
        if math.isnan(v):
            return MISSING
        return self.labels[bisect_right(self.edges, v)]

    def to_dict(self) -> dict:
        return {"edges": self.edges, "labels": self.labels}


def _fmt(x: float) -> str:
    return f"{x:g}"


def resolve_binning(rule: dict, values: Sequence[str]) -> Binning:
    """Turn a declarative rule into concrete edges.

    Rules: ``{"edges": [...], "labels": [...]}`` (already resolved),
    ``{"width": w, "start": s, "count": k}`` for ``k`` equal-width bins with
    the last one open-ended, or ``{"quantiles": q}`` for ``q`` bins with edges
    at the empirical quantiles of ``values``.
    """
    if "edges" in rule:
        return Binning(list(map(float, rule["edges"])), list(rule["labels"]))
    if "width" in rule:
        w, start, k = float(rule["width"]), float(rule.get("start", 0)), int(rule["count"])
        edges = [start + w * i for i in range(1, k)]
        bounds = [start] + edges
        labels = [f"{_fmt(lo)}_{_fmt(lo + w)}" for lo in bounds[:-1]]
        labels.append(f"{_fmt(bounds[-1])}_")
        return Binning(edges, labels)
    if "quantiles" in rule:
        q = int(rule["quantiles"])
        nums = np.array([float(v) for v in values if _is_number(v)])
        if nums.size == 0:
            raise DataError("cannot compute quantile bins without numeric values")
        edges = sorted(set(np.quantile(nums, [i / q for i in range(1, q)]).tolist()))
        return Binning(edges, [f"q{i + 1}" for i in range(len(edges) + 1)])
    raise DataError(f"unrecognised binning rule {rule!r}")


def _is_number(v: str) -> bool:
    try:
        return not math.isnan(float(v))
    except ValueError:
        return False


@dataclass
class Schema:
    """Which column is the goal, which to drop, and how to bin."""

    goal: str
    positive: str = "1"
    drop: list[str] = field(default_factory=list)
    id_column: str | None = None
    bins: dict[str, dict] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "Schema":
        if "goal" not in d:
            raise DataError("schema needs a 'goal' column")
        return cls(goal=d["goal"], positive=str(d.get("positive", "1")),
                   drop=list(d.get("drop", [])), id_column=d.get("id"),
                   bins=dict(d.get("bins", {})))

    @classmethod
    def load(cls, path: str | Path) -> "Schema":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {"goal": self.goal, "positive": self.positive, "drop": self.drop,
                "id": self.id_column, "bins": self.bins}


TITANIC_SCHEMA = Schema(
    goal="Survived",
    positive="1",
    drop=["Name"],
    id_column="PassengerId",
    bins={"Age": {"width": 10, "start": 0, "count": 8},
          "Fare": {"quantiles": 4}},
)


@dataclass(frozen=True)
class DataRow:
    """One datum: its attribute atoms and its goal atom."""

    attributes: tuple[str, ...]
    goal: str


@dataclass
class Dataset:
    """Integer-coded rows sharing one set of per-column value maps.

    ``X[i, j]`` is the code of row ``i`` in attribute column ``columns[j]``;
    ``y[i]`` is the goal code.  ``values[col][code]`` recovers the raw value.
    """

    columns: list[str]
    goal: str
    X: np.ndarray
    y: np.ndarray
    values: dict[str, list[str]]
    ids: list[str]
    schema: Schema

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, idx: Iterable[int]) -> "Dataset":
        idx = np.asarray(list(idx), dtype=np.intp)
        return Dataset(self.columns, self.goal, self.X[idx], self.y[idx], self.values,
                       [self.ids[i] for i in idx], self.schema)

    def atom(self, column: str, code: int) -> str:
        return f"{column}={self.values[column][code]}" if code >= 0 else f"{column}=<unseen>"

    def row(self, i: int) -> DataRow:
        attrs = tuple(self.atom(c, int(v)) for c, v in zip(self.columns, self.X[i]))
        return DataRow(attrs, self.atom(self.goal, int(self.y[i])))

    @property
    def positive_code(self) -> int:
        try:
            return self.values[self.goal].index(self.schema.positive)
        except ValueError:
            return UNSEEN


def read_table(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Read a header-first CSV, checking every row has the header's width."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None
        rows = []
        for lineno, rec in enumerate(reader, 2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(header):
                raise MalformedRow(lineno, f"expected {len(header)} fields, got {len(rec)}")
            rows.append(dict(zip(header, rec)))
    return header, rows


def load_csv(path: str | Path, schema: Schema | None = None) -> Dataset:
    """Load and encode a CSV.

    Without a schema the Titanic layout is assumed.  Bin rules that need the
    data (quantiles) are resolved over this file and written back into the
    returned dataset's schema as explicit edges.
    """
    schema = schema or TITANIC_SCHEMA
    header, rows = read_table(path)
    if schema.goal not in header:
        raise MissingColumn(f"{path}: goal column {schema.goal!r} not found")
    for col in list(schema.drop) + list(schema.bins) + (
            [schema.id_column] if schema.id_column else []):
        if col not in header:
            raise MissingColumn(f"{path}: column {col!r} not found")
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    skip = set(schema.drop) | {schema.goal} | ({schema.id_column} if schema.id_column else set())
    columns = [h for h in header if h not in skip]
    resolved = {col: resolve_binning(rule, [r[col] for r in rows])
                for col, rule in schema.bins.items()}
    schema = Schema(schema.goal, schema.positive, list(schema.drop), schema.id_column,
                    {col: b.to_dict() for col, b in resolved.items()})
    values: dict[str, list[str]] = {c: [] for c in columns + [schema.goal]}
    X, y, ids = encode_rows(rows, columns, schema, values, extend=True, need_goal=True)
    return Dataset(columns, schema.goal, X, y, values, ids, schema)


def clean_value(col: str, raw: str | None, binning: dict[str, Binning]) -> str:
    v = (raw or "").strip()
    if v == "" or v.upper() in {"NA", "NAN"}:
        return MISSING
    if col in binning:
        return binning[col].apply(v)
    return v


def encode_rows(rows: Sequence[dict[str, str]], columns: Sequence[str], schema: Schema,
                values: dict[str, list[str]], extend: bool, need_goal: bool
                ) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Encode raw rows; ``extend`` adds new values to ``values``, else they
    map to :data:`UNSEEN`."""
    binning = {c: Binning(**b) for c, b in schema.bins.items()}
    lookup = {c: {v: i for i, v in enumerate(vals)} for c, vals in values.items()}

    def code(col: str, raw: str | None) -> int:
        v = clean_value(col, raw, binning)
        table = lookup[col]
        if v not in table:
            if not extend:
                return UNSEEN
            table[v] = len(values[col])
            values[col].append(v)
        return table[v]

    X = np.empty((len(rows), len(columns)), dtype=np.int64)
    y = np.full(len(rows), UNSEEN, dtype=np.int64)
    ids = []
    for i, row in enumerate(rows):
        for j, col in enumerate(columns):
            if col not in row:
                raise MissingColumn(f"column {col!r} missing")
            X[i, j] = code(col, row[col])
        if schema.goal in row:
            y[i] = code(schema.goal, row[schema.goal])
        elif need_goal:
            raise MissingColumn(f"goal column {schema.goal!r} missing")
        ids.append(row.get(schema.id_column, str(i)) if schema.id_column else str(i))
    return X, y, ids


@dataclass(frozen=True)
class SplitConfig:
    train: float = 0.6
    cv: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.train and 0 <= self.cv and self.train + self.cv < 1):
            raise ValueError("fractions must be positive and leave room for a test set")

    @property
    def test(self) -> float:
        return 1.0 - self.train - self.cv


def split_sizes(n: int, cfg: SplitConfig) -> tuple[int, int, int]:
    n_train = int(math.floor(cfg.train * n + 1e-9))
    n_cv = int(math.floor(cfg.cv * n + 1e-9))
    return n_train, n_cv, n - n_train - n_cv


def split(ds: Dataset, cfg: SplitConfig = SplitConfig()) -> tuple[Dataset, Dataset, Dataset]:
    """Random disjoint train/cv/test partition, reproducible from ``cfg.seed``."""
    n = len(ds)
    if n < 5:
        raise DatasetTooSmall(f"need at least 5 rows to split, got {n}")
    n_train, n_cv, _ = split_sizes(n, cfg)
    perm = np.random.default_rng(cfg.seed).permutation(n)
    return (ds.subset(perm[:n_train]), ds.subset(perm[n_train:n_train + n_cv]),
            ds.subset(perm[n_train + n_cv:]))
