"""Bayesian predictive entailment over data worlds.

Each training row is a possible world in which exactly its own atoms
``Column=value`` are true.  The prior is the empirical distribution of
rows; a query's attributes are noisy observations of the world with
parameter ``mu``, so for a query ``attrs`` and goal atom ``g``::

    p(g | attrs) = sum_w p(g|w) prod_j p(attrs_j|w) p(w) / sum_w prod_j p(attrs_j|w) p(w)

where each factor is ``mu`` on a match and ``1 - mu`` on a mismatch.  The
product only depends on the number of matching columns, so a query costs
one pass over the distinct training worlds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..model import UNDEFINED, _Undefined, check_probability
from .data import UNSEEN, Dataset, DataError, Schema, encode_rows, read_table

DEFAULT_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
MODEL_FORMAT = "bayes-entail/trained-model"
MODEL_VERSION = 1


class UnknownColumn(DataError, KeyError):
    def __str__(self) -> str:
        return f"unknown column {self.args[0]!r}"


class EmptyGrid(ValueError):
    pass


@dataclass
class DataWorlds:
    """Distinct training rows with their multiplicities, in first-seen order."""

    X: np.ndarray
    y: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def masses(self) -> np.ndarray:
        return self.counts / self.total

    def exact_masses(self) -> list[Fraction]:
        return [Fraction(int(c), self.total) for c in self.counts]

    def __len__(self) -> int:
        return len(self.counts)


def fit_worlds(train: Dataset) -> DataWorlds:
    """Empirical world distribution: mass of a distinct row = multiplicity / n."""
    if len(train) == 0:
        raise DataError("cannot fit worlds on an empty training set")
    order: dict[tuple, int] = {}
    counts: list[int] = []
    for xi, yi in zip(map(tuple, train.X.tolist()), train.y.tolist()):
        key = xi + (yi,)
        if key in order:
            counts[order[key]] += 1
        else:
            order[key] = len(counts)
            counts.append(1)
    keys = np.array(list(order), dtype=np.int64).reshape(len(order), -1)
    return DataWorlds(keys[:, :-1].copy(), keys[:, -1].copy(), np.array(counts, dtype=np.int64))


def likelihood_on_row(atom: str, row: Mapping[str, str], mu: float) -> float:
    """p(atom | world row): ``mu`` if the row has that value, else ``1 - mu``."""
    column, sep, value = atom.partition("=")
    if not sep:
        raise ValueError(f"atom {atom!r} is not of the form Column=value")
    if column not in row:
        raise UnknownColumn(column)
    return mu if row[column] == value else 1 - mu


def _weights(worlds: DataWorlds, x: np.ndarray, mu: float) -> np.ndarray:
    d = worlds.X.shape[1]
    matches = (worlds.X == x).sum(axis=1)
    # mu**k * (1-mu)**(d-k) for k = 0..d, with 0**0 == 1
    table = np.array([mu ** k * (1 - mu) ** (d - k) for k in range(d + 1)])
    return worlds.masses * table[matches]


def goal_probability(worlds: DataWorlds, x: np.ndarray, goal_code: int, mu: float
                     ) -> float | _Undefined:
    """p(goal = goal_code | attributes x), or UNDEFINED when the evidence has
    zero probability.  Sums are correctly rounded (``math.fsum``), so the
    result does not depend on world order."""
    w = _weights(worlds, np.asarray(x), mu)
    z = math.fsum(w)
    if z == 0:
        return UNDEFINED
    lik = np.where(worlds.y == goal_code, mu, 1 - mu)
    return math.fsum(w * lik) / z


def correct_count(worlds: DataWorlds, data: Dataset, mu: float, theta: float = 0.5) -> int:
    """Rows whose true goal is entailed by their attributes at ``theta``."""
    hits = 0
    for x, g in zip(data.X, data.y):
        p = goal_probability(worlds, x, int(g), mu)
        hits += p is not UNDEFINED and p >= theta
    return hits


def select_mu(worlds: DataWorlds, cv: Dataset, grid: Sequence[float] = DEFAULT_GRID,
              theta: float = 0.5) -> tuple[float, dict[float, int]]:
    """Grid value maximising CV correct count; ties go to the largest ``mu``."""
    if not len(grid):
        raise EmptyGrid("mu grid is empty")
    scores = {float(mu): correct_count(worlds, cv, float(mu), theta) for mu in grid}
    best = max(scores.items(), key=lambda kv: (kv[1], kv[0]))
    return best[0], scores


@dataclass
class TrainedModel:
    schema: Schema
    columns: list[str]
    values: dict[str, list[str]]
    worlds: DataWorlds
    mu_hat: float

    @classmethod
    def fit(cls, train: Dataset, cv: Dataset | None = None,
            grid: Sequence[float] = DEFAULT_GRID, mu: float | None = None) -> "TrainedModel":
        """Fit worlds on ``train``; pick ``mu`` on ``cv`` unless given."""
        worlds = fit_worlds(train)
        if mu is None:
            if cv is None or len(cv) == 0:
                raise DataError("need a cross-validation set or an explicit mu")
            mu, _ = select_mu(worlds, cv, grid)
        check_probability(mu, "mu")
        values = {k: list(v) for k, v in train.values.items()}
        return cls(train.schema, list(train.columns), values, worlds, float(mu))

    @property
    def goal(self) -> str:
        return self.schema.goal

    @property
    def positive_code(self) -> int:
        try:
            return self.values[self.goal].index(self.schema.positive)
        except ValueError:
            return UNSEEN

    def encode(self, row: Mapping[str, str]) -> np.ndarray:
        X, _, _ = encode_rows([dict(row)], self.columns, self.schema,
                              {k: list(v) for k, v in self.values.items()},
                              extend=False, need_goal=False)
        return X[0]

    def probability(self, x: np.ndarray | Mapping[str, str], goal_code: int | None = None
                    ) -> float | _Undefined:
        if isinstance(x, Mapping):
            x = self.encode(x)
        code = self.positive_code if goal_code is None else goal_code
        return goal_probability(self.worlds, x, code, self.mu_hat)

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "schema": self.schema.to_dict(),
            "columns": self.columns,
            "values": self.values,
            "worlds": self.worlds.X.tolist(),
            "goals": self.worlds.y.tolist(),
            "counts": self.worlds.counts.tolist(),
            "mu_hat": self.mu_hat,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        if d.get("format") != MODEL_FORMAT:
            raise DataError("not a trained-model file")
        if d.get("version") != MODEL_VERSION:
            raise DataError(f"unsupported model version {d.get('version')!r}")
        ncol = len(d["columns"])
        worlds = DataWorlds(np.array(d["worlds"], dtype=np.int64).reshape(-1, ncol),
                            np.array(d["goals"], dtype=np.int64),
                            np.array(d["counts"], dtype=np.int64))
        return cls(Schema.from_dict(d["schema"]), list(d["columns"]),
                   {k: list(v) for k, v in d["values"].items()}, worlds, float(d["mu_hat"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TrainedModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def encode_csv(self, path: str | Path) -> Dataset:
        """Encode a CSV with this model's value maps (unseen values never match)."""
        _, rows = read_table(path)
        values = {k: list(v) for k, v in self.values.items()}
        X, y, ids = encode_rows(rows, self.columns, self.schema, values,
                                extend=False, need_goal=False)
        return Dataset(self.columns, self.goal, X, y, values, ids, self.schema)


def predict(model: TrainedModel, attrs: np.ndarray | Mapping[str, str], theta: float = 0.5
            ) -> tuple[bool, float | _Undefined]:
    """Verdict and probability for the positive goal given ``attrs``."""
    check_probability(theta, "theta")
    p = model.probability(attrs)
    return (p is not UNDEFINED and p >= theta), p
