"""Small synthetic categorical datasets with a learnable goal."""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import numpy as np

from bayes_entail.logic import Atom, WorldSpace
from bayes_entail.model import WorldDistribution

COLUMNS = ("Colour", "Size", "Shape", "Grade")
VALUES = {
    "Colour": ("red", "green", "blue"),
    "Size": ("S", "M", "L"),
    "Shape": ("round", "square"),
    "Grade": ("a", "b", "c", "d"),
}


def rows(n: int, seed: int = 0, noise: float = 0.1) -> list[dict[str, str]]:
    """Goal is 1 when Colour=red or Size=L (about 55% positive), flipped with
    probability ``noise``; Shape and Grade are irrelevant."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        r = {c: str(rng.choice(VALUES[c])) for c in COLUMNS}
        y = r["Colour"] == "red" or r["Size"] == "L"
        if rng.random() < noise:
            y = not y
        r = {"Id": str(i + 1), **r, "Label": str(int(y))}
        out.append(r)
    return out


def write_csv(path: Path, n: int, seed: int = 0, noise: float = 0.1) -> Path:
    data = rows(n, seed, noise)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(data[0]))
        w.writeheader()
        w.writerows(data)
    return path


SCHEMA = {"goal": "Label", "positive": "1", "id": "Id", "drop": [], "bins": {}}


def embed_as_worlds(train, exact: bool = False):
    """Enumerated-world version of a training set.

    One atom per (column, value) pair, including the goal column.  Each
    training row puts its mass on the world where exactly its own atoms are
    true.  Returns ``(space, prior, atom_of)`` where ``atom_of(col, code)``
    gives the package Atom for that value.
    """
    cols = list(train.columns) + [train.goal]
    names = [f"{c}={v}" for c in cols for v in train.values[c]]
    space = WorldSpace.of(*names)
    index = {n: i for i, n in enumerate(names)}
    mass = [Fraction(0)] * len(space)
    for x, y in zip(train.X, train.y):
        bits = [0] * len(names)
        for c, code in zip(cols, list(x) + [y]):
            bits[index[f"{c}={train.values[c][code]}"]] = 1
        mass[int("".join(map(str, bits)), 2)] += Fraction(1, len(train))
    phi = tuple(mass) if exact else tuple(float(m) for m in mass)
    prior = WorldDistribution(space, phi, exact=exact)

    def atom_of(col, code):
        return Atom(f"{col}={train.values[col][code]}")

    return space, prior, atom_of
