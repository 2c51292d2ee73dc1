"""Random formulas, priors and preference orders for the invariant suites."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .consequence import PreferentialStructure
from .logic import (And, Atom, Formula, Iff, ImpliedBy, Implies, Not, Or, WorldSpace,
                    models)
from .model import WorldDistribution

_BINARY = (And, Or, Implies, ImpliedBy, Iff)


def random_formula(rng: random.Random, atoms: Sequence[str], depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return Atom(rng.choice(atoms))
    if rng.random() < 0.25:
        return Not(random_formula(rng, atoms, depth - 1))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))


def random_kb(rng: random.Random, atoms: Sequence[str], max_formulas: int = 5,
              depth: int = 3, min_formulas: int = 0) -> list[Formula]:
    return [random_formula(rng, atoms, depth)
            for _ in range(rng.randint(min_formulas, max_formulas))]


def random_consistent_kb(rng: random.Random, space: WorldSpace, max_formulas: int = 5,
                         depth: int = 3) -> list[Formula]:
    atoms = space.signature.atoms
    while True:
        kb = random_kb(rng, atoms, max_formulas, depth)
        if models(kb, space):
            return kb


def random_space(rng: random.Random, max_atoms: int = 4, min_atoms: int = 1) -> WorldSpace:
    k = rng.randint(min_atoms, max_atoms)
    return WorldSpace.of(*"abcdefghij"[:k])


def random_prior(rng: random.Random, space: WorldSpace, positive: bool = False,
                 exact: bool = True) -> WorldDistribution:
    lo = 1 if positive else 0
    while True:
        weights = [rng.randint(lo, 9) for _ in space]
        if sum(weights):
            return WorldDistribution.from_weights(space, weights, exact=exact)


def random_mu(rng: random.Random, steps: int = 20) -> Fraction:
    return Fraction(rng.randint(0, steps), steps)


def random_preference(rng: random.Random, space: WorldSpace, total: bool = False,
                      density: float | None = None) -> PreferentialStructure:
    """Random strict partial order (or total order) compatible with a random ranking."""
    ranking = list(range(len(space)))
    rng.shuffle(ranking)
    if total:
        return PreferentialStructure.total(space, ranking)
    p = rng.random() if density is None else density
    edges = [(ranking[i], ranking[j]) for i in range(len(ranking))
             for j in range(i + 1, len(ranking)) if rng.random() < p]
    return PreferentialStructure.from_edges(space, edges)
