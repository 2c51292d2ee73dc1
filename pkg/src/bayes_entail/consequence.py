"""Consequence relations obtained by specialising the logical model.

* classical entailment, the brute-force reference relation;
* Bayesian classical entailment (uniform prior, ``mu = 1``, threshold 1);
* Bayesian paraconsistent entailment, the ``mu -> 1`` limit evaluated in
  closed form over the worlds that satisfy the most premises;
* preferential entailment over a strict order on worlds, and MAP entailment
  under an order-preserving prior in the same ``mu -> 1`` limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

from .logic import (Formula, PossibleWorld, WorldSpace, _truth,
                    max_support_worlds, models)
from .model import (UNDEFINED, LogicalModel, Number, WorldDistribution, _Undefined,
                    _coerce, _sum, _trusted_distribution, bayesian_entails,
                    check_probability, format_probability)


class ZeroMassSupport(ValueError):
    """All worlds satisfying the most premises have prior probability zero."""


class PreferenceError(ValueError):
    pass


@dataclass
class EntailmentVerdict:
    holds: bool
    probability: Number | _Undefined | None = None
    witness: tuple[PossibleWorld, ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {"holds": self.holds,
                     "probability": format_probability(self.probability)}
        p = self.probability
        out["probability_decimal"] = (
            None if p is None or p is UNDEFINED else float(p))
        out["witness"] = (None if self.witness is None
                          else [w.bitstring for w in self.witness])
        return out


# ---------------------------------------------------------------------------
# Classical and Bayesian classical entailment
# ---------------------------------------------------------------------------


def classical_entails(kb: Iterable[Formula], f: Formula, space: WorldSpace) -> bool:
    """``f`` holds in every model of ``kb``; vacuously true without models."""
    return all(_truth(f, w) for w in models(kb, space))


def bayesian_classical_entails(kb: Iterable[Formula], f: Formula, space: WorldSpace) -> bool:
    model = LogicalModel(WorldDistribution.uniform(space), mu=1)
    return bayesian_entails(kb, f, 1, model)


# ---------------------------------------------------------------------------
# The mu -> 1 limit
# ---------------------------------------------------------------------------


def limit_posterior(kb: Iterable[Formula], prior: WorldDistribution
                    ) -> WorldDistribution | _Undefined:
    """lim_{mu -> 1} p(W | kb).

    Dividing numerator and denominator of the posterior by the lowest power of
    ``1 - mu`` leaves only the worlds of :func:`max_support_worlds` in the
    limit, each weighted by its prior mass.  Undefined when that mass is 0.
    """
    support = {w.index for w in max_support_worlds(kb, prior.space)}
    weights = [p if i in support else 0 * p for i, p in enumerate(prior.phi)]
    z = _sum(weights)
    if z == 0:
        return UNDEFINED
    return _trusted_distribution(prior.space, tuple(x / z for x in weights), prior.exact)


def paraconsistent_predictive(kb: Iterable[Formula], f: Formula,
                              prior: WorldDistribution | WorldSpace) -> Number:
    """lim_{mu -> 1} p(f | kb) under ``prior`` (uniform if a space is given).

    Equals the prior mass of the max-support worlds satisfying ``f`` divided
    by the prior mass of all max-support worlds.
    """
    if isinstance(prior, WorldSpace):
        prior = WorldDistribution.uniform(prior)
    post = limit_posterior(kb, prior)
    if post is UNDEFINED:
        raise ZeroMassSupport("max-support worlds carry no prior mass")
    return _sum(p for w, p in zip(post.space, post.phi) if _truth(f, w))


def paraconsistent_entails(kb: Iterable[Formula], f: Formula, theta,
                           prior: WorldDistribution | WorldSpace) -> EntailmentVerdict:
    check_probability(theta, "theta")
    if isinstance(prior, WorldSpace):
        prior = WorldDistribution.uniform(prior)
    kb = tuple(kb)
    p = paraconsistent_predictive(kb, f, prior)
    return EntailmentVerdict(holds=p >= _coerce(theta, prior.exact), probability=p,
                             witness=max_support_worlds(kb, prior.space))


# ---------------------------------------------------------------------------
# Preferential structures
# ---------------------------------------------------------------------------


class PreferentialStructure:
    """Worlds with a strict preference ``w1 > w2`` ("w1 is more normal").

    ``prefers`` holds pairs of world indices.  The relation must be
    irreflexive and transitive; use :meth:`from_edges` to close an arbitrary
    acyclic edge list.  Finite strict orders are smooth, so every non-empty
    set of worlds has a maximal element.
    """

    def __init__(self, space: WorldSpace, prefers: Iterable[tuple[int, int]]):
        self.space = space
        self.prefers = frozenset((int(a), int(b)) for a, b in prefers)
        n = len(space)
        for a, b in self.prefers:
            if not (0 <= a < n and 0 <= b < n):
                raise PreferenceError(f"world index out of range in ({a}, {b})")
            if a == b:
                raise PreferenceError(f"relation is not irreflexive at world {a}")
        above: dict[int, set[int]] = {}
        for a, b in self.prefers:
            above.setdefault(b, set()).add(a)
        for a, b in self.prefers:
            for c in above.get(a, ()):
                if (c, b) not in self.prefers:
                    raise PreferenceError(f"relation is not transitive: missing ({c}, {b})")
        self._below = {i: {b for a, b in self.prefers if a == i} for i in range(n)}

    @classmethod
    def from_edges(cls, space: WorldSpace, edges: Iterable[tuple[int, int]]
                   ) -> "PreferentialStructure":
        """Transitive closure of ``edges``; raises on cycles."""
        n = len(space)
        succ: dict[int, set[int]] = {i: set() for i in range(n)}
        for a, b in edges:
            succ[a].add(b)
        closure = set()
        for start in range(n):
            stack = list(succ[start])
            seen: set[int] = set()
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(succ[v])
            if start in seen:
                raise PreferenceError(f"preference cycle through world {space[start].bitstring}")
            closure.update((start, v) for v in seen)
        return cls(space, closure)

    @classmethod
    def total(cls, space: WorldSpace, ranking: Sequence[int]) -> "PreferentialStructure":
        """Total order with ``ranking[0]`` most preferred."""
        return cls(space, ((ranking[i], ranking[j])
                           for i in range(len(ranking)) for j in range(i + 1, len(ranking))))

    def prefers_over(self, w1: PossibleWorld, w2: PossibleWorld) -> bool:
        return (w1.index, w2.index) in self.prefers

    def below(self, w: PossibleWorld | int) -> frozenset[int]:
        i = w if isinstance(w, int) else w.index
        return frozenset(self._below[i])

    def maximal(self, worlds: Iterable[PossibleWorld]) -> tuple[PossibleWorld, ...]:
        worlds = tuple(worlds)
        idx = {w.index for w in worlds}
        return tuple(w for w in worlds
                     if not any((v, w.index) in self.prefers for v in idx))

    def is_total(self) -> bool:
        n = len(self.space)
        return all((a, b) in self.prefers or (b, a) in self.prefers
                   for a in range(n) for b in range(a + 1, n))

    def __repr__(self) -> str:
        return f"PreferentialStructure({self.space!r}, {len(self.prefers)} pairs)"


def read_preference_file(path: str | Path, space: WorldSpace) -> PreferentialStructure:
    """Lines ``<bits> > <bits>``; ``#`` comments and blank lines ignored."""
    edges = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        left, sep, right = line.partition(">")
        if not sep:
            raise PreferenceError(f"{path}: line {lineno}: expected '<world> > <world>'")
        try:
            edges.append((space.world(left.strip()).index, space.world(right.strip()).index))
        except ValueError as exc:
            raise PreferenceError(f"{path}: line {lineno}: {exc}") from None
    return PreferentialStructure.from_edges(space, edges)


RankWeighting = Literal["count", "height"]


def prior_from_preference(ps: PreferentialStructure, scheme: RankWeighting = "count",
                          exact: bool = True) -> WorldDistribution:
    """An order-preserving prior: ``w1 > w2`` implies ``phi(w1) >= phi(w2)``.

    ``count`` weights each world by one plus the number of worlds below it;
    ``height`` by one plus the length of the longest descending chain from
    it.  Both are strictly increasing along every chain (if ``v > w`` then
    everything below ``w`` is also below ``v``), and both give the uniform
    prior for the empty relation.
    """
    n = len(ps.space)
    if scheme == "count":
        weights = [1 + len(ps._below[i]) for i in range(n)]
    elif scheme == "height":
        height: dict[int, int] = {}
        # process worlds in increasing number of successors: all of a world's
        # successors have strictly fewer successors, so they are done first
        for i in sorted(range(n), key=lambda i: len(ps._below[i])):
            height[i] = 1 + max((height[j] for j in ps._below[i]), default=0)
        weights = [height[i] for i in range(n)]
    else:
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    return WorldDistribution.from_weights(ps.space, weights, exact=exact)


def is_order_preserving(prior: WorldDistribution, ps: PreferentialStructure) -> bool:
    return all(prior.phi[a] >= prior.phi[b] for a, b in ps.prefers)


def preferential_entails(kb: Iterable[Formula], f: Formula, ps: PreferentialStructure) -> bool:
    """``f`` holds in every maximal model of ``kb``; vacuous without models."""
    return all(_truth(f, w) for w in ps.maximal(models(kb, ps.space)))


def map_worlds_wrt(kb: Iterable[Formula], ps: PreferentialStructure,
                   prior: WorldDistribution | None = None) -> tuple[PossibleWorld, ...]:
    """Maximisers of the ``mu -> 1`` posterior under an order-preserving prior."""
    if prior is None:
        prior = prior_from_preference(ps)
    elif not is_order_preserving(prior, ps):
        raise PreferenceError("prior does not preserve the preference order")
    post = limit_posterior(kb, prior)
    if post is UNDEFINED:
        return ()
    return post.argmax()


def map_entails_wrt(kb: Iterable[Formula], f: Formula, ps: PreferentialStructure,
                    prior: WorldDistribution | None = None) -> bool:
    """MAP entailment with respect to ``ps`` (default prior: ``count`` scheme)."""
    return any(_truth(f, w) for w in map_worlds_wrt(kb, ps, prior))


__all__ = [
    "EntailmentVerdict", "PreferenceError", "PreferentialStructure", "ZeroMassSupport",
    "bayesian_classical_entails", "classical_entails", "is_order_preserving",
    "limit_posterior", "map_entails_wrt", "map_worlds_wrt", "paraconsistent_entails",
    "paraconsistent_predictive", "preferential_entails", "prior_from_preference",
    "read_preference_file",
]
