"""The probabilistic-logical model: a prior over worlds plus Bernoulli truth noise.

Every formula is an observed binary variable whose value agrees with its
classical truth value in the latent world with probability ``mu``.  Formulas
are conditionally independent given the world, so a knowledge base's
likelihood is a product with one factor per listed formula.

Two arithmetic modes are supported.  Exact mode (the default) keeps every
quantity a :class:`fractions.Fraction`; float mode uses Python floats summed
left to right in world-index order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Sequence, Union

from .logic import (Formula, KnowledgeBase, PossibleWorld, Signature, WorldSpace,
                    _truth)

Number = Union[Fraction, float]

FLOAT_TOL = 1e-12


class _Undefined:
    """Marker for a predictive probability whose normaliser is zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __str__(self) -> str:
        return "undefined"

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()


class DistributionError(ValueError):
    pass


def to_exact(x) -> Fraction:
    """Fraction for ``x``; floats are read through their shortest decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x).strip())


def _coerce(x, exact: bool) -> Number:
    return to_exact(x) if exact else float(x)


def check_probability(x, name: str = "value") -> None:
    if not 0 <= x <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")


@dataclass(frozen=True)
class WorldDistribution:
    """Categorical distribution ``phi`` over the worlds of ``space``."""

    space: WorldSpace
    phi: tuple[Number, ...]
    exact: bool = True

    def __post_init__(self):
        if len(self.phi) != len(self.space):
            raise DistributionError(
                f"expected {len(self.space)} probabilities, got {len(self.phi)}")
        phi = tuple(_coerce(p, self.exact) for p in self.phi)
        object.__setattr__(self, "phi", phi)
        for p in phi:
            if p < 0 or p > 1:
                raise DistributionError(f"probability {p} outside [0, 1]")
        total = _sum(phi)
        if self.exact and total != 1:
            raise DistributionError(f"probabilities sum to {total}, not 1")
        if not self.exact and abs(total - 1.0) > FLOAT_TOL:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def uniform(cls, space: WorldSpace, exact: bool = True) -> "WorldDistribution":
        n = len(space)
        p = Fraction(1, n) if exact else 1.0 / n
        return cls(space, (p,) * n, exact=exact)

    @classmethod
    def from_weights(cls, space: WorldSpace, weights: Sequence, exact: bool = True
                     ) -> "WorldDistribution":
        """Normalise non-negative ``weights`` (one per world)."""
        ws = [_coerce(w, exact) for w in weights]
        total = _sum(ws)
        if total <= 0:
            raise DistributionError("weights must have positive total")
        return cls(space, tuple(w / total for w in ws), exact=exact)

    def __getitem__(self, w: PossibleWorld | int) -> Number:
        return self.phi[w if isinstance(w, int) else w.index]

    def mass(self, worlds: Iterable[PossibleWorld]) -> Number:
        return _sum(self.phi[w.index] for w in worlds)

    def argmax(self) -> tuple[PossibleWorld, ...]:
        best = max(self.phi)
        return tuple(w for w, p in zip(self.space, self.phi) if p == best)

    def to_float(self) -> "WorldDistribution":
        if not self.exact:
            return self
        return WorldDistribution(self.space, tuple(float(p) for p in self.phi), exact=False)


def _sum(values: Iterable[Number]) -> Number:
    total: Number = 0
    for v in values:
        total += v
    return total


@dataclass(frozen=True)
class LogicalModel:
    """A prior over worlds paired with the noise parameter ``mu``."""

    prior: WorldDistribution
    mu: Number = 1

    def __post_init__(self):
        mu = _coerce(self.mu, self.prior.exact)
        check_probability(mu, "mu")
        object.__setattr__(self, "mu", mu)

    @property
    def exact(self) -> bool:
        return self.prior.exact

    @property
    def space(self) -> WorldSpace:
        return self.prior.space


# ---------------------------------------------------------------------------
# Likelihoods and probabilities
# ---------------------------------------------------------------------------


def likelihood(f: Formula, w: PossibleWorld, mu: Number) -> Number:
    """p(f = 1 | w): ``mu`` when ``f`` is true at ``w``, else ``1 - mu``."""
    return mu if _truth(f, w) else 1 - mu


def set_likelihood(kb: Iterable[Formula], w: PossibleWorld, mu: Number) -> Number:
    """Product of :func:`likelihood` over every occurrence in ``kb``."""
    out: Number = 1 if not isinstance(mu, float) else 1.0
    for f in kb:
        out *= likelihood(f, w, mu)
    return out


def marginal(f: Formula, m: LogicalModel) -> Number:
    """p(f = 1) = sum over worlds of likelihood times prior."""
    return _sum(likelihood(f, w, m.mu) * p for w, p in zip(m.space, m.prior.phi))


def posterior(kb: Iterable[Formula], m: LogicalModel) -> WorldDistribution | _Undefined:
    """p(W | kb), or :data:`UNDEFINED` when the evidence has probability zero."""
    kb = tuple(kb)
    joint = [set_likelihood(kb, w, m.mu) * p for w, p in zip(m.space, m.prior.phi)]
    z = _sum(joint)
    if z == 0:
        return UNDEFINED
    return _trusted_distribution(m.space, tuple(j / z for j in joint), m.exact)


def _trusted_distribution(space: WorldSpace, phi: tuple, exact: bool) -> WorldDistribution:
    # Skip re-validation: normalised by construction, and float rounding on
    # long products can exceed FLOAT_TOL only in pathological cases.
    d = object.__new__(WorldDistribution)
    object.__setattr__(d, "space", space)
    object.__setattr__(d, "phi", phi)
    object.__setattr__(d, "exact", exact)
    return d


def predictive(f: Formula, kb: Iterable[Formula], m: LogicalModel) -> Number | _Undefined:
    """p(f | kb) = sum over worlds of p(f | w) p(w | kb)."""
    post = posterior(kb, m)
    if post is UNDEFINED:
        return UNDEFINED
    return _sum(likelihood(f, w, m.mu) * p for w, p in zip(m.space, post.phi))


def bayesian_entails(kb: Iterable[Formula], f: Formula, theta, m: LogicalModel) -> bool:
    """kb entails f at threshold ``theta`` iff p(f | kb) is defined and >= theta."""
    check_probability(theta, "theta")
    p = predictive(f, kb, m)
    if p is UNDEFINED:
        return False
    return p >= _coerce(theta, m.exact)


def map_worlds(kb: Iterable[Formula], m: LogicalModel) -> tuple[PossibleWorld, ...]:
    """All maximisers of the posterior; empty when the posterior is undefined."""
    post = posterior(kb, m)
    if post is UNDEFINED:
        return ()
    return post.argmax()


def map_entails(kb: Iterable[Formula], f: Formula, m: LogicalModel) -> bool:
    """Some posterior maximiser satisfies ``f``.

    Existential over ties, so both ``f`` and its negation can hold at once.
    An undefined posterior entails nothing.
    """
    return any(_truth(f, w) for w in map_worlds(kb, m))


# ---------------------------------------------------------------------------
# Prior files
# ---------------------------------------------------------------------------


def read_prior_csv(path: str | Path, atoms: Sequence[str] | None = None,
                   exact: bool = True) -> WorldDistribution:
    """Load a prior from a ``world,phi`` CSV.

    ``world`` is a bitstring over the atom order, taken from a leading
    ``# atoms: a,b,...`` comment unless ``atoms`` is given.  ``phi`` is a
    decimal or a ``p/q`` rational.  Every world must appear exactly once.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = []
    for line in lines:
        stripped = line.strip()
        if stripped.startswith("#"):
            key, _, value = stripped[1:].partition(":")
            if key.strip().lower() == "atoms" and atoms is None:
                atoms = [a.strip() for a in value.replace(",", " ").split() if a.strip()]
            continue
        if stripped:
            body.append(stripped)
    if atoms is None:
        raise DistributionError(f"{path}: no atom order (add '# atoms: a,b,...')")
    space = WorldSpace(Signature(atoms))
    reader = csv.DictReader(body)
    if not reader.fieldnames or {"world", "phi"} - set(reader.fieldnames):
        raise DistributionError(f"{path}: header must contain 'world' and 'phi'")
    phi: dict[int, Fraction] = {}
    for rowno, row in enumerate(reader, 2):
        try:
            w = space.world(row["world"].strip())
            p = to_exact(row["phi"])
        except (ValueError, ZeroDivisionError) as exc:
            raise DistributionError(f"{path}: row {rowno}: {exc}") from None
        if w.index in phi:
            raise DistributionError(f"{path}: world {w.bitstring} listed twice")
        phi[w.index] = p
    missing = [space[i].bitstring for i in range(len(space)) if i not in phi]
    if missing:
        raise DistributionError(f"{path}: missing worlds {', '.join(missing)}")
    values = tuple(phi[i] for i in range(len(space)))
    if not exact:
        values = tuple(float(v) for v in values)
    return WorldDistribution(space, values, exact=exact)


def write_prior_csv(dist: WorldDistribution, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# atoms: {','.join(dist.space.signature.atoms)}\n")
        writer = csv.writer(fh)
        writer.writerow(["world", "phi"])
        for w, p in zip(dist.space, dist.phi):
            writer.writerow([w.bitstring, str(p) if dist.exact else repr(p)])


def format_probability(p: Number | _Undefined | None) -> str | None:
    if p is None:
        return None
    if p is UNDEFINED:
        return "undefined"
    return str(p) if isinstance(p, Fraction) else repr(float(p))
