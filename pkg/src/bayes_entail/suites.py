"""Randomised invariant suites, runnable from the command line.

Each suite draws random instances from a seeded generator, checks one
family of properties exactly (rational arithmetic), and reports the number
of trials and any counterexamples found.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .consequence import (bayesian_classical_entails, classical_entails,
                          is_order_preserving, map_entails_wrt, paraconsistent_entails,
                          paraconsistent_predictive, preferential_entails,
                          prior_from_preference)
from .logic import And, Atom, Not, Or, evaluate, max_support_worlds, models, render
from .model import UNDEFINED, LogicalModel, bayesian_entails, marginal, predictive
from .randomgen import (random_consistent_kb, random_formula, random_kb, random_mu,
                        random_preference, random_prior, random_space)


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(msg)

    def to_dict(self) -> dict:
        return {"suite": self.name, "trials": self.trials, "passed": self.passed,
                "failures": self.failures}


def _show(kb) -> str:
    return "{" + ", ".join(render(f) for f in kb) + "}"


def classicality(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Consistent premises: Bayesian classical and paraconsistent entailment
    at threshold 1 both coincide with classical entailment."""
    rng = random.Random(seed)
    res = SuiteResult("classicality")
    for _ in range(trials):
        space = random_space(rng, 4)
        kb = random_consistent_kb(rng, space, 5)
        f = random_formula(rng, space.signature.atoms)
        expected = classical_entails(kb, f, space)
        bc = bayesian_classical_entails(kb, f, space)
        pc = paraconsistent_entails(kb, f, 1, space).holds
        res.trials += 1
        if not (bc == pc == expected):
            res.fail(f"{_show(kb)} / {render(f)}: classical={expected} bayes={bc} para={pc}")
    return res


def inconsistency(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """{b, !b}: classical entails everything, Bayesian classical nothing, and
    the paraconsistent probability of any formula is its prior marginal."""
    rng = random.Random(seed)
    res = SuiteResult("inconsistency")
    for _ in range(trials):
        space = random_space(rng, 4)
        atoms = space.signature.atoms
        beta = random_formula(rng, atoms)
        kb = [beta, Not(beta)]
        alpha = random_formula(rng, atoms)
        prior = random_prior(rng, space, positive=True)
        res.trials += 1
        if not classical_entails(kb, alpha, space):
            res.fail(f"classical failed to explode on {render(beta)}")
        if bayesian_classical_entails(kb, alpha, space):
            res.fail(f"Bayesian classical entailed {render(alpha)} from a contradiction")
        if predictive(alpha, kb, LogicalModel(prior, 1)) is not UNDEFINED:
            res.fail("predictive from a contradiction at mu=1 was defined")
        got = paraconsistent_predictive(kb, alpha, prior)
        want = marginal(alpha, LogicalModel(prior, 1))
        if got != want:
            res.fail(f"p({render(alpha)} | b, !b) = {got} != p({render(alpha)}) = {want}")
    return res


def kolmogorov(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Non-negativity, normalisation, inclusion-exclusion and negation duality
    of the formula marginals, for random mu and random priors."""
    rng = random.Random(seed)
    res = SuiteResult("kolmogorov")
    for _ in range(trials):
        space = random_space(rng, 4)
        atoms = space.signature.atoms
        m = LogicalModel(random_prior(rng, space), random_mu(rng))
        a, b = random_formula(rng, atoms), random_formula(rng, atoms)
        p1 = marginal(a, m)
        p0 = marginal(Not(a), m)  # p(a = 0) is p(!a = 1)
        res.trials += 1
        if p1 < 0 or p0 < 0:
            res.fail(f"negative marginal for {render(a)}")
        if p0 + p1 != 1:
            res.fail(f"p({render(a)}=0) + p({render(a)}=1) = {p0 + p1}")
        for i in (0, 1):
            def p(x, i=i):
                return marginal(x, m) if i else 1 - marginal(x, m)
            if p(Or(a, b)) != p(a) + p(b) - p(And(a, b)):
                res.fail(f"inclusion-exclusion fails at i={i} for {render(a)}, {render(b)}")
        # p(a = 0) computed directly from the complementary likelihood
        direct_p0 = sum(((1 - m.mu) if evaluate(a, w) else m.mu) * pw
                        for w, pw in zip(space, m.prior.phi))
        if direct_p0 != p0:
            res.fail(f"p({render(a)}=0) != p(!{render(a)}=1)")
    return res


def paraconsistency(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Non-contradiction, non-triviality and failure of explosion in the
    mu -> 1 uniform-prior model."""
    rng = random.Random(seed)
    res = SuiteResult("paraconsistency")
    for _ in range(trials):
        space = random_space(rng, 4)
        atoms = space.signature.atoms
        a, b = random_formula(rng, atoms), random_formula(rng, atoms)
        res.trials += 1
        pa = paraconsistent_predictive([], a, space)
        pna = paraconsistent_predictive([], Not(a), space)
        if pa + pna != 1:
            res.fail(f"p({render(a)}) + p(!{render(a)}) = {pa + pna}")
        atom_p = paraconsistent_predictive([], Atom(atoms[0]), space)
        if atom_p != Fraction(1, 2):
            res.fail(f"atom probability {atom_p} != 1/2")
        pb_contra = paraconsistent_predictive([a, Not(a)], b, space)
        pb = paraconsistent_predictive([], b, space)
        if pb_contra != pb:
            res.fail(f"p({render(b)} | a, !a) = {pb_contra} != p({render(b)}) = {pb}")
        theta = Fraction(rng.randint(11, 20), 20)
        if pb < theta and paraconsistent_entails([a, Not(a)], b, theta, space).holds:
            res.fail(f"contradiction entailed {render(b)} at theta={theta}")
        if (paraconsistent_entails([], a, theta, space).holds
                and paraconsistent_entails([], Not(a), theta, space).holds):
            res.fail(f"both {render(a)} and its negation entailed at theta={theta}")
    return res


def characterization(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """At threshold 1 with a uniform prior, paraconsistent entailment holds
    exactly when the conclusion is true in every max-support world."""
    rng = random.Random(seed)
    res = SuiteResult("characterization")
    for _ in range(trials):
        space = random_space(rng, 4)
        atoms = space.signature.atoms
        kb = random_kb(rng, atoms, 5, min_formulas=1)
        f = random_formula(rng, atoms)
        holds = paraconsistent_entails(kb, f, 1, space).holds
        covers = set(max_support_worlds(kb, space)) <= set(models([f], space))
        res.trials += 1
        if holds != covers:
            res.fail(f"{_show(kb)} / {render(f)}: entails={holds} covers={covers}")
        if models(kb, space) and set(max_support_worlds(kb, space)) != set(models(kb, space)):
            res.fail(f"max-support worlds differ from models for consistent {_show(kb)}")
    return res


def nonmonotonicity(trials: int = 500, seed: int = 0) -> SuiteResult:
    """Preferential vs MAP entailment with an order-preserving prior:
    consistent premises give preferential => MAP, total orders give
    equivalence, inconsistent premises give MAP => preferential."""
    rng = random.Random(seed)
    res = SuiteResult("nonmonotonicity")
    for _ in range(trials):
        space = random_space(rng, 4, min_atoms=2)
        atoms = space.signature.atoms
        total = rng.random() < 0.5
        ps = random_preference(rng, space, total=total)
        prior = prior_from_preference(ps, rng.choice(["count", "height"]))
        if not is_order_preserving(prior, ps):
            res.fail("prior_from_preference produced an order-violating prior")
        kb = random_kb(rng, atoms, 4)
        f = random_formula(rng, atoms)
        pref = preferential_entails(kb, f, ps)
        mapr = map_entails_wrt(kb, f, ps, prior)
        res.trials += 1
        if models(kb, space):
            if pref and not mapr:
                res.fail(f"consistent {_show(kb)} / {render(f)}: preferential but not MAP")
            if total and pref != mapr:
                res.fail(f"total order, {_show(kb)} / {render(f)}: pref={pref} map={mapr}")
        elif mapr and not pref:
            res.fail(f"inconsistent {_show(kb)} / {render(f)}: MAP but not preferential")
    return res


def monotonicity(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """theta1 >= theta2: entailment at theta1 implies entailment at theta2."""
    rng = random.Random(seed)
    res = SuiteResult("monotonicity")
    for _ in range(trials):
        space = random_space(rng, 4)
        atoms = space.signature.atoms
        m = LogicalModel(random_prior(rng, space), random_mu(rng))
        kb = random_kb(rng, atoms, 4)
        f = random_formula(rng, atoms)
        t1, t2 = sorted((Fraction(rng.randint(0, 20), 20) for _ in range(2)), reverse=True)
        res.trials += 1
        if bayesian_entails(kb, f, t1, m) and not bayesian_entails(kb, f, t2, m):
            res.fail(f"{_show(kb)} / {render(f)} entailed at {t1} but not at {t2}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "classicality": classicality,
    "inconsistency": inconsistency,
    "kolmogorov": kolmogorov,
    "paraconsistency": paraconsistency,
    "characterization": characterization,
    "nonmonotonicity": nonmonotonicity,
    "monotonicity": monotonicity,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> SuiteResult:
    fn = SUITES[name]
    return fn(seed=seed) if trials is None else fn(trials=trials, seed=seed)
