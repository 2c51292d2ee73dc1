from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracle
from bayes_entail.logic import Atom, KnowledgeBase, Not, Or, WorldSpace, parse_formula
from bayes_entail.model import (UNDEFINED, DistributionError, LogicalModel, WorldDistribution,
                                bayesian_entails, likelihood, map_entails, map_worlds, marginal,
                                posterior, predictive, read_prior_csv, set_likelihood,
                                write_prior_csv)
from conftest import FIXTURES, instances, mus, thetas

F = Fraction
RAIN, WET = Atom("rain"), Atom("wet")
RAIN_WET = WorldSpace.of("rain", "wet")
RAIN_WET_PHI = (F(4, 10), F(2, 10), F(1, 10), F(3, 10))


def rain_wet(mu=1, exact=True):
    phi = RAIN_WET_PHI if exact else tuple(float(p) for p in RAIN_WET_PHI)
    return LogicalModel(WorldDistribution(RAIN_WET, phi, exact=exact), mu)


def build(atoms, prior, mu):
    space = WorldSpace.of(*atoms)
    return LogicalModel(WorldDistribution(space, tuple(prior)), mu)


def rain_given_wet(mu):
    return (F(4, 10) * mu ** 2 - F(5, 10) * mu + F(4, 10)) / F(5, 10)


class TestWorldDistribution:
    def test_exact_sum_required(self):
        with pytest.raises(DistributionError):
            WorldDistribution(RAIN_WET, (F(1, 4), F(1, 4), F(1, 4), F(1, 5)))

    def test_float_tolerance(self):
        WorldDistribution(RAIN_WET, (0.1, 0.2, 0.3, 0.4 + 5e-13), exact=False)
        with pytest.raises(DistributionError):
            WorldDistribution(RAIN_WET, (0.1, 0.2, 0.3, 0.4 + 1e-9), exact=False)

    def test_out_of_range(self):
        with pytest.raises(DistributionError):
            WorldDistribution(RAIN_WET, (F(-1, 10), F(5, 10), F(3, 10), F(3, 10)))

    def test_wrong_length(self):
        with pytest.raises(DistributionError):
            WorldDistribution(RAIN_WET, (F(1, 2), F(1, 2)))

    def test_floats_become_decimal_fractions(self):
        d = WorldDistribution(RAIN_WET, (0.4, 0.2, 0.1, 0.3))
        assert d.phi == RAIN_WET_PHI

    def test_uniform_and_weights(self):
        assert WorldDistribution.uniform(RAIN_WET).phi == (F(1, 4),) * 4
        d = WorldDistribution.from_weights(RAIN_WET, [4, 2, 1, 3])
        assert d.phi == RAIN_WET_PHI
        assert [w.bitstring for w in d.argmax()] == ["00"]

    def test_mu_range(self):
        with pytest.raises(ValueError):
            rain_wet(mu=F(3, 2))


class TestLikelihood:
    def test_table_entries(self):
        mu = F(7, 10)
        assert likelihood(RAIN, RAIN_WET[2], mu) == mu
        assert likelihood(WET, RAIN_WET[0], mu) == 1 - mu
        assert likelihood(RAIN, RAIN_WET[3], 1) == 1

    def test_contradictory_pair(self):
        mu = F(3, 10)
        b = Atom("rain")
        for w in RAIN_WET:
            assert set_likelihood([b, Not(b)], w, mu) == mu * (1 - mu)

    def test_empty_and_duplicate(self):
        mu = F(2, 3)
        assert set_likelihood([], RAIN_WET[0], mu) == 1
        assert set_likelihood([RAIN, RAIN], RAIN_WET[3], mu) == mu ** 2

    @given(instances(max_kb=4), mus)
    def test_product_form(self, inst, mu):
        atoms, kb_t, _, _ = inst
        space = WorldSpace.of(*atoms)
        kb = [oracle.to_ast(g) for g in kb_t]
        for w in space:
            k = sum(oracle.holds(g, {a: bool(v) for a, v in w.as_dict().items()}) for g in kb_t)
            assert set_likelihood(kb, w, mu) == mu ** k * (1 - mu) ** (len(kb) - k)


class TestMarginal:
    def test_rain_noiseless(self):
        assert marginal(RAIN, rain_wet()) == F(4, 10)

    def test_tautology(self):
        assert marginal(Or(RAIN, Not(RAIN)), rain_wet()) == 1

    def test_half_noise_is_uninformative(self):
        m = rain_wet(F(1, 2))
        assert marginal(parse_formula("rain -> wet", RAIN_WET.signature), m) == F(1, 2)

    @given(instances(), mus)
    def test_agrees_with_oracle(self, inst, mu):
        atoms, _, q, prior = inst
        m = build(atoms, prior, mu)
        f = oracle.to_ast(q)
        assert marginal(f, m) == oracle.marginal(q, prior, atoms, mu)
        assert 1 - marginal(f, m) == oracle.marginal(q, prior, atoms, mu, value=False)


class TestPosterior:
    def test_contradiction_leaves_prior(self):
        m = rain_wet(F(3, 5))
        assert posterior([RAIN, Not(RAIN)], m).phi == RAIN_WET_PHI

    def test_empty_kb_is_prior(self):
        assert posterior([], rain_wet(F(1, 5))).phi == RAIN_WET_PHI

    def test_contradiction_noiseless_undefined(self):
        assert posterior([RAIN, Not(RAIN)], rain_wet()) is UNDEFINED

    def test_undefined_marker(self):
        assert not UNDEFINED
        assert str(UNDEFINED) == "undefined"


class TestPredictive:
    def test_rain_given_wet(self):
        assert predictive(RAIN, [WET], rain_wet()) == F(3, 5)

    def test_rain_given_wet_noisy(self):
        mu = F(4, 5)
        p = predictive(RAIN, [WET], rain_wet(mu))
        prior = list(RAIN_WET_PHI)
        atoms = ("rain", "wet")
        assert p == oracle.predictive([("atom", "wet")], ("atom", "rain"), prior, atoms, mu)
        assert p == rain_given_wet(mu)
        assert p == F(64, 125)

    @pytest.mark.parametrize("mu", [F(0), F(1, 10), F(1, 2), F(9, 10), F(1)])
    def test_rain_given_wet_polynomial(self, mu):
        assert predictive(RAIN, [WET], rain_wet(mu)) == rain_given_wet(mu)

    def test_self_support(self):
        assert predictive(RAIN, [RAIN], rain_wet()) == 1

    def test_float_mode(self):
        p = predictive(RAIN, [WET], rain_wet(exact=False))
        assert isinstance(p, float)
        assert p == pytest.approx(0.6, abs=1e-12)

    @given(instances(), mus)
    def test_agrees_with_oracle(self, inst, mu):
        atoms, kb_t, q, prior = inst
        m = build(atoms, prior, mu)
        got = predictive(oracle.to_ast(q), [oracle.to_ast(g) for g in kb_t], m)
        want = oracle.predictive(kb_t, q, prior, atoms, mu)
        assert (got is UNDEFINED) == (want is None)
        if want is not None:
            assert got == want


class TestBayesianEntailment:
    @pytest.mark.parametrize("theta, expected", [
        (0, True), (F(1, 2), True), (F(3, 5), True), (0.6, True),
        (F(601, 1000), False), (F(7, 10), False), (1, False)])
    def test_threshold_boundary(self, theta, expected):
        assert bayesian_entails([WET], RAIN, theta, rain_wet()) is expected

    def test_undefined_never_entails(self):
        assert not bayesian_entails([RAIN, Not(RAIN)], WET, 0, rain_wet())

    def test_theta_range(self):
        with pytest.raises(ValueError):
            bayesian_entails([WET], RAIN, F(11, 10), rain_wet())

    @given(instances(), mus, thetas, thetas)
    def test_monotone_in_theta(self, inst, mu, t1, t2):
        atoms, kb_t, q, prior = inst
        hi, lo = max(t1, t2), min(t1, t2)
        m = build(atoms, prior, mu)
        kb, f = [oracle.to_ast(g) for g in kb_t], oracle.to_ast(q)
        if bayesian_entails(kb, f, hi, m):
            assert bayesian_entails(kb, f, lo, m)


AB = WorldSpace.of("a", "b")
DIAMOND_PRIOR = WorldDistribution(AB, (F(4, 10), F(1, 10), F(3, 10), F(2, 10)))


class TestMapEntailment:
    def parse(self, text):
        return parse_formula(text, AB.signature)

    def test_disjunction_picks_w1(self):
        m = LogicalModel(DIAMOND_PRIOR, 1)
        kb = [self.parse("a | !b")]
        assert [w.bitstring for w in map_worlds(kb, m)] == ["00"]
        assert map_entails(kb, self.parse("!b"), m)

    def test_atom_picks_w3(self):
        m = LogicalModel(DIAMOND_PRIOR, 1)
        assert [w.bitstring for w in map_worlds([self.parse("a")], m)] == ["10"]
        assert map_entails([self.parse("a")], self.parse("!b"), m)

    def test_tautology_from_nothing(self):
        assert map_entails([], self.parse("a | !a"), LogicalModel(DIAMOND_PRIOR, F(1, 2)))

    def test_ties_are_existential(self):
        m = LogicalModel(WorldDistribution.uniform(AB), 1)
        a = self.parse("a")
        assert map_entails([], a, m) and map_entails([], Not(a), m)

    def test_undefined_is_false(self):
        m = LogicalModel(DIAMOND_PRIOR, 1)
        a = self.parse("a")
        assert map_worlds([a, Not(a)], m) == ()
        assert not map_entails([a, Not(a)], Or(a, Not(a)), m)

    @given(instances(), mus)
    def test_sharp_posterior_approximates_predictive(self, inst, mu):
        atoms, kb_t, q, prior = inst
        m = build(atoms, prior, mu)
        kb, f = [oracle.to_ast(g) for g in kb_t], oracle.to_ast(q)
        post = posterior(kb, m)
        if post is UNDEFINED:
            return
        eps = 1 - max(post.phi)
        w_map = post.argmax()[0]
        assert abs(predictive(f, kb, m) - likelihood(f, w_map, m.mu)) <= 2 * eps


class TestPriorFiles:
    def test_rain_wet_fixture(self):
        d = read_prior_csv(FIXTURES / "rain_wet_prior.csv")
        assert d.space.signature.atoms == ("rain", "wet")
        assert d.phi == RAIN_WET_PHI

    def test_round_trip(self, tmp_path):
        d = WorldDistribution.from_weights(WorldSpace.of("x", "y", "z"), [1, 2, 3, 4, 5, 6, 7, 8])
        write_prior_csv(d, tmp_path / "p.csv")
        assert read_prior_csv(tmp_path / "p.csv") == d

    def test_rationals_and_explicit_atoms(self, tmp_path):
        p = tmp_path / "p.csv"
        p.write_text("world,phi\n0,1/3\n1,2/3\n", encoding="utf-8")
        assert read_prior_csv(p, atoms=["q"]).phi == (F(1, 3), F(2, 3))

    @pytest.mark.parametrize("body", [
        "world,phi\n0,0.5\n",              # missing world
        "world,phi\n0,0.5\n0,0.5\n",       # duplicate
        "world,phi\n0,0.5\n1,0.6\n",       # not normalised
        "world,phi\n0,x\n1,1\n",           # not a number
        "w,p\n0,0.5\n1,0.5\n",             # bad header
        "world,phi\n00,0.5\n1,0.5\n",      # wrong width
    ])
    def test_rejects(self, tmp_path, body):
        p = tmp_path / "p.csv"
        p.write_text("# atoms: q\n" + body, encoding="utf-8")
        with pytest.raises(DistributionError):
            read_prior_csv(p)

    def test_needs_atom_order(self, tmp_path):
        p = tmp_path / "p.csv"
        p.write_text("world,phi\n0,0.5\n1,0.5\n", encoding="utf-8")
        with pytest.raises(DistributionError, match="atom order"):
            read_prior_csv(p)
