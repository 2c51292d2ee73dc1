"""One pass/fail line per acceptance criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
written straight to the terminal even when output capture is on.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

import oracle
import synth
from bayes_entail.classifier import (Schema, TrainedModel, evaluate, goal_probability, load_csv,
                                     majority_accuracy, run_protocol, split)
from bayes_entail.classifier.data import Dataset, SplitConfig
from bayes_entail.consequence import (PreferentialStructure, map_entails_wrt,
                                      paraconsistent_predictive, preferential_entails)
from bayes_entail.logic import WorldSpace, parse_formula
from bayes_entail.model import (UNDEFINED, LogicalModel, WorldDistribution, bayesian_entails,
                                predictive, read_prior_csv)
from bayes_entail.suites import run_suite
from conftest import FIXTURES, TITANIC

F = Fraction


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_rain_wet(report):
    start = time.perf_counter()
    prior = read_prior_csv(FIXTURES / "rain_wet_prior.csv")
    m = LogicalModel(prior, 1)
    sig = prior.space.signature
    wet, rain = parse_formula("wet", sig), parse_formula("rain", sig)
    p = predictive(rain, [wet], m)
    grid = [F(k, 100) for k in range(101)]
    boundary = all(bayesian_entails([wet], rain, t, m) == (t <= F(3, 5)) for t in grid)
    elapsed = time.perf_counter() - start
    ok = p == F(3, 5) and isinstance(p, Fraction) and boundary and elapsed < 1
    report(1, ok, f"p(rain|wet)={p}, holds iff theta<=0.6 on a 0.01 grid={boundary}, "
                  f"{elapsed:.3f}s")


def test_criterion_2_paraconsistent_values(report):
    ab = WorldSpace.of("a", "b")
    a = parse_formula("a", ab.signature)
    got = {}
    for premises in (("a", "b", "!b"), ("a & b", "!b"), ("a & b & !b",)):
        kb = [parse_formula(t, ab.signature) for t in premises]
        got[", ".join(premises)] = paraconsistent_predictive(kb, a, ab)
    ok = list(got.values()) == [F(1), F(2, 3), F(1, 2)]
    report(2, ok, "; ".join(f"p(a|{k})={v}" for k, v in got.items()))


def _suite(n, name, trials, budget=None):
    def check(report):
        start = time.perf_counter()
        res = run_suite(name, trials=trials, seed=2024)
        elapsed = time.perf_counter() - start
        ok = res.passed and res.trials >= trials and (budget is None or elapsed < budget)
        detail = f"{name} suite, {res.trials} trials, {len(res.failures)} failures, {elapsed:.2f}s"
        if res.failures:
            detail += f" (first: {res.failures[0]})"
        report(n, ok, detail)
    return check


test_criterion_3_classicality = _suite(3, "classicality", 1000, budget=30)
test_criterion_4_inconsistency = _suite(4, "inconsistency", 1000)
test_criterion_5_kolmogorov = _suite(5, "kolmogorov", 1000)
test_criterion_6_paraconsistency = _suite(6, "paraconsistency", 1000)


def test_criterion_7_nonmonotonicity(report):
    res = run_suite("nonmonotonicity", trials=500, seed=2024)
    ab = WorldSpace.of("a", "b")
    ps = PreferentialStructure(ab, [(0, 1), (0, 2), (0, 3), (2, 1), (3, 1)])
    prior = WorldDistribution(ab, (F(4, 10), F(1, 10), F(3, 10), F(2, 10)))
    a, not_b = parse_formula("a", ab.signature), parse_formula("!b", ab.signature)
    map_holds = map_entails_wrt([a], not_b, ps, prior)
    pref_holds = preferential_entails([a], not_b, ps)
    ok = res.passed and res.trials >= 500 and map_holds and not pref_holds
    report(7, ok, f"{res.trials} random structures, {len(res.failures)} failures; "
                  f"divergence fixture: MAP={map_holds}, preferential={pref_holds}")


test_criterion_8_threshold_monotonicity = _suite(8, "monotonicity", 1000)


def _oracle_agreement(model, train, test):
    worst = 0.0
    for x in test.X:
        for goal in range(len(train.values[train.goal])):
            want = oracle.classifier_probability(train.X.tolist(), train.y.tolist(),
                                                 x.tolist(), goal, model.mu_hat)
            got = goal_probability(model.worlds, x, goal, model.mu_hat)
            if want is None or got is UNDEFINED:
                if not (want is None and got is UNDEFINED):
                    return float("inf")
                continue
            worst = max(worst, abs(float(got) - want))
    return worst


@pytest.mark.skipif(not TITANIC.exists(), reason="Titanic CSV not present")
def test_criterion_9_titanic(report):
    ds = load_csv(TITANIC)
    start = time.perf_counter()
    out = run_protocol(ds, n_splits=100, seed=0)
    elapsed = time.perf_counter() - start
    acc, auc = out["accuracy"]["mean"], out["auc"]["mean"]
    rt = out["runtime_per_prediction_s"]["mean"]
    ok = (len(ds) == 891 and abs(acc - 0.785) <= 0.03 and abs(auc - 0.857) <= 0.03
          and rt <= 0.004 * 5 and elapsed < 600)
    report(9, ok, f"Titanic {len(ds)} rows, 100 splits: accuracy {acc:.3f} "
                  f"(sd {out['accuracy']['std']:.3f}, target 0.785+-0.03), AUC {auc:.3f} "
                  f"(sd {out['auc']['std']:.3f}, target 0.857+-0.03), "
                  f"{rt:.2e}s/prediction, baseline {out['baseline_accuracy']['mean']:.3f}, "
                  f"total {elapsed:.1f}s")


def test_criterion_9_synthetic_fallback(report, tmp_path):
    path = synth.write_csv(tmp_path / "synthetic.csv", 600, seed=11, noise=0.15)
    ds = load_csv(path, Schema.from_dict(synth.SCHEMA))
    accs, bases, worst = [], [], 0.0
    for s in range(10):
        train, cv, test = split(ds, SplitConfig(seed=s))
        model = TrainedModel.fit(train, cv)
        accs.append(evaluate(model, test).accuracy)
        bases.append(majority_accuracy(train, test))
        worst = max(worst, _oracle_agreement(model, train, test))
    acc, base = float(np.mean(accs)), float(np.mean(bases))
    ok = acc > base and worst <= 1e-12
    label = "substitute run" if not TITANIC.exists() else "synthetic run (Titanic also present)"
    report(9, ok, f"{label}: accuracy {acc:.3f} vs majority {base:.3f}, "
                  f"max |predict - two-loop oracle| {worst:.1e}")


def test_criterion_10_embedding(report, tmp_path):
    path = synth.write_csv(tmp_path / "small.csv", 60, seed=5)
    full = load_csv(path, Schema.from_dict(synth.SCHEMA))
    cols = ["Colour", "Size", "Shape"]
    keep = [full.columns.index(c) for c in cols]
    train = Dataset(cols, full.goal, full.X[:, keep], full.y,
                    {c: full.values[c] for c in cols + [full.goal]}, full.ids, full.schema)
    space, prior, atom_of = synth.embed_as_worlds(train)
    worst, checked = 0.0, 0
    model = TrainedModel.fit(train, mu=0.5)
    for mu in (0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0):
        logical = LogicalModel(prior, mu)
        for x in np.unique(train.X, axis=0):
            kb = [atom_of(c, int(v)) for c, v in zip(cols, x)]
            for goal in (0, 1):
                want = predictive(atom_of(train.goal, goal), kb, logical)
                got = goal_probability(model.worlds, x, goal, mu)
                worst = max(worst, abs(float(got) - float(want)))
                checked += 1
    n_atoms = len(space.signature)
    ok = n_atoms <= 10 and worst <= 1e-12
    report(10, ok, f"{n_atoms} atoms, {checked} (row, goal, mu) queries, max gap {worst:.1e}")
