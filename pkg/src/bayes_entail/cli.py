"""Command-line interface.

Machine-readable output goes to stdout (JSON, or CSV for ``predict``);
diagnostics go to stderr.  Exit codes: 0 success, 1 usage error, 2 input
error, 3 invariant-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from .classifier import (DEFAULT_GRID, TITANIC_SCHEMA, Schema, SplitConfig, TrainedModel,
                         evaluate, fit_worlds, load_csv, predict, run_protocol, select_mu,
                         split)
from .classifier.data import DataError, encode_rows, read_table
from .consequence import (EntailmentVerdict, PreferenceError, ZeroMassSupport,
                          classical_entails, map_worlds_wrt, paraconsistent_entails,
                          preferential_entails, prior_from_preference, read_preference_file)
from .logic import (LogicError, Signature, WorldSpace, _truth, max_support_worlds, models,
                    parse_formula, read_kb_file, satisfied_count)
from .model import (UNDEFINED, DistributionError, LogicalModel, WorldDistribution, map_worlds,
                    predictive, read_prior_csv, to_exact)
from .suites import SUITES, run_suite

EXIT_USAGE, EXIT_INPUT, EXIT_SUITE = 1, 2, 3

INPUT_ERRORS = (OSError, LogicError, DistributionError, PreferenceError, ZeroMassSupport,
                DataError, json.JSONDecodeError, KeyError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _number(text: str, name: str) -> Fraction:
    try:
        value = to_exact(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name}: not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise UsageError(f"--{name} must lie in [0, 1], got {text}")
    return value


def _atoms(text: str | None) -> list[str]:
    if not text:
        return []
    return [a for a in text.replace(",", " ").split() if a]


# ---------------------------------------------------------------------------
# entail / worlds
# ---------------------------------------------------------------------------


def _load_kb(args, sig: Signature) -> list:
    if args.kb_file:
        kb = list(read_kb_file(args.kb_file, sig))
    else:
        kb = [parse_formula(t, sig) for t in args.kb or []]
    return kb


def _space_and_prior(args):
    """Signature from the prior file when given, else --atoms then formula order."""
    prior = None
    if args.prior:
        prior = read_prior_csv(args.prior, _atoms(args.atoms) or None, exact=not args.float)
        sig = prior.space.signature
    else:
        sig = Signature(_atoms(args.atoms), extensible=True)
    return sig, prior


def _verdict_json(mode: str, space: WorldSpace, verdict: EntailmentVerdict) -> dict:
    out = {"mode": mode, "atoms": list(space.signature.atoms)}
    out.update(verdict.to_dict())
    return out


def cmd_entail(args) -> int:
    mode = args.mode
    if mode in ("bayesian", "paraconsistent") and args.theta is None:
        raise UsageError(f"--theta is required for --mode {mode}")
    if mode == "preferential" and not args.pref:
        raise UsageError("--pref is required for --mode preferential")
    if mode in ("classical", "preferential") and args.prior:
        raise UsageError(f"--prior has no effect in --mode {mode}")
    theta = _number(args.theta, "theta") if args.theta is not None else None
    mu = _number(args.mu, "mu")

    sig, prior = _space_and_prior(args)
    kb = _load_kb(args, sig)
    query = parse_formula(args.query, sig)
    space = prior.space if prior else WorldSpace(sig)
    exact = not args.float
    if prior is None:
        prior = WorldDistribution.uniform(space, exact=exact)
    ps = read_preference_file(args.pref, space) if args.pref else None
    if theta is not None and not exact:
        theta = float(theta)

    if mode == "classical":
        verdict = EntailmentVerdict(classical_entails(kb, query, space),
                                    witness=models(kb, space))
    elif mode == "bayesian":
        m = LogicalModel(prior, mu)
        p = predictive(query, kb, m)
        verdict = EntailmentVerdict(p is not UNDEFINED and p >= theta, p, map_worlds(kb, m))
    elif mode == "paraconsistent":
        verdict = paraconsistent_entails(kb, query, theta, prior)
    elif mode == "map":
        if ps is not None:
            given = prior if args.prior else prior_from_preference(ps, args.weighting, exact)
            witness = map_worlds_wrt(kb, ps, given)
        else:
            witness = map_worlds(kb, LogicalModel(prior, mu))
        verdict = EntailmentVerdict(any(_truth(query, w) for w in witness), witness=witness)
    else:
        verdict = EntailmentVerdict(preferential_entails(kb, query, ps),
                                    witness=ps.maximal(models(kb, space)))
    _emit(_verdict_json(mode, space, verdict))
    return 0


def cmd_worlds(args) -> int:
    sig = Signature(_atoms(args.atoms), extensible=True)
    kb = _load_kb(args, sig)
    space = WorldSpace(sig)
    support = max_support_worlds(kb, space)
    _emit({
        "atoms": list(space.signature.atoms),
        "models": [w.bitstring for w in models(kb, space)],
        "max_support": [w.bitstring for w in support],
        "max_satisfied": satisfied_count(kb, support[0]) if support else 0,
        "formulas": len(kb),
    })
    return 0


# ---------------------------------------------------------------------------
# classifier commands
# ---------------------------------------------------------------------------


def _schema(args) -> Schema:
    schema = Schema.load(args.schema) if args.schema else TITANIC_SCHEMA
    if args.drop is not None:
        schema = Schema(schema.goal, schema.positive, list(args.drop), schema.id_column,
                        dict(schema.bins))
    return schema


def _grid(text: str | None) -> tuple[float, ...]:
    if text is None:
        return DEFAULT_GRID
    try:
        grid = tuple(float(_number(t, "grid")) for t in text.split(",") if t.strip())
    except UsageError:
        raise UsageError(f"--grid: expected comma-separated values in [0, 1], got {text!r}")
    if not grid:
        raise UsageError("--grid is empty")
    return grid


def cmd_train(args) -> int:
    ds = load_csv(args.csv, _schema(args))
    train, cv, test = split(ds, SplitConfig(seed=args.seed))
    grid = _grid(args.grid)
    if args.mu is not None:
        model = TrainedModel.fit(train, mu=float(_number(args.mu, "mu")))
        scores = {}
    else:
        mu, scores = select_mu(fit_worlds(train), cv, grid)
        model = TrainedModel.fit(train, mu=mu)
    if args.out:
        model.save(args.out)
    _emit({
        "mu_hat": model.mu_hat,
        "cv_correct": {repr(k): v for k, v in scores.items()},
        "seed": args.seed,
        "sizes": {"train": len(train), "cv": len(cv), "test": len(test)},
        "distinct_worlds": len(model.worlds),
        "model": args.out,
    })
    return 0


def _fmt_prob(p) -> str:
    return "undefined" if p is UNDEFINED else repr(float(p))


def cmd_predict(args) -> int:
    model = TrainedModel.load(args.model)
    theta = float(_number(args.theta, "theta"))
    if args.row:
        row = {}
        for item in args.row:
            col, sep, val = item.partition("=")
            if not sep:
                raise UsageError(f"--row expects Column=value, got {item!r}")
            row[col] = val
        missing = [c for c in model.columns if c not in row]
        if missing:
            raise DataError(f"row lacks columns: {', '.join(missing)}")
        rows = [row]
    else:
        _, rows = read_table(args.csv)
    X, _, ids = encode_rows(rows, model.columns, model.schema,
                            {k: list(v) for k, v in model.values.items()},
                            extend=False, need_goal=False)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["id", "probability", "verdict"])
    for rid, x in zip(ids, X):
        holds, p = predict(model, x, theta)
        writer.writerow([rid, _fmt_prob(p), int(holds)])
    return 0


def cmd_evaluate(args) -> int:
    theta = float(_number(args.theta, "theta"))
    if args.model:
        model = TrainedModel.load(args.model)
        test = model.encode_csv(args.csv)
        if (test.y < 0).all():
            raise DataError(f"{args.csv}: goal column {model.goal!r} missing or unseen")
        m = evaluate(model, test, theta)
        out = {"rows": len(test), "mu_hat": model.mu_hat, "accuracy": m.accuracy,
               "auc": m.auc}
        if not args.no_timing:
            out["runtime_per_prediction_s"] = m.runtime_per_prediction
        _emit(out)
        return 0
    if args.splits < 1:
        raise UsageError("--splits must be at least 1")
    ds = load_csv(args.csv, _schema(args))
    res = run_protocol(ds, args.splits, args.seed, _grid(args.grid), theta)
    if args.no_timing:
        res.pop("runtime_per_prediction_s")
        for r in res["per_split"]:
            r.pop("runtime_per_prediction_s")
    if not args.per_split:
        res.pop("per_split")
    res["rows"] = len(ds)
    _emit(res)
    return 0


def cmd_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(n, args.trials, args.seed) for n in names]
    _emit({"seed": args.seed, "results": [r.to_dict() for r in results],
           "passed": all(r.passed for r in results)})
    for r in results:
        if not r.passed:
            print(f"suite {r.name}: {len(r.failures)} counterexample(s)", file=sys.stderr)
    return 0 if all(r.passed for r in results) else EXIT_SUITE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bayes-entail",
                description="Bayesian entailment queries and the entailment classifier.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kb_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--kb", nargs="*", metavar="FORMULA", help="premises, one per argument")
        g.add_argument("--kb-file", help="file with one formula per line")
        sp.add_argument("--atoms", help="atom order, comma or space separated")

    e = sub.add_parser("entail", help="decide whether premises entail a query")
    e.add_argument("--mode", required=True,
                   choices=["classical", "bayesian", "paraconsistent", "map", "preferential"])
    kb_args(e)
    e.add_argument("--query", required=True)
    e.add_argument("--theta", help="threshold in [0, 1]; decimal or p/q")
    e.add_argument("--mu", default="1", help="noise parameter (default 1)")
    e.add_argument("--prior", help="prior CSV (world,phi); default uniform")
    e.add_argument("--pref", help="preference file, lines '<bits> > <bits>'")
    e.add_argument("--weighting", choices=["count", "height"], default="count",
                   help="order-preserving prior built from --pref in map mode")
    e.add_argument("--float", action="store_true", help="float instead of exact arithmetic")
    e.set_defaults(func=cmd_entail)

    w = sub.add_parser("worlds", help="list models and max-support worlds")
    kb_args(w)
    w.set_defaults(func=cmd_worlds)

    t = sub.add_parser("train", help="fit the classifier and select mu")
    t.add_argument("--csv", required=True)
    t.add_argument("--schema", help="schema JSON (default: Titanic layout)")
    t.add_argument("--drop", nargs="*", metavar="COLUMN",
                   help="columns to ignore, replacing the schema's list (none if empty)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--grid", help="comma-separated mu grid")
    t.add_argument("--mu", help="fix mu instead of selecting it")
    t.add_argument("--out", help="where to write the trained model JSON")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="score rows with a trained model")
    pr.add_argument("--model", required=True)
    src = pr.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv")
    src.add_argument("--row", nargs="+", metavar="COL=VALUE")
    pr.add_argument("--theta", default="0.5")
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="accuracy, AUC and runtime over random splits")
    ev.add_argument("--csv", required=True)
    ev.add_argument("--model", help="evaluate this model on the whole CSV instead")
    ev.add_argument("--schema")
    ev.add_argument("--drop", nargs="*", metavar="COLUMN",
                    help="columns to ignore, replacing the schema's list (none if empty)")
    ev.add_argument("--splits", type=int, default=100)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--grid")
    ev.add_argument("--theta", default="0.5")
    ev.add_argument("--per-split", action="store_true", help="include per-split records")
    ev.add_argument("--no-timing", action="store_true",
                    help="omit wall-clock fields so output is reproducible byte for byte")
    ev.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("check", help="run a randomised invariant suite")
    c.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        sys.stdout = open(os.devnull, "w")
        return 0
    except UsageError as exc:
        print(f"bayes-entail {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"bayes-entail {args.command}: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
