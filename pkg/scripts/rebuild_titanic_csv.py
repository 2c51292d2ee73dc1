"""Rebuild data/titanic_train.csv (the 891-row Kaggle training file layout).

The Kaggle file itself is not redistributed on PyPI, so it is reassembled
from three public wheels that each ship part of it:

  * explainerdashboard 0.5.8: the 891 training passengers (split 691/200
    into its own train/test files) with full names, fares, ages, SibSp/Parch
    and survival, but no ids, tickets or cabins;
  * dabl 0.3.2: the Vanderbilt ``titanic3`` table, used for Sex, Ticket,
    Cabin and Embarked;
  * shapash 2.8.1: the 891 Kaggle training rows with PassengerId (names
    stripped of punctuation, fares rounded to cents).

Each explainerdashboard row is matched to a titanic3 row (exact name first,
else fare plus name similarity within the same class/sex/family counts),
then to a shapash row to recover its PassengerId.

Usage::

    pip download --no-deps explainerdashboard==0.5.8 dabl==0.3.2 shapash==2.8.1 -d wheels
    python scripts/rebuild_titanic_csv.py wheels data/titanic_train.csv

Needs pandas (not a package dependency).  The output written by the
recorded run has SHA-256 7d118fef8b6ccf7f81111877bc388536f7b1e498a655e3d649d19aaa010e9f6f.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import re
import zipfile
from pathlib import Path

import numpy as np
import pandas as pd

SOURCES = {
    "ed_train": ("explainerdashboard-0.5.8", "explainerdashboard/datasets/titanic_train.csv"),
    "ed_test": ("explainerdashboard-0.5.8", "explainerdashboard/datasets/titanic_test.csv"),
    "titanic3": ("dabl-0.3.2", "dabl/datasets/titanic.csv"),
    "shapash": ("shapash-2.8.1", "data/titanicdata.csv"),
}
COLUMNS = ["PassengerId", "Survived", "Pclass", "Name", "Sex", "Age", "SibSp", "Parch",
           "Ticket", "Fare", "Cabin", "Embarked"]


def read_member(wheels: Path, key: str, **kw) -> pd.DataFrame:
    stem, member = SOURCES[key]
    (wheel,) = wheels.glob(f"{stem}-*.whl")
    with zipfile.ZipFile(wheel) as zf:
        return pd.read_csv(io.BytesIO(zf.read(member)), **kw)


def name_tokens(name: str) -> str:
    return " ".join(re.sub(r"[^a-z ]", "", name.lower()).split())


def similarity(a: str, b: str) -> float:
    return difflib.SequenceMatcher(None, a, b).ratio()


def match_titanic3(ed: pd.DataFrame, t3: pd.DataFrame) -> pd.DataFrame:
    used: set[int] = set()
    rows = []
    for _, r in ed.iterrows():
        cand = t3[(t3.pclass == r.PassengerClass) & ((t3.sex == r.sex) | (r.sex == ""))
                  & (t3.survived == r.Survival)
                  & (t3.sibsp == r.No_of_siblings_plus_spouses_on_board)
                  & (t3.parch == r.No_of_parents_plus_children_on_board)]
        cand = cand[~cand.index.isin(used)]
        exact = cand[cand.name == r.Name]
        if exact.empty:
            exact = t3[(t3.name == r.Name) & ~t3.index.isin(used)]
        if len(exact) == 1:
            j = exact.index[0]
        else:
            by_fare = cand[np.isclose(cand.fare.fillna(-1), r.Fare, atol=0.01)]
            pool = by_fare if len(by_fare) else cand
            scores = [similarity(r.Name.lower(), n.lower()) for n in pool.name]
            j = pool.index[int(np.argmax(scores))]
        used.add(j)
        t = t3.loc[j]
        rows.append({
            "Name": r.Name, "Survived": int(r.Survival), "Pclass": int(r.PassengerClass),
            "Sex": t.sex, "Age": None if r.Age == -999 else r.Age,
            "SibSp": int(r.No_of_siblings_plus_spouses_on_board),
            "Parch": int(r.No_of_parents_plus_children_on_board),
            "Ticket": t.ticket, "Fare": r.Fare,
            "Cabin": t.cabin if isinstance(t.cabin, str) else None,
            "Embarked": t.embarked if isinstance(t.embarked, str) else None,
        })
    return pd.DataFrame(rows)


def attach_ids(k: pd.DataFrame, sh: pd.DataFrame) -> pd.DataFrame:
    used: set[int] = set()
    ids = []
    for _, r in k.iterrows():
        cand = sh[(sh.Survived == r.Survived) & (sh.Sex == r.Sex) & (sh.SibSp == r.SibSp)
                  & (sh.Parch == r.Parch) & np.isclose(sh.Fare, r.Fare, atol=0.006)]
        cand = cand[~cand.index.isin(used)]
        if cand.empty:
            cand = sh[~sh.index.isin(used) & (sh.Sex == r.Sex)]
        target = name_tokens(r.Name)
        scores = [similarity(target, name_tokens(n)) for n in cand.Name]
        j = cand.index[int(np.argmax(scores))]
        used.add(j)
        ids.append(int(sh.loc[j, "PassengerId"]))
    k = k.assign(PassengerId=ids)
    return k.sort_values("PassengerId")[COLUMNS]


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wheels", type=Path, help="directory holding the three wheels")
    ap.add_argument("out", type=Path)
    args = ap.parse_args(argv)

    ed = pd.concat([read_member(args.wheels, "ed_train"), read_member(args.wheels, "ed_test")],
                   ignore_index=True)
    ed["sex"] = np.where(ed.Sex_female == 1, "female", np.where(ed.Sex_male == 1, "male", ""))
    t3 = read_member(args.wheels, "titanic3", na_values="?", keep_default_na=False)
    sh = read_member(args.wheels, "shapash")

    k = attach_ids(match_titanic3(ed, t3), sh)
    if k.PassengerId.nunique() != len(sh):
        raise SystemExit("PassengerId matching is not one-to-one")

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for r in k.itertuples(index=False):
            w.writerow([r.PassengerId, r.Survived, r.Pclass, r.Name, r.Sex, fmt(r.Age), r.SibSp,
                        r.Parch, r.Ticket, fmt(r.Fare), r.Cabin or "", r.Embarked or ""])
    print(f"wrote {len(k)} rows to {args.out}")


if __name__ == "__main__":
    main()
