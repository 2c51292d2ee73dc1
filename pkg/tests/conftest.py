import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "data" / "fixtures"
TITANIC = ROOT / "data" / "titanic_train.csv"

ATOMS = ("a", "b", "c", "d")


def formulas(atoms=ATOMS, max_leaves=8):
    """Oracle-tuple formulas over ``atoms``."""
    leaf = st.sampled_from(atoms).map(lambda a: ("atom", a))

    def extend(children):
        return st.one_of(
            children.map(lambda f: ("not", f)),
            st.tuples(st.sampled_from(["and", "or", "implies", "impliedby", "iff"]),
                      children, children),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


@st.composite
def instances(draw, max_atoms=4, max_kb=5, positive_prior=False):
    """(atoms, kb, query, prior weights as Fractions summing to 1)."""
    k = draw(st.integers(1, max_atoms))
    atoms = ATOMS[:k]
    kb = draw(st.lists(formulas(atoms), max_size=max_kb))
    query = draw(formulas(atoms))
    lo = 1 if positive_prior else 0
    weights = draw(st.lists(st.integers(lo, 9), min_size=2 ** k, max_size=2 ** k)
                   .filter(lambda ws: sum(ws) > 0))
    total = sum(weights)
    prior = [Fraction(w, total) for w in weights]
    return atoms, kb, query, prior


mus = st.fractions(min_value=0, max_value=1, max_denominator=20)
thetas = st.fractions(min_value=0, max_value=1, max_denominator=20)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
