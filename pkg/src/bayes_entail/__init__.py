"""Bayesian entailment over propositional possible worlds.

Formulas are observed through a noisy channel from a latent world drawn from
a categorical prior; entailment is a threshold on the predictive probability
of the conclusion given the premises.  Classical, paraconsistent and
preferential consequence fall out as special cases, and the same machinery
doubles as a categorical classifier over tabular data.
"""

from .consequence import (EntailmentVerdict, PreferenceError, PreferentialStructure,
                          ZeroMassSupport, bayesian_classical_entails, classical_entails,
                          is_order_preserving, limit_posterior, map_entails_wrt,
                          map_worlds_wrt, paraconsistent_entails, paraconsistent_predictive,
                          preferential_entails, prior_from_preference, read_preference_file)
from .logic import (And, Atom, AtomNotInWorld, EnumerationLimitError, Formula,
                    FormulaSyntaxError, Iff, ImpliedBy, Implies, KnowledgeBase, LogicError,
                    Not, Or, PossibleWorld, Signature, UnknownAtom, WorldSpace, atoms_of,
                    evaluate, max_support_worlds, models, parse_formula, read_kb_file, render,
                    satisfied_count, space_for)
from .model import (UNDEFINED, DistributionError, LogicalModel, WorldDistribution,
                    bayesian_entails, likelihood, map_entails, map_worlds, marginal, posterior,
                    predictive, read_prior_csv, set_likelihood, write_prior_csv)

__version__ = "0.1.0"
