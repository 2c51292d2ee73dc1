"""Bayesian predictive entailment as a categorical classifier."""

from .data import (TITANIC_SCHEMA, DataRow, Dataset, DatasetTooSmall, EmptyDataset,
                   MalformedRow, MissingColumn, Schema, SplitConfig, load_csv, split)
from .evaluate import Metrics, evaluate, majority_accuracy, rank_auc, roc_auc, roc_curve, run_protocol
from .model import (DEFAULT_GRID, DataWorlds, EmptyGrid, TrainedModel, UnknownColumn,
                    fit_worlds, goal_probability, likelihood_on_row, predict, select_mu)
