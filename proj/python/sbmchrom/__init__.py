"""Chromatic numbers of stochastic block model graphs.

Graph objects and plain numbers pass straight through; structured results
(decompositions, colourings, predictions) come back as dicts.
"""

import json as _json

from . import _sbmchrom as _core
from ._sbmchrom import (
    ConfigError,
    Graph,
    GraphError,
    GuardExceeded,
    InstanceTooLarge,
    ModelError,
    PredictionError,
    blow_up,
    build_q,
    exact_chromatic,
    is_pseudodefinite,
    max_avg_degree,
    percolate,
    sample_sbm,
    two_block_thresholds,
    w_value,
)

__all__ = [
    "ConfigError", "Graph", "GraphError", "GuardExceeded", "InstanceTooLarge", "ModelError",
    "PredictionError", "alpha_h", "blow_up", "build_q", "dsatur", "exact_chromatic", "extraction",
    "is_pseudodefinite", "max_avg_degree", "percolate", "predict_gnp", "predict_sbm",
    "predict_two_block", "run_experiment", "sample_sbm", "two_block_thresholds", "w_star_bruteforce",
    "w_star_solve", "w_value",
]


def w_star_bruteforce(x, q):
    return _json.loads(_core.w_star_bruteforce(list(x), q))


def w_star_solve(x, q, restarts=8, seed=0):
    return _json.loads(_core.w_star_solve(list(x), q, restarts, seed))


def dsatur(g, seed=0):
    return _json.loads(_core.dsatur(g, seed))


def extraction(sizes, p, g, epsilon=0.2, seed=0):
    return _json.loads(_core.extraction(list(sizes), p, g, epsilon, seed))


def alpha_h(sizes, p, g, exact=False, seed=0):
    """Returns (h value, best vertex set)."""
    return _core.alpha_h(list(sizes), p, g, exact, seed)


def predict_gnp(n, p):
    return _json.loads(_core.predict_gnp(n, p))


def predict_sbm(sizes, p, wstar, normalization="qstar_form"):
    return _json.loads(_core.predict_sbm(list(sizes), p, wstar, normalization))


def predict_two_block(n1, n2, p11, p22, p12, normalization="sigma_form"):
    return _json.loads(_core.predict_two_block(n1, n2, p11, p22, p12, normalization))


def run_experiment(config):
    """Runs an experiment config (dict or JSON text) and returns the report CSV."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _core.run_experiment(text)
