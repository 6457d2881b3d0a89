"""Variance uncertainty regions for pairs of projectors."""

import json as _json

from . import _uregion as _ur
from ._uregion import (
    BoxBoundaryFallback,
    GaussianPacket,
    Membership,
    NoQubitEvents,
    OutOfAnalyticScope,
    alpha_feasible,
    classify_grid,
    jordan_decompose,
    membership,
    oracle_region,
    principal_angles,
    qubit_boundary,
    qudit_boundary,
    sample_scatter,
    solve_packet_for,
    xp_membership,
)

VERDICTS = ("interior", "boundary", "outside")


def default_plan(seed=1):
    return _json.loads(_ur.default_plan_json(seed))


def run_experiment(plan, threads=1):
    """Panels for a plan given as a dict in the CLI plan format."""
    return _ur.run_experiment_json(_json.dumps(plan), threads)


def verify(seed=1, threads=1, only=(), inject_fault=False):
    return _json.loads(_ur.verify_json(seed, threads, list(only), inject_fault))

