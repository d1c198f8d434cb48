"""Pauli-measurement tomography: full-state, rank-r and overlapping estimators."""

from shallowscope.tomography.accumulator import (
    FULL_STATE_MAX_QUBITS,
    PauliAccumulator,
    accumulate,
    accumulate_arrays,
)
from shallowscope.tomography.budget import SCENARIOS, TOMOGRAPHY_CONSTANT, SampleBudget, plan_budget
from shallowscope.tomography.estimators import (
    MarginalEstimateSet,
    bucket_threshold,
    empirical_distribution,
    estimate_state,
    overlapping_tomography,
    project_psd,
    project_rank_r,
)

__all__ = [
    "FULL_STATE_MAX_QUBITS",
    "MarginalEstimateSet",
    "PauliAccumulator",
    "SCENARIOS",
    "SampleBudget",
    "TOMOGRAPHY_CONSTANT",
    "accumulate",
    "accumulate_arrays",
    "bucket_threshold",
    "empirical_distribution",
    "estimate_state",
    "overlapping_tomography",
    "plan_budget",
    "project_psd",
    "project_rank_r",
]
