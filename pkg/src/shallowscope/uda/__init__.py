"""Unique determination by marginals: kernels, impostor search and complexity bounds."""

from shallowscope.uda import complexity
from shallowscope.uda.complexity import ComplexityVerdict, SearchConfig, complexity_lower_bound
from shallowscope.uda.impostor import NO_IMPOSTOR, NOT_UDA, UdaVerdict, ghz_counterexample, impostor_search
from shallowscope.uda.kernel import KernelBasis, MarginalMap, kernel_basis

__all__ = [
    "NOT_UDA",
    "NO_IMPOSTOR",
    "ComplexityVerdict",
    "KernelBasis",
    "MarginalMap",
    "SearchConfig",
    "UdaVerdict",
    "complexity",
    "complexity_lower_bound",
    "ghz_counterexample",
    "impostor_search",
    "kernel_basis",
]
