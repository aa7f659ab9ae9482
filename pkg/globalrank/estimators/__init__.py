"""Rank estimators for the globalrank package."""

from .closeness import ClosenessEstimator, ClosenessModel, SigmoidParams
from .powerlaw import PowerLawEstimator, PowerLawParams
from .result import RankEstimate
from .sampling import Sample, SamplingEstimator

__all__ = [
    "ClosenessEstimator",
    "ClosenessModel",
    "PowerLawEstimator",
    "PowerLawParams",
    "RankEstimate",
    "Sample",
    "SamplingEstimator",
    "SigmoidParams",
]
