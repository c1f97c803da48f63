"""Hopsets, weight rounding, weight decomposition and the distance oracle."""
from .build import Hopset, HopsetParams, Schedule, hopset_build
from .decomposition import map_query, weight_decomposition
from .lowdepth import low_depth_hopset
from .oracle import OracleIndex, build_oracle, query_many, query_oracle
from .rounding import round_weights

__all__ = [
    "Hopset", "HopsetParams", "Schedule", "hopset_build",
    "weight_decomposition", "map_query", "round_weights",
    "OracleIndex", "build_oracle", "query_oracle", "query_many",
    "low_depth_hopset",
]
