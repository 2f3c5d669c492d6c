"""Concrete constant-diagonal projections that fail paving, built from scaled DFT blocks."""

__version__ = "0.1.0"

from .construction import (CounterexampleFrame, FrameParams, build_block, build_projection,
                           build_stack, delta, delta_exact, delta_partial_sum,
                           delta_partial_sum_exact)
from .partition import Partition, SearchResult, evaluate_partition, exhaustive_search
from .witness import RieszWitness, find_witness, verify_witness

__all__ = [
    "CounterexampleFrame", "FrameParams", "Partition", "RieszWitness", "SearchResult",
    "build_block", "build_projection", "build_stack", "delta", "delta_exact",
    "delta_partial_sum", "delta_partial_sum_exact", "evaluate_partition", "exhaustive_search",
    "find_witness", "verify_witness",
]
