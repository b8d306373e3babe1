"""Dyck edit distance under a threshold."""
from .core import (HeightProfile, ParenAlphabet, ParenSeq, Reduced, Symbol, height_profile,
                   midpoint_set, pair_cost, reduce_valleys, reverse_complement)
from .encoding import ParseError, dumps, format_ascii, parse, parse_ascii, parse_tokens
from .geometry import Cluster, DecompTree, Trapezoid, build_decomposition, maximal_trapezoids
from .lvtrap import Band, DiagonalTable, diagonal_tables, process_trapezoid
from .minplus import (BDMatrix, MinPlusParams, SampleState, minplus_bd, minplus_small_entries,
                      phase1_block_approx, phase2_sampled_products, phase3_complete)
from .oracle import CostTable, dp_cubic, exhaustive_distance, minplus_naive
from .solver import SolveStats, process_cluster, solve_fast, solve_k5, solve_quadratic
from .valiant import (RecursionContext, WeightedDecomposition, op_complete, op_compute, op_update,
                      valiant_fill, weighted_decomposition)
from .valleydp import dp_restricted

__all__ = [
    "Band", "BDMatrix", "Cluster", "CostTable", "DecompTree", "DiagonalTable", "HeightProfile",
    "MinPlusParams", "ParenAlphabet", "ParenSeq", "ParseError", "RecursionContext", "Reduced",
    "SampleState", "SolveStats", "Symbol", "Trapezoid", "WeightedDecomposition",
    "build_decomposition", "diagonal_tables", "dp_cubic", "dp_restricted", "dumps",
    "exhaustive_distance", "format_ascii", "height_profile", "maximal_trapezoids", "midpoint_set", "minplus_bd",
    "minplus_naive", "minplus_small_entries", "op_complete", "op_compute", "op_update",
    "pair_cost", "parse", "parse_ascii", "parse_tokens", "phase1_block_approx", "phase2_sampled_products", "phase3_complete",
    "process_cluster", "process_trapezoid", "reduce_valleys", "reverse_complement", "solve_fast",
    "solve_k5", "solve_quadratic", "valiant_fill", "weighted_decomposition",
]
