"""Exact optimization and landscape analysis for the Grand Canonical HP model."""

from .landscape import (
    diameter,
    extreme_h_count,
    intersect_dags,
    is_connected_under,
    min_mutation_system,
    nearest_optimal,
)
from .mincut import build_network, max_flow, minimize, one_optimum
from .model import (
    FitnessFunction,
    Geometry,
    build_phi_from_geometry,
    evaluate,
    hp_encode,
    rationalize,
    sigmoid_g,
)
from .paramsweep import energy_distance_landscape, suboptimal_stream, trace_envelope, tune_beta
from .pqdag import PQDag, count_bound, dag_to_phi, enumerate_optima, ideal_to_sequence, pq_dag

__all__ = [
    "FitnessFunction",
    "Geometry",
    "PQDag",
    "build_network",
    "build_phi_from_geometry",
    "count_bound",
    "dag_to_phi",
    "diameter",
    "energy_distance_landscape",
    "enumerate_optima",
    "evaluate",
    "extreme_h_count",
    "hp_encode",
    "ideal_to_sequence",
    "intersect_dags",
    "is_connected_under",
    "max_flow",
    "min_mutation_system",
    "minimize",
    "nearest_optimal",
    "one_optimum",
    "pq_dag",
    "rationalize",
    "sigmoid_g",
    "suboptimal_stream",
    "trace_envelope",
    "tune_beta",
]
