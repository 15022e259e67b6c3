"""Decision-diagram reachability: REACH fixpoints, BFS and saturation baselines."""
from .diagrams import DimensionError, Relation, StateSet
from .models import (
    TransitionSystem, avg_relative_bandwidth, dependency_matrix, explicit_oracle,
    gen_counter, gen_philosophers, wrap_bad_case,
)
from .reach import (
    ALGORITHMS, PartitionedSystem, ReachTimeout, RunOptions, RunStats, bfs, reach_bdd,
    reach_bdd_par, reach_mdd, run, saturate,
)
from .store import ONE, ZERO, Store, StructureError
from .tsys import parse_tsys, write_tsys

__all__ = [
    "ALGORITHMS", "DimensionError", "ONE", "PartitionedSystem", "ReachTimeout", "Relation",
    "RunOptions", "RunStats", "StateSet", "Store", "StructureError", "TransitionSystem", "ZERO",
    "avg_relative_bandwidth", "bfs", "dependency_matrix", "explicit_oracle", "gen_counter",
    "gen_philosophers", "parse_tsys", "reach_bdd", "reach_bdd_par", "reach_mdd", "run",
    "saturate", "wrap_bad_case", "write_tsys",
]
