"""
Shared test data: the sample graph of the incomplete 2-ball encoding and
the published counts and invariants the tests compare against.
"""
from typing import Dict, List, Tuple

__all__ = [
    "sample_edges",
    "sample_ball",
    "sample_n",
    "table1_totals",
    "table1_nonneg",
    "table1_out_regular",
    "curvature_by_class",
    "named_invariants",
    "table3_types",
    "empty_seeds",
]

# Center 0, S1 = 1..4, S2 = 5..9; (5, 8) is an edge inside S2 and must not
# show up in the incomplete 2-ball
sample_n = 10
sample_edges: List[Tuple[int, int]] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 3),
    (2, 4),
    (1, 5),
    (3, 5),
    (1, 6),
    (3, 6),
    (2, 7),
    (4, 7),
    (2, 8),
    (4, 9),
    (5, 8),
]
sample_ball = {"s1": [0, 1, 0, 0, 1, 0], "s1s2": [[1, 3], [1, 3], [2, 4], [2], [4]]}

# Balls per standard S1 structure, all and with non-negative curvature
table1_totals = [93, 120, 40, 55, 8, 10, 24, 7, 5, 2, 1]
table1_nonneg = [46, 55, 24, 31, 8, 4, 21, 7, 5, 2, 1]
table1_out_regular = [True, False, True, False, False, False, False, True, False, False, True]

# Curvature of a sharp center by number of triangles per edge
curvature_by_class = {3: 3.5, 2: 3.0, 1: 2.5, 0: 2.0}

# name: (|V|, curvature, diameter, ball type)
named_invariants: Dict[str, Tuple[int, float, int, str]] = {
    "K5": (5, 3.5, 1, "1.1"),
    "O": (6, 3.0, 2, "2.1"),
    "K3xK3": (9, 2.5, 2, "3.3"),
    "K44": (8, 2.0, 2, "4.10"),
    "C10": (10, 2.0, 3, "4.9"),
    "D12": (12, 2.0, 3, "4.6"),
    "D14": (14, 2.0, 3, "4.5"),
    "Q4": (16, 2.0, 4, "4.5"),
}

table3_types = {
    "1.1": ["K5"],
    "2.1": ["O"],
    "3.3": ["K3xK3"],
    "4.5": ["D14", "Q4"],
    "4.6": ["D12"],
    "4.9": ["C10"],
    "4.10": ["K44"],
}

empty_seeds = [
    "2.2",
    "2.3",
    "2.4",
    "2.5",
    "2.6",
    "2.7",
    "3.1",
    "3.2",
    "3.4",
    "4.1",
    "4.2",
    "4.3",
    "4.4",
    "4.7",
    "4.8",
]
