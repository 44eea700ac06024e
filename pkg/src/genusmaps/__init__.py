"""Exact enumeration of rooted maps of unfixed genus.

Recursive counting series, combinatorial map structures, prescribed-outdegree
orientations, blossoming-tree bijections, and exhaustive brute-force oracles
that verify every identity at desk scale.
"""

from .pseries import PolyCoeff, TruncatedSeries, SeriesError, NonInvertibleError
from .recursion import (
    DyckPath,
    SystemSolution,
    WeightedSequence,
    enumerate_dyck,
    solve_eulerian,
    solve_bipartite,
    solve_threeregular,
    check_identity,
    face_colored_T,
    phi_bijection,
    phi_inverse,
)

__all__ = [
    "PolyCoeff",
    "TruncatedSeries",
    "SeriesError",
    "NonInvertibleError",
    "DyckPath",
    "SystemSolution",
    "WeightedSequence",
    "enumerate_dyck",
    "solve_eulerian",
    "solve_bipartite",
    "solve_threeregular",
    "check_identity",
    "face_colored_T",
    "phi_bijection",
    "phi_inverse",
]

__version__ = "0.1.0"
