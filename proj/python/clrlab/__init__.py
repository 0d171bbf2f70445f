from ._core import (
    bargmann_1d,
    dyadic_witness_count,
    lattice_count,
    p0_lattice,
    p1_lattice_1d,
    p_alpha,
    refined_bargmann_1d,
    regularized_resolvent_1d,
    resolvent_lattice_1d,
    sparse_delta_witnesses,
)

__all__ = [
    "bargmann_1d",
    "dyadic_witness_count",
    "lattice_count",
    "p0_lattice",
    "p1_lattice_1d",
    "p_alpha",
    "refined_bargmann_1d",
    "regularized_resolvent_1d",
    "resolvent_lattice_1d",
    "sparse_delta_witnesses",
]
