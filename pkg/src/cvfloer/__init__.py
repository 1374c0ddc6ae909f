"""Floer-type GF(2) homology of combinatorial vector fields on cell complexes."""

from .cell_complex import CellComplex, from_simplices, parse_complex
from .dynamics import ClosedOrbit, chain_recurrent_set, closed_orbits, successor_graph, v_paths_between
from .floer import FloerComplex, build_floer_complex, check_exclusions
from .homology_z2 import GF2Matrix, betti_cellular, rank_gf2
from .vector_field import VectorField, parse_field, parse_fixture, validate_field

__all__ = [
    "CellComplex",
    "ClosedOrbit",
    "FloerComplex",
    "GF2Matrix",
    "VectorField",
    "betti_cellular",
    "build_floer_complex",
    "chain_recurrent_set",
    "check_exclusions",
    "closed_orbits",
    "from_simplices",
    "parse_complex",
    "parse_field",
    "parse_fixture",
    "rank_gf2",
    "successor_graph",
    "v_paths_between",
    "validate_field",
]
