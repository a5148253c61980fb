"""Combinatorial certificates for Morse-theoretic finiteness checks on products of graphs.

Modules:
    bigraph     sign-blocked bipartite graphs, modular specs, sizeability checks
    cubeworld   product cube complexes, vertex links, cell counts
    simplicial  finite simplicial complexes, homology, connectivity certificates
    morse       characters, sign chambers, living-link hypothesis checks
    cover       the branched cover of a product of theta graphs
    cli         command line entry point
"""

from .bigraph import (BlockId, ModularSpec, MorseGraph, build_modular_spec, load_graph_file,
                      realize, verify_sizeable)
from .cover import VoltageCover, build_voltage_cover, check_theta_family, verify_cover_properties
from .cubeworld import (CellCounts, ProductCubeComplex, build_theta_cube, build_x_gamma,
                        cell_counts, check_flag_links)
from .morse import (Character, VerificationReport, check_dead_links_full,
                    check_theorem_hypotheses, enumerate_chambers)
from .simplicial import SimplicialComplex, connectivity, h1, link_of_simplex
from .verdicts import BudgetExceeded, InputError, Verdict

__all__ = [
    "BlockId", "BudgetExceeded", "CellCounts", "Character", "InputError", "ModularSpec",
    "MorseGraph", "ProductCubeComplex", "SimplicialComplex", "VerificationReport", "Verdict",
    "VoltageCover", "build_modular_spec", "build_theta_cube", "build_voltage_cover",
    "build_x_gamma", "cell_counts", "check_dead_links_full", "check_flag_links",
    "check_theorem_hypotheses", "check_theta_family", "connectivity", "enumerate_chambers",
    "h1", "link_of_simplex", "load_graph_file", "realize", "verify_cover_properties",
    "verify_sizeable",
]
