"""Certificates for solution groups of linear system games over Z_p."""
from .zmod import INF, Modulus, egcd, smith_normal_form, solve_mod, cyclic_membership
from .hypergraph import Hypergraph, berge_girth, brute_girth, from_matrix, min_degree, theorem_hypothesis
from .planemap import CombinatorialMap, check_planar_embedding, trace_faces, sc_witness
from .picture import LinearSystem, Picture, verify, phase, certify, reduce
from .graphs import Graph, incidence_matrix, incidence_system, cover_to_picture, verify_cover

__version__ = "0.1.0"
