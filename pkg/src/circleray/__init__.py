"""Circle graphs as grounded rays, and the hardness reductions built on them.

Pipeline: chord diagram -> rays on y = x! -> needle segment cover instance ->
curve simplification instance, with exact solvers and checkers at each stage.
"""

from .chord_graph import (
    ChordDiagram,
    Graph,
    all_diagrams,
    cycle_to_path_gadget,
    hamiltonian_cycle,
    hamiltonian_path,
    intersection_graph,
)
from .cover_solver import CoverWitness, GuardError, Polyline, solve_cover, verify_cover
from .curve_simplify import (
    SimplificationInstance,
    build_dcs_instance,
    check_cone_structure,
    directed_hausdorff_leq,
    safe_delta,
    usable_delta,
)
from .exact_geom import Point, Ray, Segment
from .needle_reduce import CoverInstance, build_cover_instance
from .ray_embed import RayEmbedding, embed, ray_graph

__version__ = "0.1.0"

__all__ = [
    "ChordDiagram",
    "CoverInstance",
    "CoverWitness",
    "Graph",
    "GuardError",
    "Point",
    "Polyline",
    "Ray",
    "RayEmbedding",
    "Segment",
    "SimplificationInstance",
    "all_diagrams",
    "build_cover_instance",
    "build_dcs_instance",
    "check_cone_structure",
    "cycle_to_path_gadget",
    "directed_hausdorff_leq",
    "embed",
    "hamiltonian_cycle",
    "hamiltonian_path",
    "intersection_graph",
    "ray_graph",
    "safe_delta",
    "solve_cover",
    "usable_delta",
    "verify_cover",
]
