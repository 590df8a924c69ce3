"""Plank covers of convex polytopes, peeling orders, and Bang-sum certificates."""

from .certifier import bang_sum, certify, find_peeling_order, verify_certificate
from .configurations import Scene, hunter_triangle, random_peelable_scene, regular_polygon, slab_partition
from .coverage import convex_residual, covers, residual_cells, residual_sequence
from .geometry import ConvexBody, Direction, HalfSpace, support, width
from .numeric import FLOAT, RATIONAL
from .planks import Plank, bang_ratio

__all__ = [
    "FLOAT",
    "RATIONAL",
    "ConvexBody",
    "Direction",
    "HalfSpace",
    "Plank",
    "Scene",
    "bang_ratio",
    "bang_sum",
    "certify",
    "convex_residual",
    "covers",
    "find_peeling_order",
    "hunter_triangle",
    "random_peelable_scene",
    "regular_polygon",
    "residual_cells",
    "residual_sequence",
    "slab_partition",
    "support",
    "verify_certificate",
    "width",
]
