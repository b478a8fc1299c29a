from nlpot.generators._base import Exhaustion, GeneratedGraph, exhaustion_ball
from nlpot.generators._disk import hex_positions, triangulated_disk
from nlpot.generators._family import FamilySpec
from nlpot.generators._lattice import lattice_box
from nlpot.generators._product import cartesian_product, z_shift
from nlpot.generators._random import random_connected_graph
from nlpot.generators._tessellation import hyperbolic_tessellation, is_hyperbolic
from nlpot.generators._tree import regular_tree, tree_layer_sizes

__all__ = (
    "Exhaustion",
    "FamilySpec",
    "GeneratedGraph",
    "cartesian_product",
    "exhaustion_ball",
    "hex_positions",
    "hyperbolic_tessellation",
    "is_hyperbolic",
    "lattice_box",
    "random_connected_graph",
    "regular_tree",
    "tree_layer_sizes",
    "z_shift",
)
