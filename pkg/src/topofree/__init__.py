"""Free Graev presentations of open subgroups over finite spaces."""
from .cover import SubgroupSpec, decide_open, schreier_cover, subgroup_basis, verify_presentation
from .finspace import FinSpace, PointedFinSpace, path_components, quotient
from .graev import classify
from .topgraph import TopGraph, maximal_tree

__all__ = [
    "FinSpace",
    "PointedFinSpace",
    "SubgroupSpec",
    "TopGraph",
    "classify",
    "decide_open",
    "maximal_tree",
    "path_components",
    "quotient",
    "schreier_cover",
    "subgroup_basis",
    "verify_presentation",
]
