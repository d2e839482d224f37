"""Multiply by group-equivariant spanning-set matrices without forming them.

Diagrams for O(n), SO(n), Sp(n) and Sn are factored into a permutation, a
planar diagram and another permutation; the planar part is applied as a
sequence of small Kronecker factors.  A dense oracle gives exact ground truth.
"""
from .diagrams import (
    BlockClassification,
    DiagramKind,
    Group,
    GroupSpec,
    PartitionDiagram,
    Permutation,
    classify,
    enumerate_diagrams,
    is_planar,
    kind_of,
    new_diagram,
    relabel_rows,
    tensor_product,
)
from .errors import DiagmultError
from .factorization import Atom, Factorization, PlanarDecomposition, factor, split_planar
from .kernels import OpCounter, TensorVector, layer_apply, matrix_mult, op_report, permute, planar_mult
from .layers import EquivariantLayer, build_layer, export_weights, import_weights
from .oracle import chi, dense_matrix, epsilon, group_element_action, naive_mult

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BlockClassification",
    "DiagmultError",
    "DiagramKind",
    "EquivariantLayer",
    "Factorization",
    "Group",
    "GroupSpec",
    "OpCounter",
    "PartitionDiagram",
    "Permutation",
    "PlanarDecomposition",
    "TensorVector",
    "build_layer",
    "chi",
    "classify",
    "dense_matrix",
    "enumerate_diagrams",
    "epsilon",
    "export_weights",
    "factor",
    "group_element_action",
    "import_weights",
    "is_planar",
    "kind_of",
    "layer_apply",
    "matrix_mult",
    "naive_mult",
    "new_diagram",
    "op_report",
    "permute",
    "planar_mult",
    "relabel_rows",
    "split_planar",
    "tensor_product",
]
