"""Equivariant linear layers as weighted sums over a diagram spanning set."""
from __future__ import annotations

import hashlib
import json
import os

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .diagrams import GroupSpec, PartitionDiagram, enumerate_diagrams
from .errors import ChecksumMismatchError, WeightCountMismatchError
from .kernels import TensorVector, layer_apply
from .validation import check_batch, check_group, check_order

__all__ = [
    "EquivariantLayer",
    "basis_checksum",
    "build_layer",
    "apply",
    "export_weights",
    "import_weights",
]


def basis_checksum(basis: list[PartitionDiagram]) -> str:
    """sha256 of the basis as compact JSON; changes if enumeration order drifts."""
    text = json.dumps([d.to_json() for d in basis], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class EquivariantLayer(TransformerMixin, BaseEstimator):
    """``v -> sum_i w_i M(d_i) v`` over every spanning diagram of ``(group, n, k, l)``.

    ``fit`` only enumerates the basis and checks the weight count; it learns
    nothing from data.  ``transform`` maps rows of length ``n**k`` to rows of
    length ``n**l``.

    Parameters
    ----------
    group : str or Group
        ``"O"``, ``"SO"``, ``"Sp"`` or ``"Sn"``.
    n : int
    k, l : int
        Input and output tensor orders.
    weights : sequence of scalars, optional
        One weight per basis diagram, in enumeration order.  ``None`` means
        all zeros.
    max_workers : int, optional
        Thread count for evaluating terms concurrently.
    """

    def __init__(self, group="O", n=2, k=1, l=1, weights=None, max_workers=None):
        self.group = group
        self.n = n
        self.k = k
        self.l = l
        self.weights = weights
        self.max_workers = max_workers

    def fit(self, X=None, y=None):
        g = check_group(self.group, self.n)
        k, l = check_order(self.k, "k"), check_order(self.l, "l")
        basis = enumerate_diagrams(g, k, l)
        weights = np.zeros(len(basis)) if self.weights is None else np.asarray(self.weights)
        if weights.ndim != 1 or weights.shape[0] != len(basis):
            raise _weight_count_error(len(basis), np.shape(self.weights), g, k, l)
        self.group_spec_ = g
        self.basis_ = basis
        self.basis_checksum_ = basis_checksum(basis)
        self.weights_ = weights
        return self

    def apply(self, v):
        """Apply the layer to one vector (TensorVector or flat array)."""
        check_is_fitted(self, "basis_")
        terms = list(zip(self.weights_.tolist(), self.basis_))
        return layer_apply(self.group_spec_, terms, v, l=self.l, max_workers=self.max_workers)

    def transform(self, X):
        check_is_fitted(self, "basis_")
        rows = check_batch(X, self.group_spec_.n, self.k)
        out = [np.asarray(self.apply(TensorVector(self.group_spec_.n, self.k, r)).coeffs) for r in rows]
        if not out:
            return np.zeros((0, self.group_spec_.n**self.l))
        return np.stack(out)


def _weight_count_error(expected, got, g, k, l) -> WeightCountMismatchError:
    return WeightCountMismatchError(
        f"{g} with k={k}, l={l} has {expected} basis diagrams but {got} weights were given"
    )


def build_layer(g: GroupSpec, k: int, l: int, weights) -> EquivariantLayer:
    """A fitted layer for ``g`` with the given weights."""
    return EquivariantLayer(g.group.value, g.n, k, l, list(weights)).fit()


def apply(layer: EquivariantLayer, v):
    return layer.apply(v)


def export_weights(layer: EquivariantLayer, path: str | os.PathLike | None = None) -> dict:
    """Weight-file document for ``layer``; also written to ``path`` if given."""
    check_is_fitted(layer, "basis_")
    doc = {
        "group": layer.group_spec_.group.value,
        "n": layer.group_spec_.n,
        "k": layer.k,
        "l": layer.l,
        "basis_checksum": layer.basis_checksum_,
        "weights": layer.weights_.tolist(),
    }
    if path is not None:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
    return doc


def import_weights(g: GroupSpec, k: int, l: int, source) -> EquivariantLayer:
    """Rebuild a layer from a weight file (path or already-parsed dict).

    The weight count is checked against the basis of ``(g, k, l)`` first,
    then the recorded checksum against the current enumeration order.
    """
    if isinstance(source, dict):
        doc = source
    else:
        with open(source) as fh:
            doc = json.load(fh)
    weights = list(doc["weights"])
    basis = enumerate_diagrams(g, k, l)
    if len(weights) != len(basis):
        raise _weight_count_error(len(basis), len(weights), g, k, l)
    if doc.get("basis_checksum") != basis_checksum(basis):
        raise ChecksumMismatchError(
            f"weight file was written for a different basis ordering of {g}, k={k}, l={l}"
        )
    return build_layer(g, k, l, weights)
