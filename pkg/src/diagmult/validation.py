"""Input checks shared by the layer estimator and the command line."""
from __future__ import annotations

import numpy as np

from .diagrams import Group, GroupSpec
from .errors import SizeMismatchError

__all__ = ["check_group", "check_order", "check_vector", "check_batch"]


def check_group(group, n) -> GroupSpec:
    """Build a :class:`GroupSpec` from loose inputs (name or enum, int-like n)."""
    if isinstance(group, GroupSpec):
        if n is not None and int(n) != group.n:
            raise SizeMismatchError(f"{group} does not act on R^{n}")
        return group
    if isinstance(n, bool) or int(n) != n:
        raise SizeMismatchError(f"n must be an integer, got {n!r}")
    return GroupSpec(Group.parse(group), int(n))


def check_order(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or value < 0:
        raise SizeMismatchError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def check_vector(v, n: int, order: int) -> np.ndarray:
    """Flat coefficient array of length ``n**order``."""
    a = np.asarray(v)
    if a.ndim != 1 or a.shape[0] != n**order:
        raise SizeMismatchError(f"expected {n**order} coefficients, got shape {a.shape}")
    return a


def check_batch(X, n: int, order: int) -> np.ndarray:
    """Rows of flat coefficient arrays, shape ``(n_samples, n**order)``."""
    a = np.asarray(X)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != n**order:
        raise SizeMismatchError(f"expected shape (n_samples, {n**order}), got {np.shape(X)}")
    return a
