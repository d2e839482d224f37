"""Dense realisation of spanning-set matrices, used as brute-force ground truth.

Entries are evaluated straight from the defining formulas over every index
pair ``(I, J)``.  Flat layout: the last tensor factor varies fastest.  For
Sp(n) the basis ``1, 1', ..., m, m'`` is encoded as ``1, 2, ..., 2m-1, 2m``.
"""
from __future__ import annotations

import csv
import itertools
import json
import os
from typing import Sequence

import numpy as np

from .diagrams import (
    Group,
    GroupSpec,
    PartitionDiagram,
    classify,
    require_admissible,
)
from .errors import (
    IndexOutOfRangeError,
    NotAGroupElementError,
    ParityError,
    SizeMismatchError,
)

__all__ = [
    "epsilon",
    "chi",
    "flat_index",
    "multi_index",
    "dense_matrix",
    "naive_mult",
    "naive_op_counts",
    "group_element_action",
    "check_group_element",
    "sample_generator",
    "symplectic_form",
    "export_dense",
]


def flat_index(digits: Sequence[int], n: int) -> int:
    """Offset of the 1-based multi-index ``digits`` (last digit fastest)."""
    offset = 0
    for x in digits:
        if not 1 <= x <= n:
            raise IndexOutOfRangeError(f"digit {x} outside [1, {n}]")
        offset = offset * n + (x - 1)
    return offset


def multi_index(offset: int, n: int, order: int) -> tuple[int, ...]:
    if not 0 <= offset < n**order:
        raise IndexOutOfRangeError(f"offset {offset} outside [0, {n**order})")
    digits = []
    for _ in range(order):
        offset, r = divmod(offset, n)
        digits.append(r + 1)
    return tuple(reversed(digits))


def epsilon(a: int, b: int, g: GroupSpec) -> int:
    """Symplectic pairing on 1-based indices: +1 for (2p-1, 2p), -1 for (2p, 2p-1)."""
    if g.group is not Group.SYMPLECTIC:
        raise ValueError(f"epsilon is only defined for Sp(n), got {g}")
    if not (1 <= a <= g.n and 1 <= b <= g.n):
        raise IndexOutOfRangeError(f"indices ({a}, {b}) outside [1, {g.n}]")
    pa, pb = (a + 1) // 2, (b + 1) // 2
    if pa != pb or a == b:
        return 0
    return 1 if a % 2 == 1 else -1


def chi(top_free: Sequence[int], bottom_free: Sequence[int], n: int) -> int:
    """Sign of ``(1..n) -> (t_1..t_s, b_1..b_{n-s})``, or 0 if entries repeat."""
    word = list(top_free) + list(bottom_free)
    if len(word) != n:
        raise SizeMismatchError(f"chi needs {n} free indices, got {len(word)}")
    if any(not 1 <= x <= n for x in word):
        raise IndexOutOfRangeError(f"free indices {word} outside [1, {n}]")
    if len(set(word)) != n:
        return 0
    inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if word[i] > word[j])
    return -1 if inversions % 2 else 1


def symplectic_form(n: int) -> np.ndarray:
    """Matrix of the pairing: ``J[a-1, b-1] == epsilon(a, b)``."""
    if n % 2:
        raise ParityError(f"symplectic form needs even n, got {n}")
    J = np.zeros((n, n), dtype=np.int64)
    for p in range(0, n, 2):
        J[p, p + 1] = 1
        J[p + 1, p] = -1
    return J


def _all_indices(n: int, order: int) -> np.ndarray:
    # (order, n**order) array of 0-based digits, last digit fastest.
    if order == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.indices((n,) * order, dtype=np.int64).reshape(order, -1)


def _chi_columns(cols: np.ndarray, n: int) -> np.ndarray:
    # Vectorised chi over rows of ``cols`` (shape (N, n), 0-based digits).
    distinct = np.ones(cols.shape[0], dtype=bool)
    parity = np.zeros(cols.shape[0], dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        distinct &= cols[:, i] != cols[:, j]
        parity += cols[:, i] > cols[:, j]
    return np.where(distinct, np.where(parity % 2, -1, 1), 0).astype(np.int64)


def dense_matrix(g: GroupSpec, d: PartitionDiagram) -> np.ndarray:
    """The ``n^l x n^k`` integer matrix that ``g`` assigns to ``d``.

    O(n), Sn and Brauer diagrams under SO(n): all indices in a block agree.
    Sp(n): cross-row pairs contribute a delta, same-row pairs contribute
    ``epsilon(left, right)``.  ``(l+k)\\n`` diagrams under SO(n): chi of the
    free indices times deltas on the pairs.
    """
    kind = require_admissible(d, g)
    n = g.n
    idx = _all_indices(n, d.size)
    values = np.ones(idx.shape[1], dtype=np.int64)

    if kind.tag == "NDiagram" and g.group is Group.SPECIAL_ORTHOGONAL:
        c = classify(d)
        free = [x - 1 for x in c.top_free + c.bottom_free]
        values *= _chi_columns(idx[free].T, n) if free else 1
        pairs = [b for b in d.blocks if len(b) == 2]
    else:
        pairs = [b for b in d.blocks if len(b) > 1]

    for block in pairs:
        rows = [x - 1 for x in block]
        same_row = d.is_top(block[0]) == d.is_top(block[-1])
        if g.group is Group.SYMPLECTIC and same_row:
            J = symplectic_form(n)
            values *= J[idx[rows[0]], idx[rows[1]]]
        else:
            for r in rows[1:]:
                values *= idx[rows[0]] == idx[r]
    return values.reshape(n**d.l, n**d.k)


def naive_op_counts(rows: int, cols: int) -> dict:
    """Dense matrix-vector cost: ``rows*cols`` products, ``rows*(cols-1)`` additions."""
    return {"multiplications": rows * cols, "additions": rows * (cols - 1)}


def naive_mult(M: np.ndarray, v, counter=None, out_order: int | None = None):
    """Plain dense product ``M @ v``; records its cost in ``counter`` if given.

    ``v`` may be a :class:`~diagmult.kernels.TensorVector` or a flat array; the
    result has the same type.  ``out_order`` names the output tensor order and
    is only needed for a TensorVector with ``n == 1``.
    """
    from .kernels import TensorVector

    coeffs = v.coeffs if isinstance(v, TensorVector) else np.asarray(v)
    if M.ndim != 2 or M.shape[1] != coeffs.shape[0]:
        raise SizeMismatchError(f"matrix with {M.shape[-1]} columns cannot act on length {coeffs.shape[0]}")
    out = M.astype(coeffs.dtype) @ coeffs if coeffs.dtype != object else M.astype(object) @ coeffs
    if counter is not None:
        counter.reset()
        counter.record("naive", **naive_op_counts(*M.shape))
    if isinstance(v, TensorVector):
        if out_order is None:
            if v.n == 1 and M.shape[0] == 1:
                raise ValueError("out_order is ambiguous for n == 1; pass it explicitly")
            out_order = round(np.log(M.shape[0]) / np.log(v.n)) if v.n > 1 else 0
        return TensorVector(v.n, out_order, out)
    return out


# -- group actions ------------------------------------------------------------


def check_group_element(g: GroupSpec, elem) -> np.ndarray:
    """Validate an exact integer generator of ``g``; returns it as an int array."""
    a = np.asarray(elem)
    if a.shape != (g.n, g.n):
        raise NotAGroupElementError(f"expected a {g.n}x{g.n} matrix, got shape {a.shape}")
    if not np.all(np.equal(np.mod(a, 1), 0)):
        raise NotAGroupElementError("generators must have integer entries")
    a = a.astype(np.int64)
    eye = np.eye(g.n, dtype=np.int64)
    if g.group is Group.SYMMETRIC:
        ok = np.isin(a, (0, 1)).all() and (a.sum(0) == 1).all() and (a.sum(1) == 1).all()
        if not ok:
            raise NotAGroupElementError("not a permutation matrix")
    elif g.group is Group.SYMPLECTIC:
        J = symplectic_form(g.n)
        if not np.array_equal(a.T @ J @ a, J):
            raise NotAGroupElementError("matrix does not preserve the symplectic form")
    else:
        if not np.array_equal(a.T @ a, eye):
            raise NotAGroupElementError("matrix is not orthogonal")
        if g.group is Group.SPECIAL_ORTHOGONAL and round(np.linalg.det(a)) != 1:
            raise NotAGroupElementError("determinant is not +1")
    return a


def group_element_action(g: GroupSpec, elem, v, order: int | None = None):
    """Apply ``elem`` to every tensor factor of ``v``, one axis at a time."""
    from .kernels import TensorVector

    a = check_group_element(g, elem)
    if isinstance(v, TensorVector):
        coeffs, order = v.coeffs, v.order
    else:
        coeffs = np.asarray(v)
        if order is None:
            raise ValueError("order is required when v is a flat array")
    if coeffs.shape != (g.n**order,):
        raise SizeMismatchError(f"expected {g.n**order} coefficients, got {coeffs.shape}")
    t = coeffs.reshape((g.n,) * order)
    a = a.astype(coeffs.dtype) if coeffs.dtype != object else a.astype(object)
    for axis in range(order):
        t = np.moveaxis(np.tensordot(a, t, axes=([1], [axis])), 0, axis)
    out = t.reshape(-1)
    return TensorVector(g.n, order, out) if isinstance(v, TensorVector) else out


def sample_generator(g: GroupSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw an exact integer group element of ``g``.

    O(n): signed permutation.  SO(n): signed permutation with determinant +1.
    Sn: permutation.  Sp(n): a swap of two symplectic pairs, a unimodular 2x2
    block on one pair, or a transvection ``I + c u u^T J``.
    """
    n = g.n
    if g.group is Group.SYMPLECTIC:
        m = n // 2
        choice = rng.integers(3)
        a = np.eye(n, dtype=np.int64)
        if choice == 0 and m > 1:
            p, q = rng.choice(m, size=2, replace=False)
            perm = np.arange(m)
            perm[[p, q]] = perm[[q, p]]
            a = np.zeros((n, n), dtype=np.int64)
            for dst, src in enumerate(perm):
                a[2 * dst, 2 * src] = 1
                a[2 * dst + 1, 2 * src + 1] = 1
        elif choice == 1 or m == 1:
            p = rng.integers(m)
            while True:
                x, y, z = rng.integers(-2, 3, size=3)
                # det [[x, y], [z, w]] = 1 with x != 0
                if x != 0 and (1 + y * z) % x == 0:
                    w = (1 + y * z) // x
                    break
            a[2 * p : 2 * p + 2, 2 * p : 2 * p + 2] = [[x, y], [z, w]]
        else:
            u = rng.integers(-1, 2, size=n)
            c = int(rng.choice([-1, 1]))
            a = a + c * np.outer(u, u) @ symplectic_form(n)
        return check_group_element(g, a)

    perm = rng.permutation(n)
    a = np.zeros((n, n), dtype=np.int64)
    a[perm, np.arange(n)] = 1
    if g.group is Group.SYMMETRIC:
        return a
    signs = rng.choice([-1, 1], size=n)
    a = a * signs
    if g.group is Group.SPECIAL_ORTHOGONAL and round(np.linalg.det(a)) != 1:
        a[:, 0] *= -1
    return check_group_element(g, a)


def export_dense(M: np.ndarray, g: GroupSpec, d: PartitionDiagram, csv_path: str | os.PathLike) -> dict:
    """Write ``M`` as integer CSV and return the JSON header describing it."""
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in M.tolist():
            writer.writerow(row)
    header = {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "group": g.group.value,
        "n": g.n,
        "diagram": d.to_json(),
    }
    header_path = os.fspath(csv_path) + ".json"
    with open(header_path, "w") as fh:
        json.dump(header, fh, indent=2)
    return header
