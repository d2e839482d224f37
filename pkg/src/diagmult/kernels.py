"""Staged multiplication by a spanning-set matrix without materialising it.

``matrix_mult`` permutes the input, pushes it through the Kronecker factors
of the planar middle diagram from right to left, and permutes the result.
Contractions run before copies, and each stage writes a fresh buffer.

Operation counts come in two flavours.  ``multiplications``/``additions``
are what the kernel really executes: contractions against the pairing
tensors are gathers with signed adds, so they never multiply.  The ``formal_*``
counts tally every coefficient-by-matrix-entry product the stage formula
describes, which is how dense-versus-staged cost is usually compared.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .diagrams import Group, GroupSpec, PartitionDiagram, Permutation, classify, require_admissible
from .errors import KindMismatchError, MixedShapesError, SizeMismatchError
from .factorization import Factorization, PlanarDecomposition, factor, split_planar

__all__ = [
    "TensorVector",
    "OpCounter",
    "permute",
    "planar_mult",
    "matrix_mult",
    "layer_apply",
    "op_report",
    "plan",
]


@dataclass(frozen=True, eq=False)
class TensorVector:
    """Coefficients of a vector in ``(R^n)^{(x) order}``, flat, last factor fastest."""

    n: int
    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if coeffs.ndim != 1 or coeffs.shape[0] != self.n**self.order:
            raise SizeMismatchError(
                f"order-{self.order} tensor over R^{self.n} needs {self.n**self.order} coefficients, "
                f"got shape {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_tensor(cls, t: np.ndarray, n: int) -> "TensorVector":
        t = np.asarray(t)
        return cls(n, t.ndim, t.reshape(-1))

    def tensor(self) -> np.ndarray:
        return self.coeffs.reshape((self.n,) * self.order)

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "TensorVector":
        coeffs = np.asarray(data["coeffs"])
        return cls(int(data["n"]), int(data["order"]), coeffs)

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (
            self.n == other.n
            and self.order == other.order
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None


_COUNT_KEYS = ("multiplications", "additions", "formal_multiplications", "formal_additions")


@dataclass
class OpCounter:
    """Per-stage arithmetic counts for one top-level multiplication."""

    stages: dict[str, dict[str, int]] = field(default_factory=dict)

    def record(
        self,
        stage: str,
        multiplications: int = 0,
        additions: int = 0,
        formal_multiplications: int | None = None,
        formal_additions: int | None = None,
    ) -> None:
        values = {
            "multiplications": multiplications,
            "additions": additions,
            "formal_multiplications": multiplications if formal_multiplications is None else formal_multiplications,
            "formal_additions": additions if formal_additions is None else formal_additions,
        }
        slot = self.stages.setdefault(stage, dict.fromkeys(_COUNT_KEYS, 0))
        for key, value in values.items():
            slot[key] += int(value)

    def total(self, key: str, prefix: str = "") -> int:
        return sum(v[key] for name, v in self.stages.items() if name.startswith(prefix))

    def merge(self, other: "OpCounter", prefix: str = "") -> None:
        for name, values in other.stages.items():
            self.record(prefix + name, **values)

    def reset(self) -> None:
        self.stages.clear()


def op_report(counter: OpCounter) -> dict:
    """Per-stage and total counts as plain dictionaries."""
    return {
        "stages": {name: dict(values) for name, values in counter.stages.items()},
        "total": {key: counter.total(key) for key in _COUNT_KEYS},
    }


# -- Permute ------------------------------------------------------------------


def permute(v: TensorVector, sigma: Permutation) -> TensorVector:
    """Move the basis index at position ``sigma(p)`` to position ``p``.

    The coefficient of ``e_{i_1} (x) ... (x) e_{i_m}`` becomes the coefficient
    of ``e_{i_sigma(1)} (x) ... (x) e_{i_sigma(m)}``.  No arithmetic.
    """
    if sigma.m != v.order:
        raise SizeMismatchError(f"permutation of {sigma.m} cannot act on an order-{v.order} tensor")
    if v.order == 0 or sigma.is_identity():
        return TensorVector(v.n, v.order, v.coeffs.copy())
    axes = [s - 1 for s in sigma.mapping]
    return TensorVector(v.n, v.order, np.transpose(v.tensor(), axes).reshape(-1))


# -- stage primitives ---------------------------------------------------------


def _lead(pos: int) -> tuple:
    return (slice(None),) * pos


def _as_array(x, dtype) -> np.ndarray:
    out = np.asarray(x, dtype=dtype)
    return out


def _contract_equal(t: np.ndarray, pos: int, size: int, n: int) -> np.ndarray:
    """Sum over ``j`` of ``t[..., j, ..., j, ...]`` with ``size`` equal indices at ``pos``."""
    idx = np.arange(n)
    diag = t[_lead(pos) + (idx,) * size]
    return _as_array(diag.sum(axis=pos), t.dtype)


def _contract_epsilon(t: np.ndarray, pos: int, n: int) -> np.ndarray:
    """Sum of ``epsilon(a, b) t[..., a, b, ...]`` over the pair at ``pos``."""
    ev, od = np.arange(0, n, 2), np.arange(1, n, 2)
    plus = t[_lead(pos) + (ev, od)].sum(axis=pos)
    minus = t[_lead(pos) + (od, ev)].sum(axis=pos)
    return _as_array(plus - minus, t.dtype)


def _extract_diagonal(t: np.ndarray, pos: int, size: int, n: int) -> np.ndarray:
    if size == 1:
        return t
    idx = np.arange(n)
    return t[_lead(pos) + (idx,) * size]


def _embed_diagonal(t: np.ndarray, pos: int, size: int, n: int) -> np.ndarray:
    """Replace axis ``pos`` by ``size`` axes carrying the entries on their diagonal."""
    if size == 1:
        return t
    shape = t.shape[:pos] + (n,) * size + t.shape[pos + 1 :]
    out = np.zeros(shape, dtype=t.dtype)
    idx = np.arange(n)
    out[_lead(pos) + (idx,) * size] = t
    return out


def _prepend_copies(t: np.ndarray, size: int, n: int) -> np.ndarray:
    wide = np.array(np.broadcast_to(t, (n,) + t.shape))
    return _embed_diagonal(wide, 0, size, n)


def _prepend_epsilon(t: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n) + t.shape, dtype=t.dtype)
    ev, od = np.arange(0, n, 2), np.arange(1, n, 2)
    out[ev, od] = t
    out[od, ev] = -t
    return out


def _permutation_sign(p: Sequence[int]) -> int:
    seen, cycles = set(), 0
    for start in range(len(p)):
        if start not in seen:
            cycles += 1
            x = start
            while x not in seen:
                seen.add(x)
                x = p[x]
    return -1 if (len(p) - cycles) % 2 else 1


@lru_cache(maxsize=None)
def _chi_terms(n: int, s: int) -> tuple:
    # For each distinct top tuple T: the (sign, B) pairs completing it to a permutation of [n].
    grouped: dict[tuple, list] = {}
    for p in itertools.permutations(range(n)):
        grouped.setdefault(p[:s], []).append((_permutation_sign(p), p[s:]))
    return tuple((T, tuple(terms)) for T, terms in grouped.items())


def _free_vertex_stage(t: np.ndarray, s: int, n: int) -> tuple[np.ndarray, int]:
    """Contract the last ``n - s`` axes against chi, appending ``s`` new axes."""
    outer = t.shape[: t.ndim - (n - s)]
    out = np.zeros(outer + (n,) * s, dtype=t.dtype)
    additions = 0
    for T, terms in _chi_terms(n, s):
        acc = None
        for sign, B in terms:
            term = t[(Ellipsis,) + B]
            if acc is None:
                acc = term if sign > 0 else -term
            else:
                acc = acc + term if sign > 0 else acc - term
                additions += 1
        out[(Ellipsis,) + T] = acc
    return out, additions * math.prod(outer)


# -- PlanarMult ---------------------------------------------------------------


def _check_cross_identity(atom_diagram: PartitionDiagram) -> None:
    if any(len(b) != 2 for b in atom_diagram.blocks) or atom_diagram.l != atom_diagram.k:
        raise KindMismatchError("cross blocks must be single strands for O(n), Sp(n) and SO(n)")


def planar_mult(g: GroupSpec, dec: PlanarDecomposition, v: TensorVector, counter: OpCounter | None = None) -> TensorVector:
    """Apply the Kronecker factors of a split planar diagram, right to left."""
    if dec.group != g:
        raise KindMismatchError(f"decomposition was built for {dec.group}, not {g}")
    if v.n != g.n or v.order != dec.k:
        raise SizeMismatchError(f"expected an order-{dec.k} tensor over R^{g.n}, got order {v.order} over R^{v.n}")
    if counter is not None:
        counter.reset()
    n = g.n
    t = v.tensor()
    tail = 0

    for atom in dec.of_kind("free"):
        s = atom.diagram.l
        before = t.ndim - (n - s)
        t, additions = _free_vertex_stage(t, s, n)
        if counter is not None:
            counter.record(
                "free",
                additions=additions,
                formal_multiplications=n**before * math.factorial(n),
                formal_additions=additions,
            )
        tail = s

    bottoms = dec.of_kind("bottom")
    for i in range(len(bottoms), 0, -1):
        size = bottoms[i - 1].diagram.k
        pos = t.ndim - tail - size
        if g.group is Group.SYMPLECTIC:
            t = _contract_epsilon(t, pos, n)
        else:
            t = _contract_equal(t, pos, size, n)
        if counter is not None:
            outputs = t.size
            counter.record(
                f"bottom[{i}]",
                additions=outputs * (n - 1),
                formal_multiplications=outputs * n,
            )

    for atom in dec.of_kind("cross"):
        if g.group is Group.SYMMETRIC:
            blocks = classify(atom.diagram).cross_blocks
            upper = [sum(1 for x in b if atom.diagram.is_top(x)) for b in blocks]
            lower = [len(b) - u for b, u in zip(blocks, upper)]
            for i, size in enumerate(lower):
                t = _extract_diagonal(t, i, size, n)
            for i in range(len(blocks) - 1, -1, -1):
                t = _embed_diagonal(t, i, upper[i], n)
        else:
            _check_cross_identity(atom.diagram)
        if counter is not None:
            counter.record("cross")

    tops = dec.of_kind("top")
    for i in range(len(tops), 0, -1):
        size = tops[i - 1].diagram.l
        if g.group is Group.SYMPLECTIC:
            t = _prepend_epsilon(t, n)
        else:
            t = _prepend_copies(t, size, n)
        if counter is not None:
            counter.record(f"top[{i}]")

    if t.ndim != dec.l:
        raise SizeMismatchError(f"planar multiplication produced order {t.ndim}, expected {dec.l}")
    return TensorVector(n, dec.l, np.ascontiguousarray(t).reshape(-1))


# -- MatrixMult ---------------------------------------------------------------


@lru_cache(maxsize=4096)
def plan(g: GroupSpec, d: PartitionDiagram) -> tuple[Factorization, PlanarDecomposition]:
    """Factor ``d`` and split its planar part; cached per (group, diagram)."""
    fz = factor(g, d)
    return fz, split_planar(g, fz.planar)


def _coerce(v, n: int, order: int) -> tuple[TensorVector, bool]:
    if isinstance(v, TensorVector):
        if v.n != n or v.order != order:
            raise SizeMismatchError(f"expected an order-{order} tensor over R^{n}, got order {v.order} over R^{v.n}")
        return v, True
    return TensorVector(n, order, np.asarray(v).reshape(-1)), False


def matrix_mult(g: GroupSpec, d: PartitionDiagram, v, counter: OpCounter | None = None):
    """Multiply ``v`` by the spanning-set matrix of ``d`` without building it.

    Accepts a :class:`TensorVector` or a flat array of length ``n**k`` and
    returns the same kind of object.
    """
    require_admissible(d, g)
    vec, wrapped = _coerce(v, g.n, d.k)
    fz, dec = plan(g, d)
    out = permute(planar_mult(g, dec, permute(vec, fz.sigma_k), counter), fz.sigma_l)
    return out if wrapped else out.coeffs


def layer_apply(
    g: GroupSpec,
    terms: Sequence[tuple[object, PartitionDiagram]],
    v,
    *,
    l: int | None = None,
    counter: OpCounter | None = None,
    max_workers: int | None = None,
):
    """``sum_i weight_i * matrix_mult(g, d_i, v)``, summed in term order.

    Terms may be evaluated on a thread pool (``max_workers``); the reduction
    order is fixed, so results do not depend on scheduling.  ``l`` gives the
    output order when ``terms`` is empty.
    """
    shapes = {(d.k, d.l) for _, d in terms}
    if len(shapes) > 1:
        raise MixedShapesError(f"terms mix (k, l) shapes {sorted(shapes)}")
    if counter is not None:
        counter.reset()
    if not terms:
        if l is None:
            raise MixedShapesError("an empty term list needs an explicit output order l")
        k = v.order if isinstance(v, TensorVector) else round(math.log(len(v), g.n)) if g.n > 1 else 0
        vec, wrapped = _coerce(v, g.n, k)
        zero = TensorVector(g.n, l, np.zeros(g.n**l, dtype=vec.coeffs.dtype))
        return zero if wrapped else zero.coeffs
    (k, out_order), = shapes
    if l is not None and l != out_order:
        raise MixedShapesError(f"terms map to order {out_order}, not {l}")
    vec, wrapped = _coerce(v, g.n, k)

    def run(term):
        sub = OpCounter()
        return matrix_mult(g, term[1], vec, sub), sub

    if max_workers and max_workers > 1 and len(terms) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, terms))
    else:
        results = [run(term) for term in terms]

    acc = None
    for i, ((weight, _), (res, sub)) in enumerate(zip(terms, results)):
        scaled = weight * res.coeffs
        acc = scaled if acc is None else acc + scaled
        if counter is not None:
            counter.merge(sub, prefix=f"term[{i}]/")
    if counter is not None:
        size = g.n**out_order
        counter.record("combine", multiplications=len(terms) * size, additions=(len(terms) - 1) * size)
    out = TensorVector(g.n, out_order, np.asarray(acc))
    return out if wrapped else out.coeffs
