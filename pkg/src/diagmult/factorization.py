"""Rewrite a diagram as permutation . planar diagram . permutation.

The planar middle diagram is laid out canonically so that it splits into a
left-to-right tensor product of small atoms:

* top row:    top-only blocks | cross blocks | top free vertices (SO(n))
* bottom row: cross blocks | bottom-only blocks | bottom free vertices (SO(n))

Blocks of one category keep the order of their smallest original vertex, and
vertices within a block keep their original left-to-right order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .diagrams import (
    Group,
    GroupSpec,
    PartitionDiagram,
    Permutation,
    classify,
    is_planar,
    require_admissible,
    tensor_product,
)
from .errors import NotCanonicalError, NotPlanarError

__all__ = ["Factorization", "Atom", "PlanarDecomposition", "factor", "split_planar"]


@dataclass(frozen=True)
class Factorization:
    """``M(original) == P(sigma_l) . M(planar) . P(sigma_k)``."""

    sigma_k: Permutation
    planar: PartitionDiagram
    sigma_l: Permutation

    def to_json(self) -> dict:
        return {
            "sigma_k": list(self.sigma_k.mapping),
            "planar": self.planar.to_json(),
            "sigma_l": list(self.sigma_l.mapping),
        }


@dataclass(frozen=True)
class Atom:
    """One tensor factor of a planar diagram.

    ``kind`` is ``"top"``, ``"cross"``, ``"bottom"`` or ``"free"``.  Top and
    bottom atoms hold a single block; the cross atom holds every cross-row
    block; the free atom holds every free vertex of an ``(l+k)\\n`` diagram.
    """

    kind: str
    diagram: PartitionDiagram

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.diagram.to_json()}


@dataclass(frozen=True)
class PlanarDecomposition:
    group: GroupSpec
    l: int
    k: int
    atoms: tuple[Atom, ...]

    def tensor(self) -> PartitionDiagram:
        """Recombine the atoms; equals the planar diagram that was split."""
        return reduce(tensor_product, (a.diagram for a in self.atoms), PartitionDiagram(0, 0, ()))

    def of_kind(self, kind: str) -> list[Atom]:
        return [a for a in self.atoms if a.kind == kind]


def _uses_free_vertices(g: GroupSpec, d: PartitionDiagram) -> bool:
    return g.group is Group.SPECIAL_ORTHOGONAL and any(len(b) == 1 for b in d.blocks)


def factor(g: GroupSpec, d: PartitionDiagram) -> Factorization:
    """Pull ``d`` apart into ``(sigma_k, planar, sigma_l)``.

    ``sigma_k(p)`` is the original bottom position placed at planar bottom
    slot ``p``; ``sigma_l(p)`` is the planar top slot of original top vertex
    ``p``.
    """
    require_admissible(d, g)
    c = classify(d)
    free = _uses_free_vertices(g, d)
    if free:
        top_only, bottom_only = list(c.top_blocks), list(c.bottom_blocks)
        top_free, bottom_free = list(c.top_free), list(c.bottom_free)
    else:
        top_only = sorted(list(c.top_blocks) + [(x,) for x in c.top_free])
        bottom_only = sorted(list(c.bottom_blocks) + [(x,) for x in c.bottom_free])
        top_free, bottom_free = [], []

    top_layout = [x for b in top_only for x in b]
    top_layout += [x for b in c.cross_blocks for x in b if d.is_top(x)]
    top_layout += top_free
    bottom_layout = [x for b in c.cross_blocks for x in b if not d.is_top(x)]
    bottom_layout += [x for b in bottom_only for x in b]
    bottom_layout += bottom_free

    top_slot = {x: i for i, x in enumerate(top_layout, start=1)}
    bottom_slot = {x: i for i, x in enumerate(bottom_layout, start=1)}
    sigma_l = Permutation(tuple(top_slot[p] for p in range(1, d.l + 1)))
    sigma_k = Permutation(tuple(x - d.l for x in bottom_layout))

    def move(x):
        return top_slot[x] if d.is_top(x) else d.l + bottom_slot[x]

    planar = PartitionDiagram(d.l, d.k, tuple(tuple(move(x) for x in b) for b in d.blocks))
    return Factorization(sigma_k, planar, sigma_l)


def split_planar(g: GroupSpec, planar: PartitionDiagram) -> PlanarDecomposition:
    """Split a canonical planar diagram into its ordered tensor-product atoms."""
    if not is_planar(planar):
        raise NotPlanarError(f"{planar} is not planar")
    fz = factor(g, planar)
    if not (fz.sigma_k.is_identity() and fz.sigma_l.is_identity()):
        raise NotCanonicalError(f"{planar} is planar but not in the canonical factored layout")

    c = classify(planar)
    free = _uses_free_vertices(g, planar)
    if free:
        top_only, bottom_only = list(c.top_blocks), list(c.bottom_blocks)
    else:
        top_only = sorted(list(c.top_blocks) + [(x,) for x in c.top_free])
        bottom_only = sorted(list(c.bottom_blocks) + [(x,) for x in c.bottom_free])

    atoms = []
    for b in top_only:
        atoms.append(Atom("top", PartitionDiagram(len(b), 0, (tuple(range(1, len(b) + 1)),))))
    if c.cross_blocks:
        upper = sum(1 for b in c.cross_blocks for x in b if planar.is_top(x))
        first_top = planar.l - upper - (len(c.top_free) if free else 0)
        blocks = []
        for b in c.cross_blocks:
            blocks.append(tuple(x - first_top if planar.is_top(x) else x - planar.l + upper for x in b))
        lower = sum(len(b) for b in c.cross_blocks) - upper
        atoms.append(Atom("cross", PartitionDiagram(upper, lower, tuple(blocks))))
    for b in bottom_only:
        atoms.append(Atom("bottom", PartitionDiagram(0, len(b), (tuple(range(1, len(b) + 1)),))))
    if free:
        s, rest = len(c.top_free), len(c.bottom_free)
        atoms.append(Atom("free", PartitionDiagram(s, rest, tuple((x,) for x in range(1, s + rest + 1)))))
    return PlanarDecomposition(g, planar.l, planar.k, tuple(atoms))
