"""Set partition diagrams and the combinatorics needed to factor them.

A ``(k, l)`` partition diagram is a set partition of ``{1, ..., l + k}``.
Vertices ``1..l`` form the top row (left to right) and ``l+1..l+k`` form the
bottom row (left to right).  Brauer diagrams have only pairs; ``(l+k)\\n``
diagrams have exactly ``n`` singletons ("free vertices") and pairs otherwise.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptyBlockError,
    KindMismatchError,
    OverlappingBlocksError,
    ParityError,
    SizeMismatchError,
    UncoveredVertexError,
    VertexOutOfRangeError,
)

__all__ = [
    "Group",
    "GroupSpec",
    "PartitionDiagram",
    "DiagramKind",
    "BlockClassification",
    "Permutation",
    "new_diagram",
    "classify",
    "kind_of",
    "require_admissible",
    "is_planar",
    "tensor_product",
    "relabel_rows",
    "enumerate_diagrams",
    "set_partitions",
    "perfect_matchings",
    "double_factorial",
]


class Group(enum.Enum):
    ORTHOGONAL = "O"
    SPECIAL_ORTHOGONAL = "SO"
    SYMPLECTIC = "Sp"
    SYMMETRIC = "Sn"

    @classmethod
    def parse(cls, name: "str | Group") -> "Group":
        if isinstance(name, Group):
            return name
        key = str(name).strip()
        aliases = {
            "o": cls.ORTHOGONAL,
            "orthogonal": cls.ORTHOGONAL,
            "so": cls.SPECIAL_ORTHOGONAL,
            "specialorthogonal": cls.SPECIAL_ORTHOGONAL,
            "sp": cls.SYMPLECTIC,
            "symplectic": cls.SYMPLECTIC,
            "s": cls.SYMMETRIC,
            "sn": cls.SYMMETRIC,
            "symmetric": cls.SYMMETRIC,
        }
        try:
            return aliases[key.lower().replace("_", "").replace(" ", "")]
        except KeyError:
            raise ValueError(f"unknown group {name!r}; expected one of O, SO, Sp, Sn") from None


@dataclass(frozen=True)
class GroupSpec:
    """A group together with the dimension ``n`` of the space it acts on."""

    group: Group
    n: int

    def __post_init__(self):
        object.__setattr__(self, "group", Group.parse(self.group))
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.group is Group.SYMPLECTIC and self.n % 2:
            raise ParityError(f"Sp(n) needs an even n, got n={self.n}")

    @property
    def m(self) -> int | None:
        """Half-dimension for Sp(n); ``None`` for the other groups."""
        return self.n // 2 if self.group is Group.SYMPLECTIC else None

    def __str__(self):
        return f"{self.group.value}({self.n})"


def _canonical_blocks(blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True)
class PartitionDiagram:
    """Immutable ``(k, l)`` partition diagram.

    Blocks are stored canonically (each block sorted, blocks sorted by their
    smallest vertex), so equality and hashing are set-partition equality.
    """

    l: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.l < 0 or self.k < 0:
            raise SizeMismatchError(f"row sizes must be non-negative, got l={self.l}, k={self.k}")
        raw = [list(b) for b in self.blocks]
        size = self.l + self.k
        seen: set[int] = set()
        for b in raw:
            if not b:
                raise EmptyBlockError("blocks must be non-empty")
            for x in b:
                if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= size:
                    raise VertexOutOfRangeError(f"vertex {x!r} is not in [1, {size}]")
                if x in seen:
                    raise OverlappingBlocksError(f"vertex {x} appears in more than one block")
                seen.add(x)
        if len(seen) != size:
            missing = sorted(set(range(1, size + 1)) - seen)
            raise UncoveredVertexError(f"vertices {missing} are not covered by any block")
        object.__setattr__(self, "blocks", _canonical_blocks(raw))

    @property
    def size(self) -> int:
        return self.l + self.k

    def is_top(self, vertex: int) -> bool:
        return vertex <= self.l

    def to_json(self) -> dict:
        return {"l": self.l, "k": self.k, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "PartitionDiagram":
        return cls(int(data["l"]), int(data["k"]), tuple(tuple(b) for b in data["blocks"]))

    def __str__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"({self.l},{self.k},{{{inner}}})"


def new_diagram(l: int, k: int, blocks: Iterable[Iterable[int]]) -> PartitionDiagram:
    """Validate ``blocks`` as a set partition of ``[l+k]`` and build the diagram."""
    return PartitionDiagram(l, k, tuple(tuple(b) for b in blocks))


@dataclass(frozen=True)
class DiagramKind:
    """Shape of a diagram: ``"Brauer"``, ``"NDiagram"`` or ``"GeneralPartition"``."""

    tag: str
    n: int | None = None
    block_count: int = 0
    # Sn basis condition: at most n blocks.
    within_block_limit: bool | None = None


@dataclass(frozen=True)
class BlockClassification:
    top_blocks: tuple[tuple[int, ...], ...]
    bottom_blocks: tuple[tuple[int, ...], ...]
    cross_blocks: tuple[tuple[int, ...], ...]
    top_free: tuple[int, ...]
    bottom_free: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.top_blocks)

    @property
    def d(self) -> int:
        return len(self.cross_blocks)

    @property
    def b(self) -> int:
        return len(self.bottom_blocks)

    @property
    def s(self) -> int:
        return len(self.top_free)


def classify(d: PartitionDiagram) -> BlockClassification:
    """Sort every block into top-only, bottom-only, cross-row, or free.

    Singletons go to ``top_free``/``bottom_free`` and are not counted in
    ``top_blocks``/``bottom_blocks``.
    """
    top, bottom, cross, top_free, bottom_free = [], [], [], [], []
    for block in d.blocks:  # already sorted by minimum vertex
        on_top = [d.is_top(x) for x in block]
        if all(on_top):
            (top_free if len(block) == 1 else top).append(block)
        elif not any(on_top):
            (bottom_free if len(block) == 1 else bottom).append(block)
        else:
            cross.append(block)
    return BlockClassification(
        tuple(top),
        tuple(bottom),
        tuple(cross),
        tuple(b[0] for b in top_free),
        tuple(b[0] for b in bottom_free),
    )


def kind_of(d: PartitionDiagram, g: GroupSpec) -> DiagramKind:
    sizes = [len(b) for b in d.blocks]
    count = len(sizes)
    limit = count <= g.n if g.group is Group.SYMMETRIC else None
    if all(s == 2 for s in sizes):
        return DiagramKind("Brauer", None, count, limit)
    if sizes.count(1) == g.n and all(s in (1, 2) for s in sizes):
        return DiagramKind("NDiagram", g.n, count, limit)
    return DiagramKind("GeneralPartition", None, count, limit)


_ADMISSIBLE = {
    Group.ORTHOGONAL: {"Brauer"},
    Group.SYMPLECTIC: {"Brauer"},
    Group.SPECIAL_ORTHOGONAL: {"Brauer", "NDiagram"},
    Group.SYMMETRIC: {"Brauer", "NDiagram", "GeneralPartition"},
}


def require_admissible(d: PartitionDiagram, g: GroupSpec) -> DiagramKind:
    """Return ``kind_of(d, g)`` or raise if ``g`` has no spanning element for ``d``."""
    kind = kind_of(d, g)
    if kind.tag not in _ADMISSIBLE[g.group]:
        raise KindMismatchError(f"a {kind.tag} diagram does not index a spanning element for {g}")
    return kind


def _boundary_position(d: PartitionDiagram, vertex: int) -> int:
    # Top row left to right, then bottom row right to left.
    if d.is_top(vertex):
        return vertex
    return d.l + (d.l + d.k - vertex) + 1


def is_planar(d: PartitionDiagram) -> bool:
    """True iff no two blocks interleave around the boundary of the diagram."""
    spans = [sorted(_boundary_position(d, x) for x in b) for b in d.blocks]
    for first, second in itertools.combinations(spans, 2):
        inner = set(second)
        for lo, hi in zip(first, first[1:]):
            # ``second`` crosses iff it has vertices both strictly inside and outside (lo, hi)
            inside = any(lo < x < hi for x in inner)
            outside = any(x < lo or x > hi for x in inner)
            if inside and outside:
                return False
    return True


def tensor_product(d1: PartitionDiagram, d2: PartitionDiagram) -> PartitionDiagram:
    """Place ``d1`` to the left of ``d2``."""
    l, k = d1.l + d2.l, d1.k + d2.k

    def shift1(x):
        return x if d1.is_top(x) else x + d2.l

    def shift2(x):
        return x + d1.l if d2.is_top(x) else x + d1.l + d1.k

    blocks = [tuple(shift1(x) for x in b) for b in d1.blocks]
    blocks += [tuple(shift2(x) for x in b) for b in d2.blocks]
    return PartitionDiagram(l, k, tuple(blocks))


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``[m]`` in one-line form: ``mapping[i-1] == sigma(i)``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if sorted(mapping) != list(range(1, len(mapping) + 1)):
            raise ValueError(f"{mapping} is not a permutation of [1..{len(mapping)}]")
        object.__setattr__(self, "mapping", mapping)

    @property
    def m(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], m: int) -> "Permutation":
        mapping = list(range(1, m + 1))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                if not 1 <= a <= m:
                    raise ValueError(f"cycle entry {a} outside [1..{m}]")
                mapping[a - 1] = b
        return cls(tuple(mapping))

    @classmethod
    def parse_cycles(cls, text: str, m: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 5 2 4)"``, ``"(13)(24)"`` or ``"()"``.

        Cycles written without separators are read one digit per entry.
        """
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            parts = re.split(r"[\s,]+", body.strip())
            if len(parts) == 1 and parts[0]:
                parts = list(parts[0])
            entries = [int(p) for p in parts if p]
            if entries:
                cycles.append(entries)
        return cls.from_cycles(cycles, m)

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i, s in enumerate(self.mapping, start=1):
            inv[s - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(1, self.m + 1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest element."""
        seen, out = set(), []
        for start in range(1, self.m + 1):
            if start in seen:
                continue
            cycle, x = [], start
            while x not in seen:
                seen.add(x)
                cycle.append(x)
                x = self(x)
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def relabel_rows(d: PartitionDiagram, sigma_top: Permutation, sigma_bottom: Permutation) -> PartitionDiagram:
    """Diagram of the composite ``P(sigma_top) . M(d) . P(sigma_bottom)``.

    ``P(sigma)`` is the permutation matrix of :func:`diagmult.kernels.permute`.
    Top vertex ``x`` becomes ``sigma_top^{-1}(x)`` and bottom position ``p``
    becomes ``sigma_bottom(p)``.  The underlying set partition is all that is
    relabelled; for Sp(n) a relabelling that reverses a same-row pair flips the
    sign of the realised matrix.
    """
    if sigma_top.m != d.l or sigma_bottom.m != d.k:
        raise SizeMismatchError(
            f"need permutations of sizes ({d.l}, {d.k}), got ({sigma_top.m}, {sigma_bottom.m})"
        )
    inv_top = sigma_top.inverse()

    def move(x):
        return inv_top(x) if d.is_top(x) else d.l + sigma_bottom(x - d.l)

    return PartitionDiagram(d.l, d.k, tuple(tuple(move(x) for x in b) for b in d.blocks))


# -- enumeration ------------------------------------------------------------


def set_partitions(items: Sequence[int], max_blocks: int | None = None) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (restricted growth strings), optionally capped in block count."""
    items = list(items)
    if not items:
        yield []
        return
    cap = len(items) if max_blocks is None else max_blocks
    if cap <= 0:
        return

    def grow(i: int, blocks: list[list[int]]):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(items[i])
            yield from grow(i + 1, blocks)
            b.pop()
        if len(blocks) < cap:
            blocks.append([items[i]])
            yield from grow(i + 1, blocks)
            blocks.pop()

    yield from grow(0, [])


def perfect_matchings(items: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    items = list(items)
    if not items:
        yield []
        return
    if len(items) % 2:
        return
    first, rest = items[0], items[1:]
    for j, partner in enumerate(rest):
        remaining = rest[:j] + rest[j + 1 :]
        for matching in perfect_matchings(remaining):
            yield [(first, partner)] + matching


def _brauer(l: int, k: int) -> list[PartitionDiagram]:
    return [PartitionDiagram(l, k, tuple(m)) for m in perfect_matchings(range(1, l + k + 1))]


def _n_diagrams(l: int, k: int, n: int) -> list[PartitionDiagram]:
    size = l + k
    if size < n or (size - n) % 2:
        return []
    out = []
    for free in itertools.combinations(range(1, size + 1), n):
        rest = [x for x in range(1, size + 1) if x not in free]
        for m in perfect_matchings(rest):
            out.append(PartitionDiagram(l, k, tuple(m) + tuple((x,) for x in free)))
    return out


def enumerate_diagrams(g: GroupSpec, k: int, l: int) -> list[PartitionDiagram]:
    """Diagrams indexing the spanning set of Hom_G((R^n)^k, (R^n)^l), in canonical order.

    O(n), Sp(n): Brauer diagrams.  SO(n): Brauer diagrams and ``(l+k)\\n``
    diagrams.  Sn: partition diagrams with at most ``n`` blocks.  The order is
    lexicographic on the canonical block tuples.
    """
    if g.group in (Group.ORTHOGONAL, Group.SYMPLECTIC):
        found = _brauer(l, k)
    elif g.group is Group.SPECIAL_ORTHOGONAL:
        found = _brauer(l, k) + _n_diagrams(l, k, g.n)
    else:
        found = [
            PartitionDiagram(l, k, tuple(tuple(b) for b in p))
            for p in set_partitions(range(1, l + k + 1), max_blocks=g.n)
        ]
    return sorted(set(found), key=lambda d: d.blocks)


def double_factorial(m: int) -> int:
    """``m!!`` with ``(-1)!! = 0!! = 1``."""
    return math.prod(range(m, 0, -2)) if m > 0 else 1
