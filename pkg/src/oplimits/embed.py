"""Finite-level embedding recognition for ``T_n -> T_{nk}``.

A locally order preserving embedding is the same thing as a total order on
``[n] x [k]`` with rows and columns increasing (a :class:`GridOrder`).  The
matrix unit ``e_ij`` is sent to ``sum_l e_{(i,l),(j,l)}``, so everything here
is combinatorics on positions.

Normalizing partial isometries are stored by their support only: a set of
``(row, col)`` pairs with distinct rows and distinct columns.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

from .errors import InternalInvariantError
from .tuples import IntTuple, int_tuple

Cell = tuple[int, int]


@dataclass(frozen=True)
class GridOrder:
    """Total order on ``[n] x [k]``; ``rank`` is row-major, 1-based positions."""

    n: int
    k: int
    rank: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("grid dimensions must be positive")
        rank = tuple(int(v) for v in self.rank)
        object.__setattr__(self, "rank", rank)
        if sorted(rank) != list(range(1, self.n * self.k + 1)):
            raise ValueError(f"rank is not a bijection onto 1..{self.n * self.k}")

    @classmethod
    def from_cells(cls, n: int, k: int, cells: Sequence[Cell]) -> "GridOrder":
        """Build from the cells listed in increasing diagonal order."""
        rank = [0] * (n * k)
        for pos, (i, j) in enumerate(cells, start=1):
            rank[(i - 1) * k + (j - 1)] = pos
        return cls(n, k, tuple(rank))

    def position(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.k):
            raise IndexError(f"cell ({i},{j}) outside [{self.n}]x[{self.k}]")
        return self.rank[(i - 1) * self.k + (j - 1)]

    def cells(self) -> list[Cell]:
        """Cells sorted by position."""
        out: list[Cell] = [(0, 0)] * (self.n * self.k)
        for idx, pos in enumerate(self.rank):
            out[pos - 1] = (idx // self.k + 1, idx % self.k + 1)
        return out


def grid_order_from_tuple(n: int, r: Sequence[int]) -> GridOrder:
    """Grid order of the direct sum of refinement embeddings with multiplicities ``r``."""
    r = int_tuple(r)
    if n < 1:
        raise ValueError("n must be positive")
    cells = []
    start = 0
    for size in r:
        block = range(start + 1, start + size + 1)
        cells.extend((i, j) for i in range(1, n + 1) for j in block)
        start += size
    return GridOrder.from_cells(n, start, cells)


def grid_order_from_images(images: Sequence[Sequence[int]]) -> GridOrder:
    """Grid order of a locally order preserving map given on the diagonal.

    ``images[i-1]`` lists the positions of the minimal projections under
    ``e_ii``; the cell ``(i, l)`` is the l-th smallest of them.
    """
    n = len(images)
    k = len(images[0])
    if any(len(im) != k for im in images):
        raise ValueError("every diagonal projection must have the same multiplicity")
    rank = tuple(p for im in images for p in sorted(im))
    return GridOrder(n, k, rank)


def compose_grids(inner: GridOrder, outer: GridOrder) -> GridOrder:
    """Grid order of ``outer o inner`` as a map ``T_n -> T_{n k1 k2}``.

    Columns are relabelled so that row 1 increases, which is the canonical
    indexing coming from the image of ``e_11``.
    """
    if outer.n != inner.n * inner.k:
        raise ValueError("grid dimensions do not compose")
    cols = list(product(range(1, inner.k + 1), range(1, outer.k + 1)))

    def pos(i, col):
        l1, l2 = col
        return outer.position(inner.position(i, l1), l2)

    cols.sort(key=lambda col: pos(1, col))
    rank = tuple(pos(i, col) for i in range(1, inner.n + 1) for col in cols)
    return GridOrder(inner.n, inner.k * outer.k, rank)


@dataclass(frozen=True)
class NormalizerElem:
    """Support of a normalizing partial isometry in ``M_n``."""

    n: int
    pairs: frozenset[Cell] = field(default_factory=frozenset)

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        rows = [a for a, _ in pairs]
        cols = [b for _, b in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("a partial isometry has at most one entry per row and column")
        for a, b in pairs:
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"pair ({a},{b}) outside [1,{self.n}]")


def nop_membership(w: NormalizerElem) -> bool:
    """Upper triangular, and conjugation preserves the diagonal order."""
    pairs = sorted(w.pairs)
    if any(a > b for a, b in pairs):
        return False
    return all(c1 < c2 for (_, c1), (_, c2) in zip(pairs, pairs[1:]))


def matrix_unit_image(g: GridOrder, i: int, j: int) -> frozenset[Cell]:
    if not 1 <= i <= j <= g.n:
        raise ValueError(f"e_{i}{j} is not an upper triangular matrix unit of T_{g.n}")
    return frozenset((g.position(i, l), g.position(j, l)) for l in range(1, g.k + 1))


def conjugate_normalizer(g: GridOrder, w: NormalizerElem) -> NormalizerElem:
    if w.n != g.n:
        raise ValueError(f"element lives in M_{w.n}, embedding starts at T_{g.n}")
    image = {(g.position(a, l), g.position(b, l)) for a, b in w.pairs for l in range(1, g.k + 1)}
    return NormalizerElem(g.n * g.k, frozenset(image))


def nop_elements(n: int) -> Iterator[NormalizerElem]:
    """Every element of the order preserving normalizer of ``T_n`` (support only)."""
    idx = range(1, n + 1)
    for size in range(n + 1):
        for rows in combinations(idx, size):
            for cols in combinations(idx, size):
                if all(a <= b for a, b in zip(rows, cols)):
                    yield NormalizerElem(n, frozenset(zip(rows, cols)))


def satisfies_condition3(g: GridOrder) -> bool:
    """Columns increase down each column index and rows increase along each row."""
    for j in range(1, g.k + 1):
        for i in range(1, g.n):
            if g.position(i, j) > g.position(i + 1, j):
                return False
    for i in range(1, g.n + 1):
        for j in range(1, g.k):
            if g.position(i, j) > g.position(i, j + 1):
                return False
    return True


@dataclass(frozen=True)
class PairWitness:
    """``e_gh + e_ij`` is order preserving in ``T_n`` but its image is not."""

    g: int
    h: int
    i: int
    j: int
    a: int
    b: int


def _nop_two_unit_sums(n: int) -> Iterator[tuple[Cell, Cell]]:
    units = [(p, q) for p in range(1, n + 1) for q in range(p, n + 1)]
    for u in units:
        yield u, u
    for u, v in combinations(units, 2):
        if nop_membership_pairs((u, v)):
            yield u, v
            yield v, u


def nop_membership_pairs(pairs) -> bool:
    rows = [a for a, _ in pairs]
    cols = [b for _, b in pairs]
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return False
    return nop_membership(NormalizerElem(max(max(rows), max(cols)), frozenset(pairs)))


def pair_test(g: GridOrder) -> Optional[PairWitness]:
    """Search for a two-unit order preserving element whose image reverses order."""
    ks = range(1, g.k + 1)
    for (gg, h), (i, j) in _nop_two_unit_sums(g.n):
        for a, b in product(ks, ks):
            if g.position(gg, a) < g.position(i, b) and g.position(h, a) > g.position(j, b):
                return PairWitness(gg, h, i, j, a, b)
    return None


def extract_tuple(g: GridOrder) -> Optional[IntTuple]:
    """Read off refinement multiplicities from the runs of row 1.

    Returns None unless the tuple found reproduces ``g`` exactly.
    """
    cells = g.cells()
    r = []
    p, used = 0, 0
    while p < len(cells):
        run = 0
        while p + run < len(cells) and cells[p + run] == (1, used + run + 1):
            run += 1
        if run == 0:
            return None
        r.append(run)
        used += run
        p += run * g.n
    if used != g.k:
        return None
    r = tuple(r)
    return r if grid_order_from_tuple(g.n, r) == g else None


class GridKind(enum.Enum):
    NOT_LOP = "not-lop"
    LOP = "lop"
    OP = "op"


@dataclass(frozen=True)
class GridClassification:
    kind: GridKind
    multiplicities: Optional[IntTuple] = None
    witness: Optional[PairWitness] = None


def classify_grid_order(g: GridOrder) -> GridClassification:
    if not satisfies_condition3(g):
        return GridClassification(GridKind.NOT_LOP)
    witness = pair_test(g)
    extracted = extract_tuple(g)
    if (witness is None) != (extracted is not None):
        raise InternalInvariantError(
            f"pair test and run extraction disagree on {g}: witness={witness}, tuple={extracted}"
        )
    if witness is not None:
        return GridClassification(GridKind.LOP, witness=witness)
    return GridClassification(GridKind.OP, multiplicities=extracted)


def is_lop_direct(g: GridOrder) -> bool:
    """Every matrix unit image is order preserving, and row 1 is the
    canonical indexing (increasing)."""
    row1 = [g.position(1, l) for l in range(1, g.k + 1)]
    if row1 != sorted(row1):
        return False
    return all(
        nop_membership(NormalizerElem(g.n * g.k, matrix_unit_image(g, i, j)))
        for i in range(1, g.n + 1)
        for j in range(i, g.n + 1)
    )


def is_op_direct(g: GridOrder) -> bool:
    """Every order preserving element of ``T_n`` has an order preserving image."""
    return is_lop_direct(g) and all(
        nop_membership(conjugate_normalizer(g, w)) for w in nop_elements(g.n)
    )
